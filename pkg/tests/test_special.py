import numpy as np
import pytest
from scipy import integrate
from scipy.special import beta as beta_fn

from errors import DomainError
from special import (
    RngStream,
    chi2_sf,
    clamped_normal_quantile,
    digamma,
    log_gamma,
    reg_inc_beta,
    reg_inc_gamma,
    sample_gamma,
    sample_uniform,
    std_normal_cdf,
    std_normal_quantile,
)


def test_reg_inc_beta_matches_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = rng.uniform(0.01, 0.99)
        a, b = rng.uniform(1.0, 10.0, size=2)
        expected, _ = integrate.quad(lambda t: t ** (a - 1) * (1 - t) ** (b - 1), 0.0, x,
                                     epsabs=1e-14, epsrel=1e-13, limit=200)
        assert reg_inc_beta(x, a, b) == pytest.approx(expected / beta_fn(a, b), abs=1e-10)


def test_reg_inc_beta_endpoints_and_symmetry():
    assert reg_inc_beta(0.0, 2.0, 3.0) == 0.0
    assert reg_inc_beta(1.0, 2.0, 3.0) == 1.0
    assert reg_inc_beta(0.5, 4.0, 4.0) == pytest.approx(0.5, abs=1e-14)
    x, a, b = 0.3, 2.5, 7.0
    assert reg_inc_beta(x, a, b) == pytest.approx(1.0 - reg_inc_beta(1 - x, b, a), abs=1e-13)


def test_reg_inc_beta_is_vectorized():
    out = reg_inc_beta(np.array([0.1, 0.5]), np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    np.testing.assert_allclose(out, [0.1, 0.5], atol=1e-14)


def test_normal_quantile_roundtrip():
    z = np.linspace(-6.0, 0.0, 241)
    np.testing.assert_allclose(std_normal_quantile(std_normal_cdf(z)), z, atol=1e-8)
    # upper half through symmetry, where the lower tail keeps full precision
    zp = np.linspace(0.0, 6.0, 241)
    np.testing.assert_allclose(-std_normal_quantile(std_normal_cdf(-zp)), zp, atol=1e-8)


def test_normal_quantile_known_values():
    assert std_normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-12)
    assert std_normal_quantile(0.5) == 0.0
    assert std_normal_cdf(0.0) == 0.5


def test_clamped_normal_quantile_caps_extremes():
    lo = clamped_normal_quantile(0.0)
    hi = clamped_normal_quantile(1.0)
    assert lo == pytest.approx(std_normal_quantile(1e-15))
    assert hi == pytest.approx(-lo, rel=1e-3)
    assert np.isfinite(lo) and np.isfinite(hi)


def test_log_gamma_recurrence():
    x = np.linspace(0.1, 50.0, 500)
    np.testing.assert_allclose(log_gamma(x + 1.0) - log_gamma(x), np.log(x), atol=1e-12)
    assert log_gamma(1.0) == 0.0


def test_digamma_recurrence():
    x = np.linspace(0.1, 30.0, 300)
    np.testing.assert_allclose(digamma(x + 1.0) - digamma(x), 1.0 / x, atol=1e-12)
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-14)


def test_chi2_sf():
    assert chi2_sf(3.841458820694124, 1) == pytest.approx(0.05, abs=1e-10)
    assert chi2_sf(0.0, 4) == 1.0
    assert chi2_sf(2.0, 2) == pytest.approx(np.exp(-1.0), abs=1e-14)


def test_reg_inc_gamma_exponential_case():
    # P(1, x) = 1 - e^-x
    assert reg_inc_gamma(2.0, 1.0) == pytest.approx(1.0 - np.exp(-2.0), abs=1e-14)


@pytest.mark.parametrize("x", [1.0, 4.0])
def test_reg_inc_gamma_half_shape_is_normal(x):
    # P(1/2, x/2) = 2 Phi(sqrt x) - 1
    expected = 2.0 * std_normal_cdf(np.sqrt(x)) - 1.0
    assert reg_inc_gamma(x / 2.0, 0.5) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("call", [
    lambda: log_gamma(0.0),
    lambda: log_gamma(-1.5),
    lambda: digamma(0.0),
    lambda: reg_inc_beta(1.5, 1.0, 1.0),
    lambda: reg_inc_beta(0.5, 0.0, 1.0),
    lambda: reg_inc_gamma(1.0, 0.0),
    lambda: std_normal_quantile(0.0),
    lambda: std_normal_quantile(1.0),
    lambda: chi2_sf(1.0, 0),
    lambda: sample_uniform(1.0, 1.0, RngStream(1)),
    lambda: sample_gamma(0.0, RngStream(1)),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_streams_are_reproducible_and_distinct():
    a = RngStream(42, 7).generator.random(5)
    b = RngStream(42, 7).generator.random(5)
    c = RngStream(42, 8).generator.random(5)
    d = RngStream(43, 7).generator.random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)
    assert not np.allclose(a, d)


def test_substreams():
    base = RngStream(5, 3)
    np.testing.assert_array_equal(base.substream(0).generator.random(3), RngStream(5, 3).generator.random(3))
    first = base.substream(1).generator.random(3)
    np.testing.assert_array_equal(first, base.substream(1).generator.random(3))
    assert not np.allclose(first, base.substream(2).generator.random(3))
    assert base.substream(1).stream_id == 3


def test_stream_rejects_out_of_range_keys():
    with pytest.raises(DomainError):
        RngStream(-1)
    with pytest.raises(DomainError):
        RngStream(1, 2 ** 64)


def test_sample_uniform_within_bounds():
    rng = RngStream(9)
    draws = [sample_uniform(0.25, 0.5, rng) for _ in range(1000)]
    assert min(draws) >= 0.25 and max(draws) < 0.5


@pytest.mark.parametrize("shape", [0.3, 1.0, 4.5])
def test_sample_gamma_moments(shape):
    draws = sample_gamma(np.full(100_000, shape), RngStream(11))
    assert draws.mean() == pytest.approx(shape, rel=0.03)
    assert draws.var() == pytest.approx(shape, rel=0.06)
