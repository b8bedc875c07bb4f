import numpy as np
import pytest
from scipy import stats

from dirichlet import (
    Composition,
    DirichletParams,
    log_density,
    log_density_rows,
    marginal_beta_params,
    sample,
    sample_rows,
    validate_file_rows,
)
from errors import DataError, DomainError
from special import RngStream


def test_composition_validation():
    Composition([0.2, 0.3, 0.5])
    with pytest.raises(DomainError):
        Composition([0.0, 0.5, 0.5])
    with pytest.raises(DomainError):
        Composition([0.2, 0.2, 0.2])
    with pytest.raises(DomainError):
        Composition([1.0])


def test_params_validation():
    with pytest.raises(DomainError):
        DirichletParams([0.5, 0.5], 0.0)
    with pytest.raises(DomainError):
        DirichletParams([0.6, 0.6], 1.0)


def test_variance_formula():
    p = DirichletParams([0.2, 0.3, 0.5], 9.0)
    np.testing.assert_allclose(p.variance(), [0.016, 0.021, 0.025])


def test_flat_dirichlet_density():
    # phi mu_j = 1 for all j: constant density Gamma(3) = 2 on the simplex
    p = DirichletParams([1 / 3, 1 / 3, 1 - 2 / 3], 3.0)
    assert log_density(Composition([0.1, 0.2, 0.7]), p) == pytest.approx(np.log(2.0), abs=1e-12)


def test_two_component_density_is_beta():
    p = DirichletParams([0.3, 0.7], 12.0)
    w = Composition([0.25, 0.75])
    assert log_density(w, p) == pytest.approx(stats.beta.logpdf(0.25, 3.6, 8.4), abs=1e-10)


def test_row_density_matches_scalar():
    y = np.array([[0.2, 0.3, 0.5], [0.6, 0.3, 0.1]])
    mu = np.array([[0.3, 0.3, 0.4], [0.5, 0.25, 0.25]])
    phi = np.array([5.0, 20.0])
    rows = log_density_rows(y, mu, phi)
    for i in range(2):
        assert rows[i] == pytest.approx(log_density(Composition(y[i]), DirichletParams(mu[i], phi[i])))


def test_dimension_mismatch():
    with pytest.raises(DomainError):
        log_density(Composition([0.5, 0.5]), DirichletParams([0.2, 0.3, 0.5], 2.0))


def test_sample_moments():
    mu = np.array([0.5, 0.3, 0.2])
    phi = 10.0
    n = 40_000
    y = sample_rows(np.tile(mu, (n, 1)), np.full(n, phi), RngStream(1))
    np.testing.assert_allclose(y.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(y.mean(axis=0), mu, atol=0.005)
    np.testing.assert_allclose(y.var(axis=0), mu * (1 - mu) / (1 + phi), rtol=0.05)


def test_sampling_is_deterministic():
    p = DirichletParams([0.2, 0.3, 0.5], 4.0)
    np.testing.assert_array_equal(sample(p, RngStream(5, 1)).w, sample(p, RngStream(5, 1)).w)


def test_small_precision_samples_stay_inside_simplex():
    mu = np.tile([0.98, 0.01, 0.01], (2000, 1))
    y = sample_rows(mu, np.full(2000, 0.5), RngStream(2))
    assert np.all(y > 0) and np.all(y < 1)
    np.testing.assert_allclose(y.sum(axis=1), 1.0, atol=1e-12)


def test_marginal_beta_params():
    p = DirichletParams([0.2, 0.3, 0.5], 10.0)
    assert marginal_beta_params(p, 1) == pytest.approx((3.0, 7.0))
    with pytest.raises(DomainError):
        marginal_beta_params(p, 3)


def test_sampled_marginal_is_beta():
    p = DirichletParams([0.2, 0.3, 0.5], 12.0)
    n = 100_000
    y = sample_rows(np.tile(p.mu, (n, 1)), np.full(n, p.phi), RngStream(88))
    for j in range(p.k):
        a, b = marginal_beta_params(p, j)
        assert stats.kstest(y[:, j], "beta", args=(a, b)).statistic <= 0.01


def test_validate_file_rows():
    y = np.array([[0.2, 0.3, 0.5000004], [0.1, 0.1, 0.8]])
    out = validate_file_rows(y)
    np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-15)
    with pytest.raises(DataError) as err:
        validate_file_rows(np.array([[0.2, 0.3, 0.5], [0.2, 0.3, 0.6]]))
    assert err.value.row == 1
    with pytest.raises(DataError):
        validate_file_rows(np.array([[0.0, 0.5, 0.5]]))
