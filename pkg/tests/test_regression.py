from dataclasses import replace

import numpy as np
import pytest

from errors import DataError, DomainError
from regression import (
    INTERCEPT,
    CoefficientVector,
    ModelSpec,
    RegressionData,
    coefficient_table,
    evaluate_model,
    fit_mle,
    generating_model,
    gradient,
    linear_predictors,
    log_likelihood,
    lr_test,
    predict,
    standard_errors,
)
from simstudy import generate_scenario_dataset, scenario_config
from special import RngStream


def test_spec_shape_and_labels():
    spec = ModelSpec.uniform(3, ["d2"], ["d3"], component_names=["a", "b", "c"])
    assert spec.n_params == 2 * 2 + 2
    assert spec.non_reference == [1, 2]
    assert spec.labels()[:2] == [("mu_b", INTERCEPT), ("mu_b", "d2")]
    assert spec.labels()[-1] == ("phi", "d3")
    assert spec.columns() == {"d2", "d3"}


def test_spec_validation():
    with pytest.raises(DomainError):
        ModelSpec(1, (), (INTERCEPT,))
    with pytest.raises(DomainError):
        ModelSpec(3, ((INTERCEPT,),), (INTERCEPT,))
    with pytest.raises(DomainError):
        ModelSpec.uniform(3, [], [], reference_component=3)


def test_spec_roundtrip_through_dict():
    spec = ModelSpec.uniform(4, ["x"], [], reference_component=2, component_names=["w", "x1", "y", "z"])
    assert ModelSpec.from_dict(spec.to_dict()) == spec


def test_missing_covariate():
    spec = ModelSpec.uniform(3, ["d2"], [])
    with pytest.raises(DataError):
        spec.design({}, 5)


def test_zero_coefficients_give_equal_means():
    spec = ModelSpec.uniform(3, ["d2"], [])
    mu, phi = predict(spec, spec.design({"d2": np.arange(4.0)}, 4), np.zeros(spec.n_params))
    np.testing.assert_allclose(mu, 1 / 3)
    np.testing.assert_allclose(phi, 1.0)


def test_reference_component_is_pinned():
    spec = ModelSpec.uniform(3, [], [], reference_component=1)
    coef = CoefficientVector((np.array([np.log(2.0)]), np.array([np.log(3.0)])), np.array([1.0]))
    mu, phi = linear_predictors(spec, coef, {})
    np.testing.assert_allclose(mu, [2 / 6, 1 / 6, 3 / 6])
    assert phi == pytest.approx(np.e)


def test_softmax_handles_large_predictors():
    spec = ModelSpec.uniform(2, [], [])
    mu, _ = predict(spec, spec.design({}, 1), np.array([800.0, 0.0]))
    assert np.all(np.isfinite(mu))
    assert mu[0, 1] == pytest.approx(1.0)


def test_coefficient_vector_flat_roundtrip():
    spec = ModelSpec.uniform(3, ["d2", "d3"], ["d2"])
    theta = np.arange(spec.n_params, dtype=float)
    coef = CoefficientVector.from_flat(spec, theta)
    assert len(coef.beta) == 2
    np.testing.assert_array_equal(coef.flat(), theta)
    with pytest.raises(DomainError):
        CoefficientVector.from_flat(spec, theta[:-1])


def test_regression_data_rejects_bad_rows():
    with pytest.raises(DataError) as err:
        RegressionData(np.array([[0.2, 0.8], [0.0, 1.0]]))
    assert err.value.row == 1


def test_gradient_matches_finite_differences(scenario_1a, sim_data):
    spec = scenario_1a.spec
    truth = scenario_1a.coefficients.flat()
    rng = np.random.default_rng(17)
    for _ in range(20):
        theta = truth + rng.normal(0.0, 0.3, size=truth.size)
        coef = CoefficientVector.from_flat(spec, theta)
        analytic = gradient(spec, coef, sim_data)
        numeric = np.empty_like(theta)
        for i in range(theta.size):
            h = 1e-5
            up, down = theta.copy(), theta.copy()
            up[i] += h
            down[i] -= h
            numeric[i] = (
                log_likelihood(spec, CoefficientVector.from_flat(spec, up), sim_data)
                - log_likelihood(spec, CoefficientVector.from_flat(spec, down), sim_data)
            ) / (2 * h)
        rel = np.abs(analytic - numeric) / np.maximum(np.abs(analytic), 1.0)
        assert rel.max() <= 1e-6


def test_fit_converges_and_beats_truth(scenario_1a, sim_data, fitted):
    assert fitted.converged
    truth_ll = log_likelihood(scenario_1a.spec, scenario_1a.coefficients, sim_data)
    assert fitted.loglik >= truth_ll - 1e-8
    np.testing.assert_allclose(fitted.fitted_mu.sum(axis=1), 1.0)


def test_fit_needs_more_rows_than_parameters(scenario_1a, sim_data):
    small = RegressionData(sim_data.y[:5], {k: v[:5] for k, v in sim_data.covariates.items()})
    with pytest.raises(DataError):
        fit_mle(scenario_1a.spec, small)


def test_evaluate_model_matches_fit(scenario_1a, sim_data, fitted):
    again = evaluate_model(scenario_1a.spec, fitted.coef, sim_data)
    assert again.loglik == pytest.approx(fitted.loglik, abs=1e-9)
    np.testing.assert_allclose(again.fitted_mu, fitted.fitted_mu)


def test_standard_errors_and_table(sim_data, fitted):
    ses = standard_errors(fitted, sim_data)
    assert ses.shape == (fitted.spec.n_params,)
    assert np.all(ses > 0)
    rows = coefficient_table(replace(fitted, std_errors=ses))
    assert [r["submodel"] for r in rows][:3] == ["mu_y2"] * 3
    for row in rows:
        assert row["exp_estimate"] == pytest.approx(np.exp(row["estimate"]))


def test_lr_test_nested(scenario_1a, sim_data, fitted):
    reduced_spec = ModelSpec.uniform(3, ["d2"], [])
    reduced = fit_mle(reduced_spec, sim_data)
    result = lr_test(fitted, reduced)
    assert result.df == 2
    assert result.statistic >= 0
    assert 0.0 <= result.p <= 1.0
    # d3 matters in scenario 1a
    assert result.p < 0.05
    with pytest.raises(DataError):
        lr_test(reduced, fitted)


def test_lr_test_same_model_has_p_one(fitted):
    result = lr_test(fitted, fitted)
    assert result.statistic == 0.0
    assert result.df == 0
    assert result.p == 1.0


def test_mle_recovers_truth_at_large_n():
    cfg = scenario_config("1a", 2000)
    data, _ = generate_scenario_dataset(cfg, RngStream(101, 0))
    fit = fit_mle(cfg.spec, data)
    ses = standard_errors(fit, data)
    z = np.abs(fit.coef.flat() - cfg.coefficients.flat()) / ses
    assert np.all(z < 4.0)


@pytest.mark.slow
def test_mle_consistency_over_seeds():
    cfg = scenario_config("1a", 2000)
    successes = 0
    for seed in range(20):
        data, _ = generate_scenario_dataset(cfg, RngStream(1000 + seed, 0))
        fit = fit_mle(cfg.spec, data)
        ses = standard_errors(fit, data)
        successes += bool(np.all(np.abs(fit.coef.flat() - cfg.coefficients.flat()) <= 3 * ses))
    assert successes >= 18


def test_design_rejects_non_finite_covariates():
    spec = ModelSpec.uniform(3, ["d2"], [])
    with pytest.raises(DataError) as err:
        spec.design({"d2": np.array([0.1, np.nan, 0.3])}, 3)
    assert err.value.row == 1


def test_reference_relabeling_leaves_fit_unchanged(scenario_1a, sim_data):
    base = fit_mle(scenario_1a.spec, sim_data, tol=1e-10)
    moved = fit_mle(replace(scenario_1a.spec, reference_component=2), sim_data, tol=1e-10)
    assert not np.allclose(moved.coef.flat(), base.coef.flat())
    assert moved.loglik == pytest.approx(base.loglik, abs=1e-8)
    np.testing.assert_allclose(moved.fitted_mu, base.fitted_mu, atol=1e-8)


def test_standard_errors_shrink_like_root_n():
    ses = {}
    for n in (500, 2000):
        cfg = scenario_config("1a", n)
        data, _ = generate_scenario_dataset(cfg, RngStream(55, 0))
        ses[n] = standard_errors(fit_mle(cfg.spec, data), data)
    ratio = ses[500] / ses[2000]
    assert np.all((ratio > 1.6) & (ratio < 2.5))
    assert np.median(ratio) == pytest.approx(2.0, rel=0.15)


def test_generating_model_needs_no_responses(scenario_1a, sim_data):
    truth = generating_model(scenario_1a.spec, scenario_1a.coefficients, sim_data.covariates, sim_data.n)
    expected = evaluate_model(scenario_1a.spec, scenario_1a.coefficients, sim_data)
    np.testing.assert_array_equal(truth.fitted_mu, expected.fitted_mu)
    np.testing.assert_array_equal(truth.fitted_phi, expected.fitted_phi)
    assert np.isnan(truth.loglik)
