import xml.etree.ElementTree as ET

import numpy as np
import pytest
from scipy.special import ndtri

from envelope import (
    POINTS_GID,
    blom_positions,
    build_envelope,
    detect_misspecification,
    estimate_v,
    percentile_bands,
    render_envelope_plot,
    simulated_envelope,
    simulated_envelopes,
)
from errors import DomainError
from residuals import BootstrapConfig, ResidualKind

SVG = "{http://www.w3.org/2000/svg}"


def _band(n=10):
    x = blom_positions(n)
    return x - 1.0, x + 1.0, x


def test_blom_positions():
    x = blom_positions(50)
    assert np.all(np.diff(x) > 0)
    np.testing.assert_allclose(x, -x[::-1], atol=1e-12)
    assert x[0] == pytest.approx(ndtri(0.625 / 50.25), abs=1e-12)


def test_median_residuals_are_inside():
    lo, hi, mid = _band()
    env = build_envelope(mid, lo, hi)
    assert env.outside_count == 0
    assert env.e == 0.0


def test_single_exceedance():
    lo, hi, mid = _band()
    r = mid.copy()
    r[-1] = hi[-1] + 0.7
    env = build_envelope(r, lo, hi)
    assert env.outside_count == 1
    assert env.e == pytest.approx(0.7)


def test_below_lower_band_counts():
    lo, hi, mid = _band()
    r = mid.copy()
    r[0] = lo[0] - 0.25
    r[1] = lo[1] - 0.5
    env = build_envelope(r, lo, hi)
    assert env.outside_count == 2
    assert env.e == pytest.approx(0.5)


def test_build_envelope_rejects_crossed_bands():
    lo, hi, mid = _band()
    with pytest.raises(DomainError):
        build_envelope(mid, hi, lo)


def test_percentile_bands():
    sims = np.random.default_rng(0).normal(size=(100, 30))
    lo, hi = percentile_bands(sims)
    assert np.all(lo <= hi)
    with pytest.raises(DomainError):
        percentile_bands(sims[:1])


def test_estimate_v():
    assert estimate_v(np.arange(1, 21)) == 19.5
    assert estimate_v(np.zeros(40)) == 0.0
    e = np.random.default_rng(1).permutation(np.arange(1, 501, dtype=float))
    assert estimate_v(e) == 475.5
    with pytest.raises(DomainError):
        estimate_v(np.ones(19))


def test_v_calibrates_flag_rate():
    e = np.random.default_rng(2).exponential(size=200)
    e[:150] = 0.0
    v = estimate_v(e)
    assert np.mean(e >= v) <= 0.05 + 1e-12


def test_detect_misspecification():
    lo, hi, mid = _band()
    inside = build_envelope(mid, lo, hi)
    assert not detect_misspecification(inside, 0.1).flagged
    assert not detect_misspecification(inside, 0.0).flagged

    # top two order statistics pushed out, sorted order unchanged
    r = mid.copy()
    r[8] = hi[8] + 0.2
    r[9] = hi[9] + 0.5
    env = build_envelope(r, lo, hi)
    np.testing.assert_array_equal(env.sorted_residuals, r)
    assert env.e == pytest.approx(0.5)
    assert detect_misspecification(env, env.e).flagged_points == 1
    assert detect_misspecification(env, env.distances[8]).flagged_points == 2
    assert detect_misspecification(env, 0.0).flagged_points == env.outside_count == 2
    assert detect_misspecification(env, 0.6).flagged_points == 0
    with pytest.raises(DomainError):
        detect_misspecification(env, -1.0)


def test_simulated_envelope_composite(fitted, sim_data):
    env = simulated_envelope(fitted, sim_data, ResidualKind.COMPOSITE_PEARSON, R=20,
                             cfg=BootstrapConfig(B=5, seed=4))
    assert env.n == sim_data.n
    assert np.all(np.diff(env.sorted_residuals) >= 0)
    assert np.all(np.diff(env.theoretical_quantiles) > 0)
    assert np.all(env.lower_band <= env.upper_band)
    assert (env.e == 0) == (env.outside_count == 0)
    assert env.metadata["R"] == 20


def test_simulated_envelopes_share_simulations_and_threads(fitted, sim_data):
    kinds = [ResidualKind.A1, ResidualKind.COMPOSITE_QUANTILE]
    one = simulated_envelopes(fitted, sim_data, kinds, R=4, cfg=BootstrapConfig(B=5, seed=8, threads=1), b_inner=3)
    many = simulated_envelopes(fitted, sim_data, kinds, R=4, cfg=BootstrapConfig(B=5, seed=8, threads=3), b_inner=3)
    for kind in kinds:
        np.testing.assert_array_equal(one[kind].lower_band, many[kind].lower_band)
        np.testing.assert_array_equal(one[kind].sorted_residuals, many[kind].sorted_residuals)
    assert one[ResidualKind.A1].metadata["B_inner"] == 3


def test_envelope_needs_two_simulations(fitted, sim_data):
    with pytest.raises(DomainError):
        simulated_envelope(fitted, sim_data, ResidualKind.COMPOSITE_PEARSON, R=1)


def test_plot_structure_and_determinism(tmp_path):
    lo, hi, mid = _band(25)
    env = build_envelope(mid + 0.1, lo, hi, kind=ResidualKind.A1)
    first = render_envelope_plot(env, tmp_path / "a.svg")
    second = render_envelope_plot(env, tmp_path / "b.svg")
    assert first.read_bytes() == second.read_bytes()

    root = ET.parse(first).getroot()
    groups = [g for g in root.iter(f"{SVG}g") if g.get("id") == POINTS_GID]
    assert len(groups) == 1
    assert len(list(groups[0].iter(f"{SVG}use"))) == 25


def test_plot_rejects_empty_envelope(tmp_path):
    env = build_envelope(np.array([]), np.array([]), np.array([]))
    with pytest.raises(DomainError):
        render_envelope_plot(env, tmp_path / "empty.svg")
    assert not (tmp_path / "empty.svg").exists()


def test_envelope_frame_columns():
    lo, hi, mid = _band(5)
    frame = build_envelope(mid, lo, hi).to_frame()
    assert list(frame.columns) == ["order_index", "theoretical_quantile", "residual", "lower", "upper"]
    assert frame["order_index"].tolist() == [1, 2, 3, 4, 5]
