"""Truncated explicit-formula estimates: grids, crossings, sieve residuals."""

import math

import numpy as np
import pytest

from oscillax import engine
from oscillax.arith import Family, SumSpec
from oscillax.explicit import (
    EstimateSeries,
    ExplicitEstimateConfig,
    ExplicitFormulaError,
    compare_to_sieve,
    estimate,
    estimate_literal_parity,
    find_estimate_crossings,
)

S0 = SumSpec(Family.PARITY_LIOUVILLE, 0.0)
H0 = SumSpec(Family.OMEGA_SIGN, 0.0)

# Lean settings for unit tests: 269 zeros below height 500, coarse 1e-3 grid.
# The high-T reproductions live in the acceptance suite.
T_LEAN = 500.0


@pytest.fixture(scope="module")
def series_s(zeros5200):
    cfg = ExplicitEstimateConfig(S0, T_LEAN, 11.0, 12.0, du=1e-3)
    return estimate(cfg, zeros5200)


def test_estimate_series_shape(series_s):
    ser = series_s
    assert len(ser.us) == 1001
    assert ser.us[0] == 11.0 and ser.us[-1] == pytest.approx(12.0, abs=1e-12)
    assert ser.zero_count == 269
    assert 0 < ser.tail_proxy < 0.01
    # deterministic given the builtin zeros; frozen as a regression anchor
    assert ser.values.min() == pytest.approx(1.244073290082112, rel=1e-12)
    assert ser.values.max() == pytest.approx(2.082203098688883, rel=1e-12)


def test_literal_parity_matches_generic(series_s, zeros5200):
    lit = estimate_literal_parity(T_LEAN, zeros5200, series_s.us)
    assert np.max(np.abs(lit - series_s.values)) < 1e-12


def test_omega_sign_window(zeros5200):
    # normalization removes the bias term, so the estimate oscillates about 0
    cfg = ExplicitEstimateConfig(H0, T_LEAN, 11.0, 12.0, du=1e-3)
    ser = estimate(cfg, zeros5200)
    assert ser.zero_count == 269
    assert ser.values.min() < 0 < ser.values.max()


def test_config_validation():
    with pytest.raises(ExplicitFormulaError, match="no explicit-formula residues"):
        ExplicitEstimateConfig(SumSpec(Family.TWO_OMEGA, 0.0), 500.0, 11.0, 12.0)
    with pytest.raises(ExplicitFormulaError, match="truncation height must be positive"):
        ExplicitEstimateConfig(S0, 0.0, 11.0, 12.0)
    with pytest.raises(ExplicitFormulaError, match="need u_lo < u_hi"):
        ExplicitEstimateConfig(S0, 500.0, 12.0, 11.0)
    with pytest.raises(ExplicitFormulaError, match="grid step du must be positive"):
        ExplicitEstimateConfig(S0, 500.0, 11.0, 12.0, du=0.0)
    with pytest.raises(ExplicitFormulaError, match="refine_tol must be positive"):
        ExplicitEstimateConfig(S0, 500.0, 11.0, 12.0, refine_tol=-1e-6)


def test_truncation_height_needs_loaded_zeros(zeros5200):
    cfg = ExplicitEstimateConfig(S0, 6000.0, 11.0, 12.0)
    with pytest.raises(ExplicitFormulaError, match="exceeds the loaded zeros"):
        estimate(cfg, zeros5200)


def test_crossings_refined_and_sorted(series_s, zeros5200):
    ser = series_s
    # thresholds given out of order; result comes back (threshold, u_star)-sorted
    hits = find_estimate_crossings(ser.config, [2.0, 1.5], zeros5200, series=ser)
    assert ser.crossings is hits
    assert [c.threshold for c in hits] == sorted(c.threshold for c in hits)
    assert len([c for c in hits if c.threshold == 1.5]) == 18
    assert len([c for c in hits if c.threshold == 2.0]) == 4
    assert hits[0].u_star == pytest.approx(11.048576660156252, abs=1e-9)
    for c in hits:
        assert c.u_lo < c.u_star < c.u_hi
        assert c.u_star == (c.u_lo + c.u_hi) / 2
        assert c.u_hi - c.u_lo <= 2 * ser.config.refine_tol
        # the refined point really sits on the level, up to the bracket width
        assert abs(ser.evaluator.at(c.u_star) - c.threshold) < 1e-4
    stars = [c.u_star for c in hits if c.threshold == 1.5]
    assert stars == sorted(stars)


def test_crossings_without_cached_series(series_s, zeros5200):
    fresh = find_estimate_crossings(series_s.config, [1.5], zeros5200)
    cached = [c for c in series_s.crossings or () if c.threshold == 1.5]
    if not cached:
        cached = find_estimate_crossings(series_s.config, [1.5], zeros5200, series=series_s)
    assert [c.u_star for c in fresh] == [c.u_star for c in cached]


def test_unreachable_threshold(series_s, zeros5200):
    # the window floor is ~1.24, so neither level is ever met
    assert find_estimate_crossings(series_s.config, [1.0], zeros5200, series=series_s) == []
    assert find_estimate_crossings(series_s.config, [1e6], zeros5200, series=series_s) == []


def test_compare_to_sieve(series_s, omega_table_1e6):
    res = engine.run((S0,), 10**5, omega_table_1e6, block_size=10**5)
    stats = compare_to_sieve(series_s, res.series)
    # sieve samples stop at u = ln(1e5) ~ 11.513, inside the [11, 12] window
    assert stats.count == 53
    assert stats.u_lo >= 11.0
    assert stats.u_hi <= math.log(10**5) + 1e-12
    assert stats.mean_abs == pytest.approx(0.022987930782426485, rel=1e-9)
    assert stats.max_abs == pytest.approx(0.06617109294666146, rel=1e-9)
    assert stats.mean_abs <= stats.max_abs


def test_compare_to_sieve_errors(series_s, zeros5200, omega_table_1e6):
    res = engine.run((S0,), 10**5, omega_table_1e6, block_size=10**5)
    bare = EstimateSeries(
        config=series_s.config,
        us=np.array([11.0]),
        values=np.array([1.0]),
        zero_count=0,
        tail_proxy=0.0,
    )
    with pytest.raises(ExplicitFormulaError, match="carries no evaluator"):
        compare_to_sieve(bare, res.series)
    cfg = ExplicitEstimateConfig(S0, T_LEAN, 13.0, 13.5, du=1e-2)
    ser = estimate(cfg, zeros5200)
    with pytest.raises(ExplicitFormulaError, match="no sieve samples"):
        compare_to_sieve(ser, res.series)


def test_csv_writers(series_s, zeros5200, tmp_path):
    find_estimate_crossings(series_s.config, [1.5], zeros5200, series=series_s)
    grid = tmp_path / "grid.csv"
    hits = tmp_path / "hits.csv"
    series_s.write_csv(grid)
    series_s.write_crossings_csv(hits)

    lines = grid.read_text().splitlines()
    assert lines[0] == "u,estimate"
    assert len(lines) == 1 + len(series_s.us)
    u, v = lines[1].split(",")
    assert float(u) == series_s.us[0] and float(v) == series_s.values[0]

    lines = hits.read_text().splitlines()
    assert lines[0] == "threshold,u_lo,u_hi,u_star"
    assert len(lines) == 1 + len(series_s.crossings)
    thr, lo, hi, star = (float(f) for f in lines[1].split(","))
    assert thr == 1.5 and lo < star < hi
