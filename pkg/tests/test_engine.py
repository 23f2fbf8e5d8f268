"""Driver tests: merged scans against the oracle, tiling and ordering
independence, resume byte-identity, crossings, divisibility counts."""

import math
import random
from fractions import Fraction

import pytest

from oscillax.arith import Family, SumSpec, oracle_sum
from oscillax.engine import (
    SEGMENT,
    EngineError,
    Threshold,
    WorkUnit,
    divisibility_proportion_run,
    find_crossings,
    merge_results,
    run,
    sieve_interval,
    spec_slug,
)

S0 = SumSpec(Family.PARITY_LIOUVILLE, 0.0)
S_HALF = SumSpec(Family.PARITY_LIOUVILLE, 0.5)
L0 = SumSpec(Family.LIOUVILLE, 0.0)
H0 = SumSpec(Family.OMEGA_SIGN, 0.0)
W = SumSpec(Family.TWO_OMEGA, 0.0)
T4 = SumSpec(Family.TWISTED, d=-4)
D3 = SumSpec(Family.DIV_COUNT, m=3)


def test_spec_slug_shape():
    assert spec_slug(S0) == "parity_liouville_a0"
    assert spec_slug(S_HALF) == "parity_liouville_a0.5"
    assert spec_slug(T4) == "twisted_-4_a0"
    assert spec_slug(D3) == "div_count_3_a0"
    for spec in (S0, S_HALF, T4, D3):
        back = SumSpec.parse(spec.label(), alpha=spec.alpha)
        assert back == spec


def test_run_matches_oracle(omega_table_small):
    x = 4000
    res = run((S0, L0, W, T4, D3, S_HALF), x, omega_table_small, block_size=1000)
    for spec in (S0, L0, W, T4, D3):
        assert res.series.value(spec) == oracle_sum(spec, x).value
    hi, lo = res.series.value(S_HALF)  # double-double halves
    want = oracle_sum(S_HALF, x).value  # 160-bit mpfr
    assert abs(float(want - hi - lo)) <= 1e-12 * abs(float(want))


def test_omega_sign_run_matches_oracle(parity_omega_table_1e6):
    res = run((H0,), 4000, parity_omega_table_1e6, block_size=1000)
    assert res.series.value(H0) == oracle_sum(H0, 4000).value


def test_tiling_independence(omega_table_1e6):
    base = None
    for bs in (1000, 10_000, 25_000_000):
        res = run((S0, S_HALF, W), 30_000, omega_table_1e6, block_size=bs)
        if base is None:
            base = res.series
            continue
        assert res.series.rows == base.rows
        assert res.series.final == base.final
        assert res.series.extrema == base.extrema


def test_merge_order_invariance(omega_table_1e6):
    units = [
        WorkUnit(1, 7000, (S0, W), block_size=1000),
        WorkUnit(7001, 20_000, (S0, W), block_size=1000),
        WorkUnit(20_001, 30_000, (S0, W), block_size=1000),
    ]
    results = [sieve_interval(u, omega_table_1e6) for u in units]
    merged = merge_results(list(results), table=omega_table_1e6)
    direct = run((S0, W), 30_000, omega_table_1e6, block_size=1000).series
    assert merged.rows == direct.rows
    assert merged.final == direct.final
    assert merged.extrema == direct.extrema
    for perm in ((2, 0, 1), (1, 2, 0)):
        shuffled = merge_results(
            [results[i] for i in perm], table=omega_table_1e6
        )
        assert shuffled.rows == merged.rows
        assert shuffled.final == merged.final


def test_merge_tiling_validation(omega_table_small):
    a = sieve_interval(WorkUnit(1, 1000, (S0,)), omega_table_small)
    c = sieve_interval(WorkUnit(1501, 2000, (S0,)), omega_table_small)
    with pytest.raises(EngineError, match="gap or overlap"):
        merge_results([a, c], table=omega_table_small)
    b_late = sieve_interval(WorkUnit(500, 1500, (S0,)), omega_table_small)
    with pytest.raises(EngineError, match="gap or overlap"):
        merge_results([a, b_late, c], table=omega_table_small)
    with pytest.raises(EngineError, match="start at 1"):
        merge_results([c], table=omega_table_small)
    other = sieve_interval(WorkUnit(1001, 2000, (L0,)), omega_table_small)
    with pytest.raises(EngineError, match="spec mismatch"):
        merge_results([a, other], table=omega_table_small)
    with pytest.raises(EngineError, match="nothing to merge"):
        merge_results([], table=omega_table_small)


def test_resume_byte_identity(omega_table_1e6, tmp_path):
    full_dir = tmp_path / "full"
    part_dir = tmp_path / "part"
    kw = dict(block_size=10_000, thresholds=None)
    full = run((S0, S_HALF), 100_000, omega_table_1e6, out_dir=full_dir, **kw)
    first = run(
        (S0, S_HALF),
        100_000,
        omega_table_1e6,
        out_dir=part_dir,
        stop_after_blocks=4,
        **kw,
    )
    assert first.interrupted and first.blocks_done == 4
    second = run(
        (S0, S_HALF), 100_000, omega_table_1e6, out_dir=part_dir, resume=True, **kw
    )
    assert not second.interrupted
    assert second.series.final == full.series.final
    for slug in (spec_slug(S0), spec_slug(S_HALF)):
        for kind in ("samples", "crossings", "checkpoint"):
            a = open(full.paths[slug][kind], "rb").read()
            b = open(second.paths[slug][kind], "rb").read()
            assert a == b, (slug, kind)


def test_resume_rejects_mismatched_setup(omega_table_1e6, omega_table_small, tmp_path):
    out = tmp_path / "run"
    run((S0,), 50_000, omega_table_1e6, out_dir=out, block_size=10_000,
        stop_after_blocks=2)
    with pytest.raises(EngineError, match="checkpoint mismatch"):
        run((S0,), 50_000, omega_table_1e6, out_dir=out, block_size=25_000,
            resume=True)
    with pytest.raises(EngineError, match="table_fingerprint"):
        run((S0,), 50_000, omega_table_small, out_dir=out, block_size=10_000,
            resume=True)


def test_resume_requires_out_dir(omega_table_small):
    with pytest.raises(EngineError, match="resume requires out_dir"):
        run((S0,), 1000, omega_table_small, resume=True)


def test_block_size_must_align(omega_table_small):
    with pytest.raises(EngineError, match="multiple of"):
        run((S0,), 1000, omega_table_small, block_size=1500)


def test_duplicate_specs_rejected(omega_table_small):
    with pytest.raises(ValueError, match="duplicate"):
        run((S0, SumSpec(Family.PARITY_LIOUVILLE, 0.0)), 1000, omega_table_small)


def test_output_files_and_checkpoint_keys(omega_table_small, tmp_path):
    res = run((S0,), 2000, omega_table_small, out_dir=tmp_path, block_size=1000)
    slug = spec_slug(S0)
    samples = open(res.paths[slug]["samples"], "rb").read()
    assert samples.startswith(b"x,u,value_pos,value_neg,normalized\n")
    crossings = open(res.paths[slug]["crossings"], "rb").read()
    assert crossings == b"threshold,x,value\n"
    ck = dict(
        line.split("=", 1)
        for line in open(res.paths[slug]["checkpoint"]).read().splitlines()
    )
    for key in ("version", "family", "alpha", "a", "b", "last_block", "pos",
                "neg", "table_fingerprint"):
        assert key in ck
    assert ck["family"] == "parity_liouville"
    assert (ck["a"], ck["b"]) == ("1", "2000")
    # exact accumulators as decimal strings
    end = oracle_sum(S0, 2000)
    assert (int(ck["pos"]), int(ck["neg"])) == (end.pos, end.neg)


def test_normalization_rules(omega_table_1e6):
    x = 50_000
    res = run((S0, S_HALF, W, D3), x, omega_table_1e6, block_size=10_000)
    rows = res.series.rows

    val_s0 = oracle_sum(S0, x).value
    norm_s0 = rows[spec_slug(S0)][-1][4]
    assert abs(norm_s0 - val_s0 / math.sqrt(x)) < 1e-13

    # at alpha = 1/2 the drifting slope*u part is removed; the constant
    # center (the line's intercept) stays in the reported value
    from oscillax.residues import CenterLine, residue_at_origin

    line = residue_at_origin(Family.PARITY_LIOUVILLE, 0.5)
    assert isinstance(line, CenterLine)
    val_sh = float(oracle_sum(S_HALF, x).value)
    norm_sh = rows[spec_slug(S_HALF)][-1][4]
    assert abs(norm_sh - (val_sh - line.slope * math.log(x))) < 1e-10

    norm_w = rows[spec_slug(W)][-1][4]
    assert abs(norm_w - oracle_sum(W, x).value / x) < 1e-13

    # divisibility counts are scaled by m/x, so the reference level is 1
    norm_d3 = rows[spec_slug(D3)][-1][4]
    assert abs(norm_d3 - 3 * oracle_sum(D3, x).value / x) < 1e-13


def test_extra_sample_points(omega_table_small):
    res = run((W,), 4000, omega_table_small, block_size=1000,
              extra_sample_x=(3130, 6261))
    xs = [r[0] for r in res.series.rows[spec_slug(W)]]
    assert 3130 in xs  # 6261 is past x_end and ignored
    row = next(r for r in res.series.rows[spec_slug(W)] if r[0] == 3130)
    assert row[2] - row[3] == -3113


def test_integer_stride_sampling(omega_table_small):
    res = run((S0,), 2500, omega_table_small, block_size=1000, sample_stride=1000)
    xs = [r[0] for r in res.series.rows[spec_slug(S0)]]
    assert xs == [1000, 2000, 2500]


def test_find_crossings_first_window(omega_table_small):
    thr = Threshold(tid="positivity", side="lower", kind="const", coeff=Fraction(0))
    got = find_crossings(S0, thr, 10, omega_table_small)
    assert got == [(1, -1), (2, -2), (3, -1), (4, 0)]
    # running sums on [1, 10]: -1,-2,-1,0,1,2,3,2,1,2
    vals = [oracle_sum(S0, x).value for x in range(1, 11)]
    assert vals == [-1, -2, -1, 0, 1, 2, 3, 2, 1, 2]
    later = Threshold(
        tid="positivity", side="lower", kind="const", coeff=Fraction(0), x_start=5
    )
    assert find_crossings(S0, later, 10, omega_table_small) == []


def test_find_crossings_sqrt_band_empty(omega_table_1e6):
    lower = Threshold(tid="sqrt", side="lower", kind="power", coeff=Fraction(1),
                      x_start=325)
    assert find_crossings(S0, lower, 10**5, omega_table_1e6) == []
    ident = Threshold(tid="wall", side="lower", kind="identity",
                      coeff=Fraction(-1), x_start=3078)
    assert find_crossings(W, ident, 10**5, omega_table_1e6) == []


def test_find_crossings_reports_every_violation(omega_table_small):
    # a deliberately violated band: |W(x)| < x fails below 3078
    thr = Threshold(tid="wall", side="upper", kind="identity", coeff=Fraction(1))
    got = find_crossings(W, thr, 3000, omega_table_small)
    assert got, "upper identity bound must be reached below the onset"
    vals = {x: oracle_sum(W, x).value for x in range(1, 3001)}
    want = [(x, v) for x, v in sorted(vals.items()) if v >= x]
    assert got == want


def test_threshold_validation():
    with pytest.raises(ValueError, match="side"):
        Threshold(tid="t", side="middle", kind="const", coeff=Fraction(0))
    with pytest.raises(ValueError, match="kind"):
        Threshold(tid="t", side="lower", kind="sqrt", coeff=Fraction(0))
    with pytest.raises(ValueError, match="x_start"):
        Threshold(tid="t", side="lower", kind="const", coeff=Fraction(0), x_start=0)
    with pytest.raises(ValueError, match="plain text"):
        Threshold(tid="a,b", side="lower", kind="const", coeff=Fraction(0))
    # non-Fraction coefficients are coerced exactly
    t = Threshold(tid="t", side="lower", kind="power", coeff=2.5)
    assert t.coeff == Fraction(5, 2)


def test_divisibility_brute_force(omega_table_small):
    rep = divisibility_proportion_run(2, 100, omega_table_small, x_start=1,
                                      sample_stride=10)
    from oscillax.arith import big_omega

    count = 0
    want_viol = []
    for n in range(1, 101):
        if (n - big_omega(n)) % 2 == 0:
            count += 1
        if count * 2 <= n:
            want_viol.append((n, count))
    assert rep.violations == want_viol
    assert rep.samples[-1] == (100, count)
    assert rep.discovered_onset == (want_viol[-1][0] + 1 if want_viol else 1)


def test_divisibility_published_onsets(omega_table_1e6):
    rep3 = divisibility_proportion_run(3, 10**4, omega_table_1e6)
    assert rep3.x_start == 62 and rep3.violations == []
    rep3_full = divisibility_proportion_run(3, 10**4, omega_table_1e6, x_start=1)
    assert rep3_full.discovered_onset == 62
    rep5 = divisibility_proportion_run(5, 10**4, omega_table_1e6, x_start=1)
    assert rep5.discovered_onset == 187
    # m = 4 runs in the reversed direction with a beyond-desk onset
    rep4 = divisibility_proportion_run(4, 10**4, omega_table_1e6)
    assert rep4.reversed_direction and rep4.x_start == 1_793_193
    assert rep4.violations == []
    with pytest.raises(ValueError, match="m must be"):
        divisibility_proportion_run(1, 100, omega_table_1e6)


def test_divisibility_reversed_equality_allowed(omega_table_small):
    # for the reversed direction only strict excess counts as a violation
    rep = divisibility_proportion_run(4, 3000, omega_table_small, x_start=1)
    from oscillax.arith import big_omega

    count = 0
    want = []
    for n in range(1, 3001):
        if (n - big_omega(n)) % 4 == 0:
            count += 1
        if count * 4 > n:
            want.append((n, count))
    assert rep.violations == want


def test_workunit_validation():
    with pytest.raises(ValueError, match="1 <= a <= b"):
        WorkUnit(5, 4, (S0,))
    with pytest.raises(ValueError, match="sample stride"):
        WorkUnit(1, 10, (S0,), sample_stride="weekly")
    with pytest.raises(ValueError, match="duplicate"):
        WorkUnit(1, 10, (S0, S0))
