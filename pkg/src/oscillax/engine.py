"""Segmented evaluation of the weighted arithmetic sums over [1, X].

One factor-table-backed sieve pass serves every requested sum at once.
Positive and negative parts are carried separately the whole way:
exact Python integers for the unweighted families, double-double for
alpha > 0.

Determinism contract: floating accumulation is anchored to a fixed
absolute grid of SEGMENT consecutive integers.  Totals of the grid
segments are folded sequentially into the double-double accumulators,
and every emitted value (sample rows, the normalized series, extrema,
crossing screens) derives from those canonical pieces.  Tilings whose
unit boundaries respect the segment grid therefore reproduce identical
bytes; the resume and tiling-independence guarantees rest on this.
Integer families are exact under any tiling.
"""

import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from . import residues
from .arith import Family, SumSpec, kronecker
from .dd import dd_add_d, dd_from_decimal_string, dd_sub, dd_to_decimal_string
from .sieve import BlockSieve, Track
from .table import TableMode, build_table

# absolute accumulation grid; block sizes must be multiples of this
SEGMENT = 1_000
# processing granularity inside a block (multiple of SEGMENT)
SUBCHUNK = 1_000_000
DEFAULT_BLOCK_SIZE = 25_000_000
U_GRID_STEP = 0.01

CHECKPOINT_VERSION = 1

# conjectured onset of the divisibility bias, where one was stated
PUBLISHED_ONSETS = {3: 62, 4: 1_793_193, 5: 187, 20: 61}
# moduli whose proportion is conjectured bounded above instead of below
REVERSED_DIRECTION = frozenset({4})

_SAMPLES_HEADER = b"x,u,value_pos,value_neg,normalized\n"
_CROSSINGS_HEADER = b"threshold,x,value\n"


class EngineError(RuntimeError):
    pass


_FAMILY_TRACK = {
    Family.LIOUVILLE: Track.PARITY_NMO,
    Family.PARITY_LIOUVILLE: Track.PARITY_NMO,
    Family.TWISTED: Track.PARITY_NMO,
    Family.OMEGA_SIGN: Track.PARITY_OMEGA,
    Family.TWO_OMEGA: Track.OMEGA,
    Family.DIV_COUNT: Track.OMEGA,
}


def spec_slug(spec):
    """File-name-safe identifier, unique per (family, parameters, alpha)."""
    return f"{spec.label().replace(':', '_')}_a{spec.alpha:g}"


def is_integer_spec(spec):
    return spec.alpha == 0.0


def sample_grid(x_end):
    """Log-uniform sample positions x = ceil(e^(k/100)), deduplicated."""
    k_max = int(math.ceil(100.0 * math.log(max(x_end, 2)))) + 1
    xs = np.ceil(np.exp(U_GRID_STEP * np.arange(k_max + 1))).astype(np.int64)
    return np.unique(xs[xs <= x_end])


@dataclass(frozen=True)
class NormalizationRule:
    """How a running sum is rescaled for reporting.

    normalized(x) = (value(x) - center(x)) * coeff * x**power, where
    center is zero, a constant, or a multiple of ln x.
    """

    spec: SumSpec
    coeff: float
    power: float
    center_kind: str = "none"  # none | constant | u_slope
    center_value: float = 0.0

    @classmethod
    def for_spec(cls, spec):
        return _rule_for(spec)

    def apply(self, x, u, value):
        """Vectorized over float64 arrays; u may be None unless some
        rule in the run centers on a line in u."""
        v = value
        if self.center_kind == "constant":
            v = v - self.center_value
        elif self.center_kind == "u_slope":
            v = v - self.center_value * (np.log(x) if u is None else u)
        if self.power == 0.0:
            return v * self.coeff if self.coeff != 1.0 else v
        return v * (self.coeff * x**self.power)


@lru_cache(maxsize=None)
def _rule_for(spec):
    fam = spec.family
    if fam is Family.TWO_OMEGA:
        return NormalizationRule(spec, 1.0, -1.0)
    if fam is Family.DIV_COUNT:
        return NormalizationRule(spec, float(spec.m), -1.0)
    if fam is Family.TWISTED:
        return NormalizationRule(spec, 1.0, -0.5)
    power = spec.alpha - 0.5
    if fam is Family.PARITY_LIOUVILLE and spec.alpha == 0.5:
        # remove the logarithmic drift, keep the constant offset
        line = residues.residue_at_origin(fam, 0.5)
        return NormalizationRule(spec, 1.0, 0.0, "u_slope", line.slope)
    if fam is Family.OMEGA_SIGN and spec.alpha > 0.5:
        bias = residues.residue_at_origin(fam, spec.alpha)
        return NormalizationRule(spec, 1.0, power, "constant", bias)
    return NormalizationRule(spec, 1.0, power)


@dataclass(frozen=True)
class Threshold:
    """One side of a conjectured bound on a running sum.

    kind "power" compares against coeff * x**(1/2 - alpha), "const"
    against the bare coefficient, "identity" against coeff * x.  side
    names the violating direction: "lower" flags value <= bound,
    "upper" flags value >= bound.  x below x_start is not scanned.
    """

    tid: str
    side: str
    kind: str
    coeff: Fraction
    x_start: int = 1

    def __post_init__(self):
        if self.side not in ("lower", "upper"):
            raise ValueError(f"side must be lower or upper, got {self.side!r}")
        if self.kind not in ("power", "const", "identity"):
            raise ValueError(f"unknown threshold kind {self.kind!r}")
        if not isinstance(self.coeff, Fraction):
            object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.x_start < 1:
            raise ValueError("x_start must be >= 1")
        if "," in self.tid or "\n" in self.tid or "=" in self.tid:
            raise ValueError("threshold id must be plain text")

    def bound_at(self, x, alpha):
        """float64 bound values for an int64 array of x."""
        c = float(self.coeff)
        if self.kind == "const":
            return np.full(x.shape, c)
        if self.kind == "identity":
            return c * x.astype(np.float64)
        return c * x.astype(np.float64) ** (0.5 - alpha)


@dataclass(frozen=True)
class WorkUnit:
    """An interval of integers to scan, with the sums wanted over it."""

    a: int
    b: int
    specs: tuple
    block_size: int = DEFAULT_BLOCK_SIZE
    sample_stride: object = "u-grid"  # "u-grid" or a positive int
    extra_sample_x: tuple = ()

    def __post_init__(self):
        if not 1 <= self.a <= self.b:
            raise ValueError("need 1 <= a <= b")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        if isinstance(self.sample_stride, str):
            if self.sample_stride != "u-grid":
                raise ValueError(f"unknown sample stride {self.sample_stride!r}")
        elif self.sample_stride < 1:
            raise ValueError("integer sample stride must be >= 1")
        object.__setattr__(self, "specs", tuple(self.specs))
        object.__setattr__(
            self, "extra_sample_x", tuple(int(x) for x in self.extra_sample_x)
        )
        seen = set()
        for spec in self.specs:
            slug = spec_slug(spec)
            if slug in seen:
                raise ValueError(f"duplicate spec {slug}")
            seen.add(slug)


@dataclass
class BlockResult:
    """Everything one scanned unit contributes to a merged series.

    deltas and sample values are relative to the unit start unless the
    scan had global bases (resolved=True; a unit starting at 1 counts),
    in which case they are global and the extrema and crossings are
    final.  seg_totals carries the canonical per-segment totals so a
    merge rebuilds the accumulators independently of the tiling.
    """

    unit: WorkUnit
    deltas: dict
    seg_totals: dict
    samples: dict  # slug -> [(x, pos, neg, normalized, rem_pos, rem_neg)]
    extrema: dict
    crossing_candidates: list
    resolved: bool


@dataclass
class SampleSeries:
    """Merged output of a run: sampled rows plus resolved reports."""

    x_end: int
    specs: tuple
    rows: dict  # slug -> list of (x, u, pos, neg, normalized)
    final: dict  # slug -> (pos, neg), exact
    extrema: dict  # slug -> {max, max_x, max_count, min, min_x, min_count}
    crossings: dict  # slug -> {tid -> [(x, value)]}
    extrema_exact: bool = True
    crossings_resolved: bool = True

    def value(self, spec):
        slug = spec_slug(spec) if isinstance(spec, SumSpec) else spec
        pos, neg = self.final[slug]
        if isinstance(pos, tuple):
            return dd_sub(pos, neg)
        return pos - neg


@dataclass
class RunResult:
    series: SampleSeries
    paths: dict
    blocks_done: int
    interrupted: bool


def _fresh_extrema():
    return {
        "max": -math.inf,
        "max_x": 0,
        "max_count": 0,
        "min": math.inf,
        "min_x": 0,
        "min_count": 0,
    }


def _update_extrema(ext, norm, x0):
    m = float(norm.max())
    if m > ext["max"]:
        ext["max"] = m
        ext["max_x"] = x0 + int(np.argmax(norm))
        ext["max_count"] = int(np.count_nonzero(norm == m))
    elif m == ext["max"]:
        ext["max_count"] += int(np.count_nonzero(norm == m))
    m = float(norm.min())
    if m < ext["min"]:
        ext["min"] = m
        ext["min_x"] = x0 + int(np.argmin(norm))
        ext["min_count"] = int(np.count_nonzero(norm == m))
    elif m == ext["min"]:
        ext["min_count"] += int(np.count_nonzero(norm == m))


def _combine_extrema(dst, src):
    # ties keep the smallest x and add up attainment counts
    if src["max_count"]:
        if src["max"] > dst["max"]:
            dst["max"], dst["max_x"], dst["max_count"] = (
                src["max"], src["max_x"], src["max_count"],
            )
        elif src["max"] == dst["max"]:
            dst["max_count"] += src["max_count"]
            dst["max_x"] = min(dst["max_x"], src["max_x"])
    if src["min_count"]:
        if src["min"] < dst["min"]:
            dst["min"], dst["min_x"], dst["min_count"] = (
                src["min"], src["min_x"], src["min_count"],
            )
        elif src["min"] == dst["min"]:
            dst["min_count"] += src["min_count"]
            dst["min_x"] = min(dst["min_x"], src["min_x"])


@lru_cache(maxsize=64)
def _kronecker_table(d):
    # (d/n) is periodic in n with period |d| for d = 0, 1 (mod 4)
    return np.array([kronecker(d, r) for r in range(abs(d))], dtype=np.int64)


def _term_values(spec, n, track_vals):
    """Per-n summand numerators as int64 (sign, (-2)^Omega, or 0/1)."""
    fam = spec.family
    if fam is Family.TWO_OMEGA:
        om = track_vals.astype(np.int64)
        if int(om.max(initial=0)) >= 43:
            raise EngineError("(-2)^Omega exceeds the exact int64 range here")
        sign = 1 - 2 * (om & 1)
        return sign * np.left_shift(1, om)
    if fam is Family.DIV_COUNT:
        om = track_vals.astype(np.int64)
        return ((n - om) % spec.m == 0).astype(np.int64)
    if fam is Family.LIOUVILLE:
        parity = track_vals.astype(np.int64) ^ (n & 1)
        return 1 - 2 * parity
    if fam is Family.TWISTED:
        base = 1 - 2 * track_vals.astype(np.int64)
        return base * _kronecker_table(spec.d)[n % abs(spec.d)]
    # PARITY_LIOUVILLE and OMEGA_SIGN read their parity track directly
    return 1 - 2 * track_vals.astype(np.int64)


def _segment_piece_lengths(lo, n):
    """Lengths of the SEGMENT-grid pieces covering a span of n values
    starting at lo: partial head, full segments, partial tail."""
    head = min(n, (-(lo - 1)) % SEGMENT)
    full, tail = divmod(n - head, SEGMENT)
    lens = [head] if head else []
    lens.extend([SEGMENT] * full)
    if tail:
        lens.append(tail)
    return lens


def _per_segment_cumsum(terms, piece_lens):
    """Running sums restarting at every segment piece, plus the piece
    totals.  Sequential within each piece, so the bits depend only on
    the piece contents and never on the span that computed them."""
    cum = np.empty_like(terms)
    totals = np.empty(len(piece_lens), dtype=terms.dtype)
    off = 0
    i = 0
    # contiguous run of full segments handled as one reshape
    while i < len(piece_lens):
        ln = piece_lens[i]
        if ln == SEGMENT:
            j = i
            while j < len(piece_lens) and piece_lens[j] == SEGMENT:
                j += 1
            span = (j - i) * SEGMENT
            body = cum[off : off + span].reshape(-1, SEGMENT)
            np.cumsum(terms[off : off + span].reshape(-1, SEGMENT), axis=1, out=body)
            totals[i:j] = body[:, -1]
            off += span
            i = j
        else:
            np.cumsum(terms[off : off + ln], out=cum[off : off + ln])
            totals[i] = cum[off + ln - 1]
            off += ln
            i += 1
    return cum, totals


class _SpecState:
    """Mutable per-spec accumulation while scanning one unit."""

    def __init__(self, spec, thresholds, base):
        self.spec = spec
        self.slug = spec_slug(spec)
        self.rule = NormalizationRule.for_spec(spec)
        self.integer = is_integer_spec(spec)
        self.thresholds = tuple(thresholds)
        if base is None:
            base = (0, 0) if self.integer else ((0.0, 0.0), (0.0, 0.0))
        self.pos, self.neg = base
        self.start = (self.pos, self.neg)
        self.samples = []
        self.extrema = _fresh_extrema()
        self.crossings = []  # (tid, x, value) in scan order
        self.seg_pos = []
        self.seg_neg = []

    def delta(self):
        if self.integer:
            return (self.pos - self.start[0], self.neg - self.start[1])
        return (dd_sub(self.pos, self.start[0]), dd_sub(self.neg, self.start[1]))

    def seg_total_arrays(self):
        if not self.seg_pos:
            empty = np.empty(0, dtype=np.int64 if self.integer else np.float64)
            return empty, empty.copy()
        return np.concatenate(self.seg_pos), np.concatenate(self.seg_neg)


def _int_threshold_mask(thr, value, n, alpha):
    """Exact violation mask for integer running values (no floats)."""
    p, q = thr.coeff.numerator, thr.coeff.denominator
    vq = value * q
    if thr.kind == "const":
        return vq <= p if thr.side == "lower" else vq >= p
    if thr.kind == "identity":
        return vq <= p * n if thr.side == "lower" else vq >= p * n
    # power: c*sqrt(x) via the squared comparison; needs alpha = 0, c >= 0
    if alpha != 0.0:
        raise EngineError("exact power threshold requires alpha = 0")
    if p < 0:
        raise EngineError("exact sqrt threshold requires c >= 0")
    rhs = p * p * n
    if thr.side == "lower":
        return (vq <= 0) | (vq * vq <= rhs)
    return (vq > 0) & (vq * vq >= rhs)


def _int_guard(vmax, hi, thresholds):
    """Refuse to run the vectorized exact compares outside int64."""
    for t in thresholds:
        p, q = abs(t.coeff.numerator), t.coeff.denominator
        if t.kind == "power":
            worst = max((vmax * q) ** 2, p * p * hi)
        else:
            worst = max(vmax * q, p * hi)
        if worst > 2**62:
            raise EngineError(
                f"exact threshold arithmetic would overflow int64 near x={hi}"
            )


def _scan_unit(unit, table, bases, thresholds_by_slug, sample_x=None):
    """Scan [a, b] once; the workhorse under sieve_interval and run().

    bases maps slug -> (pos, neg) at x = a-1.  Values are global when
    bases are supplied or the unit starts at 1; thresholds are only
    scanned in that case (a violation test needs the true value).
    """
    resolved = bases is not None or unit.a == 1
    sieve = BlockSieve(table)
    states = []
    for spec in unit.specs:
        slug = spec_slug(spec)
        thrs = thresholds_by_slug.get(slug, ()) if resolved else ()
        states.append(_SpecState(spec, thrs, None if bases is None else bases.get(slug)))
    tracks_wanted = sorted(
        {_FAMILY_TRACK[s.family] for s in unit.specs}, key=lambda t: t.value
    )

    if sample_x is None:
        if isinstance(unit.sample_stride, str):
            grid = sample_grid(unit.b)
            keep = set(grid[grid >= unit.a].tolist())
            keep.update(x for x in unit.extra_sample_x if unit.a <= x <= unit.b)
            keep.add(unit.b)
            sample_x = np.array(sorted(keep), dtype=np.int64)
        else:
            k = unit.sample_stride
            sample_x = np.arange(unit.a + k - 1, unit.b + 1, k, dtype=np.int64)
            if sample_x.size == 0 or sample_x[-1] != unit.b:
                sample_x = np.append(sample_x, unit.b)

    needs_u = any(st.rule.center_kind == "u_slope" for st in states)

    for blk_lo in range(unit.a, unit.b + 1, unit.block_size):
        blk_hi = min(unit.b, blk_lo + unit.block_size - 1)
        tracks = sieve.block_tracks(blk_lo, blk_hi, tracks_wanted)
        for lo in range(blk_lo, blk_hi + 1, SUBCHUNK):
            hi = min(blk_hi, lo + SUBCHUNK - 1)
            _scan_span(states, tracks, blk_lo, lo, hi, sample_x, needs_u)
        del tracks
    return states, resolved


def _scan_span(states, tracks, blk_lo, lo, hi, sample_x, needs_u):
    n = np.arange(lo, hi + 1, dtype=np.int64)
    nf = n.astype(np.float64)
    u = np.log(nf) if needs_u else None
    s_lo = np.searchsorted(sample_x, lo)
    s_hi = np.searchsorted(sample_x, hi, side="right")
    span_samples = sample_x[s_lo:s_hi]
    piece_lens = _segment_piece_lengths(lo, n.size)

    for st in states:
        tr = tracks[_FAMILY_TRACK[st.spec.family]][lo - blk_lo : hi - blk_lo + 1]
        terms = _term_values(st.spec, n, tr)
        if st.integer:
            _scan_span_int(st, terms, n, nf, u, lo, piece_lens, span_samples)
        else:
            _scan_span_float(st, terms, n, nf, u, lo, piece_lens, span_samples)


def _scan_span_int(st, terms, n, nf, u, lo, piece_lens, span_samples):
    cpos = np.cumsum(np.where(terms > 0, terms, 0))
    cneg = np.cumsum(np.where(terms < 0, -terms, 0))
    # segment totals: exact for integers, so plain prefix differences do
    bounds = np.cumsum(np.asarray(piece_lens, dtype=np.int64)) - 1
    st.seg_pos.append(np.diff(np.concatenate(([0], cpos[bounds]))))
    st.seg_neg.append(np.diff(np.concatenate(([0], cneg[bounds]))))

    base_v = st.pos - st.neg
    if st.thresholds:
        vmax = abs(base_v) + int(cpos[-1]) + int(cneg[-1])
        _int_guard(vmax, int(n[-1]), st.thresholds)
    value = base_v + (cpos - cneg)

    for thr in st.thresholds:
        mask = _int_threshold_mask(thr, value, n, st.spec.alpha)
        if thr.x_start > lo:
            mask &= n >= thr.x_start
        if mask.any():
            for i in np.flatnonzero(mask).tolist():
                st.crossings.append((thr.tid, int(n[i]), int(value[i])))

    norm = st.rule.apply(nf, u, value.astype(np.float64))
    _update_extrema(st.extrema, norm, lo)

    if span_samples.size:
        for x in span_samples.tolist():
            i = x - lo
            st.samples.append(
                (x, st.pos + int(cpos[i]), st.neg + int(cneg[i]), float(norm[i]), 0.0, 0.0)
            )
    st.pos += int(cpos[-1])
    st.neg += int(cneg[-1])


def _scan_span_float(st, terms, n, nf, u, lo, piece_lens, span_samples):
    alpha = st.spec.alpha
    weights = nf ** (-alpha)
    cpos, tot_pos = _per_segment_cumsum(np.where(terms > 0, weights, 0.0), piece_lens)
    cneg, tot_neg = _per_segment_cumsum(np.where(terms < 0, weights, 0.0), piece_lens)
    st.seg_pos.append(tot_pos)
    st.seg_neg.append(tot_neg)

    # double-double bases at the start of each segment piece, folded
    # sequentially so every aligned tiling sees the same bits
    k = len(piece_lens)
    bph = np.empty(k)
    bpl = np.empty(k)
    bnh = np.empty(k)
    bnl = np.empty(k)
    acc_p, acc_n = st.pos, st.neg
    tp = tot_pos.tolist()
    tn = tot_neg.tolist()
    for i in range(k):
        bph[i], bpl[i] = acc_p
        bnh[i], bnl[i] = acc_n
        acc_p = dd_add_d(acc_p, tp[i])
        acc_n = dd_add_d(acc_n, tn[i])
    reps = np.asarray(piece_lens)
    value = (np.repeat(bph, reps) + (cpos + np.repeat(bpl, reps))) - (
        np.repeat(bnh, reps) + (cneg + np.repeat(bnl, reps))
    )
    piece_of = np.repeat(np.arange(k), reps)

    for thr in st.thresholds:
        bound = thr.bound_at(n, alpha)
        slack = 1e-6 * (1.0 + np.abs(bound))
        if thr.side == "lower":
            flag = value - bound <= slack
        else:
            flag = bound - value <= slack
        if thr.x_start > lo:
            flag &= n >= thr.x_start
        if flag.any():
            _recheck_float_crossings(
                st, thr, n, cpos, cneg, bph, bpl, bnh, bnl, piece_of, flag
            )

    norm = st.rule.apply(nf, u, value)
    _update_extrema(st.extrema, norm, lo)

    if span_samples.size:
        for x in span_samples.tolist():
            i = x - lo
            p = piece_of[i]
            pos_dd = dd_add_d((bph[p], bpl[p]), float(cpos[i]))
            neg_dd = dd_add_d((bnh[p], bnl[p]), float(cneg[i]))
            st.samples.append(
                (x, pos_dd, neg_dd, float(norm[i]), float(cpos[i]), float(cneg[i]))
            )
    st.pos = acc_p
    st.neg = acc_n


def _recheck_float_crossings(st, thr, n, cpos, cneg, bph, bpl, bnh, bnl, piece_of, flag):
    """Confirm screened near-crossings at higher precision.

    The accumulated sum itself carries float64 weight rounding, so
    outcomes within ~1e-9 of the bound err toward reporting: no true
    crossing is missed, a grazing value may be reported conservatively.
    """
    half = 0.5 - st.spec.alpha
    with gmpy2.context(precision=120):
        c = gmpy2.mpfr(thr.coeff.numerator) / thr.coeff.denominator
        for i in np.flatnonzero(flag).tolist():
            p = piece_of[i]
            pos_dd = dd_add_d((bph[p], bpl[p]), float(cpos[i]))
            neg_dd = dd_add_d((bnh[p], bnl[p]), float(cneg[i]))
            v = dd_sub(pos_dd, neg_dd)
            x = int(n[i])
            if thr.kind == "const":
                bound = c + 0
            elif thr.kind == "identity":
                bound = c * x
            else:
                bound = c * gmpy2.mpfr(x) ** half
            val = gmpy2.mpfr(v[0]) + v[1]
            slack = 1e-9 * (1.0 + abs(bound))
            hit = val <= bound + slack if thr.side == "lower" else val >= bound - slack
            if hit:
                st.crossings.append((thr.tid, x, float(val)))


def sieve_interval(unit, table, *, bases=None, thresholds=None):
    """Scan one unit and package its contribution.

    With bases (per-slug (pos, neg) at x = a-1), or for a unit starting
    at 1, the returned samples, extrema, and crossings are global and
    final; otherwise they are relative to the unit start and a merge
    resolves them.
    """
    states, resolved = _scan_unit(unit, table, bases, dict(thresholds or {}))
    deltas = {}
    seg_totals = {}
    samples = {}
    extrema = {}
    candidates = []
    for st in states:
        deltas[st.slug] = st.delta()
        seg_totals[st.slug] = st.seg_total_arrays()
        samples[st.slug] = st.samples
        extrema[st.slug] = st.extrema
        candidates.extend((st.slug, tid, x, v) for tid, x, v in st.crossings)
    return BlockResult(
        unit=unit,
        deltas=deltas,
        seg_totals=seg_totals,
        samples=samples,
        extrema=extrema,
        crossing_candidates=candidates,
        resolved=resolved,
    )


def merge_results(results, *, table=None, thresholds=None):
    """Fold unit results covering [1, X] into one SampleSeries.

    The units must tile [1, X] with no gap or overlap; input order does
    not matter.  Units scanned without global bases are rescanned with
    them when a table is supplied, making every report exact; without a
    table their extrema stay unit-relative (flagged via extrema_exact)
    and thresholds cannot be resolved.  Accumulators and sample values
    are exact either way.
    """
    if not results:
        raise EngineError("nothing to merge")
    results = sorted(results, key=lambda r: r.unit.a)
    specs = results[0].unit.specs
    slugs = [spec_slug(s) for s in specs]
    for r in results:
        if tuple(spec_slug(s) for s in r.unit.specs) != tuple(slugs):
            raise EngineError("spec mismatch across work units")
    if results[0].unit.a != 1:
        raise EngineError(f"tiling must start at 1, got {results[0].unit.a}")
    for prev, cur in zip(results, results[1:]):
        if cur.unit.a != prev.unit.b + 1:
            raise EngineError(f"tiling gap or overlap at [{prev.unit.b}, {cur.unit.a}]")
    x_end = results[-1].unit.b
    thresholds_by_slug = dict(thresholds or {})

    # global bases before each unit, from the canonical segment stream
    bases_before = []
    acc = {
        slug: (0, 0) if is_integer_spec(spec) else ((0.0, 0.0), (0.0, 0.0))
        for spec, slug in zip(specs, slugs)
    }
    for r in results:
        bases_before.append(dict(acc))
        for slug in slugs:
            p, q = acc[slug]
            if isinstance(p, tuple):
                tp, tn = r.seg_totals[slug]
                for t in tp.tolist():
                    p = dd_add_d(p, t)
                for t in tn.tolist():
                    q = dd_add_d(q, t)
            else:
                dp, dn = r.deltas[slug]
                p, q = p + dp, q + dn
            acc[slug] = (p, q)

    if any(not r.resolved for r in results) and table is not None:
        results = [
            r
            if r.resolved
            else sieve_interval(r.unit, table, bases=base, thresholds=thresholds_by_slug)
            for r, base in zip(results, bases_before)
        ]
    all_resolved = all(r.resolved for r in results)

    keep = None
    if isinstance(results[0].unit.sample_stride, str):
        keep = set(sample_grid(x_end).tolist())
        for r in results:
            keep.update(r.unit.extra_sample_x)
        keep.add(x_end)

    rows = {slug: [] for slug in slugs}
    extrema = {slug: _fresh_extrema() for slug in slugs}
    for spec, slug in zip(specs, slugs):
        integer = is_integer_spec(spec)
        rule = NormalizationRule.for_spec(spec)
        for r, base in zip(results, bases_before):
            if r.resolved:
                for x, pos, neg, norm, _, _ in r.samples[slug]:
                    if keep is None or x in keep:
                        rows[slug].append((x, math.log(x), pos, neg, norm))
                _combine_extrema(extrema[slug], r.extrema[slug])
                continue
            bp, bn = base[slug]
            if integer:
                for x, pos, neg, _, _, _ in r.samples[slug]:
                    if keep is not None and x not in keep:
                        continue
                    gp, gn = bp + pos, bn + neg
                    norm_g = float(
                        rule.apply(np.array([float(x)]), None, np.array([float(gp - gn)]))[0]
                    )
                    rows[slug].append((x, math.log(x), gp, gn, norm_g))
                continue
            # canonical rebase: walk the unit's segment stream so every
            # emitted value repeats the resolved scan's rounding exactly
            tp, tn = (arr.tolist() for arr in r.seg_totals[slug])
            head = (-(r.unit.a - 1)) % SEGMENT
            p, q = bp, bn
            j = 0
            for x, _, _, _, rp, rn in r.samples[slug]:
                if keep is not None and x not in keep:
                    continue
                off = x - r.unit.a
                if head and off < head:
                    k = 0
                else:
                    k = (1 if head else 0) + (off - head) // SEGMENT
                while j < k:
                    p = dd_add_d(p, tp[j])
                    q = dd_add_d(q, tn[j])
                    j += 1
                gp = dd_add_d(p, rp)
                gn = dd_add_d(q, rn)
                vf = (p[0] + (rp + p[1])) - (q[0] + (rn + q[1]))
                norm_g = float(
                    rule.apply(np.array([float(x)]), None, np.array([vf]))[0]
                )
                rows[slug].append((x, math.log(x), gp, gn, norm_g))

    crossings = {slug: {} for slug in slugs}
    for slug, thrs in thresholds_by_slug.items():
        for t in thrs:
            crossings.setdefault(slug, {})[t.tid] = []
    for r in results:
        if not r.resolved:
            continue
        for slug, tid, x, v in r.crossing_candidates:
            crossings[slug].setdefault(tid, []).append((x, v))
    for slug in crossings:
        for tid in crossings[slug]:
            crossings[slug][tid].sort()

    return SampleSeries(
        x_end=x_end,
        specs=specs,
        rows=rows,
        final=dict(acc),
        extrema=extrema,
        crossings=crossings,
        extrema_exact=all_resolved,
        crossings_resolved=all_resolved or not thresholds_by_slug,
    )


# ---------------------------------------------------------------------------
# sequential driver with checkpoint / resume


def _fmt_exact(v):
    if isinstance(v, tuple):
        return dd_to_decimal_string(v)
    return str(v)


def _parse_exact(s, integer):
    return int(s) if integer else dd_from_decimal_string(s)


def _ckpt_path(out_dir, slug):
    return os.path.join(out_dir, f"{slug}.ckpt")


def _write_checkpoint(out_dir, slug, payload):
    path = _ckpt_path(out_dir, slug)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        for key, val in payload.items():
            fh.write(f"{key}={val}\n")
    os.replace(tmp, path)


def _read_checkpoint(out_dir, slug):
    path = _ckpt_path(out_dir, slug)
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise EngineError(f"cannot resume: {path}: {exc}") from exc
    payload = {}
    for line in lines:
        if not line.strip():
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise EngineError(f"{path}: malformed line {line!r}")
        payload[key] = val
    return payload


class _RunFiles:
    """Byte-accurate sample/crossing CSV pair for one spec."""

    def __init__(self, out_dir, slug, fresh, offsets=None):
        self.samples_path = os.path.join(out_dir, f"{slug}.samples.csv")
        self.crossings_path = os.path.join(out_dir, f"{slug}.crossings.csv")
        if fresh:
            self.samples = open(self.samples_path, "wb")
            self.samples.write(_SAMPLES_HEADER)
            self.crossings = open(self.crossings_path, "wb")
            self.crossings.write(_CROSSINGS_HEADER)
        else:
            s_off, c_off = offsets
            self.samples = open(self.samples_path, "r+b")
            self.samples.truncate(s_off)
            self.samples.seek(s_off)
            self.crossings = open(self.crossings_path, "r+b")
            self.crossings.truncate(c_off)
            self.crossings.seek(c_off)

    def offsets(self):
        self.samples.flush()
        self.crossings.flush()
        return self.samples.tell(), self.crossings.tell()

    def close(self):
        self.samples.close()
        self.crossings.close()


def _reload_rows(files, spec):
    """Rebuild in-memory sample/crossing rows from the truncated CSVs."""
    integer = is_integer_spec(spec)
    rows = []
    with open(files.samples_path, "rb") as fh:
        fh.readline()
        for raw in fh:
            x_s, u_s, p_s, n_s, norm_s = raw.decode().rstrip("\n").split(",")
            rows.append(
                (
                    int(x_s),
                    float(u_s),
                    _parse_exact(p_s, integer),
                    _parse_exact(n_s, integer),
                    float(norm_s),
                )
            )
    crossings = []
    with open(files.crossings_path, "rb") as fh:
        fh.readline()
        for raw in fh:
            tid, x_s, v_s = raw.decode().rstrip("\n").split(",")
            crossings.append((tid, int(x_s), int(v_s) if integer else float(v_s)))
    return rows, crossings


def run(
    specs,
    x_end,
    table,
    *,
    out_dir=None,
    block_size=DEFAULT_BLOCK_SIZE,
    thresholds=None,
    sample_stride="u-grid",
    extra_sample_x=(),
    resume=False,
    stop_after_blocks=None,
):
    """Sequential checkpointed scan of [1, x_end] for several sums.

    Blocks are processed in order; after each one the accumulators and
    CSV byte offsets are checkpointed (when out_dir is given), so an
    interrupted run resumed with resume=True reproduces the exact bytes
    of an uninterrupted one.  stop_after_blocks limits how many blocks
    this call processes (the test hook for interruption).

    With an integer sample_stride, samples land on multiples of the
    stride counted from x = 1, plus x_end itself.
    """
    specs = tuple(specs)
    x_end = int(x_end)
    if x_end < 1:
        raise ValueError("x_end must be >= 1")
    if block_size % SEGMENT:
        raise EngineError(f"block_size must be a multiple of {SEGMENT}")
    if resume and out_dir is None:
        raise EngineError("resume requires out_dir")
    thresholds_by_slug = dict(thresholds or {})
    slugs = [spec_slug(s) for s in specs]
    if len(set(slugs)) != len(slugs):
        raise ValueError("duplicate specs")

    if isinstance(sample_stride, str):
        if sample_stride != "u-grid":
            raise ValueError(f"unknown sample stride {sample_stride!r}")
        keep = set(sample_grid(x_end).tolist())
        keep.update(int(x) for x in extra_sample_x if 1 <= int(x) <= x_end)
        keep.add(x_end)
        sample_x = np.array(sorted(keep), dtype=np.int64)
    else:
        k = int(sample_stride)
        sample_x = np.arange(k, x_end + 1, k, dtype=np.int64)
        if sample_x.size == 0 or sample_x[-1] != x_end:
            sample_x = np.append(sample_x, x_end)

    n_blocks = (x_end + block_size - 1) // block_size
    acc = {}
    rows = {slug: [] for slug in slugs}
    cross = {slug: [] for slug in slugs}
    extrema = {slug: _fresh_extrema() for slug in slugs}
    files = {}
    start_block = 0

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)

    if resume:
        last_blocks = set()
        for spec, slug in zip(specs, slugs):
            ck = _read_checkpoint(out_dir, slug)
            _check_ckpt(ck, spec, x_end, table, block_size, sample_stride)
            integer = is_integer_spec(spec)
            acc[slug] = (
                _parse_exact(ck["pos"], integer),
                _parse_exact(ck["neg"], integer),
            )
            extrema[slug] = {
                "max": float(ck["max"]),
                "max_x": int(ck["max_x"]),
                "max_count": int(ck["max_count"]),
                "min": float(ck["min"]),
                "min_x": int(ck["min_x"]),
                "min_count": int(ck["min_count"]),
            }
            last_blocks.add(int(ck["last_block"]))
            files[slug] = _RunFiles(
                out_dir,
                slug,
                fresh=False,
                offsets=(int(ck["samples_bytes"]), int(ck["crossings_bytes"])),
            )
            rows[slug], cross[slug] = _reload_rows(files[slug], spec)
        if len(last_blocks) != 1:
            raise EngineError(f"checkpoints disagree on progress: {sorted(last_blocks)}")
        start_block = last_blocks.pop() + 1
    else:
        for spec, slug in zip(specs, slugs):
            acc[slug] = (0, 0) if is_integer_spec(spec) else ((0.0, 0.0), (0.0, 0.0))
            if out_dir is not None:
                files[slug] = _RunFiles(out_dir, slug, fresh=True)

    blocks_this_call = 0
    interrupted = False
    try:
        for blk in range(start_block, n_blocks):
            lo = 1 + blk * block_size
            hi = min(x_end, lo + block_size - 1)
            unit = WorkUnit(lo, hi, specs, block_size=block_size)
            states, _ = _scan_unit(unit, table, acc, thresholds_by_slug, sample_x)
            for spec, slug, st in zip(specs, slugs, states):
                acc[slug] = (st.pos, st.neg)
                _combine_extrema(extrema[slug], st.extrema)
                cross[slug].extend(st.crossings)
                fh = files.get(slug)
                for x, pos, neg, norm, _, _ in st.samples:
                    rows[slug].append((x, math.log(x), pos, neg, norm))
                    if fh is not None:
                        fh.samples.write(
                            f"{x},{math.log(x)!r},{_fmt_exact(pos)},"
                            f"{_fmt_exact(neg)},{norm!r}\n".encode()
                        )
                if fh is not None:
                    for tid, x, v in st.crossings:
                        fh.crossings.write(f"{tid},{x},{_fmt_exact(v) if not isinstance(v, float) else repr(v)}\n".encode())
                    s_off, c_off = fh.offsets()
                    _write_checkpoint(
                        out_dir,
                        slug,
                        _ckpt_payload(
                            spec, x_end, table, block_size, sample_stride, blk,
                            acc[slug], extrema[slug], s_off, c_off, cross[slug],
                        ),
                    )
            blocks_this_call += 1
            if stop_after_blocks is not None and blocks_this_call >= stop_after_blocks:
                interrupted = blk + 1 < n_blocks
                break
    finally:
        for fh in files.values():
            fh.close()

    crossings = {}
    for slug in slugs:
        per_tid = {}
        for thr in thresholds_by_slug.get(slug, ()):
            per_tid[thr.tid] = []
        for tid, x, v in cross[slug]:
            per_tid.setdefault(tid, []).append((x, v))
        for tid in per_tid:
            per_tid[tid].sort()
        crossings[slug] = per_tid

    series = SampleSeries(
        x_end=x_end,
        specs=specs,
        rows=rows,
        final=dict(acc),
        extrema=extrema,
        crossings=crossings,
    )
    paths = {
        slug: {
            "samples": files[slug].samples_path,
            "crossings": files[slug].crossings_path,
            "checkpoint": _ckpt_path(out_dir, slug),
        }
        for slug in files
    }
    return RunResult(
        series=series,
        paths=paths,
        blocks_done=(start_block + blocks_this_call),
        interrupted=interrupted,
    )


def _ckpt_payload(
    spec, x_end, table, block_size, sample_stride, blk, acc, ext, s_off, c_off, cross
):
    payload = {
        "version": CHECKPOINT_VERSION,
        "family": spec.label(),
        "alpha": repr(spec.alpha),
        "a": 1,
        "b": x_end,
        "last_block": blk,
        "pos": _fmt_exact(acc[0]),
        "neg": _fmt_exact(acc[1]),
        "table_fingerprint": table.fingerprint,
        "block_size": block_size,
        "sample_stride": sample_stride,
        "samples_bytes": s_off,
        "crossings_bytes": c_off,
        "max": repr(ext["max"]),
        "max_x": ext["max_x"],
        "max_count": ext["max_count"],
        "min": repr(ext["min"]),
        "min_x": ext["min_x"],
        "min_count": ext["min_count"],
    }
    counts = {}
    for tid, _, _ in cross:
        counts[tid] = counts.get(tid, 0) + 1
    for tid in sorted(counts):
        payload[f"violations_{tid}"] = counts[tid]
    return payload


def _check_ckpt(ck, spec, x_end, table, block_size, sample_stride):
    slug = spec_slug(spec)
    want = {
        "version": str(CHECKPOINT_VERSION),
        "family": spec.label(),
        "alpha": repr(spec.alpha),
        "a": "1",
        "b": str(x_end),
        "table_fingerprint": table.fingerprint,
        "block_size": str(block_size),
        "sample_stride": str(sample_stride),
    }
    for key, expect in want.items():
        got = ck.get(key)
        if got != expect:
            raise EngineError(
                f"checkpoint mismatch for {slug}: {key}={got!r}, expected {expect!r}"
            )


# ---------------------------------------------------------------------------
# crossing and divisibility front ends


def find_crossings(spec, threshold, x_end, table, *, x_start=1, block_size=DEFAULT_BLOCK_SIZE):
    """Every x in [x_start, x_end] where the running sum meets or
    violates the threshold(s), as (x, value) pairs.

    Integer families with rational sqrt(x) or linear bounds are decided
    in exact integer arithmetic; weighted families are screened in
    float64 and rechecked at higher precision, erring toward inclusion
    so no true crossing is dropped.  Pass one Threshold for a flat
    list, or a sequence for a dict keyed by threshold id.
    """
    single = isinstance(threshold, Threshold)
    thrs = (threshold,) if single else tuple(threshold)
    if x_start > 1:
        thrs = tuple(replace(t, x_start=max(t.x_start, x_start)) for t in thrs)
    slug = spec_slug(spec)
    res = run(
        (spec,),
        x_end,
        table,
        block_size=block_size,
        thresholds={slug: thrs},
    )
    found = res.series.crossings[slug]
    return found[thrs[0].tid] if single else found


@dataclass
class DivisibilityReport:
    """Outcome of one divisibility-proportion scan."""

    m: int
    x_end: int
    reversed_direction: bool
    x_start: int
    samples: list  # (x, count)
    violations: list  # (x, count)
    discovered_onset: int


def divisibility_proportion_run(m, x_end, table=None, *, x_start=None, sample_stride="u-grid", block_size=DEFAULT_BLOCK_SIZE):
    """Count n <= x with m | (n - Omega(n)) and compare m*count against x.

    The conjectured direction is count*m > x (proportion exceeds 1/m);
    for m = 4 it is reversed (proportion bounded above by 1/4, equality
    allowed), so there a violation means count*m > x strictly.  x_start
    defaults to the published onset when one exists, else 1; pass
    x_start=1 to rediscover an onset as (last violation) + 1.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if table is None:
        table = build_table(max(30, min(x_end, 1_000_000)), TableMode.OMEGA)
    spec = SumSpec(Family.DIV_COUNT, m=m)
    slug = spec_slug(spec)
    reversed_ = m in REVERSED_DIRECTION
    if x_start is None:
        x_start = PUBLISHED_ONSETS.get(m, 1)
    thr = Threshold(
        tid=f"prop{m}",
        side="upper" if reversed_ else "lower",
        kind="identity",
        coeff=Fraction(1, m),
        x_start=x_start,
    )
    res = run(
        (spec,),
        x_end,
        table,
        block_size=block_size,
        thresholds={slug: (thr,)},
        sample_stride=sample_stride,
    )
    violations = res.series.crossings[slug][thr.tid]
    if reversed_:
        # the upper mask flags count*m >= x; equality is allowed here
        violations = [(x, c) for x, c in violations if c * m > x]
    samples = [(x, pos - neg) for x, _, pos, neg, _ in res.series.rows[slug]]
    discovered = (violations[-1][0] + 1) if violations else x_start
    return DivisibilityReport(
        m=m,
        x_end=x_end,
        reversed_direction=reversed_,
        x_start=x_start,
        samples=samples,
        violations=violations,
        discovered_onset=discovered,
    )
