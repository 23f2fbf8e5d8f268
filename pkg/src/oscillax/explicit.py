"""Truncated explicit-formula estimates of the normalized sums.

With the error term dropped, the normalized sum at x = e^u is
approximated by the transform's center plus the folded zero
oscillation:

    estimate(u) = center + 2 Re sum over 0 < gamma <= T of
                  Res(i gamma) * e^(i gamma u)

The estimate targets the series exactly as the engine normalizes it:
the bias stays in for the parity-weighted family (affine in u at
exponent 1/2) and is already subtracted for the omega-sign family, so
the two outputs are directly comparable.  Phases gamma*u are reduced
mod 2pi in double-double, keeping phase error ~1e-10 even at u ~ 64,
gamma ~ 5000.

This is a hunting instrument: truncation at T has no rigorous error
model, so crossings it reports are candidates for sieve confirmation,
not findings.  The last zero's contribution magnitude is surfaced as a
rough proxy for the truncation level.
"""

import math
from dataclasses import dataclass

import gmpy2
import numpy as np

from . import residues, zeta
from .arith import Family, SumSpec
from .dd import phase_mod_2pi
from .residues import CenterLine


class ExplicitFormulaError(ValueError):
    pass


@dataclass(frozen=True)
class ExplicitEstimateConfig:
    """One estimation job: which sum, truncation height, u-window."""

    spec: SumSpec
    t_height: float
    u_lo: float
    u_hi: float
    du: float = 1e-4
    refine_tol: float = 1e-6

    def __post_init__(self):
        if self.spec.family not in (Family.PARITY_LIOUVILLE, Family.OMEGA_SIGN):
            raise ExplicitFormulaError(
                f"no explicit-formula residues for family {self.spec.family}"
            )
        if not self.t_height > 0:
            raise ExplicitFormulaError("truncation height must be positive")
        if not self.u_lo < self.u_hi:
            raise ExplicitFormulaError("need u_lo < u_hi")
        if not self.du > 0:
            raise ExplicitFormulaError("grid step du must be positive")
        if not self.refine_tol > 0:
            raise ExplicitFormulaError("refine_tol must be positive")


@dataclass(frozen=True)
class EstimateCrossing:
    """A refined u where the estimate meets a threshold level."""

    threshold: float
    u_lo: float  # final bisection bracket
    u_hi: float
    u_star: float


@dataclass
class EstimateSeries:
    """Estimates on the u-grid, plus any refined threshold crossings."""

    config: ExplicitEstimateConfig
    us: np.ndarray
    values: np.ndarray
    zero_count: int
    tail_proxy: float  # |last zero's full contribution|, a truncation hint
    crossings: list = None
    evaluator: object = None  # cached per-zero residues, reused by refiners

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("u,estimate\n")
            for u, v in zip(self.us.tolist(), self.values.tolist()):
                fh.write(f"{u!r},{v!r}\n")

    def write_crossings_csv(self, path):
        with open(path, "w") as fh:
            fh.write("threshold,u_lo,u_hi,u_star\n")
            for c in self.crossings or ():
                fh.write(f"{c.threshold!r},{c.u_lo!r},{c.u_hi!r},{c.u_star!r}\n")


class _Evaluator:
    """Cached per-zero residues for one (spec, T, zeros) combination."""

    def __init__(self, spec, t_height, zeros):
        if t_height > float(zeros.gammas[-1]):
            raise ExplicitFormulaError(
                f"truncation height {t_height} exceeds the loaded zeros"
                f" (largest ordinate {float(zeros.gammas[-1])})"
            )
        k = zeros.count_upto(t_height)
        self.g_hi = zeros.gammas[:k].copy()
        self.g_lo = zeros.gammas_lo[:k].copy()
        self.count = k
        alpha = spec.alpha
        if spec.family == Family.PARITY_LIOUVILLE:
            kern = [residues.parity_kernel(g) for g in self.g_hi.tolist()]
        else:
            kern = [residues.omega_kernel(g) for g in self.g_hi.tolist()]
        res = np.array(kern) / (complex(0.5 - alpha, 0.0) + 1j * self.g_hi)
        self.re2 = 2.0 * res.real
        self.im2 = 2.0 * res.imag
        origin = residues.residue_at_origin(spec.family, spec.alpha)
        if spec.family == Family.OMEGA_SIGN:
            # the engine's normalization already removes this bias
            self.center_line = None
            self.center = 0.0
        elif isinstance(origin, CenterLine):
            # normalization removes the u-slope and keeps the intercept
            self.center_line = origin
            self.center = origin.intercept
        else:
            self.center_line = None
            self.center = float(origin)
        self.tail_proxy = (
            2.0 * abs(res[-1]) if k else 0.0
        )

    def at(self, u):
        """Estimate at a single u; exactly the vectorized grid math."""
        if self.count == 0:
            return self.center
        ph = phase_mod_2pi(self.g_hi, self.g_lo, float(u))
        osc = self.re2 * np.cos(ph) - self.im2 * np.sin(ph)
        return self.center + math.fsum(osc.tolist())


def estimate(config, zeros):
    """Evaluate the truncated estimate over the configured u-grid."""
    ev = _Evaluator(config.spec, config.t_height, zeros)
    n = int(round((config.u_hi - config.u_lo) / config.du))
    us = config.u_lo + config.du * np.arange(n + 1)
    if us[-1] < config.u_hi - 1e-15:
        us = np.append(us, config.u_hi)
    values = np.array([ev.at(u) for u in us.tolist()])
    return EstimateSeries(
        config=config,
        us=us,
        values=values,
        zero_count=ev.count,
        tail_proxy=ev.tail_proxy,
        crossings=[],
        evaluator=ev,
    )


def estimate_literal_parity(t_height, zeros, us):
    """Independent spelling of the exponent-0 parity estimate, built
    directly from zeta values instead of the residue helpers; the
    generic path must agree with this to 1e-12."""
    with gmpy2.context(precision=zeta.precision_bits()):
        z_half = zeta.zeta(gmpy2.mpfr(1) / 2)
        center = float(-(1 + gmpy2.sqrt(2)) / z_half)
    k = zeros.count_upto(t_height)
    coefs = []
    for i in range(1, k + 1):
        g = zeros.gamma(i)
        vals = zeta.critical_line_values(g, ks=(2,), want_prime=True)
        rho = vals["rho"]
        with gmpy2.context(precision=zeta.precision_bits()):
            two_pow = gmpy2.exp(gmpy2.log(gmpy2.mpfr(2)) * gmpy2.mpc(rho.real, -rho.imag))
            c = (1 + two_pow) * vals[2] / (rho * vals["prime"])
        coefs.append(complex(c))
    coefs = np.array(coefs)
    g_hi = zeros.gammas[:k]
    g_lo = zeros.gammas_lo[:k]
    out = []
    for u in np.asarray(us, dtype=np.float64).tolist():
        ph = phase_mod_2pi(g_hi, g_lo, u)
        osc = coefs.real * np.cos(ph) - coefs.imag * np.sin(ph)
        out.append(center - 2.0 * math.fsum(osc.tolist()))
    return np.array(out)


def find_estimate_crossings(config, thresholds, zeros, series=None):
    """Refine every grid sign change of (estimate - threshold).

    Each excursion contributes two crossings (entry and exit) when both
    flanks lie inside the window.  Bisection narrows the bracket to
    refine_tol in u; u_star is the bracket midpoint.
    """
    if series is None:
        series = estimate(config, zeros)
    ev = series.evaluator or _Evaluator(config.spec, config.t_height, zeros)
    hits = []
    for thr in thresholds:
        f = series.values - float(thr)
        sign_change = np.flatnonzero(f[:-1] * f[1:] < 0)
        for i in sign_change.tolist():
            a, b = float(series.us[i]), float(series.us[i + 1])
            fa = float(f[i])
            while b - a > config.refine_tol:
                mid = 0.5 * (a + b)
                fm = ev.at(mid) - float(thr)
                if fm == 0.0:
                    a = b = mid
                    break
                if (fm < 0) == (fa < 0):
                    a, fa = mid, fm
                else:
                    b = mid
            hits.append(
                EstimateCrossing(float(thr), a, b, 0.5 * (a + b))
            )
    hits.sort(key=lambda c: (c.threshold, c.u_star))
    series.crossings = hits
    return hits


@dataclass(frozen=True)
class ResidualStats:
    """Estimate-vs-sieve agreement over the overlapping u-range."""

    count: int
    mean_abs: float
    max_abs: float
    u_lo: float
    u_hi: float


def compare_to_sieve(series, sieved, *, spec=None):
    """Mean and max |estimate - sieved normalized value| on the sieve's
    sample grid, restricted to the series' u-window."""
    spec = spec or series.config.spec
    from .engine import spec_slug

    rows = sieved.rows[spec_slug(spec)]
    ev = series.evaluator
    if ev is None:
        raise ExplicitFormulaError("series carries no evaluator; use estimate()")
    picked = [
        (u, norm)
        for _, u, _, _, norm in rows
        if series.config.u_lo <= u <= series.config.u_hi
    ]
    if not picked:
        raise ExplicitFormulaError("no sieve samples fall inside the u-window")
    diffs = [abs(ev.at(u) - norm) for u, norm in picked]
    return ResidualStats(
        count=len(diffs),
        mean_abs=math.fsum(diffs) / len(diffs),
        max_abs=max(diffs),
        u_lo=picked[0][0],
        u_hi=picked[-1][0],
    )
