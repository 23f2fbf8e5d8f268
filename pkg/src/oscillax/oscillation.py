"""Admissible kernels and conditional oscillation-bound reports.

Assuming the supplied zero ordinates are N-independent up to height T,
the Anderson-Stark machinery converts residue magnitudes into two-sided
excursion bounds for the normalized sums:

    center +- 2 * sum over gamma of (N/(N+1)) * k_T(gamma) * |Res(i gamma)|

Nothing here proves independence; every report is conditional on the
assumption object handed in, and says so.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import residues
from .arith import Family
from .dd import dd_add_d
from .residues import CenterLine

KERNEL_KINDS = ("fejer", "jp")

# default uniform independence caps used when the caller states none
DEFAULT_N = {Family.PARITY_LIOUVILLE: 3100, Family.OMEGA_SIGN: 3950}

CONDITIONAL_NOTE = "conditional on the supplied independence assumption"


@dataclass(frozen=True)
class Kernel:
    """Even, nonnegative weight supported on [-T, T] with k(0) = 1."""

    kind: str
    T: float

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kernel kind must be one of {KERNEL_KINDS}")
        if not self.T > 0:
            raise ValueError("kernel support T must be positive")

    def weight(self, x):
        ax = abs(float(x))
        if ax >= self.T:
            return 0.0
        r = ax / self.T
        if self.kind == "fejer":
            return 1.0 - r
        return (1.0 - r) * math.cos(math.pi * r) + math.sin(math.pi * r) / math.pi

    def weights(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        r = np.abs(xs) / self.T
        if self.kind == "fejer":
            w = 1.0 - r
        else:
            w = (1.0 - r) * np.cos(np.pi * r) + np.sin(np.pi * r) / np.pi
        return np.where(r < 1.0, w, 0.0)


def kernel_value(kernel, x):
    """Weight k_T(x) of an admissible kernel; 0 outside [-T, T]."""
    return kernel.weight(x)


@dataclass(frozen=True)
class IndependenceAssumption:
    """A zero set Gamma' assumed N_gamma-independent up to height T.

    gammas are ascending ordinates; n_values the per-zero caps (one per
    ordinate).  The label records where the set came from.
    """

    gammas: tuple
    n_values: tuple
    T: float
    label: str = ""

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        object.__setattr__(self, "gammas", gammas)
        ns = self.n_values
        if isinstance(ns, int):
            ns = (ns,) * len(gammas)
        object.__setattr__(self, "n_values", tuple(int(n) for n in ns))
        if len(self.n_values) != len(gammas):
            raise ValueError("need one N per ordinate")
        if any(n < 1 for n in self.n_values):
            raise ValueError("independence caps must be positive")
        if any(b <= a for a, b in zip(gammas, gammas[1:])):
            raise ValueError("ordinates must be strictly ascending")
        if gammas and (gammas[0] <= 0 or gammas[-1] > self.T):
            raise ValueError("ordinates must lie in (0, T]")

    @classmethod
    def uniform(cls, gammas, n, T, label=""):
        return cls(tuple(gammas), (int(n),) * len(tuple(gammas)), float(T), label)

    @property
    def uniform_n(self):
        """The common cap when all N_gamma agree, else None."""
        if self.n_values and len(set(self.n_values)) == 1:
            return self.n_values[0]
        return None


def assumption_from_file(path, zeros, *, n, t=None, label=None):
    """Read Gamma' from a text file of 1-based zero indices or ordinates.

    Plain integers select zeros by index; entries with a decimal point
    are ordinates and must match a loaded zero to within 1e-6.
    """
    entries = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                entries.append(line)
    if not entries:
        raise ValueError(f"{path}: no entries")
    gammas = []
    for ent in entries:
        if "." in ent or "e" in ent.lower():
            g = float(ent)
            i = int(np.searchsorted(zeros.gammas, g))
            best = min(
                (abs(zeros.gammas[j] - g), j)
                for j in (max(i - 1, 0), min(i, len(zeros) - 1))
            )[1]
            if abs(zeros.gammas[best] - g) > 1e-6:
                raise ValueError(f"{path}: {ent} matches no loaded zero ordinate")
            gammas.append(float(zeros.gammas[best]))
        else:
            gammas.append(zeros.gamma(int(ent)))
    gammas = sorted(set(gammas))
    t = float(t) if t is not None else gammas[-1]
    return IndependenceAssumption.uniform(
        gammas, n, t, label or os.path.basename(path)
    )


@dataclass(frozen=True)
class BoundTerm:
    """One zero's contribution to the oscillation amplitude."""

    gamma: float
    magnitude: float  # |Res| at s = i*gamma
    weight: float  # k_T(gamma)
    n_factor: float  # N/(N+1)
    contribution: float  # 2 * n_factor * weight * magnitude


@dataclass
class BoundReport:
    """Two-sided excursion bounds about the center, plus the per-term
    breakdown.  Bounds are conditional on `assumption`; see `note`."""

    family: Family
    alpha: float
    kernel: Kernel
    assumption: IndependenceAssumption
    center: float
    amplitude: float
    ingham_amplitude: float  # the N -> infinity ceiling of the same sum
    terms: list
    center_line: CenterLine = None
    note: str = CONDITIONAL_NOTE

    @property
    def liminf_bound(self):
        return self.center - self.amplitude

    @property
    def limsup_bound(self):
        return self.center + self.amplitude

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("gamma,residue_magnitude,kernel_weight,contribution\n")
            for t in self.terms:
                fh.write(
                    f"{t.gamma!r},{t.magnitude!r},{t.weight!r},{t.contribution!r}\n"
                )
            fh.write("# summary\n")
            fh.write(f"# family={self.family.value}\n")
            fh.write(f"# alpha={self.alpha!r}\n")
            fh.write(f"# kernel={self.kernel.kind},T={self.kernel.T!r}\n")
            fh.write(f"# zeros={len(self.terms)}\n")
            ns = self.assumption.uniform_n
            fh.write(f"# N={'per-zero' if ns is None else ns}\n")
            if self.center_line is not None:
                fh.write(
                    f"# center_line=({self.center_line.slope!r})*u"
                    f"+({self.center_line.intercept!r})\n"
                )
            fh.write(f"# center={self.center!r}\n")
            fh.write(f"# amplitude={self.amplitude!r}\n")
            fh.write(f"# liminf_bound={self.liminf_bound!r}\n")
            fh.write(f"# limsup_bound={self.limsup_bound!r}\n")
            fh.write(f"# {self.note}\n")


def anderson_stark_bounds(family, alpha, assumption, kernel):
    """Conditional liminf/limsup bounds for the normalized sum.

    The center is the transform's residue at the origin; each ordinate
    contributes 2 * (N/(N+1)) * k_T(gamma) * |Res(i gamma)|.  Terms are
    accumulated largest-first in double-double so the last digit does
    not depend on dict or file ordering.
    """
    if kernel.T > assumption.T:
        raise ValueError(
            "kernel support exceeds the assumed independence height"
        )
    origin = residues.residue_at_origin(family, alpha)
    center_line = None
    if isinstance(origin, CenterLine):
        center_line = origin
        center = origin.intercept
    else:
        center = float(origin)

    terms = []
    for g, n in zip(assumption.gammas, assumption.n_values):
        w = kernel.weight(g)
        mag = residues.residue_at_ordinate(family, alpha, g).magnitude
        nf = n / (n + 1)
        terms.append(BoundTerm(g, mag, w, nf, 2.0 * nf * w * mag))
    terms.sort(key=lambda t: (-t.contribution, t.gamma))

    amp = (0.0, 0.0)
    raw = (0.0, 0.0)
    for t in terms:
        amp = dd_add_d(amp, t.contribution)
        raw = dd_add_d(raw, 2.0 * t.weight * t.magnitude)
    amplitude = amp[0] + amp[1]
    n_uni = assumption.uniform_n
    if n_uni is not None:
        ingham = amplitude / (n_uni / (n_uni + 1))
    else:
        ingham = raw[0] + raw[1]

    return BoundReport(
        family=family,
        alpha=float(alpha),
        kernel=kernel,
        assumption=assumption,
        center=center,
        amplitude=amplitude,
        ingham_amplitude=ingham,
        terms=terms,
        center_line=center_line,
    )


def _greedy_scores_parity(alpha, cand, kernel):
    hyp = np.hypot(0.5 - alpha, cand)
    return np.array(
        [abs(residues.parity_kernel(g)) for g in cand.tolist()]
    ) * kernel.weights(cand) / hyp


def _greedy_scores_omega(alpha, cand, kernel, count):
    """Exact scores only where cheap enclosures cannot already decide
    membership in the top `count`; the rest stay as midpoints that the
    final ranking never consults."""
    w = kernel.weights(cand)
    hyp = np.hypot(0.5 - alpha, cand)
    lo = np.empty(cand.size)
    hi = np.empty(cand.size)
    for i, g in enumerate(cand.tolist()):
        a, b = residues.omega_kernel_window(g)
        lo[i], hi[i] = a, b
    lo = lo * w / hyp
    hi = hi * w / hyp
    cutoff = np.sort(lo)[-count]
    scores = (lo + hi) / 2.0
    for i in np.flatnonzero(hi >= cutoff).tolist():
        scores[i] = (
            abs(residues.omega_kernel(float(cand[i]))) * w[i] / hyp[i]
        )
    # anything below the cutoff window is provably outside the top set
    scores[hi < cutoff] = -1.0
    return scores


def select_zeros_greedy(family, alpha, zeros, kernel, count, *, n=None, t=None, label=None):
    """The `count` ordinates with the largest k_T(gamma)*|Res| weight.

    Deterministic: score ties break toward the smaller ordinate.  The
    returned assumption uses a uniform cap (family default unless n is
    given) and height t (kernel support unless given).
    """
    t = float(t) if t is not None else kernel.T
    if n is None:
        n = DEFAULT_N[family]
    cand = zeros.gammas[zeros.gammas <= min(t, kernel.T)]
    if count > cand.size:
        raise ValueError(f"asked for {count} zeros, only {cand.size} available")
    if count == 0:
        return IndependenceAssumption.uniform((), n, t, label or "greedy-0")
    if family == Family.OMEGA_SIGN:
        scores = _greedy_scores_omega(alpha, cand, kernel, count)
    else:
        scores = _greedy_scores_parity(alpha, cand, kernel)
    order = np.lexsort((cand, -scores))[:count]
    picked = np.sort(cand[order])
    return IndependenceAssumption.uniform(
        picked.tolist(), n, t, label or f"greedy-{count}"
    )


@dataclass(frozen=True)
class ReferenceTarget:
    """Published excursion targets for a scaled sum, for dashboards."""

    lower_target: float
    upper_target: float
    amplitude: float = None


_REFERENCE_TARGETS = {
    0.0: ReferenceTarget(-0.019349, 3.32568),
    0.25: ReferenceTarget(1.63369, 4.97900),
    0.5: ReferenceTarget(-3.27438, 0.071048, amplitude=1.67271899),
    0.75: ReferenceTarget(-4.97900, -1.63369),
    1.0: ReferenceTarget(-3.32568, 0.019349),
}


def reference_targets(alpha):
    """Published liminf/limsup targets for the scaled parity-weighted
    sum at the five standard exponents."""
    try:
        return _REFERENCE_TARGETS[float(alpha)]
    except KeyError:
        raise ValueError(
            f"no published target at alpha={alpha}; have {sorted(_REFERENCE_TARGETS)}"
        ) from None
