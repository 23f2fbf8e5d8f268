"""Zeta-zero ordinate tables: loading, truncation, spot validation.

The file format is plain text, one positive decimal ordinate per line in
ascending order, with `#` comments permitted.  Ordinates must carry at
least 9 decimal places; coarser tables are refused because downstream
phase computations (gamma * u mod 2pi at u ~ 65) would lose too much.

A table of the first 5000 ordinates ships with the package; see
builtin_zeros_path().
"""

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .dd import parse_dd_array
from .zeta import critical_line_values

MIN_DECIMALS = 9

_LINE_RE = re.compile(r"^\d+\.(\d+)$")


class ZeroTableError(ValueError):
    """Malformed or insufficiently precise zeros file."""


@dataclass(frozen=True)
class ZeroSet:
    """Immutable ascending table of zeta-zero ordinates.

    gammas holds the float64 values; gammas_lo the double-double low
    words, so gammas[i] + gammas_lo[i] reproduces the printed ordinate
    exactly.  Indexing via gamma(n) is 1-based to match the usual
    numbering of the zeros.
    """

    gammas: np.ndarray
    gammas_lo: np.ndarray
    stated_precision: int
    source: str

    def __len__(self):
        return self.gammas.size

    @property
    def count(self):
        return self.gammas.size

    def gamma(self, n):
        if not 1 <= n <= self.gammas.size:
            raise IndexError(f"zero index {n} out of range 1..{self.gammas.size}")
        return float(self.gammas[n - 1])

    def gamma_dd(self, n):
        if not 1 <= n <= self.gammas.size:
            raise IndexError(f"zero index {n} out of range 1..{self.gammas.size}")
        return float(self.gammas[n - 1]), float(self.gammas_lo[n - 1])

    def count_upto(self, t):
        """Number of ordinates with gamma <= t."""
        return int(np.searchsorted(self.gammas, t, side="right"))

    def truncate(self, t):
        """New ZeroSet keeping ordinates with gamma <= t."""
        k = self.count_upto(t)
        return ZeroSet(
            gammas=self.gammas[:k],
            gammas_lo=self.gammas_lo[:k],
            stated_precision=self.stated_precision,
            source=self.source,
        )

    def validate(self, indices=None, tol=1e-8):
        """Check |zeta(1/2 + i*gamma_n)| < tol at the given 1-based indices.

        Defaults to a cheap spread: the first three zeros, one near the
        middle, and the last.  Returns the max residual magnitude.
        """
        if self.gammas.size == 0:
            return 0.0
        if indices is None:
            n = self.gammas.size
            indices = sorted({1, min(2, n), min(3, n), (n + 1) // 2, n})
        worst = 0.0
        for idx in indices:
            g = self.gamma(idx)
            val = critical_line_values(g, ks=(1,), want_prime=False)[1]
            mag = float(abs(val))
            if mag > tol:
                raise ZeroTableError(
                    f"ordinate #{idx} = {g} is not a zero: |zeta(1/2+i*gamma)| = {mag:.3e}"
                )
            worst = max(worst, mag)
        return worst


def builtin_zeros_path():
    """Path to the packaged table of the first 5000 zero ordinates."""
    return str(resources.files("oscillax").joinpath("data/zeros5000.txt"))


def load_zeros(path):
    """Parse a zeros file into a ZeroSet.

    Raises ZeroTableError on any malformed line, on ordinates with fewer
    than MIN_DECIMALS decimal places, and on non-ascending order.
    """
    tokens = []
    min_decimals = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _LINE_RE.match(line)
            if m is None:
                raise ZeroTableError(f"{path}:{lineno}: not a decimal ordinate: {line!r}")
            decimals = len(m.group(1))
            if decimals < MIN_DECIMALS:
                raise ZeroTableError(
                    f"{path}:{lineno}: ordinate has {decimals} decimal places; "
                    f"at least {MIN_DECIMALS} are required"
                )
            if min_decimals is None or decimals < min_decimals:
                min_decimals = decimals
            tokens.append(line)
    if not tokens:
        raise ZeroTableError(f"{path}: no ordinates found")
    hi, lo = parse_dd_array(tokens)
    if not np.all(np.diff(hi) > 0):
        bad = int(np.flatnonzero(np.diff(hi) <= 0)[0]) + 2
        raise ZeroTableError(f"{path}: ordinates not strictly ascending near entry {bad}")
    return ZeroSet(gammas=hi, gammas_lo=lo, stated_precision=min_decimals, source=str(path))
