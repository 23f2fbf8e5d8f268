"""Interval factor-count computation backed by a base table.

For an interval [lo, hi] and a FactorTable of limit M, every n is reduced
as follows: powers of 2, 3, and 5 are stripped first; then primes in
(hi/M, sqrt(hi)] are divided out once each, descending (one division is
enough because the cofactor n/p drops below M); then primes in [7, hi/M]
are divided out fully, descending.  Whatever remains is either <= M and
resolved by one table lookup, or has no prime factor <= sqrt(hi) and is
therefore itself prime.

Three tracks are derived from the reduction:

  OMEGA          Omega(n)             (needs an OmegaValue table)
  PARITY_NMO     parity of n-Omega(n) (OmegaValue or ParityNMO table)
  PARITY_OMEGA   parity of omega(n)   (ParityOmega table only)

With hi <= M the prime phases are skipped entirely and the reduction is a
strip plus one gather.  M*M < hi is allowed (phase 1 goes empty and
phase 2 becomes full trial division) but is reported as a warning.
"""

import math
import warnings
from enum import Enum

import numpy as np

from .arith import is_prime, primes_up_to
from .table import TableMode

CHUNK = 1 << 22


class Track(Enum):
    OMEGA = "omega"
    PARITY_NMO = "parity_nmo"
    PARITY_OMEGA = "parity_omega"


# table modes able to serve each track
SERVING_MODES = {
    Track.OMEGA: (TableMode.OMEGA,),
    Track.PARITY_NMO: (TableMode.OMEGA, TableMode.PARITY_NMO),
    Track.PARITY_OMEGA: (TableMode.PARITY_OMEGA,),
}


class BlockSieve:
    """Shared-table interval sieve; validate=True adds per-step checks."""

    def __init__(self, table, validate=False):
        self.table = table
        self.validate = validate
        self._primes = np.empty(0, dtype=np.int64)
        self._warned_small_table = False

    def block_tracks(self, lo, hi, tracks):
        """Compute the requested tracks for n in [lo, hi] (inclusive).

        Returns {track: uint8 array of length hi-lo+1}.  All requested
        tracks must be servable by the table's mode, and they share one
        reduction pass.
        """
        tracks = list(tracks)
        for tr in tracks:
            if self.table.mode not in SERVING_MODES[tr]:
                raise ValueError(
                    f"table mode {self.table.mode.name} cannot serve track {tr.name}"
                )
        if not 1 <= lo <= hi:
            raise ValueError("need 1 <= lo <= hi")
        out = {tr: np.empty(hi - lo + 1, dtype=np.uint8) for tr in tracks}
        want_small = Track.PARITY_OMEGA in tracks
        for c_lo in range(lo, hi + 1, CHUNK):
            c_hi = min(hi, c_lo + CHUNK - 1)
            pos = c_lo - lo
            chunk = self._reduce_chunk(c_lo, c_hi, want_small)
            for tr in tracks:
                out[tr][pos : pos + (c_hi - c_lo + 1)] = self._fold(tr, c_lo, chunk)
        return out

    def _phase_primes(self, up_to):
        if self._primes.size == 0 or (self._primes.size and self._primes[-1] < up_to):
            ps = primes_up_to(max(up_to, 11)).astype(np.int64)
            self._primes = ps[ps >= 7]
        return self._primes[self._primes <= up_to]

    def _reduce_chunk(self, lo, hi, want_small):
        size = hi - lo + 1
        cur = np.arange(lo, hi + 1, dtype=np.int64)
        removed = np.zeros(size, dtype=np.uint8)
        small = np.zeros(size, dtype=np.uint8) if want_small else None
        for p in (2, 3, 5):
            idx = np.nonzero(cur % p == 0)[0]
            if want_small and idx.size:
                small[idx] += 1
            while idx.size:
                cur[idx] //= p
                removed[idx] += 1
                idx = idx[cur[idx] % p == 0]
        m = self.table.limit
        if hi > m:
            if m * m < hi and not self._warned_small_table:
                warnings.warn(
                    f"table limit {m} below sqrt({hi}); falling back to full "
                    "trial division (correct but slow)",
                    stacklevel=3,
                )
                self._warned_small_table = True
            root = math.isqrt(hi)
            split = hi // m
            ps = self._phase_primes(root)[::-1]  # descending
            for p in ps[ps > split].tolist():
                idx = self._multiples(p, lo, size)
                if idx.size == 0:
                    continue
                if self.validate and (cur[idx] % p).any():
                    raise AssertionError(f"phase 1 stride not divisible by {p}")
                cur[idx] //= p
                removed[idx] += 1
                if want_small:
                    # p counts as fully removed only when none of it remains;
                    # otherwise the residual cofactor carries it to the lookup
                    small[idx] += cur[idx] % p != 0
            for p in ps[(ps >= 7) & (ps <= split)].tolist():
                idx = self._multiples(p, lo, size)
                if idx.size == 0:
                    continue
                if self.validate and (cur[idx] % p).any():
                    raise AssertionError(f"phase 2 stride not divisible by {p}")
                if want_small:
                    small[idx] += 1
                while idx.size:
                    cur[idx] //= p
                    removed[idx] += 1
                    idx = idx[cur[idx] % p == 0]
        over = cur > m
        if self.validate:
            for q in cur[over].tolist():
                if not is_prime(q):
                    raise AssertionError(f"residual cofactor {q} not prime")
        return cur, removed, small, over

    @staticmethod
    def _multiples(p, lo, size):
        start = -lo % p
        return np.arange(start, size, p, dtype=np.int64)

    def _fold(self, track, lo, chunk):
        cur, removed, small, over = chunk
        safe = np.where(over, 1, cur)
        tbl = self.table.gather(safe)
        if track is Track.OMEGA:
            return removed + np.where(over, np.uint8(1), tbl)
        if track is Track.PARITY_NMO:
            if self.table.mode is TableMode.OMEGA:
                omega_cur = np.where(over, np.uint8(1), tbl)
            else:
                # entries are parity(c - Omega(c)) with c odd, so
                # parity(Omega(c)) = 1 xor entry
                omega_cur = np.where(over, np.uint8(1), 1 ^ tbl)
            n_parity = (np.arange(lo, lo + cur.size, dtype=np.int64) & 1).astype(np.uint8)
            return (n_parity + removed + omega_cur) & 1
        # PARITY_OMEGA
        omega_cur = np.where(over, np.uint8(1), tbl)
        return (small + omega_cur) & 1
