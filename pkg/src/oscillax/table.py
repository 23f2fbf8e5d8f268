"""Base factor tables over integers coprime to 30.

A table stores, for every n <= limit with gcd(n, 30) = 1, one of:

  PARITY_NMO    parity of n - Omega(n)      (2 bits/entry on disk)
  PARITY_OMEGA  parity of omega(n)          (2 bits/entry on disk)
  OMEGA         Omega(n) itself             (4 bits/entry on disk)

Eight residues per block of 30 give index 8*(n//30) + rank(n mod 30).
The build bootstraps by extension: once [1, y] is known, (y, y2] with
y2 <= 7y is sieved with primes 7..sqrt(y2); dividing one sieving prime out
of n lands the cofactor back inside [1, y], so a single table lookup
finishes the entry.  Entries never hit by any prime are prime themselves.

In memory entries live in a plain uint8 array (fast gathers); the packed
2-bit/4-bit layout is only the on-disk format.
"""

import hashlib
import math
import os
import struct
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .arith import primes_up_to

MAGIC = b"OXT1"
VERSION = 1

RESIDUES = np.array([1, 7, 11, 13, 17, 19, 23, 29], dtype=np.int64)
# rank of each residue class mod 30 (-1 where not coprime)
RANK30 = np.full(30, -1, dtype=np.int64)
for _i, _r in enumerate(RESIDUES):
    RANK30[_r] = _i

UNKNOWN = np.uint8(255)


class TableMode(IntEnum):
    PARITY_NMO = 1
    PARITY_OMEGA = 2
    OMEGA = 3


def entry_count(limit):
    """Number of stored entries for a given limit: whole wheel turns."""
    return 8 * ((limit + 29) // 30)


def index_of(n):
    """Table index for n (vectorized); caller guarantees gcd(n, 30) == 1."""
    return (n // 30) * 8 + RANK30[n % 30]


@dataclass
class FactorTable:
    mode: TableMode
    limit: int
    vals: np.ndarray = field(repr=False)

    _fingerprint: str | None = field(default=None, repr=False)

    @property
    def fingerprint(self):
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(self._header_bytes())
            h.update(_pack(self.vals, self.mode).tobytes())
            self._fingerprint = h.hexdigest()[:32]
        return self._fingerprint

    def _header_bytes(self):
        return MAGIC + struct.pack("<HHQ", VERSION, int(self.mode), self.limit)

    def gather(self, n):
        """Entry values for an int64 array of n coprime to 30, n <= limit."""
        return self.vals[(n // 30) * 8 + RANK30[n % 30]]

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self._header_bytes())
            fh.write(_pack(self.vals, self.mode).tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            header = fh.read(16)
            if len(header) != 16 or header[:4] != MAGIC:
                raise ValueError(f"{path}: not a factor table file")
            version, mode, limit = struct.unpack("<HHQ", header[4:])
            if version != VERSION:
                raise ValueError(f"{path}: unsupported version {version}")
            payload = np.frombuffer(fh.read(), dtype=np.uint8)
        mode = TableMode(mode)
        n = entry_count(limit)
        expected = _packed_size(n, mode)
        if payload.size != expected:
            raise ValueError(f"{path}: payload size {payload.size}, expected {expected}")
        return cls(mode=mode, limit=limit, vals=_unpack(payload, n, mode))

    @classmethod
    def matches_file(cls, path, mode, limit):
        """True if path holds a table with this mode/limit (header and
        size check only; no payload read)."""
        try:
            with open(path, "rb") as fh:
                header = fh.read(16)
            size = os.path.getsize(path)
        except OSError:
            return False
        if len(header) != 16 or header[:4] != MAGIC:
            return False
        version, fmode, flimit = struct.unpack("<HHQ", header[4:])
        return (
            version == VERSION
            and fmode == int(mode)
            and flimit == limit
            and size == 16 + _packed_size(entry_count(limit), TableMode(fmode))
        )


def _packed_size(n_entries, mode):
    if mode is TableMode.OMEGA:
        return (n_entries + 1) // 2
    return (n_entries + 3) // 4


def _pack(vals, mode):
    if mode is TableMode.OMEGA:
        if vals.max(initial=0) > 15:
            raise ValueError("Omega value exceeds 4-bit packing")
        pad = (-vals.size) % 2
        v = np.concatenate([vals, np.zeros(pad, dtype=np.uint8)]) if pad else vals
        return v[0::2] | (v[1::2] << 4)
    if vals.max(initial=0) > 1:
        raise ValueError("parity value exceeds 1")
    pad = (-vals.size) % 4
    v = np.concatenate([vals, np.zeros(pad, dtype=np.uint8)]) if pad else vals
    return v[0::4] | (v[1::4] << 2) | (v[2::4] << 4) | (v[3::4] << 6)


def _unpack(payload, n_entries, mode):
    if mode is TableMode.OMEGA:
        out = np.empty(payload.size * 2, dtype=np.uint8)
        out[0::2] = payload & 0x0F
        out[1::2] = payload >> 4
        return out[:n_entries]
    out = np.empty(payload.size * 4, dtype=np.uint8)
    out[0::4] = payload & 3
    out[1::4] = (payload >> 2) & 3
    out[2::4] = (payload >> 4) & 3
    out[3::4] = (payload >> 6) & 3
    return out[:n_entries]


# seed: n in {1,7,11,13,17,19,23,29}; all prime except n=1
_SEED = {
    TableMode.OMEGA: np.array([0, 1, 1, 1, 1, 1, 1, 1], dtype=np.uint8),
    # parity of n - Omega(n): 1-0 odd; p-1 even
    TableMode.PARITY_NMO: np.array([1, 0, 0, 0, 0, 0, 0, 0], dtype=np.uint8),
    TableMode.PARITY_OMEGA: np.array([0, 1, 1, 1, 1, 1, 1, 1], dtype=np.uint8),
}


def build_table(limit, mode, growth=2.0):
    """Build a table for n <= limit by bootstrapped extension.

    growth controls the extension schedule (each step multiplies the known
    range by at most this factor); any value in (1, 7] yields the identical
    payload since cofactors must stay inside the known range (n/p <= y needs
    y2 <= 7y for p >= 7).
    """
    if limit < 30:
        raise ValueError("limit must be >= 30")
    if not 1.0 < growth <= 7.0:
        raise ValueError("growth must be in (1, 7]")
    mode = TableMode(mode)
    # cover whole wheel turns: values are filled through the padded top
    padded = 30 * ((limit + 29) // 30)
    vals = np.full(entry_count(limit), UNKNOWN, dtype=np.uint8)
    vals[:8] = _SEED[mode]
    sieve_primes = primes_up_to(math.isqrt(padded))
    sieve_primes = sieve_primes[sieve_primes >= 7]
    y = 30
    while y < padded:
        y2 = min(padded, max(y + 30, int(y * growth)))
        _extend(vals, y, y2, mode, sieve_primes)
        y = y2
    if vals.max() == UNKNOWN:
        raise AssertionError("build left unknown entries")
    if mode is TableMode.OMEGA and vals.max() > 15:
        raise AssertionError("Omega exceeds 4 bits; limit too large for packing")
    return FactorTable(mode=mode, limit=limit, vals=vals)


def _extend(vals, y, y2, mode, sieve_primes):
    """Fill entries for n in (y, y2], all of [1, y] being known."""
    hi_idx = entry_count(y2)
    lo_idx = entry_count(y)
    ps = sieve_primes[sieve_primes <= math.isqrt(y2)]
    for p in ps.tolist():
        m_lo = y // p + 1
        m_hi = y2 // p
        if m_hi > y:
            raise AssertionError("extension step too wide: cofactor outside table")
        if m_lo > m_hi:
            continue
        for r_i in range(8):
            r = int(RESIDUES[r_i])
            t_lo = (m_lo - r + 29) // 30
            t_hi = (m_hi - r) // 30
            if t_lo > t_hi:
                continue
            t = np.arange(t_lo, t_hi + 1, dtype=np.int64)
            m_idx = 8 * t + r_i
            pr = p * r
            n_idx = 8 * (p * t + pr // 30) + RANK30[pr % 30]
            old = vals[m_idx]
            if mode is TableMode.OMEGA:
                new = old + 1
            elif mode is TableMode.PARITY_NMO:
                new = 1 - old
            else:  # PARITY_OMEGA: flips unless p still divides the cofactor
                m_mod_p = (30 * t + r) % p
                new = old ^ (m_mod_p != 0).astype(np.uint8)
            vals[n_idx] = new
    # untouched entries in (y, y2] are prime
    seg = vals[lo_idx:hi_idx]
    unhit = seg == UNKNOWN
    if mode is TableMode.OMEGA:
        seg[unhit] = 1
    elif mode is TableMode.PARITY_NMO:
        seg[unhit] = 0  # p - 1 is even
    else:
        seg[unhit] = 1
