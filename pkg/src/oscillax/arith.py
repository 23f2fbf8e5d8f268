"""Arithmetic core: factorization oracle, multiplicative functions, sum specs.

Everything here is deliberately simple and independent of the sieve engine;
it is the reference implementation the fast paths are tested against.
Factorization is plain trial division, sums are literal term-by-term
accumulation.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import gmpy2
import numpy as np

ORACLE_LIMIT_DEFAULT = 10_000_000
ORACLE_PRECISION_BITS = 160  # ~48 decimal digits for alpha > 0 accumulation

# deterministic Miller-Rabin witness set, valid for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_VALID_BELOW = 3_317_044_064_679_887_385_961_981


def primes_up_to(limit):
    """All primes <= limit, ascending, as an int64 array (numpy sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_list(limit):
    return [int(p) for p in primes_up_to(limit)]


def factorize(n):
    """Trial-division factorization: list of (prime, exponent), ascending.

    Product of p**e reconstructs n.  Intentionally simple; meant as an
    oracle, not a fast path.
    """
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out = []
    m = n
    for p in _prime_list(max(1000, math.isqrt(n) + 1)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


def big_omega(n):
    """Omega(n): number of prime factors counted with multiplicity."""
    return sum(e for _, e in factorize(n))


def small_omega(n):
    """omega(n): number of distinct prime factors."""
    return len(factorize(n))


def liouville(n):
    """(-1)**Omega(n)."""
    return -1 if big_omega(n) & 1 else 1


def is_prime(n):
    """Deterministic Miller-Rabin (witness set valid below ~3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    if n >= _MR_VALID_BELOW:
        raise ValueError(f"{n} beyond deterministic witness range")
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a, n):
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    r = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                r = -r
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


def kronecker(d, n):
    """Kronecker symbol (d/n) for n >= 0, with d = 0 or 1 (mod 4).

    Completely multiplicative in n; equals the Legendre symbol at odd
    primes not dividing d.
    """
    if d % 4 not in (0, 1):
        raise ValueError(f"twist {d} must be 0 or 1 mod 4")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1 if d in (1, -1) else 0
    if d == 0:
        return 1 if n == 1 else 0
    r = 1
    while n % 2 == 0:
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            r = -r
        n //= 2
    return r * _jacobi(d % n, n)


class Family(str, Enum):
    """The supported weighted-sum families.

    Weight of n in the summand:
      LIOUVILLE          (-1)**Omega(n) / n**alpha
      OMEGA_SIGN         (-1)**omega(n) / n**alpha
      PARITY_LIOUVILLE   (-1)**(n - Omega(n)) / n**alpha
      TWO_OMEGA          (-2)**Omega(n)
      TWISTED            (-1)**(n - Omega(n)) * kronecker(d, n)
      DIV_COUNT          1 if m divides (n - Omega(n)) else 0
    """

    LIOUVILLE = "liouville"
    OMEGA_SIGN = "omega_sign"
    PARITY_LIOUVILLE = "parity_liouville"
    TWO_OMEGA = "two_omega"
    TWISTED = "twisted"
    DIV_COUNT = "div_count"


_ALPHA_FIXED_ZERO = {Family.TWO_OMEGA, Family.TWISTED, Family.DIV_COUNT}


@dataclass(frozen=True)
class SumSpec:
    """One weighted sum to evaluate: family + exponent + optional parameters."""

    family: Family
    alpha: float = 0.0
    d: int | None = None  # Kronecker twist (TWISTED only)
    m: int | None = None  # divisor (DIV_COUNT only)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.family in _ALPHA_FIXED_ZERO and self.alpha != 0.0:
            raise ValueError(f"{self.family.value} supports only alpha = 0")
        if self.family is Family.TWISTED:
            if self.d is None:
                raise ValueError("twisted family needs a twist d")
            if self.d % 4 not in (0, 1):
                raise ValueError(f"twist {self.d} must be 0 or 1 mod 4")
        elif self.d is not None:
            raise ValueError("twist d only applies to the twisted family")
        if self.family is Family.DIV_COUNT:
            if self.m is None or self.m < 2:
                raise ValueError("div_count family needs a modulus m >= 2")
        elif self.m is not None:
            raise ValueError("modulus m only applies to div_count")

    def label(self):
        """Stable identifier used in file names and checkpoints."""
        if self.family is Family.TWISTED:
            return f"twisted:{self.d}"
        if self.family is Family.DIV_COUNT:
            return f"div_count:{self.m}"
        return self.family.value

    @staticmethod
    def parse(label, alpha=0.0):
        """Inverse of label(); alpha passed separately (checkpoint layout)."""
        if ":" in label:
            name, _, param = label.partition(":")
            if name == "twisted":
                return SumSpec(Family.TWISTED, d=int(param))
            if name == "div_count":
                return SumSpec(Family.DIV_COUNT, m=int(param))
            raise ValueError(f"unknown family label {label!r}")
        return SumSpec(Family(label), alpha=alpha)


@dataclass
class ExactAccumulator:
    """Positive and negative parts kept separately, exactly.

    Integer families use Python ints (no overflow, structurally); weighted
    families use 160-bit floats, well past the 30-digit oracle requirement.
    """

    pos: object = 0
    neg: object = 0

    @property
    def value(self):
        return self.pos - self.neg

    def add(self, term):
        if term >= 0:
            self.pos += term
        else:
            self.neg -= term


class OracleLimitError(ValueError):
    pass


_OMEGA_MEMO = {"x": 0, "big": None, "small": None}


def omega_arrays(x):
    """(Omega, omega) for 0..x as uint8 arrays, by per-n trial division.

    One pass is memoized process-wide so every family comparison shares it.
    Index 0 is unused; Omega(1) = omega(1) = 0.
    """
    if _OMEGA_MEMO["x"] >= x:
        return _OMEGA_MEMO["big"][: x + 1], _OMEGA_MEMO["small"][: x + 1]
    big = np.zeros(x + 1, dtype=np.uint8)
    small = np.zeros(x + 1, dtype=np.uint8)
    plist = _prime_list(max(1000, math.isqrt(x) + 1))
    for n in range(2, x + 1):
        m = n
        b = 0
        s = 0
        for p in plist:
            if p * p > m:
                break
            if m % p == 0:
                s += 1
                while m % p == 0:
                    m //= p
                    b += 1
        if m > 1:
            b += 1
            s += 1
        big[n] = b
        small[n] = s
    _OMEGA_MEMO.update(x=x, big=big, small=small)
    return big, small


def _term_sign(spec, n, om_big, om_small):
    if spec.family is Family.LIOUVILLE:
        return -1 if om_big & 1 else 1
    if spec.family is Family.OMEGA_SIGN:
        return -1 if om_small & 1 else 1
    if spec.family is Family.PARITY_LIOUVILLE:
        return -1 if (n - om_big) & 1 else 1
    raise AssertionError(spec.family)


def oracle_sum(spec, x, limit=ORACLE_LIMIT_DEFAULT):
    """Literal term-by-term evaluation of the spec's sum up to x.

    Returns an ExactAccumulator; integer families accumulate Python ints,
    alpha > 0 families accumulate 160-bit floats (sum error ~1e-45, far
    inside every tolerance used against it).
    """
    if x > limit:
        raise OracleLimitError(f"x={x} exceeds oracle limit {limit}")
    if x < 0:
        raise ValueError("x must be >= 0")
    x = int(x)
    acc = ExactAccumulator()
    if x == 0:
        if spec.alpha > 0:
            acc.pos = gmpy2.mpfr(0, ORACLE_PRECISION_BITS)
            acc.neg = gmpy2.mpfr(0, ORACLE_PRECISION_BITS)
        return acc
    big, small = omega_arrays(x)

    if spec.family is Family.TWO_OMEGA:
        for n in range(1, x + 1):
            b = int(big[n])
            acc.add(-(1 << b) if b & 1 else (1 << b))
        return acc

    if spec.family is Family.DIV_COUNT:
        m = spec.m
        for n in range(1, x + 1):
            if (n - int(big[n])) % m == 0:
                acc.pos += 1
        return acc

    if spec.family is Family.TWISTED:
        d = spec.d
        for n in range(1, x + 1):
            chi = kronecker(d, n)
            if chi == 0:
                continue
            sign = -1 if (n - int(big[n])) & 1 else 1
            acc.add(sign * chi)
        return acc

    if spec.alpha == 0.0:
        for n in range(1, x + 1):
            acc.add(_term_sign(spec, n, int(big[n]), int(small[n])))
        return acc

    with gmpy2.context(precision=ORACLE_PRECISION_BITS):
        pos = gmpy2.mpfr(0)
        neg = gmpy2.mpfr(0)
        alpha = gmpy2.mpfr(spec.alpha)
        for n in range(1, x + 1):
            term = gmpy2.mpfr(n) ** (-alpha)
            if _term_sign(spec, n, int(big[n]), int(small[n])) > 0:
                pos += term
            else:
                neg += term
        acc.pos = pos
        acc.neg = neg
    return acc
