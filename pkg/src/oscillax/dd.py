"""Double-double (~31 digit) float helpers, scalar and vectorized.

A double-double value is an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
Used for the extended-precision sum accumulators in the sieve engine and for
phase reduction gamma*u mod 2pi in the explicit-formula evaluator, where
plain float64 would lose too much to cancellation.
"""

from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant

# 2*pi to double-double precision
TWO_PI_HI = 6.283185307179586
TWO_PI_LO = 2.4492935982947064e-16


def two_sum(a, b):
    """Knuth two-sum: s + e == a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def fast_two_sum(a, b):
    """Dekker two-sum, requires |a| >= |b|: s + e == a + b exactly."""
    s = a + b
    e = b - (s - a)
    return s, e


def two_prod(a, b):
    """Dekker two-product: p + e == a * b exactly (no FMA assumed)."""
    p = a * b
    ta = _SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(x, y):
    """(hi, lo) + (hi, lo)."""
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    return fast_two_sum(s, e)


def dd_add_d(x, a):
    s, e = two_sum(x[0], a)
    e += x[1]
    return fast_two_sum(s, e)


def dd_sub(x, y):
    return dd_add(x, (-y[0], -y[1]))


def dd_mul_d(x, a):
    """(hi, lo) * float."""
    p, e = two_prod(x[0], a)
    e += x[1] * a
    return fast_two_sum(p, e)


def dd_neg(x):
    return (-x[0], -x[1])


def dd_from_fraction(fr):
    """Nearest double-double to an exact Fraction."""
    hi = float(fr)
    lo = float(fr - Fraction(hi))
    return (hi, lo)


def dd_from_decimal_string(s):
    """Parse a decimal string written by dd_to_decimal_string, exactly."""
    d = Decimal(s)
    hi = float(d)
    lo = float(d - Decimal(hi))
    return (hi, lo)


def dd_to_decimal_string(x):
    """Exact decimal representation of hi + lo (binary floats are finite
    decimals, so this round-trips bit-for-bit)."""
    getcontext().prec = 80
    return str(Decimal(x[0]) + Decimal(x[1]))


def _vtwo_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def dd_sum(values):
    """Sum a float64 array to double-double accuracy.

    Cascaded pairwise two-sum: every fold keeps its exact error term, the
    collected errors are added back at the end.  The neglected part is
    O(eps^2 * sum|x|), far below the 1e-12 relative tolerances the engine
    works to.
    """
    a = np.ascontiguousarray(values, dtype=np.float64)
    if a.size == 0:
        return (0.0, 0.0)
    err = 0.0
    while a.size > 1:
        if a.size & 1:
            a = np.append(a, 0.0)
        half = a.size // 2
        s, e = _vtwo_sum(a[:half], a[half:])
        err += float(np.sum(e))
        a = s
    return fast_two_sum(float(a[0]), err)


def parse_dd_array(strings):
    """Parse decimal strings (e.g. zero ordinates) into hi/lo float64 arrays,
    each entry exact to double-double."""
    n = len(strings)
    hi = np.empty(n, dtype=np.float64)
    lo = np.empty(n, dtype=np.float64)
    for i, s in enumerate(strings):
        fr = Fraction(s)
        h = float(fr)
        hi[i] = h
        lo[i] = float(fr - Fraction(h))
    return hi, lo


def phase_mod_2pi(gamma_hi, gamma_lo, u):
    """Reduce gamma*u mod 2pi in double-double, vectorized over gamma.

    gamma is given as exact hi/lo pairs, u is a float64 scalar.  Returns a
    float64 array of reduced phases; the reduction error is ~1e-26 rad even
    at gamma*u ~ 3e5, so downstream float sin/cos keep ~1e-15 accuracy.
    """
    p, e = _np_two_prod(gamma_hi, np.float64(u))
    e = e + gamma_lo * u
    # p + e == gamma*u to dd accuracy
    k = np.rint(p / TWO_PI_HI)
    # subtract k * 2pi in dd
    q, qe = _np_two_prod(k, np.float64(TWO_PI_HI))
    qe = qe + k * TWO_PI_LO
    s, se = _vtwo_sum(p, -q)
    return s + (se + e - qe)


def _np_two_prod(a, b):
    p = a * b
    ta = _SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e
