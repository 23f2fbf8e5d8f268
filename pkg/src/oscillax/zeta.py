"""Multiprecision zeta machinery on gmpy2.

Euler-Maclaurin evaluation of zeta and its derivative for complex s, plus a
shared-node pipeline for points s = k*(1/2 + i*gamma): the powers n^(-s) at
a critical-line point are built multiplicatively (one complex exp per prime,
one multiply per composite), and all of zeta'(rho), zeta(2*rho), ...,
zeta(6*rho) reuse them.

Node count follows N = ceil(floor + 1.3*|Im s|) with 30 Bernoulli correction
terms, where the floor scales with working precision (40 nodes at the
default 36 digits); a doubled-N evaluation is available as a guard
(verify=True).

Working precision defaults to 36 significant digits and can be overridden
with the OSCILLAX_PRECISION environment variable (decimal digits).
"""

import math
import os
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

DEFAULT_DIGITS = 36
CORRECTION_TERMS = 30


class AccuracyError(ArithmeticError):
    """Doubled-N cross-check disagreed beyond tolerance."""


def precision_digits():
    raw = os.environ.get("OSCILLAX_PRECISION")
    if not raw:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 15:
        raise ValueError("OSCILLAX_PRECISION must be at least 15 digits")
    return digits


def precision_bits():
    return int(precision_digits() * math.log2(10)) + 8


def local_ctx():
    return gmpy2.context(precision=precision_bits())


def to_mpc(s):
    if isinstance(s, mpc):
        return s
    if isinstance(s, complex):
        return mpc(mpfr(s.real), mpfr(s.imag))
    return mpc(mpfr(s), mpfr(0))


def _coerce(s):
    """mpfr for real input, mpc otherwise; keeps real arguments real."""
    if isinstance(s, (complex, mpc)):
        if s.imag == 0:
            return mpfr(s.real)
        return to_mpc(s)
    return mpfr(s)


def node_count(im_abs):
    # floor sized so 30 correction terms reach working precision: the
    # truncated tail behaves like ((|s|+60)/(2*pi*N))^60, so N must stay
    # well past 60/(2*pi) even when Im s is tiny
    floor = max(40, math.ceil(1.2 * precision_digits()))
    return math.ceil(floor + 1.3 * abs(im_abs))


@lru_cache(maxsize=1)
def _bernoulli_over_factorial():
    """B_{2k}/(2k)! for k = 1..CORRECTION_TERMS, exact."""
    top = 2 * CORRECTION_TERMS + 1
    b = [Fraction(0)] * (top + 1)
    b[0] = Fraction(1)
    for m in range(1, top + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += Fraction(math.comb(m + 1, j)) * b[j]
        b[m] = -acc / (m + 1)
    out = []
    for k in range(1, CORRECTION_TERMS + 1):
        out.append(gmpy2.mpq(b[2 * k].numerator, b[2 * k].denominator * math.factorial(2 * k)))
    return out


# smallest-prime-factor table, grown on demand
_SPF = np.zeros(2, dtype=np.int64)


def _spf_up_to(n):
    global _SPF
    if _SPF.size <= n:
        size = max(n + 1, 2 * _SPF.size, 1024)
        spf = np.zeros(size, dtype=np.int64)
        for p in range(2, math.isqrt(size - 1) + 1):
            if spf[p] == 0:
                spf[p * p :: p][spf[p * p :: p] == 0] = p
                spf[p] = p
        unset = np.nonzero(spf[2:] == 0)[0] + 2
        spf[unset] = unset
        _SPF = spf
    return _SPF


# ln n cache, keyed by precision
_LN_CACHE = {}


def _ln_table(n, bits):
    tab = _LN_CACHE.get(bits)
    if tab is None or len(tab) <= n:
        with gmpy2.context(precision=bits):
            tab = [mpfr(0)] * (n + 1)
            old = _LN_CACHE.get(bits)
            if old:
                tab[: len(old)] = old
            start = 2 if old is None else len(old)
            if start < 2:
                start = 2
            for i in range(start, n + 1):
                tab[i] = gmpy2.log(mpfr(i))
        _LN_CACHE[bits] = tab
    return tab


def node_powers(s, n_max):
    """[0, 1^-s, 2^-s, ..., n_max^-s]; one exp per prime, multiplies elsewhere."""
    spf = _spf_up_to(n_max)
    ln = _ln_table(n_max, gmpy2.get_context().precision)
    z = [None] * (n_max + 1)
    z[0] = None
    z[1] = s - s + 1  # one, in the type of s
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m = n // p
        if m == 1:
            z[n] = gmpy2.exp(-s * ln[n])
        else:
            z[n] = z[p] * z[m]
    return z


def _em_value(w, s, big_n):
    """Euler-Maclaurin zeta from node powers w[n] = n^-s, using N = big_n."""
    w_n = w[big_n]
    total = w_n / 2
    for n in range(1, big_n):
        total += w[n]
    n_pow = big_n * w_n  # N^(1-s)
    total += n_pow / (s - 1)
    nn = mpfr(big_n) ** 2
    a = s * w_n / big_n
    for k, c in enumerate(_bernoulli_over_factorial(), start=1):
        total += c * a
        a = a * (s + (2 * k - 1)) * (s + 2 * k) / nn
    return total


def _em_derivative(w, s, big_n, ln):
    """d/ds of zeta via term-by-term differentiated Euler-Maclaurin."""
    w_n = w[big_n]
    ln_n = ln[big_n]
    total = -ln_n * w_n / 2
    for n in range(2, big_n):
        total -= ln[n] * w[n]
    n_pow = big_n * w_n
    sm1 = s - 1
    total += n_pow * (-ln_n / sm1 - 1 / (sm1 * sm1))
    nn = mpfr(big_n) ** 2
    q = w_n / big_n  # N^(-s-2k+1), advanced by 1/N^2 each term
    # value and derivative of the rising product s(s+1)...(s+2k-2);
    # tracked as a pair so s=0 (where the product vanishes) stays finite
    p_val = s
    p_der = s * 0 + 1
    for k, c in enumerate(_bernoulli_over_factorial(), start=1):
        total += c * (p_der - p_val * ln_n) * q
        m1 = s + (2 * k - 1)
        m2 = s + 2 * k
        p_der = p_der * m1 * m2 + p_val * (m1 + m2)
        p_val = p_val * m1 * m2
        q = q / nn
    return total


def _check(value, again, what, s):
    mag = abs(value)
    if mag == 0:
        mag = mpfr(1)
    tol = mpfr(2) ** (-(gmpy2.get_context().precision - 14))
    if abs(value - again) / mag > tol:
        raise AccuracyError(f"{what}({s}): doubled-N check moved the value")


def zeta(s, verify=False):
    """zeta(s) for s != 1; relative error well under 1e-20 for |Im s| <= 1e4."""
    with local_ctx():
        s = _coerce(s)
        if s == 1:
            raise ValueError("zeta has its pole at s=1")
        big_n = node_count(float(s.imag) if isinstance(s, mpc) else 0.0)
        w = node_powers(s, big_n)
        val = _em_value(w, s, big_n)
        if verify:
            w2 = node_powers(s, 2 * big_n)
            _check(val, _em_value(w2, s, 2 * big_n), "zeta", s)
        return val


def zeta_prime(s, verify=False):
    """zeta'(s) for s != 1, same node rule as zeta."""
    with local_ctx():
        s = _coerce(s)
        if s == 1:
            raise ValueError("zeta' has its pole at s=1")
        big_n = node_count(float(s.imag) if isinstance(s, mpc) else 0.0)
        bits = gmpy2.get_context().precision
        w = node_powers(s, big_n)
        val = _em_derivative(w, s, big_n, _ln_table(big_n, bits))
        if verify:
            w2 = node_powers(s, 2 * big_n)
            _check(val, _em_derivative(w2, s, 2 * big_n, _ln_table(2 * big_n, bits)), "zeta'", s)
        return val


def critical_line_values(gamma, ks=(2,), want_prime=True):
    """zeta(k*rho) for rho = 1/2 + i*gamma, sharing one set of node powers.

    Returns {"rho": rho, "prime": zeta'(rho) if requested, k: zeta(k*rho)}.
    Each zeta(k*rho) uses its own N = node_count(k*gamma); the base powers
    are built once up to the largest N needed.
    """
    ks = sorted(set(ks))
    with local_ctx():
        rho = mpc(mpfr(1) / 2, mpfr(gamma))
        n_per_k = {k: node_count(k * float(gamma)) for k in ks}
        n_base = max(max(n_per_k.values()), node_count(float(gamma)) if want_prime else 0)
        bits = gmpy2.get_context().precision
        z = node_powers(rho, n_base)
        out = {"rho": rho}
        if want_prime:
            out["prime"] = _em_derivative(z, rho, n_base, _ln_table(n_base, bits))
        pows = {1: z}
        # largest k first so shared sub-chains are built once at full length
        for k in sorted(ks, reverse=True):
            _power_chain(pows, k, n_per_k[k])
        for k in ks:
            out[k] = _em_value(pows[k], k * rho, n_per_k[k])
        return out


def _power_chain(pows, k, length):
    """pows[k][n] = pows[1][n]**k for n <= length, built from smaller powers."""
    if k in pows and len(pows[k]) > length:
        return pows[k]
    if k == 1:
        return pows[1]
    lo = k // 2
    hi = k - lo
    a = _power_chain(pows, lo, length)
    b = _power_chain(pows, hi, length)
    out = [None] * (length + 1)
    out[1] = a[1]
    for n in range(2, length + 1):
        out[n] = a[n] * b[n]
    pows[k] = out
    return out


def euler_gamma():
    with local_ctx():
        return gmpy2.const_euler()
