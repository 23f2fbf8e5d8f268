"""Residues of the sum transforms on the imaginary axis.

Each normalized sum family has a Laplace transform that is analytic for
Re s > 0 with simple poles on the imaginary axis: one at the origin
(the bias center) and one at each zeta-zero ordinate.  This module
computes those residues, the analytic continuation of the Dirichlet
series sum (-1)^omega(n)/n^s via a factored Euler product, and the
Dirichlet series of (-2)^Omega(n) together with its factored form.

Residues at an ordinate gamma factor as kernel(gamma)/(rho - alpha) with
rho = 1/2 + i*gamma; the alpha-independent kernels are cached per gamma,
so sweeps over many alpha values reuse one zeta evaluation per zero.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .arith import Family, primes_up_to
from .zeta import critical_line_values, euler_gamma, local_ctx, zeta, zeta_prime

# local Euler factor of the omega-sign series numerator:
# (1-2x) * (1-x)^-2 (1-x^2)^-1 (1-x^3)^-2 (1-x^4)^-3 (1-x^5)^-6 (1-x^6)^-9,
# chosen so the expansion is 1 + O(x^7) and the product converges for
# sigma > 1/7
CORE_EXPONENTS = (2, 1, 2, 3, 6, 9)
# envelope exponents: the series equals core(s) / envelope(s) with
# envelope = zeta(s) zeta(2s) zeta^2(3s) zeta^3(4s) zeta^6(5s) zeta^9(6s)
ENVELOPE_EXPONENTS = (1, 1, 2, 3, 6, 9)

DEFAULT_CUTOFF = 1_000_000
ORDINATE_CUTOFF = 10_000

_DERIV_FLOOR = 1e-8  # |zeta'(rho)| below this means gamma is not near a zero


@dataclass(frozen=True)
class ResidueTerm:
    """One oscillation term: the residue at s = i*gamma and its size."""

    gamma: float
    residue: complex
    magnitude: float


@dataclass(frozen=True)
class CenterLine:
    """Affine center a*u + b for the one family/exponent pair whose bias
    grows linearly in u instead of sitting at a constant."""

    slope: float
    intercept: float

    def value(self, u):
        return self.slope * u + self.intercept


def _sqrt2():
    return gmpy2.sqrt(mpfr(2))


def residue_at_origin(family, alpha):
    """Residue of the family's transform at s = 0 (the oscillation center).

    For the parity-weighted family this is (1+sqrt(2))/((2a-1)*zeta(1/2))
    except at alpha = 1/2, where the pole is second order and the center
    is the returned CenterLine in u = log x.  For the omega-sign family
    the center is 0 up to alpha = 1/2 and the series bias beyond it.
    """
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if family == Family.PARITY_LIOUVILLE:
        with local_ctx():
            z_half = zeta(mpfr(1) / 2)
            one_plus = 1 + _sqrt2()
            if alpha == 0.5:
                slope = -one_plus / (2 * z_half)
                intercept = (one_plus / z_half) * (
                    gmpy2.log(2) / (2 + _sqrt2())
                    + zeta_prime(mpfr(1) / 2) / (2 * z_half)
                    - euler_gamma()
                )
                return CenterLine(slope=float(slope), intercept=float(intercept))
            return float(one_plus / ((2 * mpfr(alpha) - 1) * z_half))
    if family == Family.OMEGA_SIGN:
        if alpha <= 0.5:
            return 0.0
        return omega_sign_series(alpha)
    raise ValueError(f"no transform center for family {family}")


@lru_cache(maxsize=None)
def _line_pieces(gamma):
    """Exact zeta'(rho) and zeta(2*rho) at rho = 1/2 + i*gamma, shared by
    both families' kernels."""
    vals = critical_line_values(gamma, ks=(2,), want_prime=True)
    if abs(vals["prime"]) < _DERIV_FLOOR:
        raise ValueError(f"gamma={gamma}: |zeta'(rho)| ~ 0, not a simple-zero ordinate")
    return vals["rho"], vals["prime"], vals[2]


@lru_cache(maxsize=None)
def parity_kernel(gamma):
    """alpha-independent numerator of the parity-family residue:
    -(1 + 2^conj(rho)) * zeta(2*rho) / zeta'(rho)."""
    rho, prime, z2 = _line_pieces(float(gamma))
    with local_ctx():
        two_pow = gmpy2.exp(gmpy2.log(mpfr(2)) * gmpy2.mpc(rho.real, -rho.imag))
        val = -(1 + two_pow) * z2 / prime
        return complex(val)


@lru_cache(maxsize=None)
def omega_kernel(gamma):
    """alpha-independent numerator of the omega-sign-family residue:
    core(rho) / (zeta'(rho) * envelope-without-zeta(rho))."""
    gamma = float(gamma)
    rho, prime, z2 = _line_pieces(gamma)
    vals = critical_line_values(gamma, ks=(3, 4, 5, 6), want_prime=False)
    core, _tail = _core_value_complex(gamma)
    with local_ctx():
        hat = z2
        for k, e in zip((3, 4, 5, 6), ENVELOPE_EXPONENTS[2:]):
            hat *= vals[k] ** e
        val = gmpy2.mpc(core.real, core.imag) / (prime * hat)
        return complex(val)


def residue_at_ordinate(family, alpha, gamma):
    """Residue of the family's transform at s = i*gamma as a ResidueTerm."""
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if family == Family.PARITY_LIOUVILLE:
        kernel = parity_kernel(gamma)
    elif family == Family.OMEGA_SIGN:
        kernel = omega_kernel(gamma)
    else:
        raise ValueError(f"no transform residues for family {family}")
    res = kernel / complex(0.5 - alpha, gamma)
    # |kernel|/|rho-alpha| rather than |res|: identical in exact arithmetic,
    # and bitwise symmetric under alpha -> 1-alpha since hypot drops the sign
    mag = abs(kernel) / math.hypot(0.5 - alpha, gamma)
    return ResidueTerm(gamma=float(gamma), residue=res, magnitude=mag)


# ---------------------------------------------------------------------------
# Euler products


def _series_mul(a, b, depth):
    out = [Fraction(0)] * (depth + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > depth:
                break
            out[i + j] += ai * bj
    return out


def _inv_power_series(j, e, depth):
    """(1 - x^j)^(-e) up to x^depth, exact."""
    out = [Fraction(0)] * (depth + 1)
    for m in range(depth // j + 1):
        out[j * m] = Fraction(math.comb(m + e - 1, e - 1))
    return out


@lru_cache(maxsize=None)
def core_factor_coefficients(depth=12):
    """Exact expansion of the core local factor; starts 1 + O(x^7)."""
    series = [Fraction(1), Fraction(-2)] + [Fraction(0)] * (depth - 1)
    for j, e in enumerate(CORE_EXPONENTS, start=1):
        series = _series_mul(series, _inv_power_series(j, e, depth), depth)
    assert all(c.denominator == 1 for c in series)
    return tuple(int(c) for c in series)


def _product_tail(sigma, cutoff, lead_power):
    """Estimated |log tail| of a local-factor product over p > cutoff whose
    log-series coefficients are bounded by 2^k and start at x^lead_power."""
    r = 2.0 * cutoff ** (-sigma)
    if r >= 0.5:
        raise ValueError("cutoff too small for the tail estimate")
    a = lead_power * sigma
    prime_sum = cutoff ** (1 - a) / ((a - 1) * math.log(cutoff))
    return 1.3 * (2.0**lead_power) / (1 - r) * prime_sum


def _core_local(x):
    """Closed form of the core local factor at x = p^(-s)."""
    x2 = x * x
    x3 = x2 * x
    t1 = 1 - x
    t2 = 1 - x2
    t3 = 1 - x3
    t4 = 1 - x2 * x2
    t5 = 1 - x2 * x3
    t6 = 1 - x3 * x3
    return (1 - 2 * x) / (t1 * t1 * t2 * t3 * t3 * t4**3 * t5**6 * t6**9)


def core_product_value(s, cutoff=DEFAULT_CUTOFF):
    """Core product over p <= cutoff at real s, with its tail estimate.

    The local factors are evaluated in closed form (no series truncation);
    the only error is the omitted p > cutoff tail, whose estimated size is
    returned alongside the value.
    """
    if s <= 1 / 7:
        raise ValueError("core product needs Re s > 1/7")
    tail = _product_tail(float(s), cutoff, 7)
    with local_ctx():
        total = mpfr(1)
        ms = mpfr(s)
        for p in primes_up_to(cutoff):
            total *= _core_local(gmpy2.exp(-ms * gmpy2.log(mpfr(int(p),))))
        return float(total), tail


@lru_cache(maxsize=4)
def _ln_primes(cutoff):
    return np.log(primes_up_to(cutoff).astype(np.float64))


def _core_value_complex(gamma, cutoff=ORDINATE_CUTOFF):
    """Core product at rho = 1/2 + i*gamma, vectorized in complex128.

    Rounding across ~1200 factors stays below ~1e-8 relative, far under
    the consumers' tolerances; the returned tail estimate covers p > cutoff.
    """
    lnp = _ln_primes(cutoff)
    x = np.exp(-0.5 * lnp) * np.exp(-1j * (gamma * lnp))
    val = complex(np.prod(_core_local(x)))
    return val, _product_tail(0.5, cutoff, 7)


def _zeta_envelope(s):
    """zeta(s) zeta(2s) zeta^2(3s) zeta^3(4s) zeta^6(5s) zeta^9(6s) at real s."""
    with local_ctx():
        total = mpfr(1)
        for k, e in enumerate(ENVELOPE_EXPONENTS, start=1):
            total *= zeta(mpfr(s) * k) ** e
        return total


def omega_sign_series(alpha, cutoff=DEFAULT_CUTOFF):
    """Analytic continuation of sum (-1)^omega(n) / n^alpha for alpha in
    [1/2, 1], via the factored Euler product.

    Exactly 0 at alpha = 1/2 and alpha = 1, where an envelope zeta factor
    (zeta(2s), zeta(s) respectively) has its pole.
    """
    if not 0.5 <= alpha <= 1:
        raise ValueError("series value implemented for alpha in [1/2, 1]")
    if alpha == 0.5 or alpha == 1.0:
        return 0.0
    core, _tail = core_product_value(alpha, cutoff)
    return float(mpfr(core) / _zeta_envelope(alpha))


# ---------------------------------------------------------------------------
# omega-sign kernel enclosures (cheap |kernel| windows for ranking; exact
# evaluation is ~100x costlier, so callers screen with these first)

# |zeta(k*rho)| lies in [zeta(k)/zeta(k/2), zeta(k/2)] for every rho on the
# critical line; windows from short partial sums are clipped against these
_ZK_FLOOR = {}
_ZK_CEIL = {}
_PARTIAL_TERMS = {3: 400, 4: 150, 5: 80, 6: 50}


def _zk_limits(k):
    if k not in _ZK_FLOOR:
        zk = float(zeta(mpfr(k)))
        zk2 = float(zeta(mpfr(k) / 2))
        _ZK_FLOOR[k] = zk / zk2
        _ZK_CEIL[k] = zk2
    return _ZK_FLOOR[k], _ZK_CEIL[k]


@lru_cache(maxsize=2)
def _partial_grid(n_terms):
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    return np.log(n)


def omega_kernel_window(gamma):
    """Certified-ish [lo, hi] window on |omega_kernel(gamma)| from short
    partial sums; exact zeta values only where they are already cached."""
    gamma = float(gamma)
    rho, prime, z2 = _line_pieces(gamma)
    core, core_tail = _core_value_complex(gamma)
    core_mag = abs(core)
    d_core = core_mag * (math.expm1(core_tail)) + 1e-7
    denom_exact = abs(complex(prime)) * abs(complex(z2))
    lo_den, hi_den = denom_exact, denom_exact
    for k, e in zip((3, 4, 5, 6), ENVELOPE_EXPONENTS[2:]):
        n_terms = _PARTIAL_TERMS[k]
        ln_n = _partial_grid(n_terms)
        part = np.sum(np.exp(-(k / 2) * ln_n) * np.exp(-1j * (k * gamma) * ln_n))
        tail = n_terms ** (1 - k / 2) / (k / 2 - 1) + n_terms ** (-k / 2)
        floor_k, ceil_k = _zk_limits(k)
        mag_lo = max(abs(part) - tail, floor_k)
        mag_hi = min(abs(part) + tail, ceil_k)
        lo_den *= mag_hi**e
        hi_den *= mag_lo**e
    return (max(core_mag - d_core, 0.0) / lo_den, (core_mag + d_core) / hi_den)


# ---------------------------------------------------------------------------
# (-2)^Omega Dirichlet series


def _mobius_small(m):
    mu = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            mu = -mu
        d += 1
    return -mu if m > 1 else mu


def _prime_zeta(a):
    """sum over primes p^-a for real a > 1, via mobius inversion of log zeta."""
    with local_ctx():
        total = mpfr(0)
        m = 1
        while a * m < 128:  # ln zeta(ma) ~ 2^-ma, below working precision after this
            mu = _mobius_small(m)
            if mu:
                total += mpfr(mu) / m * gmpy2.log(zeta(mpfr(a) * m))
            m += 1
        return total


def two_omega_series(s, cutoff=100_000):
    """Direct Euler product of sum (-2)^Omega(n)/n^s: prod (1+2p^-s)^-1.

    Only converges for Re s > 1; see two_omega_series_factored for the
    continuation.  The p > cutoff tail is completed exactly through the
    prime zeta function, so the truncation error is far below 1e-10.
    """
    if s <= 1:
        raise ValueError("direct product needs Re s > 1")
    with local_ctx():
        log_total = mpfr(0)
        ms = mpfr(s)
        lnp = [gmpy2.log(mpfr(int(p))) for p in primes_up_to(cutoff)]
        for lp in lnp:
            log_total -= gmpy2.log1p(2 * gmpy2.exp(-ms * lp))
        # -log(1+2x) = sum_k (-1)^k (2x)^k / k; fold the p > cutoff part
        # of each prime power sum using prime-zeta values
        for k in range(1, 64):
            a = float(s) * k
            tail_scale = 2.0**k / k * cutoff ** (1 - a) / ((a - 1) * math.log(cutoff))
            part = sum((gmpy2.exp(-ms * k * lp) for lp in lnp), mpfr(0))
            sign = -1 if k % 2 else 1
            log_total += sign * (mpfr(2) ** k / k) * (_prime_zeta(a) - part)
            if tail_scale < 1e-22:
                break
        return float(gmpy2.exp(log_total))


def _two_omega_core_local(x):
    """(1+2x)^-1 (1-x^2)^3 (1-x^4)^3 (1-x)^-2 (1-x^3)^-2 = 1 + O(x^5)."""
    x2 = x * x
    t1 = 1 - x
    t2 = 1 - x2
    t3 = 1 - x2 * x
    t4 = 1 - x2 * x2
    return (t2**3) * (t4**3) / ((1 + 2 * x) * t1 * t1 * t3 * t3)


def two_omega_core(s, cutoff=DEFAULT_CUTOFF):
    """Core factor of the (-2)^Omega series, converging for Re s > 1/5."""
    if s <= 1 / 5:
        raise ValueError("core factor needs Re s > 1/5")
    tail = _product_tail(float(s), cutoff, 5)
    with local_ctx():
        total = mpfr(1)
        ms = mpfr(s)
        for p in primes_up_to(cutoff):
            total *= _two_omega_core_local(gmpy2.exp(-ms * gmpy2.log(mpfr(int(p)))))
        return float(total), tail


def two_omega_series_factored(s, cutoff=DEFAULT_CUTOFF):
    """Factored form zeta(2s)^3 zeta(4s)^3 core(s) / (zeta(s)^2 zeta(3s)^2)."""
    core, _tail = two_omega_core(s, cutoff)
    with local_ctx():
        ms = mpfr(s)
        num = zeta(2 * ms) ** 3 * zeta(4 * ms) ** 3
        den = zeta(ms) ** 2 * zeta(3 * ms) ** 2
        return float(mpfr(core) * num / den)
