"""Arithmetic-core tests: brute-force mini-oracles frozen against the API."""

import random

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillax.arith import (
    ExactAccumulator,
    Family,
    OracleLimitError,
    SumSpec,
    big_omega,
    factorize,
    is_prime,
    kronecker,
    liouville,
    omega_arrays,
    oracle_sum,
    primes_up_to,
    small_omega,
)


def test_primes_counts():
    assert primes_up_to(10).tolist() == [2, 3, 5, 7]
    assert len(primes_up_to(10**4)) == 1229
    assert len(primes_up_to(10**6)) == 78498


def test_factorize_small():
    assert factorize(1) == []
    assert factorize(2) == [(2, 1)]
    assert factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert factorize(2**20) == [(2, 20)]
    # product reconstructs n
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(1, 10**6)
        prod = 1
        for p, e in factorize(n):
            prod *= p**e
            assert is_prime(p)
        assert prod == n


def test_omega_values():
    assert big_omega(1) == 0 and small_omega(1) == 0
    assert big_omega(360) == 6 and small_omega(360) == 3
    assert liouville(1) == 1 and liouville(2) == -1 and liouville(9) == 1


@given(st.integers(min_value=1, max_value=10**4), st.integers(min_value=1, max_value=10**4))
@settings(max_examples=200, deadline=None)
def test_liouville_completely_multiplicative(a, b):
    assert liouville(a * b) == liouville(a) * liouville(b)


def test_is_prime_against_trial_division():
    for n in range(2, 2000):
        assert is_prime(n) == (factorize(n) == [(n, 1)])
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    # strong pseudoprimes to few bases must still be caught
    assert not is_prime(3215031751)


def test_kronecker_brute_force_legendre():
    # oracle: count solutions of x^2 = d (mod p) at odd primes
    for d in (-4, -3, 5, -7, 8, 12, 13, 1):
        for p in (3, 5, 7, 11, 13, 31, 97, 101):
            if d % p == 0:
                assert kronecker(d, p) == 0
                continue
            n_solutions = sum(1 for x in range(p) if (x * x - d) % p == 0)
            expected = 1 if n_solutions == 2 else -1
            assert kronecker(d, p) == expected, (d, p)


def test_kronecker_minus4_period():
    assert kronecker(-4, 3) == -1
    pattern = [kronecker(-4, n) for n in range(1, 9)]
    assert pattern == [1, 0, -1, 0, 1, 0, -1, 0]


def test_kronecker_rejects_bad_twist():
    with pytest.raises(ValueError):
        kronecker(3, 7)
    with pytest.raises(ValueError):
        kronecker(-6, 7)


@given(
    st.sampled_from([-8, -7, -4, -3, 1, 5, 8, 12, 13]),
    st.integers(min_value=1, max_value=5000),
    st.integers(min_value=1, max_value=5000),
)
@settings(max_examples=300, deadline=None)
def test_kronecker_completely_multiplicative(d, a, b):
    assert kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b)


def test_kronecker_matches_gmpy2():
    # independent implementation cross-check
    for d in (-8, -7, -4, -3, 0, 1, 5, 8, 12, -11, 21):
        for n in range(0, 400):
            assert kronecker(d, n) == gmpy2.kronecker(d, n), (d, n)


def test_spec_validation():
    with pytest.raises(ValueError):
        SumSpec(Family.LIOUVILLE, alpha=1.5)
    with pytest.raises(ValueError):
        SumSpec(Family.TWO_OMEGA, alpha=0.5)
    with pytest.raises(ValueError):
        SumSpec(Family.TWISTED, d=3)
    with pytest.raises(ValueError):
        SumSpec(Family.TWISTED)  # missing d
    with pytest.raises(ValueError):
        SumSpec(Family.DIV_COUNT, m=1)
    with pytest.raises(ValueError):
        SumSpec(Family.LIOUVILLE, d=5)


def test_spec_label_round_trip():
    specs = [
        SumSpec(Family.PARITY_LIOUVILLE, 0.5),
        SumSpec(Family.TWISTED, d=-4),
        SumSpec(Family.DIV_COUNT, m=7),
        SumSpec(Family.TWO_OMEGA),
    ]
    for s in specs:
        assert SumSpec.parse(s.label(), s.alpha) == s


def test_oracle_sum_frozen_values():
    # hand-computed: weights (-1)^(n-Omega(n)) for n=1..5 are -1,-1,+1,+1,+1
    s = SumSpec(Family.PARITY_LIOUVILLE, 0.0)
    acc = oracle_sum(s, 5)
    assert isinstance(acc, ExactAccumulator)
    assert (acc.pos, acc.neg, acc.value) == (3, 2, 1)
    # weights (-1)^omega(n) for n=1..4 are +1,-1,-1,-1
    assert oracle_sum(SumSpec(Family.OMEGA_SIGN, 0.0), 4).value == -2
    # Liouville: 1,-1,-1,1,-1,1,-1,-1,1,1
    assert oracle_sum(SumSpec(Family.LIOUVILLE, 0.0), 10).value == 0


def test_oracle_sum_alpha_against_direct_mpfr():
    # independent in-test accumulation at higher precision
    s = SumSpec(Family.PARITY_LIOUVILLE, 0.5)
    acc = oracle_sum(s, 500)
    with gmpy2.context(precision=300):
        total = gmpy2.mpfr(0)
        for n in range(1, 501):
            sign = -1 if (n - big_omega(n)) & 1 else 1
            total += sign / gmpy2.sqrt(gmpy2.mpfr(n))
        assert abs(gmpy2.mpfr(acc.value) - total) < gmpy2.mpfr(2) ** -140


def test_oracle_limit():
    with pytest.raises(OracleLimitError):
        oracle_sum(SumSpec(Family.LIOUVILLE), 10**8)
    # configurable
    oracle_sum(SumSpec(Family.LIOUVILLE), 11, limit=11)


def test_oracle_twisted_and_div_count():
    # twisted d=-4: only odd n contribute, sign (-1)^(n-Omega) * (-4/n)
    acc = oracle_sum(SumSpec(Family.TWISTED, d=-4), 10)
    # n=1: -1*1, n=3: +1*-1, n=5: +1*1, n=7: +1*-1, n=9: -1*1
    assert acc.value == (-1) + (-1) + 1 + (-1) + (-1)
    # div_count m=2 equals count of n<=x with n = Omega(n) (mod 2)
    big, _ = omega_arrays(200)
    expected = sum(1 for n in range(1, 201) if (n - int(big[n])) % 2 == 0)
    assert oracle_sum(SumSpec(Family.DIV_COUNT, m=2), 200).value == expected


def test_half_sum_identity():
    # the alternating sum splits over even/odd: f(2n) = -l(2n) - 2*l(n)
    # where f uses weight (-1)^(n-Omega) and l uses (-1)^Omega
    f = SumSpec(Family.PARITY_LIOUVILLE, 0.0)
    l = SumSpec(Family.LIOUVILLE, 0.0)
    for n in (1, 2, 9, 137, 4021):
        lhs = oracle_sum(f, 2 * n).value
        rhs = -oracle_sum(l, 2 * n).value - 2 * oracle_sum(l, n).value
        assert lhs == rhs


def test_two_omega_oracle():
    # (-2)^Omega: n=1..6 -> 1,-2,-2,4,-2,4
    acc = oracle_sum(SumSpec(Family.TWO_OMEGA), 6)
    assert acc.value == 1 - 2 - 2 + 4 - 2 + 4
    assert acc.pos == 9 and acc.neg == 6
