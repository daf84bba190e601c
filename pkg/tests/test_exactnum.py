from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from supercong.exactnum import (
    INF,
    DenominatorNotCoprime,
    ValuationResult,
    binomial,
    congruent,
    format_rational,
    is_prime,
    iverson,
    nu_p,
    primes_between,
    require_prime,
    residue,
    restricted_harmonic_sum,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def falling_binomial(n, k):
    # n (n-1) ... (n-k+1) / k!, valid for any integer n
    if k < 0:
        return 0
    return prod(n - i for i in range(k)) // factorial(k)


def naive_nu(m, p):
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def trial_division_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@pytest.mark.parametrize("n,k,want", [(5, 2, 10), (7, 0, 1), (-3, 2, 6), (4, 7, 0), (3, -1, 0)])
def test_binomial_values(n, k, want):
    assert binomial(n, k) == want


@given(st.integers(-60, 60), st.integers(-3, 40))
def test_binomial_matches_falling_product(n, k):
    assert binomial(n, k) == falling_binomial(n, k)


@given(st.integers(1, 80), st.integers(1, 80))
def test_pascal_rule(n, k):
    assert binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1)


@given(st.integers(0, 120), st.integers(0, 120))
def test_binomial_symmetry(n, k):
    if k <= n:
        assert binomial(n, k) == binomial(n, n - k)


def test_nu_p_examples():
    assert nu_p(50, 5) == ValuationResult(True, 2)
    assert nu_p(Fraction(49, 6), 5).value == 0
    assert nu_p(0, 7) is INF
    assert nu_p(Fraction(-25, 6), 5).value == 2
    assert nu_p(Fraction(3, 50), 5).value == -2


@given(st.integers(1, 10**30), st.integers(0, 60), st.sampled_from(SMALL_PRIMES))
def test_nu_p_of_scaled_integer(u, e, p):
    m = u * p**e
    assert nu_p(m, p).value == naive_nu(m, p)
    assert nu_p(-m, p).value == naive_nu(m, p)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6), st.sampled_from(SMALL_PRIMES))
def test_nu_p_rational_is_difference(a, b, p):
    x = Fraction(a, b)
    assert nu_p(x, p).value == naive_nu(x.numerator, p) - naive_nu(x.denominator, p)


@given(st.integers(-10**9, 10**9).filter(bool), st.integers(-10**9, 10**9).filter(bool),
       st.sampled_from(SMALL_PRIMES))
def test_nu_p_is_additive(a, b, p):
    assert nu_p(a * b, p).value == nu_p(a, p).value + nu_p(b, p).value


def test_valuation_result_behaviour():
    v = ValuationResult(True, 3)
    assert v.at_least(3) and not v.at_least(4)
    assert INF.at_least(10**9)
    assert v.shift(-2).value == 1 and INF.shift(5) is INF
    assert ValuationResult.from_json(v.to_json()) == v
    assert ValuationResult.from_json(INF.to_json()) is INF
    assert str(INF) == "inf"
    with pytest.raises(ValueError):
        ValuationResult(True, None)


def test_congruent_examples():
    assert congruent(4, Fraction(49, 6), 5, 2)
    assert congruent(Fraction(7, 3), Fraction(7, 3), 5, 50)
    assert not congruent(1, 2, 5, 1)
    with pytest.raises(DenominatorNotCoprime):
        congruent(Fraction(1, 5), 0, 5, 1)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from(SMALL_PRIMES),
       st.integers(1, 6))
def test_congruent_matches_integer_modulus(a, b, p, e):
    assert congruent(a, b, p, e) == ((a - b) % p**e == 0)


@pytest.mark.parametrize("n,want", [(5, True), (1, False), (91, False), (2, True), (0, False)])
def test_is_prime_examples(n, want):
    assert is_prime(n) is want


def test_is_prime_agrees_with_trial_division():
    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if trial_division_prime(n)]
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    assert primes_between(5, 31) == [5, 7, 11, 13, 17, 19, 23, 29, 31]
    with pytest.raises(ValueError):
        require_prime(9)


def test_iverson():
    assert iverson(True) == 1 and iverson(False) == 0


@pytest.mark.parametrize("lo,hi,p,t,want", [
    (1, 8, 3, 1, 27),
    (1, 0, 5, -2, 0),
    (1, 4, 5, -1, Fraction(25, 12)),
])
def test_restricted_harmonic_examples(lo, hi, p, t, want):
    assert restricted_harmonic_sum(lo, hi, p, t) == want


@given(st.integers(1, 2000), st.integers(0, 300), st.sampled_from(SMALL_PRIMES),
       st.sampled_from([-3, -2, -1, 1, 2]))
def test_restricted_harmonic_matches_direct_sum(lo, width, p, t):
    hi = min(lo + width, 2000)
    direct = sum((Fraction(k) ** t for k in range(lo, hi + 1) if k % p), Fraction(0))
    assert restricted_harmonic_sum(lo, hi, p, t) == direct


def test_restricted_harmonic_rejects_bad_arguments():
    with pytest.raises(ValueError):
        restricted_harmonic_sum(0, 3, 5, 1)
    with pytest.raises(ValueError):
        restricted_harmonic_sum(1, 3, 5, 0)


def test_format_and_residue():
    assert format_rational(Fraction(-25, 6)) == "-25/6"
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(12) == "12"
    assert residue(Fraction(1, 36), 5, 5) * 36 % 3125 == 1
    with pytest.raises(DenominatorNotCoprime):
        residue(Fraction(1, 5), 5, 2)
