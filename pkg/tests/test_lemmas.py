from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from supercong.exactnum import binomial
from supercong.lemmas import (
    LEMMA_IDS,
    check_beukers,
    check_binom_product_lift,
    check_block_beukers,
    check_block_double,
    check_block_odd,
    check_block_shift,
    check_full_block_harmonic,
    check_half_power_sum,
    check_half_range_harmonic,
    check_jacobsthal,
    check_power_sum,
    default_grid,
    run_lemma,
)


def ach(case):
    return case.achieved.value


def test_beukers():
    c = check_beukers(5, 1, 1, 3)
    assert c.witness == Fraction(-25, 6) and ach(c) == 2 and c.holds
    assert check_beukers(5, 1, 1, 5).holds
    c = check_beukers(7, 2, 2, 10)
    assert c.required_exponent == 4 and c.holds
    with pytest.raises(ValueError):
        check_beukers(5, 1, 1, 0)


def test_jacobsthal():
    c = check_jacobsthal(5, 2, 1, 1, 1)
    assert c.witness == 10625 and ach(c) == 4 and c.holds
    assert Fraction(binomial(25, 5), binomial(5, 1)) == 10626
    c = check_jacobsthal(5, 1, 1, 2, 1)
    assert c.witness == 125 and ach(c) == 3 and c.required_exponent == 3
    c = check_jacobsthal(2, 2, 2, 1, 1)
    assert c.required_exponent == 4 and c.holds
    assert check_jacobsthal(3, 1, 1, 1, 1).required_exponent == 2


def test_jacobsthal_zero_denominator_is_degenerate():
    c = check_jacobsthal(5, 1, 1, 0, 1)
    assert c.status == "degenerate" and not c.holds
    assert c.to_record()["achieved_valuation"] is None


def test_power_sums():
    c = check_power_sum(3, 2, 1)
    assert c.witness == 27 and ach(c) == 3 and c.holds
    assert check_power_sum(5, 1, -2).holds
    assert check_power_sum(5, 1, 4).status == "hypothesis_violated"
    c = check_half_power_sum(5, 1, 2)
    assert c.witness == Fraction(5, 4) and ach(c) == 1 and c.holds
    assert check_half_power_sum(7, 1, 2).holds
    c = check_half_power_sum(5, 2, 2)
    assert c.required_exponent == 2 and c.holds
    assert check_half_power_sum(5, 1, 3).status == "hypothesis_violated"


def test_block_sums():
    c = check_block_odd(5, 1, 0)
    assert c.witness == Fraction(100, 63) and ach(c) == 2 and c.holds
    assert check_block_odd(5, 1, 1).holds
    assert check_block_odd(7, 2, 3).required_exponent == 4
    assert check_block_odd(7, 2, 3).holds

    c = check_block_shift(5, 1, 0)
    assert c.witness == Fraction(25, 12) and c.holds
    assert check_block_shift(5, 1, 2).holds and check_block_shift(11, 1, 0).holds

    c = check_block_double(5, 1, 0)
    assert c.witness == 1 + Fraction(5, 4) + Fraction(49, 36) + Fraction(205, 144)
    assert ach(c) >= 2 and c.holds
    assert check_block_double(7, 1, 1).holds and check_block_double(5, 2, 0).holds

    c = check_block_beukers(5, 1, 1)
    assert c.witness == Fraction(1, 6) + Fraction(1, 7) + Fraction(1, 8) + Fraction(1, 9)
    assert c.holds and check_block_beukers(5, 2, 2).holds


def test_block_beukers_small_prime_fails_numerically():
    c = check_block_beukers(3, 1, 0)
    assert c.witness == Fraction(3, 2) and ach(c) == 1
    assert c.status == "hypothesis_violated"
    assert not c.holds_at(2)


def test_lift_and_harmonic():
    assert check_binom_product_lift(5, 1, 0, 1, 2).holds
    assert check_binom_product_lift(5, 2, 1, 1, 3).holds
    c = check_binom_product_lift(7, 2, 0, 2, 10)
    assert c.required_exponent == 8 and c.holds

    c = check_half_range_harmonic(5, 1, 0)
    assert c.witness == Fraction(5, 4) and ach(c) == 1 and c.holds
    assert check_half_range_harmonic(5, 1, 1).holds
    assert check_half_range_harmonic(7, 2, 0).required_exponent == 2

    c = check_full_block_harmonic(5, 1, 0)
    assert c.witness == Fraction(205, 144) and c.holds
    assert check_full_block_harmonic(5, 1, 2).holds and check_full_block_harmonic(11, 1, 0).holds


@pytest.mark.parametrize("lemma_id", LEMMA_IDS)
def test_default_grid_has_no_failures(lemma_id):
    cases = [run_lemma(lemma_id, prm) for prm in default_grid(lemma_id)]
    assert cases
    assert not [c.params for c in cases if c.status == "fail"]
    assert any(c.status == "pass" for c in cases)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(1, 2), st.integers(1, 3), st.data())
def test_beukers_property(p, r, n, data):
    k = data.draw(st.integers(1, p**r * n - 1))
    assert check_beukers(p, r, n, k).holds


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(1, 2), st.integers(1, 2),
       st.integers(-4, 4), st.integers(-4, 4))
def test_jacobsthal_property(p, r, s, a, b):
    c = check_jacobsthal(p, r, s, a, b)
    assert c.status in ("pass", "degenerate")


def test_records_carry_exact_witness():
    rec = check_beukers(5, 1, 1, 3).to_record()
    assert rec["check_id"] == "lemma:beukers"
    assert rec["witness"] == "-25/6" and rec["achieved_valuation"] == 2
    assert rec["params"] == {"p": 5, "r": 1, "n": 1, "k": 3}
