"""Congruence lemmas as exact, p-adically compared predicates.

Each ``check_*`` function evaluates both sides of one congruence in exact
rationals, takes the p-adic valuation of the difference and compares it to
the stated exponent.  Hypotheses from the lemma statements (``p >= 5``,
parity, ``p - 1`` not dividing the exponent, ...) are checked rather than
assumed: a case that breaks one is still evaluated, but is reported with
status ``hypothesis_violated`` instead of pass/fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from supercong.exactnum import (
    ValuationResult,
    binomial,
    format_rational,
    is_p_integral,
    iverson,
    nu_p,
    require_prime,
    restricted_harmonic_sum,
)

__all__ = [
    "ALL_PRIMES",
    "LARGE_PRIMES",
    "LEMMA_IDS",
    "LemmaCase",
    "check_beukers",
    "check_binom_product_lift",
    "check_block_beukers",
    "check_block_double",
    "check_block_odd",
    "check_block_shift",
    "check_full_block_harmonic",
    "check_half_power_sum",
    "check_half_range_harmonic",
    "check_jacobsthal",
    "check_power_sum",
    "default_grid",
    "run_lemma",
]

PASS = "pass"
FAIL = "fail"
DEGENERATE = "degenerate"
HYPOTHESIS_VIOLATED = "hypothesis_violated"


@dataclass(frozen=True)
class LemmaCase:
    lemma_id: str
    params: dict
    required_exponent: int
    achieved: ValuationResult | None
    witness: Fraction | None
    integral: bool = True
    hypothesis: str | None = None
    status: str = field(init=False)

    def __post_init__(self):
        if self.achieved is None:
            status = DEGENERATE
        elif self.hypothesis is not None:
            status = HYPOTHESIS_VIOLATED
        elif self.holds_at(self.required_exponent):
            status = PASS
        else:
            status = FAIL
        object.__setattr__(self, "status", status)

    @property
    def holds(self) -> bool:
        return self.status == PASS

    def holds_at(self, e: int) -> bool:
        """Would the congruence hold if only ``p**e`` were required?"""
        return self.achieved is not None and self.integral and self.achieved.at_least(e)

    @property
    def check_id(self) -> str:
        return f"lemma:{self.lemma_id}"

    def to_record(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": dict(self.params),
            "required_exponent": self.required_exponent,
            "achieved_valuation": None if self.achieved is None else self.achieved.to_json(),
            "integrality_ok": self.integral,
            "holds": self.holds,
            "status": self.status,
            "witness": None if self.witness is None else format_rational(self.witness),
        }


def _case(lemma_id, params, required, diff, p, hypothesis=None, integral=True) -> LemmaCase:
    diff = Fraction(diff)
    return LemmaCase(
        lemma_id,
        params,
        max(required, 0),
        nu_p(diff, p),
        diff,
        integral and is_p_integral(diff, p),
        hypothesis,
    )


def _p_at_least_5(p: int) -> str | None:
    return None if p >= 5 else "requires p >= 5"


def _positive(**kw) -> None:
    for name, v in kw.items():
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# -- binomial congruences -------------------------------------------------------


def check_beukers(p: int, r: int, n: int, k: int) -> LemmaCase:
    """C(p^r n - 1, k) vs C(p^(r-1) n - 1, k//p) (-1)^(k - k//p) (1 - n p^r H), mod p^(2r).

    ``H`` is the sum of 1/j over 1 <= j <= k with p not dividing j.  Any
    k >= 1 is accepted; past p^r n - 1 both binomials vanish.
    """
    require_prime(p)
    _positive(r=r, n=n, k=k)
    q = k // p
    lhs = binomial(p**r * n - 1, k)
    harmonic = restricted_harmonic_sum(1, k, p, -1)
    rhs = binomial(p ** (r - 1) * n - 1, q) * _sign(k - q) * (1 - n * p**r * harmonic)
    return _case("beukers", {"p": p, "r": r, "n": n, "k": k}, 2 * r, lhs - rhs, p)


def check_jacobsthal(p: int, r: int, s: int, a: int, b: int) -> LemmaCase:
    """C(p^r a, p^s b) / C(p^(r-1) a, p^(s-1) b) vs (-1)^((p-1) p^(s-1) b).

    The modulus exponent is r + s + min(r, s) - [p=3] - 2[p=2], floored at
    0.  A vanishing denominator gives a degenerate case.
    """
    require_prime(p)
    _positive(r=r, s=s)
    params = {"p": p, "r": r, "s": s, "a": a, "b": b}
    required = max(0, r + s + min(r, s) - iverson(p == 3) - 2 * iverson(p == 2))
    den = binomial(p ** (r - 1) * a, p ** (s - 1) * b)
    if den == 0:
        return LemmaCase("jacobsthal", params, required, None, None)
    ratio = Fraction(binomial(p**r * a, p**s * b), den)
    sign = _sign((p - 1) * p ** (s - 1) * b)
    return _case("jacobsthal", params, required, ratio - sign, p, integral=is_p_integral(ratio, p))


def check_binom_product_lift(p: int, r: int, s: int, m: int, k: int) -> LemmaCase:
    """Lifting C(N-1,k) C(N+k,k), N = p^(r-s) m, one p-power down, mod p^(4(r-s))."""
    require_prime(p)
    _positive(r=r, m=m, k=k)
    if not 0 <= s <= r - 1:
        raise ValueError("s must lie in [0, r-1]")
    big = p ** (r - s) * m
    if k > big - 1:
        raise ValueError("k must be at most p^(r-s) m - 1")
    hyp = _p_at_least_5(p) or (None if m % p else "requires p not dividing m")
    small = p ** (r - s - 1) * m
    q = k // p
    lhs = binomial(big - 1, k) * binomial(big + k, k)
    correction = p ** (2 * r - 2 * s) * m**2 * restricted_harmonic_sum(1, k, p, -2)
    rhs = binomial(small - 1, q) * binomial(small + q, q) * _sign(k - q) * (1 - correction)
    params = {"p": p, "r": r, "s": s, "m": m, "k": k}
    return _case("binom-lift", params, 4 * (r - s), lhs - rhs, p, hyp)


# -- restricted power sums ------------------------------------------------------


def check_power_sum(p: int, r: int, n: int) -> LemmaCase:
    """sum of k^n over 1 <= k <= p^r - 1, p not dividing k, vanishes mod p^r.

    Needs p - 1 not dividing n; ``n`` may be negative.
    """
    require_prime(p)
    _positive(r=r)
    if n == 0:
        raise ValueError("exponent n must be nonzero")
    hyp = "requires p-1 not dividing n" if n % (p - 1) == 0 else None
    total = restricted_harmonic_sum(1, p**r - 1, p, n)
    return _case("power-sum", {"p": p, "r": r, "n": n}, r, total, p, hyp)


def check_half_power_sum(p: int, r: int, n: int) -> LemmaCase:
    """sum of 1/k^n over 1 <= k <= (p^r-1)/2, p not dividing k, vanishes mod p^r."""
    require_prime(p)
    _positive(r=r)
    if n == 0:
        raise ValueError("exponent n must be nonzero")
    hyp = _p_at_least_5(p)
    if n % 2:
        hyp = hyp or "requires n even"
    if n % (p - 1) == 0:
        hyp = hyp or "requires p-1 not dividing n"
    total = restricted_harmonic_sum(1, (p**r - 1) // 2, p, -n)
    return _case("half-power-sum", {"p": p, "r": r, "n": n}, r, total, p, hyp)


# -- block sums over floor(k / p^r) = l -------------------------------------------


def _block(p: int, r: int, l: int) -> range:
    if l < 0:
        raise ValueError("l must be >= 0")
    return range(l * p**r, (l + 1) * p**r)


def check_block_odd(p: int, r: int, l: int) -> LemmaCase:
    """sum of 1/(2k+1) over the block, p not dividing 2k+1, vanishes mod p^(2r)."""
    require_prime(p)
    _positive(r=r)
    total = sum(Fraction(1, 2 * k + 1) for k in _block(p, r, l) if (2 * k + 1) % p)
    return _case("block-odd", {"p": p, "r": r, "l": l}, 2 * r, total, p, _p_at_least_5(p))


def check_block_shift(p: int, r: int, l: int) -> LemmaCase:
    """sum of 1/(k+1) over the block, p not dividing k+1, vanishes mod p^(2r)."""
    require_prime(p)
    _positive(r=r)
    total = sum(Fraction(1, k + 1) for k in _block(p, r, l) if (k + 1) % p)
    return _case("block-shift", {"p": p, "r": r, "l": l}, 2 * r, total, p, _p_at_least_5(p))


def check_block_double(p: int, r: int, l: int) -> LemmaCase:
    require_prime(p)
    _positive(r=r)
    total = sum(restricted_harmonic_sum(1, k, p, -2) for k in _block(p, r, l))
    return _case("block-double", {"p": p, "r": r, "l": l}, 2 * r, total, p, _p_at_least_5(p))


def check_block_beukers(p: int, r: int, l: int) -> LemmaCase:
    """sum of 1/k over the block, p not dividing k, vanishes mod p^(2r).

    Fails for p = 3 (already at l = 0: 1 + 1/2 = 3/2), so p >= 5 is
    enforced as a hypothesis.
    """
    require_prime(p)
    _positive(r=r)
    blk = _block(p, r, l)
    total = restricted_harmonic_sum(max(blk.start, 1), blk.stop - 1, p, -1)
    return _case("block-beukers", {"p": p, "r": r, "l": l}, 2 * r, total, p, _p_at_least_5(p))


def check_half_range_harmonic(p: int, s: int, l: int) -> LemmaCase:
    """sum of 1/j^2 for j <= l p^s + (p^s - 1)/2, p not dividing j, vanishes mod p^s."""
    require_prime(p)
    _positive(s=s)
    if l < 0:
        raise ValueError("l must be >= 0")
    total = restricted_harmonic_sum(1, l * p**s + (p**s - 1) // 2, p, -2)
    return _case("half-range-harmonic", {"p": p, "s": s, "l": l}, s, total, p, _p_at_least_5(p))


def check_full_block_harmonic(p: int, s: int, l: int) -> LemmaCase:
    """sum of 1/j^2 for j <= p^s l + p^s - 1, p not dividing j, vanishes mod p^s."""
    require_prime(p)
    _positive(s=s)
    if l < 0:
        raise ValueError("l must be >= 0")
    total = restricted_harmonic_sum(1, p**s * (l + 1) - 1, p, -2)
    return _case("full-block-harmonic", {"p": p, "s": s, "l": l}, s, total, p, _p_at_least_5(p))


_CHECKS = {
    "beukers": check_beukers,
    "jacobsthal": check_jacobsthal,
    "power-sum": check_power_sum,
    "half-power-sum": check_half_power_sum,
    "block-odd": check_block_odd,
    "block-shift": check_block_shift,
    "block-double": check_block_double,
    "block-beukers": check_block_beukers,
    "binom-lift": check_binom_product_lift,
    "half-range-harmonic": check_half_range_harmonic,
    "full-block-harmonic": check_full_block_harmonic,
}
LEMMA_IDS = tuple(_CHECKS)


def run_lemma(lemma_id: str, params: dict) -> LemmaCase:
    return _CHECKS[lemma_id](**params)


ALL_PRIMES = (2, 3, 5, 7, 11, 13)
LARGE_PRIMES = (5, 7, 11, 13)


def default_grid(lemma_id: str, **sel) -> Iterator[dict]:
    """Parameter dicts for a lemma's grid.

    ``sel`` may override any axis with an iterable of values (``primes``,
    ``r``, ``s``, ``n``, ``k``, ``a``, ``b``, ``l``, ``m``).  Axes that depend
    on others (the ``k`` range of the binomial lemmas) default to their full
    admissible range.
    """

    def axis(name, default):
        got = sel.get(name)
        return tuple(default if got is None else got)

    small_p = lemma_id in ("beukers", "jacobsthal", "power-sum")
    primes = axis("primes", ALL_PRIMES if small_p else LARGE_PRIMES)
    rs = axis("r", (1, 2))
    if lemma_id == "beukers":
        for p in primes:
            for r in rs:
                for n in axis("n", (1, 2, 3)):
                    top = p**r * n - 1
                    for k in axis("k", range(1, top + 1)):
                        if k >= 1:
                            yield {"p": p, "r": r, "n": n, "k": k}
    elif lemma_id == "jacobsthal":
        for p in primes:
            for r in rs:
                for s in axis("s", (1, 2)):
                    for a in axis("a", range(-3, 4)):
                        for b in axis("b", range(-3, 4)):
                            yield {"p": p, "r": r, "s": s, "a": a, "b": b}
    elif lemma_id in ("power-sum", "half-power-sum"):
        default_n = range(-6, 7) if lemma_id == "power-sum" else range(-6, 7, 2)
        for p in primes:
            for r in rs:
                for n in axis("n", default_n):
                    if n != 0:
                        yield {"p": p, "r": r, "n": n}
    elif lemma_id == "binom-lift":
        for p in primes:
            for r in rs:
                for s in axis("s", range(r)):
                    if not 0 <= s < r:
                        continue
                    for m in axis("m", (1, 2, 3)):
                        top = p ** (r - s) * m - 1
                        for k in axis("k", range(1, top + 1)):
                            if 1 <= k <= top:
                                yield {"p": p, "r": r, "s": s, "m": m, "k": k}
    elif lemma_id in ("half-range-harmonic", "full-block-harmonic"):
        for p in primes:
            for s in axis("s", (1, 2)):
                for l in axis("l", range(6)):
                    yield {"p": p, "s": s, "l": l}
    elif lemma_id in _CHECKS:
        for p in primes:
            for r in rs:
                for l in axis("l", range(6)):
                    yield {"p": p, "r": r, "l": l}
    else:
        raise KeyError(lemma_id)

