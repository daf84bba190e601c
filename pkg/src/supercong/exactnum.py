"""Exact arithmetic substrate: binomials, p-adic valuations, congruences.

Everything here works on Python ints and :class:`fractions.Fraction`, so no
value is ever rounded.  A rational is "p-integral" when its reduced
denominator is coprime to ``p``; congruences modulo ``p**e`` are only
meaningful between p-integral rationals.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

__all__ = [
    "INF",
    "DenominatorNotCoprime",
    "ValuationResult",
    "binomial",
    "congruent",
    "format_rational",
    "is_p_integral",
    "is_prime",
    "iverson",
    "nu_p",
    "primes_between",
    "require_prime",
    "residue",
    "restricted_harmonic_sum",
]


class DenominatorNotCoprime(ValueError):
    """An operand of a p-adic congruence is not a p-adic integer."""


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, extended to negative upper index.

    ``k < 0`` gives 0.  For ``n < 0`` the rising-product convention
    ``(-1)**k * C(-n + k - 1, k)`` is used, which is what Jacobsthal-type
    congruences with negative arguments require.

    >>> binomial(5, 2), binomial(-3, 2), binomial(4, 7)
    (10, 6, 0)
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    value = math.comb(-n + k - 1, k)
    return -value if k & 1 else value


@dataclass(frozen=True)
class ValuationResult:
    """p-adic valuation; ``finite=False`` stands for the valuation of zero."""

    finite: bool
    value: int | None = None

    def __post_init__(self):
        if self.finite != (self.value is not None):
            raise ValueError("finite valuations carry a value, infinite ones do not")

    def at_least(self, e: int) -> bool:
        return not self.finite or self.value >= e

    def shift(self, d: int) -> "ValuationResult":
        return self if not self.finite else ValuationResult(True, self.value + d)

    def to_json(self) -> int | str:
        return self.value if self.finite else "inf"

    @classmethod
    def from_json(cls, obj: int | str) -> "ValuationResult":
        if obj == "inf":
            return INF
        return cls(True, int(obj))

    def __str__(self) -> str:
        return str(self.value) if self.finite else "inf"


INF = ValuationResult(False)


def _nu_int(m: int, p: int) -> int:
    # m != 0
    v = 0
    # strip large powers first; valuations of big witnesses can reach dozens
    step, pk = 8, p**8
    while True:
        q, r = divmod(m, pk)
        if r:
            break
        m = q
        v += step
    while True:
        q, r = divmod(m, p)
        if r:
            return v
        m = q
        v += 1


def nu_p(x: Rational, p: int) -> ValuationResult:
    """p-adic order of an integer or rational; ``INF`` for zero."""
    if x == 0:
        return INF
    if isinstance(x, Fraction):
        return ValuationResult(True, _nu_int(x.numerator, p) - _nu_int(x.denominator, p))
    return ValuationResult(True, _nu_int(int(x), p))


def is_p_integral(x: Rational, p: int) -> bool:
    return not isinstance(x, Fraction) or x.denominator % p != 0


def congruent(a: Rational, b: Rational, p: int, e: int) -> bool:
    """True iff ``a == b (mod p**e)`` for p-integral rationals ``a``, ``b``."""
    for operand in (a, b):
        if not is_p_integral(operand, p):
            raise DenominatorNotCoprime(f"{format_rational(operand)} is not {p}-integral")
    if e <= 0:
        return True
    return nu_p(Fraction(a) - Fraction(b), p).at_least(e)


# Deterministic Miller-Rabin: the first 13 prime bases are a proven witness
# set for every n below this bound (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    if n < 0:
        raise ValueError("is_prime expects n >= 0")
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ValueError("is_prime is only certified below 3.3e24")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(lo, 2), hi + 1) if is_prime(q)]


def iverson(assertion: bool) -> int:
    """Iverson bracket; ``iverson(m == n)`` is the Kronecker delta."""
    return 1 if assertion else 0


class _PowerSumPrefix:
    """Memoized prefix sums of k**t over 1 <= k <= hi with p not dividing k."""

    def __init__(self, p: int, t: int):
        self.p = p
        self.t = t
        self.values: list[Fraction] = [Fraction(0)]

    def upto(self, hi: int) -> Fraction:
        vals = self.values
        if hi >= len(vals):
            p, t = self.p, self.t
            acc = vals[-1]
            for k in range(len(vals), hi + 1):
                if k % p:
                    acc += Fraction(k**t) if t > 0 else Fraction(1, k ** (-t))
                vals.append(acc)
        return vals[hi]


_prefix_tables: dict[tuple[int, int], _PowerSumPrefix] = {}
_prefix_lock = threading.Lock()


def restricted_harmonic_sum(lo: int, hi: int, p: int, t: int) -> Fraction:
    """Sum of ``k**t`` for ``lo <= k <= hi`` with ``p`` not dividing ``k``.

    ``t`` may be negative (harmonic-type sums) but not zero.  An empty range
    gives 0.
    """
    if lo < 1:
        raise ValueError("lo must be >= 1")
    if t == 0:
        raise ValueError("t must be nonzero")
    if hi < lo:
        return Fraction(0)
    with _prefix_lock:
        table = _prefix_tables.get((p, t))
        if table is None:
            table = _prefix_tables[(p, t)] = _PowerSumPrefix(p, t)
        return table.upto(hi) - table.upto(lo - 1)


def format_rational(x: Rational) -> str:
    """Decimal string; integers plain, proper fractions as ``num/den``."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def residue(x: Rational, p: int, e: int) -> int:
    """Least nonnegative residue of a p-integral rational modulo ``p**e``."""
    if not is_p_integral(x, p):
        raise DenominatorNotCoprime(f"{format_rational(x)} is not {p}-integral")
    x = Fraction(x)
    mod = p**e
    return x.numerator * pow(x.denominator, -1, mod) % mod
