"""Exact checks of the closed-form identities behind the supercongruences.

Every printed form is evaluated independently in exact rationals (divisions
by ``2k+1``, ``k+1`` and ``k**3`` included) and an identity holds only when
all forms agree with the left-hand side at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from supercong.exactnum import binomial, format_rational
from supercong.sequences import (
    apery,
    apery_poly,
    franel,
)

__all__ = [
    "IDENTITY_IDS",
    "IdentityCheck",
    "check_guo_franel_identity",
    "check_guo_zeng_identity",
    "check_sun_identity",
]

IDENTITY_IDS = ("sun", "guo-zeng", "guo-franel")


@dataclass(frozen=True)
class IdentityCheck:
    identity_id: str
    n: int
    x: int | None
    lhs: Fraction
    rhs_values: tuple[Fraction, ...]
    integral: bool = True
    holds: bool = field(init=False)

    def __post_init__(self):
        ok = all(v == self.lhs for v in self.rhs_values) and self.integral
        object.__setattr__(self, "holds", ok)

    @property
    def check_id(self) -> str:
        return f"identity:{self.identity_id}"

    @property
    def params(self) -> dict:
        out = {"n": self.n}
        if self.x is not None:
            out["x"] = self.x
        return out

    def to_record(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": self.params,
            "required_exponent": None,
            "achieved_valuation": None,
            "integrality_ok": self.integral,
            "holds": self.holds,
            "status": "pass" if self.holds else "fail",
            "witness": format_rational(self.lhs),
        }


def _require_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def check_sun_identity(n: int, x: int) -> IdentityCheck:
    """(1/n) sum_{k<n} (2k+1) A_k(x) against its two binomial-sum forms.

    Also requires the left side to be an integer (n divides the sum).
    """
    _require_n(n)
    lhs = Fraction(sum((2 * k + 1) * apery_poly(k, x) for k in range(n)), n)
    middle = sum(
        Fraction(
            binomial(n - 1, k)
            * binomial(n + k, k)
            * binomial(n + k, 2 * k + 1)
            * binomial(2 * k, k)
            * x**k
        )
        for k in range(n)
    )
    right = sum(
        Fraction(n, 2 * k + 1) * binomial(n - 1, k) ** 2 * binomial(n + k, k) ** 2 * x**k
        for k in range(n)
    )
    return IdentityCheck("sun", n, x, lhs, (middle, right), lhs.denominator == 1)


def check_guo_zeng_identity(n: int) -> IdentityCheck:
    """sum_{k<n} (2k+1)^3 A_k against its two n^2-weighted forms."""
    _require_n(n)
    lhs = Fraction(sum((2 * k + 1) ** 3 * apery(k) for k in range(n)))
    middle = n**2 * sum(
        Fraction(
            binomial(n + k, k)
            * binomial(n - 1, k) ** 2
            * (2 * n * binomial(n + k, k + 1) - binomial(n + k, k))
        )
        for k in range(n)
    )
    right = n**2 * sum(
        binomial(n + k, k) ** 2 * binomial(n - 1, k) ** 2 * (Fraction(2 * n**2, k + 1) - 1)
        for k in range(n)
    )
    return IdentityCheck("guo-zeng", n, None, lhs, (middle, right))


def check_guo_franel_identity(n: int) -> IdentityCheck:
    """((-1)^n / n^2) sum_{k<n} (3k+2)(-1)^k f_k = n sum_k C(n-1,k-1)^3 (n^2-4k^2)/k^3 + 1."""
    _require_n(n)
    t = sum((3 * k + 2) * (-1) ** k * franel(k) for k in range(n))
    lhs = Fraction((-1) ** n * t, n**2)
    rhs = (
        n
        * sum(
            binomial(n - 1, k - 1) ** 3 * Fraction(n**2 - 4 * k**2, k**3)
            for k in range(1, n + 1)
        )
        + 1
    )
    return IdentityCheck("guo-franel", n, None, lhs, (rhs,))
