"""Checkers for the Apery/Franel supercongruences and the results they refine.

The main checkers form ``D = S(pn) - p^j S(n)`` for the relevant weighted
partial sum and compare ``nu_p(D) - nu_p(n^d)`` with the stated exponent,
i.e. the division by ``n^d`` is read p-adically.  Exact divisibility of
``D`` by a power of ``n`` is asserted separately (``integrality_ok``) only
where an earlier result guarantees it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from supercong.exactnum import (
    ValuationResult,
    format_rational,
    is_p_integral,
    nu_p,
    require_prime,
)
from supercong.sequences import (
    APERY_TABLE,
    FRANEL_TABLE,
    bernoulli,
    weighted_sum_S1,
    weighted_sum_S3,
    weighted_sum_T,
)

__all__ = [
    "DEFAULT_BUDGET",
    "NEEDS_P5",
    "BudgetExceeded",
    "CongruenceCase",
    "PrimeTooSmall",
    "THEOREM_CHECKS",
    "ValuationProfile",
    "check_guo_franel_mod_n2",
    "check_guo_franel_p5",
    "check_guozeng_mod_n3",
    "check_guozeng_p6",
    "check_sun_mod_n",
    "check_sun_p5",
    "check_thm1_first",
    "check_thm1_second",
    "check_thm2",
    "dwork_check",
    "estimate_exponent",
    "fit_affine_bound",
    "franel_cube_divisible",
    "max_index",
    "prefetch",
    "run_check",
    "sun_p5_sides",
]

# Largest sequence index a check may touch.  31^3 = 29791 is what the
# p <= 31, n = p^2 corner of the Apery grid needs.
DEFAULT_BUDGET = 40000


class PrimeTooSmall(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"needs sequence index {needed}, budget is {budget}")
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class CongruenceCase:
    """One congruence instance.

    ``required_exponent`` and ``achieved`` are ``None`` for the plain
    divisibility checks (n | S), where only ``integrality_ok`` matters.
    """

    check_id: str
    params: dict
    required_exponent: int | None
    achieved: ValuationResult | None
    integrality_ok: bool
    witness: int | Fraction
    holds: bool = field(init=False)

    def __post_init__(self):
        ok = self.integrality_ok
        if self.required_exponent is not None:
            ok = ok and self.achieved.at_least(self.required_exponent)
        object.__setattr__(self, "holds", ok)

    @property
    def p(self) -> int | None:
        return self.params.get("p")

    @property
    def n(self) -> int | None:
        return self.params.get("n")

    def to_record(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": dict(self.params),
            "required_exponent": self.required_exponent,
            "achieved_valuation": None if self.achieved is None else self.achieved.to_json(),
            "integrality_ok": self.integrality_ok,
            "holds": self.holds,
            "status": "pass" if self.holds else "fail",
            "witness": format_rational(self.witness),
        }


def _prime_at_least_5(p: int) -> None:
    require_prime(p)
    if p < 5:
        raise PrimeTooSmall(f"p = {p}; this congruence needs p >= 5")


def _positive_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _within(index: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if index > budget:
        raise BudgetExceeded(index, budget)


# -- main theorems ----------------------------------------------------------------


def check_thm1_first(p: int, n: int, budget: int | None = None) -> CongruenceCase:
    """(1/n)(S1(pn) - p S1(n)) = 0 mod p^(4 + 3 nu_p(n)), p >= 5."""
    _prime_at_least_5(p)
    _positive_n(n)
    _within(p * n, budget)
    d = weighted_sum_S1(p * n) - p * weighted_sum_S1(n)
    v = nu_p(n, p).value
    return CongruenceCase(
        "thm1a", {"p": p, "n": n}, 4 + 3 * v, nu_p(d, p).shift(-v), d % n == 0, d
    )


def check_thm1_second(p: int, n: int, budget: int | None = None) -> CongruenceCase:
    """(1/n^3)(S3(pn) - p^3 S3(n)) = 0 mod p^(6 + 3 nu_p(n)), p >= 5."""
    _prime_at_least_5(p)
    _positive_n(n)
    _within(p * n, budget)
    d = weighted_sum_S3(p * n) - p**3 * weighted_sum_S3(n)
    v = nu_p(n, p).value
    return CongruenceCase(
        "thm1b", {"p": p, "n": n}, 6 + 3 * v, nu_p(d, p).shift(-3 * v), d % n**3 == 0, d
    )


def check_thm2(p: int, n: int, budget: int | None = None) -> CongruenceCase:
    """(1/n^3)(T(pn) - p^2 T(n)) = 0 mod p^3, any prime p.

    Only ``n^2 | D`` is asserted; whether ``n^3`` divides ``D`` exactly is a
    separate question (see :func:`franel_cube_divisible`).
    """
    require_prime(p)
    _positive_n(n)
    _within(p * n, budget)
    d = weighted_sum_T(p * n) - p**2 * weighted_sum_T(n)
    v = nu_p(n, p).value
    return CongruenceCase("thm2", {"p": p, "n": n}, 3, nu_p(d, p).shift(-3 * v), d % n**2 == 0, d)


def franel_cube_divisible(p: int, n: int) -> bool:
    """Does n^3 divide T(pn) - p^2 T(n) over the integers?"""
    d = weighted_sum_T(p * n) - p**2 * weighted_sum_T(n)
    return d % n**3 == 0


# -- earlier results ----------------------------------------------------------------


def check_sun_mod_n(n: int, x: int) -> CongruenceCase:
    """n | sum_{k<n} (2k+1) A_k(x)."""
    _positive_n(n)
    s = weighted_sum_S1(n, x)
    return CongruenceCase("sun-mod-n", {"n": n, "x": x}, None, None, s % n == 0, s)


def check_guozeng_mod_n3(n: int) -> CongruenceCase:
    """n^3 | sum_{k<n} (2k+1)^3 A_k."""
    _positive_n(n)
    s = weighted_sum_S3(n)
    return CongruenceCase("guozeng-n3", {"n": n}, None, None, s % n**3 == 0, s)


def check_guo_franel_mod_n2(n: int) -> CongruenceCase:
    """n^2 | sum_{k<n} (3k+2)(-1)^k f_k."""
    _positive_n(n)
    s = weighted_sum_T(n)
    return CongruenceCase("guo-n2", {"n": n}, None, None, s % n**2 == 0, s)


def _prime_power_case(check_id: str, p: int, lhs, rhs, e: int) -> CongruenceCase:
    diff = Fraction(lhs) - Fraction(rhs)
    integral = is_p_integral(lhs, p) and is_p_integral(rhs, p)
    witness = diff.numerator if diff.denominator == 1 else diff
    return CongruenceCase(check_id, {"p": p}, e, nu_p(diff, p), integral, witness)


def sun_p5_sides(p: int) -> tuple[int, Fraction]:
    """Both sides of sum_{k<p} (2k+1) A_k = p + (7/6) p^4 B_{p-3} (mod p^5)."""
    return weighted_sum_S1(p), p + Fraction(7, 6) * p**4 * bernoulli(p - 3)


def check_sun_p5(p: int) -> CongruenceCase:
    _prime_at_least_5(p)
    lhs, rhs = sun_p5_sides(p)
    return _prime_power_case("sun-p5", p, lhs, rhs, 5)


def check_guozeng_p6(p: int) -> CongruenceCase:
    """sum_{k<p} (2k+1)^3 A_k = p^3 (mod p^6)."""
    _prime_at_least_5(p)
    return _prime_power_case("guozeng-p6", p, weighted_sum_S3(p), p**3, 6)


def check_guo_franel_p5(p: int) -> CongruenceCase:
    """sum_{k<p} (3k+2)(-1)^k f_k = 2 p^2 (2^p - 1)^2 (mod p^5)."""
    _prime_at_least_5(p)
    return _prime_power_case("guo-p5", p, weighted_sum_T(p), 2 * p**2 * (2**p - 1) ** 2, 5)


# -- generic Dwork-type check ------------------------------------------------------------


def dwork_check(
    a: Callable[[int], int | Fraction],
    p: int,
    gamma: int | Fraction,
    k: int,
    c: int,
    n: int,
) -> CongruenceCase:
    """a(np) = gamma a(n) mod p^(k nu_p(n) + c), for any sequence accessor ``a``."""
    require_prime(p)
    _positive_n(n)
    if k < 0 or c < 0:
        raise ValueError("k and c must be nonnegative")
    diff = Fraction(a(n * p)) - Fraction(gamma) * Fraction(a(n))
    witness = diff.numerator if diff.denominator == 1 else diff
    required = k * nu_p(n, p).value + c
    return CongruenceCase("dwork", {"p": p, "n": n}, required, nu_p(diff, p), True, witness)


# -- registry used by the CLI -----------------------------------------------------------

THEOREM_CHECKS: dict[str, Callable[..., CongruenceCase]] = {
    "thm1a": check_thm1_first,
    "thm1b": check_thm1_second,
    "thm2": check_thm2,
    "sun-mod-n": check_sun_mod_n,
    "sun-p5": check_sun_p5,
    "guozeng-n3": check_guozeng_mod_n3,
    "guozeng-p6": check_guozeng_p6,
    "guo-n2": check_guo_franel_mod_n2,
    "guo-p5": check_guo_franel_p5,
}
NEEDS_P5 = ("thm1a", "thm1b", "sun-p5", "guozeng-p6", "guo-p5")


def run_check(check_id: str, params: dict, budget: int | None = None) -> CongruenceCase:
    fn = THEOREM_CHECKS[check_id]
    if check_id in ("thm1a", "thm1b", "thm2"):
        return fn(budget=budget, **params)
    return fn(**params)


def _indices(check_id: str, params: dict) -> dict[str, list[int]]:
    p, n = params.get("p"), params.get("n")
    if check_id in ("thm1a", "thm1b", "thm2"):
        idx = [n, p * n]
    elif check_id in ("sun-p5", "guozeng-p6", "guo-p5"):
        idx = [p]
    elif check_id in ("guozeng-n3", "guo-n2"):
        idx = [n]
    else:
        return {}
    weight = {"thm1a": "s1", "sun-p5": "s1", "thm1b": "s3", "guozeng-p6": "s3",
              "guozeng-n3": "s3"}.get(check_id, "t")
    return {weight: idx}


def max_index(check_id: str, params: dict) -> int:
    """Largest sequence index a single check reads."""
    got = _indices(check_id, params)
    return max((max(v) for v in got.values()), default=params.get("n", 0))


def prefetch(cases: Iterable[tuple[str, dict]]) -> None:
    """Extend the shared sequence tables to cover every case in one pass each."""
    wanted: dict[str, set[int]] = {"s1": set(), "s3": set(), "t": set()}
    for check_id, params in cases:
        for weight, idx in _indices(check_id, params).items():
            wanted[weight].update(idx)
    if wanted["s1"] or wanted["s3"]:
        # one stream serves both Apery weights
        APERY_TABLE.partial_sums("s1", wanted["s1"] | wanted["s3"])
        APERY_TABLE.partial_sums("s3", wanted["s1"] | wanted["s3"])
    if wanted["t"]:
        FRANEL_TABLE.partial_sums("t", wanted["t"])


# -- empirical exponent profile --------------------------------------------------------


@dataclass
class ValuationProfile:
    """Achieved valuations of one check along n = m p^j.

    Each row is ``(n, nu_p(n), achieved, nu_p(D))``: ``achieved`` is the
    check's own quantity (the valuation after dividing by the power of n),
    ``nu_p(D)`` the valuation of the undivided difference.  ``slope`` and
    ``intercept`` give the lower bound ``achieved >= slope nu_p(n) +
    intercept``; ``raw_slope``/``raw_intercept`` the same for ``nu_p(D)``.
    """

    check_id: str
    p: int
    rows: list[tuple[int, int, ValuationResult, ValuationResult]]
    slope: int | None = None
    intercept: int | None = None
    raw_slope: int | None = None
    raw_intercept: int | None = None

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "p": self.p,
            "rows": [
                {
                    "n": n,
                    "nu_p_n": v,
                    "achieved_valuation": a.to_json(),
                    "difference_valuation": raw.to_json(),
                }
                for n, v, a, raw in self.rows
            ],
            "fitted": {"slope": self.slope, "intercept": self.intercept},
            "fitted_difference": {"slope": self.raw_slope, "intercept": self.raw_intercept},
        }


def fit_affine_bound(
    points: Iterable[tuple[int, ValuationResult]],
) -> tuple[int | None, int | None]:
    """Tight integer bound ``val >= slope * nu + intercept`` over ``(nu, val)`` points.

    The intercept is the smallest valuation among ``nu = 0`` points, so it is
    attained; the slope is the largest integer keeping every ``nu > 0`` point
    on or above the line.  Infinite valuations constrain nothing.
    """
    finite = [(v, a.value) for v, a in points if a.finite]
    base = [a for v, a in finite if v == 0]
    if not base:
        return None, None
    c = min(base)
    above = [(a - c) // v for v, a in finite if v > 0]
    return (min(above) if above else None), c


def estimate_exponent(
    check_id: str,
    p: int,
    base_n: Iterable[int],
    max_r: int,
    budget: int | None = None,
) -> ValuationProfile:
    """Achieved valuation of a main-theorem check over n = m p^j, 0 <= j <= max_r.

    Base values divisible by ``p`` are skipped so that nu_p(n) = j exactly.
    """
    if check_id not in ("thm1a", "thm1b", "thm2"):
        raise KeyError(f"no estimator for {check_id!r}")
    if max_r < 0:
        raise ValueError("max_r must be >= 0")
    base = sorted({m for m in base_n if m >= 1 and m % p})
    if not base:
        raise ValueError("no base value coprime to p")
    ns = sorted(m * p**j for m in base for j in range(max_r + 1))
    _within(p * ns[-1], budget)
    prefetch((check_id, {"p": p, "n": n}) for n in ns)
    rows = []
    for n in ns:
        case = run_check(check_id, {"p": p, "n": n}, budget)
        rows.append((n, nu_p(n, p).value, case.achieved, nu_p(case.witness, p)))
    slope, intercept = fit_affine_bound((v, a) for _, v, a, _ in rows)
    raw_slope, raw_intercept = fit_affine_bound((v, raw) for _, v, _, raw in rows)
    return ValuationProfile(check_id, p, rows, slope, intercept, raw_slope, raw_intercept)

