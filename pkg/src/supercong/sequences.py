"""Apery, Franel and Bernoulli numbers, and the weighted partial sums.

Single values (:func:`apery`, :func:`franel`, :func:`apery_poly`) are
evaluated straight from their defining binomial sums.  Bulk work goes
through :class:`RecurrenceTable`, which generates A_n and f_n from their
classical three-term recurrences; the two routes are cross-checked in the
test suite and by :func:`spot_check`.

Weighted partial sums use the convention ``S(n) = sum_{k<n} w(k) a_k`` so
``S(0) == 0``:

* ``S1(n, x) = sum_{k<n} (2k+1) A_k(x)``
* ``S3(n)    = sum_{k<n} (2k+1)**3 A_k``
* ``T(n)     = sum_{k<n} (3k+2) (-1)**k f_k``
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from supercong.exactnum import binomial

__all__ = [
    "APERY_TABLE",
    "FRANEL_TABLE",
    "RecurrenceTable",
    "apery",
    "apery_alt",
    "apery_poly",
    "apery_recurrence_step",
    "bernoulli",
    "franel",
    "franel_recurrence_step",
    "spot_check",
    "weighted_sum_S1",
    "weighted_sum_S3",
    "weighted_sum_T",
]


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")


def apery(n: int) -> int:
    """A_n = sum_k C(n,k)^2 C(n+k,k)^2."""
    _check_index(n)
    return sum((binomial(n, k) * binomial(n + k, k)) ** 2 for k in range(n + 1))


def apery_alt(n: int) -> int:
    """A_n through the second form, sum_k C(n+k,2k)^2 C(2k,k)^2."""
    _check_index(n)
    return sum((binomial(n + k, 2 * k) * binomial(2 * k, k)) ** 2 for k in range(n + 1))


@lru_cache(maxsize=1024)
def _apery_coefficients(n: int) -> tuple[int, ...]:
    return tuple((binomial(n, k) * binomial(n + k, k)) ** 2 for k in range(n + 1))


def apery_poly(n: int, x: int) -> int:
    """Apery polynomial A_n(x) = sum_k C(n,k)^2 C(n+k,k)^2 x^k."""
    _check_index(n)
    acc = 0
    for c in reversed(_apery_coefficients(n)):
        acc = acc * x + c
    return acc


def franel(n: int) -> int:
    """f_n = sum_k C(n,k)^3."""
    _check_index(n)
    return sum(binomial(n, k) ** 3 for k in range(n + 1))


# -- Bernoulli numbers ---------------------------------------------------------

_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """B_n from B_0 = 1 and sum_{k<m} C(m,k) B_k = 0 for m >= 2.

    The relation for ``m`` is solved for its last unknown B_{m-1}, so
    B_1 = -1/2 comes out of the ``m = 2`` instance.
    """
    _check_index(n)
    with _bernoulli_lock:
        while len(_bernoulli) <= n:
            j = len(_bernoulli)  # solve the m = j + 1 relation for B_j
            m = j + 1
            s = sum(binomial(m, k) * b for k, b in enumerate(_bernoulli))
            _bernoulli.append(-s / m)
        return _bernoulli[n]


# -- recurrence-backed tables --------------------------------------------------


def apery_recurrence_step(n: int, a2: int, a1: int) -> int:
    """A_n from A_{n-2}, A_{n-1} (Apery's recurrence, n >= 2)."""
    m = n - 1
    num = (34 * m**3 + 51 * m**2 + 27 * m + 5) * a1 - m**3 * a2
    q, r = divmod(num, n**3)
    if r:
        raise ArithmeticError(f"Apery recurrence not integral at n={n}")
    return q


def franel_recurrence_step(n: int, f2: int, f1: int) -> int:
    """f_n from f_{n-2}, f_{n-1} (Franel's recurrence, n >= 2)."""
    m = n - 1
    num = (7 * m**2 + 7 * m + 2) * f1 + 8 * m**2 * f2
    q, r = divmod(num, n**2)
    if r:
        raise ArithmeticError(f"Franel recurrence not integral at n={n}")
    return q


class RecurrenceTable:
    """A sequence generated by a three-term recurrence, with weighted sums.

    Values and prefix sums are kept in memory up to ``keep_limit``.  Beyond
    that, partial sums are produced by streaming the recurrence from the
    checkpoint at ``keep_limit`` and remembering only the requested indices,
    so checking a 30000-term sum never holds 30000 huge integers at once.
    """

    def __init__(
        self,
        name: str,
        initial: tuple[int, int],
        step: Callable[[int, int, int], int],
        weights: dict[str, Callable[[int], int]],
        keep_limit: int = 4096,
    ):
        if keep_limit < 2:
            raise ValueError("keep_limit must be >= 2")
        self.name = name
        self.step = step
        self.weights = weights
        self.keep_limit = keep_limit
        self.values: list[int] = list(initial)
        self.prefix: dict[str, list[int]] = {w: [0] for w in weights}
        self.memo: dict[str, dict[int, int]] = {w: {} for w in weights}
        self._lock = threading.RLock()
        self._extend_prefix()

    def _extend_prefix(self) -> None:
        for w, fn in self.weights.items():
            pre = self.prefix[w]
            for k in range(len(pre) - 1, len(self.values)):
                pre.append(pre[-1] + fn(k) * self.values[k])

    def ensure(self, upto: int) -> None:
        """Materialize values up to ``min(upto, keep_limit)``."""
        with self._lock:
            vals = self.values
            for n in range(len(vals), min(upto, self.keep_limit) + 1):
                vals.append(self.step(n, vals[-2], vals[-1]))
            self._extend_prefix()

    def value(self, n: int) -> int:
        _check_index(n)
        with self._lock:
            if n <= self.keep_limit:
                self.ensure(n)
                return self.values[n]
            return self._stream(n, {}, want_value=True)

    def values_between(self, lo: int, hi: int) -> list[int]:
        """Values at ``lo..hi`` inclusive, streaming past the checkpoint once."""
        with self._lock:
            self.ensure(hi)
            out = self.values[lo : hi + 1]
            if hi > self.keep_limit:
                a2, a1 = self.values[-2], self.values[-1]
                for n in range(len(self.values), hi + 1):
                    a2, a1 = a1, self.step(n, a2, a1)
                    if n >= lo:
                        out.append(a1)
            return out

    def partial_sum(self, weight: str, n: int) -> int:
        return self.partial_sums(weight, [n])[n]

    def partial_sums(self, weight: str, indices: Iterable[int]) -> dict[int, int]:
        """``{n: sum_{k<n} w(k) a_k}`` for every requested ``n``."""
        indices = sorted(set(indices))
        if indices and indices[0] < 0:
            raise ValueError("partial sums are indexed from 0")
        with self._lock:
            out: dict[int, int] = {}
            far: list[int] = []
            memo = self.memo[weight]
            for n in indices:
                if n <= self.keep_limit + 1:
                    self.ensure(n - 1)
                    out[n] = self.prefix[weight][n]
                elif n in memo:
                    out[n] = memo[n]
                else:
                    far.append(n)
            if far:
                self._stream(far[-1], {n: None for n in far})
                for n in far:
                    out[n] = memo[n]
            return out

    def _stream(self, stop: int, targets: dict, want_value: bool = False) -> int:
        # Resume at the in-memory checkpoint; record running sums at targets.
        self.ensure(self.keep_limit)
        a2, a1 = self.values[-2], self.values[-1]
        start = len(self.values)
        sums = {w: self.prefix[w][-1] for w in self.weights}
        for n in range(start, stop + 1):
            if n in targets:
                for w in self.weights:
                    self.memo[w][n] = sums[w]
            a2, a1 = a1, self.step(n, a2, a1)
            for w, fn in self.weights.items():
                sums[w] += fn(n) * a1
        return a1 if want_value else 0

    def reset(self) -> None:
        with self._lock:
            del self.values[2:]
            for w in self.weights:
                del self.prefix[w][1:]
                self.memo[w].clear()
            self._extend_prefix()


APERY_TABLE = RecurrenceTable(
    "apery",
    (1, 5),
    apery_recurrence_step,
    {"s1": lambda k: 2 * k + 1, "s3": lambda k: (2 * k + 1) ** 3},
)
FRANEL_TABLE = RecurrenceTable(
    "franel",
    (1, 2),
    franel_recurrence_step,
    {"t": lambda k: -(3 * k + 2) if k & 1 else 3 * k + 2},
)


_poly_prefix: dict[int, list[int]] = {}
_poly_lock = threading.Lock()


def weighted_sum_S1(n: int, x: int = 1) -> int:
    """sum_{k<n} (2k+1) A_k(x)."""
    _check_index(n)
    if x == 1:
        return APERY_TABLE.partial_sum("s1", n)
    with _poly_lock:
        pre = _poly_prefix.setdefault(x, [0])
        for k in range(len(pre) - 1, n):
            pre.append(pre[-1] + (2 * k + 1) * apery_poly(k, x))
        return pre[n]


def weighted_sum_S3(n: int) -> int:
    """sum_{k<n} (2k+1)^3 A_k."""
    _check_index(n)
    return APERY_TABLE.partial_sum("s3", n)


def weighted_sum_T(n: int) -> int:
    """sum_{k<n} (3k+2) (-1)^k f_k."""
    _check_index(n)
    return FRANEL_TABLE.partial_sum("t", n)


def spot_check(indices: Iterable[int]) -> list[tuple[str, int]]:
    """Compare table values with the binomial-sum definitions.

    Returns the ``(sequence, index)`` pairs that disagree; an empty list
    means every sampled index matched.
    """
    bad = []
    for n in indices:
        if APERY_TABLE.value(n) != apery(n):
            bad.append(("apery", n))
        if FRANEL_TABLE.value(n) != franel(n):
            bad.append(("franel", n))
    return bad
