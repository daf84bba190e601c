"""Append-only text cache for generated sequences.

File layout (UTF-8, ``\\n`` line ends)::

    #seqcache v1 <kind-id>
    0\t<value>
    1\t<value>
    ...

Values are decimal integers, or ``num/den`` (reduced, ``den > 0``) for the
rational Bernoulli sequence.  Indices start at 0 and increase by one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from filelock import FileLock

from supercong import sequences as seq

__all__ = [
    "KINDS",
    "CacheCorrupt",
    "CacheError",
    "CacheMismatch",
    "SequenceCache",
    "SequenceKind",
    "cache_path",
    "compute_values",
    "load_or_extend_cache",
    "read_cache_file",
]

HEADER_PREFIX = "#seqcache v1 "
KINDS = ("apery", "apery-poly", "franel", "bernoulli", "s1", "s3", "t")
_PARAMETERIZED = ("apery-poly", "s1")


class CacheError(Exception):
    pass


class CacheCorrupt(CacheError):
    """Header or line format does not match the v1 layout."""


class CacheMismatch(CacheError):
    """A persisted value disagrees with a fresh recomputation."""


@dataclass(frozen=True)
class SequenceKind:
    tag: str
    x: int | None = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown sequence kind {self.tag!r}")
        if self.tag in _PARAMETERIZED:
            if self.x is None:
                object.__setattr__(self, "x", 1)
        elif self.x is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    @property
    def kind_id(self) -> str:
        return self.tag if self.x is None else f"{self.tag}[x={self.x}]"

    @property
    def filename(self) -> str:
        stem = self.tag if self.x is None else f"{self.tag}.x{self.x}"
        return f"{stem}.v1.tsv"

    @property
    def rational(self) -> bool:
        return self.tag == "bernoulli"

    @property
    def first_index(self) -> int:
        """First index worth printing (partial sums are empty at 0)."""
        return 1 if self.tag in ("s1", "s3", "t") else 0

    @classmethod
    def parse(cls, kind_id: str) -> "SequenceKind":
        if kind_id.endswith("]") and "[x=" in kind_id:
            tag, _, rest = kind_id.partition("[x=")
            return cls(tag, int(rest[:-1]))
        return cls(kind_id)


@dataclass
class SequenceCache:
    kind: SequenceKind
    values: list = field(default_factory=list)
    source_path: Path | None = None

    def __len__(self) -> int:
        return len(self.values)


def cache_path(cache_dir: str | os.PathLike, kind: SequenceKind) -> Path:
    return Path(cache_dir) / kind.filename


def compute_values(kind: SequenceKind, lo: int, hi: int) -> list:
    """Values of ``kind`` at indices ``lo..hi`` inclusive."""
    if hi < lo:
        return []
    tag = kind.tag
    if tag == "apery":
        return seq.APERY_TABLE.values_between(lo, hi)
    if tag == "franel":
        return seq.FRANEL_TABLE.values_between(lo, hi)
    if tag == "apery-poly":
        return [seq.apery_poly(n, kind.x) for n in range(lo, hi + 1)]
    if tag == "bernoulli":
        return [seq.bernoulli(n) for n in range(lo, hi + 1)]
    idx = range(lo, hi + 1)
    if tag == "s1":
        if kind.x == 1:
            got = seq.APERY_TABLE.partial_sums("s1", idx)
            return [got[n] for n in idx]
        return [seq.weighted_sum_S1(n, kind.x) for n in idx]
    if tag == "s3":
        got = seq.APERY_TABLE.partial_sums("s3", idx)
    else:
        got = seq.FRANEL_TABLE.partial_sums("t", idx)
    return [got[n] for n in idx]


def _format_value(v, rational: bool) -> str:
    if rational:
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _parse_value(text: str, rational: bool, where: str):
    try:
        if rational:
            num, sep, den = text.partition("/")
            if not sep:
                raise ValueError
            num_i, den_i = int(num), int(den)
            value = Fraction(num_i, den_i)
            if den_i <= 0 or value.numerator != num_i or value.denominator != den_i:
                raise ValueError
            return value
        if text.strip() != text or "_" in text:
            raise ValueError
        return int(text)
    except (ValueError, ZeroDivisionError):
        raise CacheCorrupt(f"{where}: malformed value {text[:40]!r}") from None


def read_cache_file(path: str | os.PathLike, kind: SequenceKind | None = None) -> SequenceCache:
    """Parse a cache file, validating the header and index sequence."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        data = fh.read()
    if not data.endswith("\n"):
        raise CacheCorrupt(f"{path}: missing trailing newline")
    lines = data[:-1].split("\n")
    header = lines[0]
    if not header.startswith(HEADER_PREFIX):
        raise CacheCorrupt(f"{path}: bad header {header[:60]!r}")
    try:
        found = SequenceKind.parse(header[len(HEADER_PREFIX):])
    except ValueError as exc:
        raise CacheCorrupt(f"{path}: {exc}") from None
    if kind is not None and found != kind:
        raise CacheCorrupt(f"{path}: holds {found.kind_id}, expected {kind.kind_id}")
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        idx, sep, text = line.partition("\t")
        where = f"{path}:{lineno}"
        if not sep or idx != str(len(values)):
            raise CacheCorrupt(f"{where}: expected index {len(values)}")
        values.append(_parse_value(text, found.rational, where))
    return SequenceCache(found, values, path)


def _verify(cache: SequenceCache) -> None:
    fresh = compute_values(cache.kind, 0, len(cache.values) - 1)
    for n, (old, new) in enumerate(zip(cache.values, fresh)):
        if old != new:
            raise CacheMismatch(
                f"{cache.source_path}: {cache.kind.kind_id} index {n} differs from recomputation"
            )


def load_or_extend_cache(
    kind: SequenceKind,
    upto: int,
    path: str | os.PathLike | None = None,
    verify: bool = False,
) -> SequenceCache:
    """Return a cache holding at least indices ``0..upto``.

    Persisted values are reused as they are; missing ones are computed and
    appended.  With ``verify`` every persisted value is recomputed first and
    any disagreement raises :class:`CacheMismatch`.  ``path=None`` keeps the
    cache in memory only.
    """
    if upto < 0:
        raise ValueError("upto must be >= 0")
    if path is None:
        return SequenceCache(kind, compute_values(kind, 0, upto), None)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        existed = path.exists()
        if existed:
            cache = read_cache_file(path, kind)
        else:
            cache = SequenceCache(kind, [], path)
        if verify and cache.values:
            _verify(cache)
        have = len(cache.values)
        if have <= upto:
            new = compute_values(kind, have, upto)
            with open(path, "a", encoding="utf-8", newline="\n") as fh:
                if not existed:
                    fh.write(f"{HEADER_PREFIX}{kind.kind_id}\n")
                for i, v in enumerate(new, start=have):
                    fh.write(f"{i}\t{_format_value(v, kind.rational)}\n")
            cache.values.extend(new)
    return cache
