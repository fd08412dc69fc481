"""Half-open intervals with pi-rational endpoints, and their finite unions.

An IntervalSet is the canonical carrier for every frequency-domain set in
the library: scaling sets, wavelet sets, supports, congruence witnesses.
Sets are stored normalized (sorted, pairwise disjoint, adjacent pieces
merged), so structural equality is set equality.  The half-open [lo, hi)
convention makes all almost-everywhere statements exact: boundaries have
measure zero and belong to exactly one side.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import pairwise
from typing import Iterable, Iterator

from .scalars import RPi, RPI_ZERO, Rational


@dataclass(frozen=True)
class Interval:
    """Nonempty half-open interval [lo, hi)."""

    lo: RPi
    hi: RPi

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty or inverted interval [{self.lo}, {self.hi})")

    @classmethod
    def of(cls, lo: Rational, hi: Rational) -> "Interval":
        """Interval [lo*pi, hi*pi)."""
        return cls(RPi.of(lo), RPi.of(hi))

    @property
    def length(self) -> RPi:
        return self.hi - self.lo

    def midpoint(self) -> RPi:
        return RPi((self.lo.coef + self.hi.coef) / 2)

    def contains(self, x: RPi) -> bool:
        return self.lo <= x < self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def translate(self, t: RPi) -> "Interval":
        return Interval(self.lo + t, self.hi + t)

    def dilate(self, q: Rational) -> "Interval":
        """Image under x -> q*x; a negative factor flips the endpoints.

        The flipped image (q*hi, q*lo] is renormalized to [q*hi, q*lo),
        which differs only by a measure-zero boundary.
        """
        q = Fraction(q)
        if q == 0:
            raise ValueError("dilation factor must be nonzero")
        if q > 0:
            return Interval(self.lo * q, self.hi * q)
        return Interval(self.hi * q, self.lo * q)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Interval":
        return cls(RPi.from_json(obj["lo"]), RPi.from_json(obj["hi"]))


@dataclass(frozen=True)
class IntervalSet:
    """Normalized finite union of half-open intervals.

    The constructor accepts any iterable of intervals and takes their
    union: pieces are sorted, overlaps and adjacencies merged.  Equality
    of normalized representations is equality of sets.
    """

    pieces: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _normalize(self.pieces))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def of(cls, *pairs: tuple[Rational, Rational]) -> "IntervalSet":
        """Union of intervals [a*pi, b*pi); pairs with a == b are skipped."""
        out = []
        for a, b in pairs:
            a, b = Fraction(a), Fraction(b)
            if a == b:
                continue
            out.append(Interval(RPi(a), RPi(b)))
        return cls(tuple(out))

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.pieces)

    def contains_point(self, x: RPi) -> bool:
        los = [p.lo for p in self.pieces]
        i = bisect_right(los, x) - 1
        return i >= 0 and x < self.pieces[i].hi

    def issubset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def measure(self) -> RPi:
        return sum((p.length for p in self.pieces), RPI_ZERO)

    def hull(self) -> Interval | None:
        if not self.pieces:
            return None
        return Interval(self.pieces[0].lo, self.pieces[-1].hi)

    def diameter(self) -> RPi:
        h = self.hull()
        return h.length if h else RPI_ZERO

    def endpoints(self) -> list[RPi]:
        out = []
        for p in self.pieces:
            out.append(p.lo)
            out.append(p.hi)
        return out

    def translate(self, t: RPi) -> "IntervalSet":
        return IntervalSet(tuple(p.translate(t) for p in self.pieces))

    def dilate(self, q: Rational) -> "IntervalSet":
        q = Fraction(q)
        if q == 0:
            raise ValueError("dilation factor must be nonzero")
        return IntervalSet(tuple(p.dilate(q) for p in self.pieces))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda a, b: a or b)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda a, b: a and b)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda a, b: a and not b)

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda a, b: a != b)

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __xor__ = symmetric_difference

    def intersect_interval(self, iv: Interval) -> "IntervalSet":
        out = []
        for p in self.pieces:
            cut = p.intersect(iv)
            if cut is not None:
                out.append(cut)
        return IntervalSet(tuple(out))

    def cells_split_at(self, points: Iterable[RPi]) -> tuple[Interval, ...]:
        """Pieces subdivided at the given interior points, unmerged."""
        pts = sorted(set(points))
        out = []
        for p in self.pieces:
            inner = [x for x in pts if p.lo < x < p.hi]
            for lo, hi in pairwise([p.lo, *inner, p.hi]):
                out.append(Interval(lo, hi))
        return tuple(out)

    def __str__(self) -> str:
        if not self.pieces:
            return "{}"
        return " u ".join(str(p) for p in self.pieces)

    def to_json(self) -> list:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, obj: list) -> "IntervalSet":
        return cls(tuple(Interval.from_json(o) for o in obj))


def _normalize(pieces: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted(pieces, key=lambda p: (p.lo, p.hi))
    out: list[Interval] = []
    for p in items:
        if out and p.lo <= out[-1].hi:
            if p.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, p.hi)
        else:
            out.append(p)
    return tuple(out)


def _combine(a: IntervalSet, b: IntervalSet, keep) -> IntervalSet:
    """Boolean combination by exact midpoint tests on the merged endpoint grid."""
    pts = sorted(set(a.endpoints()) | set(b.endpoints()))
    out = []
    for lo, hi in pairwise(pts):
        mid = RPi((lo.coef + hi.coef) / 2)
        if keep(a.contains_point(mid), b.contains_point(mid)):
            out.append(Interval(lo, hi))
    return IntervalSet(tuple(out))


_SET_OPS = {
    "union": IntervalSet.union,
    "intersect": IntervalSet.intersect,
    "difference": IntervalSet.difference,
    "symmetric_difference": IntervalSet.symmetric_difference,
}


def set_op(op: str, a: IntervalSet, b: IntervalSet) -> IntervalSet:
    """Dispatch one of union | intersect | difference | symmetric_difference."""
    try:
        fn = _SET_OPS[op]
    except KeyError:
        raise ValueError(f"unknown set operation {op!r}") from None
    return fn(a, b)
