"""Piecewise-constant functions with exact breakpoints and exact values.

A StepFn is determined by an increasing breakpoint list, one value per
cell between consecutive breakpoints, and a default value outside the
covered range.  Values may be ints (multiplicity counts), QSqrt2, or
ComplexQSqrt2; the only requirements are equality and, for the arithmetic
combinators, + and *.  The representation is canonical: adjacent equal
cells are merged and default-valued edge cells are trimmed, so structural
equality is pointwise equality on the whole line.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import pairwise
from typing import Any, Callable, Iterable

from .intervals import Interval, IntervalSet
from .scalars import RPi, Rational


@dataclass(frozen=True)
class StepFn:
    breakpoints: tuple[RPi, ...]
    values: tuple[Any, ...]
    default: Any

    def __post_init__(self):
        bps, vals = _canonical(self.breakpoints, self.values, self.default)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, value: Any) -> "StepFn":
        return cls((), (), value)

    @classmethod
    def indicator(cls, s: IntervalSet, one: Any = 1, zero: Any = 0) -> "StepFn":
        return cls.from_cells([(p, one) for p in s.pieces], zero)

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[Interval, Any]], default: Any) -> "StepFn":
        """Build from disjoint (interval, value) cells; gaps take the default."""
        items = sorted(cells, key=lambda c: c[0].lo)
        bps: list[RPi] = []
        vals: list[Any] = []
        for iv, v in items:
            if bps and iv.lo < bps[-1]:
                raise ValueError("from_cells requires disjoint cells")
            if bps and iv.lo > bps[-1]:
                vals.append(default)
                bps.append(iv.lo)
            elif not bps:
                bps.append(iv.lo)
            vals.append(v)
            bps.append(iv.hi)
        return cls(tuple(bps), tuple(vals), default)

    @classmethod
    def accumulate(cls, weighted: Iterable[tuple[Interval, Any]], zero: Any) -> "StepFn":
        """Pointwise sum of possibly overlapping weighted indicator cells."""
        weighted = list(weighted)
        pts = sorted({p for iv, _ in weighted for p in (iv.lo, iv.hi)})
        if len(pts) < 2:
            return cls.constant(zero)
        bps = tuple(pts)
        vals = []
        for lo, hi in pairwise(pts):
            mid = RPi((lo.coef + hi.coef) / 2)
            total = zero
            for iv, w in weighted:
                if iv.contains(mid):
                    total = total + w
            vals.append(total)
        return cls(bps, tuple(vals), zero)

    def eval(self, x: RPi) -> Any:
        if not self.breakpoints or x < self.breakpoints[0] or x >= self.breakpoints[-1]:
            return self.default
        i = bisect_right(self.breakpoints, x) - 1
        return self.values[i]

    def cells(self) -> list[tuple[Interval, Any]]:
        """Covered cells in order, including interior default-valued ones."""
        return [(Interval(lo, hi), v)
                for (lo, hi), v in zip(pairwise(self.breakpoints), self.values)]

    def support(self) -> IntervalSet:
        """Cells whose value differs from the default (the default is 'zero')."""
        return IntervalSet(tuple(iv for iv, v in self.cells() if v != self.default))

    def map_values(self, fn: Callable[[Any], Any]) -> "StepFn":
        return StepFn(self.breakpoints, tuple(fn(v) for v in self.values), fn(self.default))

    def translate(self, t: RPi) -> "StepFn":
        return StepFn(tuple(b + t for b in self.breakpoints), self.values, self.default)

    def dilate(self, q: Rational) -> "StepFn":
        """The function x -> f(x/q) for q > 0."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("step function dilation needs a positive factor")
        return StepFn(tuple(b * q for b in self.breakpoints), self.values, self.default)

    def combine(self, other: "StepFn", op: Callable[[Any, Any], Any]) -> "StepFn":
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        default = op(self.default, other.default)
        if len(pts) < 2:
            return StepFn.constant(default)
        vals = []
        for lo, hi in pairwise(pts):
            mid = RPi((lo.coef + hi.coef) / 2)
            vals.append(op(self.eval(mid), other.eval(mid)))
        return StepFn(tuple(pts), tuple(vals), default)

    def __add__(self, other: "StepFn") -> "StepFn":
        if not isinstance(other, StepFn):
            return NotImplemented
        return self.combine(other, lambda a, b: a + b)

    def __mul__(self, other: "StepFn") -> "StepFn":
        if not isinstance(other, StepFn):
            return NotImplemented
        return self.combine(other, lambda a, b: a * b)

    def mismatch(self, other: "StepFn", within: Interval | None = None) -> IntervalSet:
        """Cells where the two functions differ, optionally clipped to a window."""
        pts = set(self.breakpoints) | set(other.breakpoints)
        if within is not None:
            pts = {p for p in pts if within.lo < p < within.hi}
            pts |= {within.lo, within.hi}
        pts = sorted(pts)
        bad = []
        for lo, hi in pairwise(pts):
            mid = RPi((lo.coef + hi.coef) / 2)
            if self.eval(mid) != other.eval(mid):
                bad.append(Interval(lo, hi))
        if within is None and self.default != other.default:
            raise ValueError("functions differ on an unbounded region")
        return IntervalSet(tuple(bad))

    def to_json(self) -> dict:
        return {
            "breakpoints": [b.to_json() for b in self.breakpoints],
            "values": [_value_json(v) for v in self.values],
            "default": _value_json(self.default),
        }


def _value_json(v: Any):
    return v.to_json() if hasattr(v, "to_json") else v


def _canonical(bps: tuple, vals: tuple, default: Any) -> tuple[tuple, tuple]:
    if len(vals) != max(len(bps) - 1, 0):
        raise ValueError("need exactly one value per cell")
    for lo, hi in pairwise(bps):
        if not lo < hi:
            raise ValueError("breakpoints must be strictly increasing")
    cells = [[lo, hi, v] for (lo, hi), v in zip(pairwise(bps), vals)]
    merged: list[list] = []
    for cell in cells:
        if merged and merged[-1][2] == cell[2] and merged[-1][1] == cell[0]:
            merged[-1][1] = cell[1]
        else:
            merged.append(cell)
    while merged and merged[0][2] == default:
        merged.pop(0)
    while merged and merged[-1][2] == default:
        merged.pop()
    if not merged:
        return (), ()
    out_bps = [merged[0][0]]
    out_vals = []
    for lo, hi, v in merged:
        out_bps.append(hi)
        out_vals.append(v)
    return tuple(out_bps), tuple(out_vals)


def step_combine(op: str, f: StepFn, g: StepFn):
    """Dispatch add | multiply | equal | refine on a pair of step functions.

    'equal' is exact pointwise equality (canonical forms compare directly);
    'refine' re-grids f onto the merged breakpoint grid, which canonicalizes
    back to f itself.
    """
    if op == "add":
        return f + g
    if op == "multiply":
        return f * g
    if op == "equal":
        return f == g
    if op == "refine":
        return f.combine(g, lambda a, _b: a)
    raise ValueError(f"unknown step operation {op!r}")
