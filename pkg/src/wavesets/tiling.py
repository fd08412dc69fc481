"""Translation congruence, multiplicity functions, and tiling checks.

A bounded set S sits over the circle R/2piZ as a finite stack of sheets;
its multiplicity function counts the sheets over each point.  Equal stack
heights are exactly what is needed for a piecewise 2piZ-translation
bijection between two sets, and a matching of sheets makes that bijection
explicit.  Dilation tilings are checked the same way on the multiplicative
fundamental domain [-d pi, -pi) u [pi, d pi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import pairwise
from typing import Iterable, Literal

from .intervals import Interval, IntervalSet
from .report import Check, VerificationReport
from .scalars import RPi, TWO_PI, ints_strictly_between
from .stepfn import StepFn

Domain = Literal["symmetric", "positive"]

_DOMAIN_LO = {"symmetric": Fraction(-1), "positive": Fraction(0)}


class ZeroAccumulationError(ValueError):
    """A piece adheres to 0, so dilates meet the fundamental domain for
    infinitely many exponents and the dilation multiplicity diverges."""

    def __init__(self, witness: Interval):
        super().__init__(f"set adheres to 0 at piece {witness}")
        self.witness = witness


class SurjectivityError(ValueError):
    """The wrapping map does not cover [0, 2pi); carries the uncovered cell."""

    def __init__(self, witness: Interval):
        super().__init__(f"translates do not cover the circle: cell {witness} is empty")
        self.witness = witness


@dataclass(frozen=True)
class MultiplicityFn:
    """Nonnegative-integer step function on a fundamental translation domain."""

    step: StepFn
    domain: Domain = "symmetric"

    def __post_init__(self):
        lo = _DOMAIN_LO[self.domain]
        for iv, v in self.step.cells():
            if not isinstance(v, int) or v < 0:
                raise ValueError("multiplicity values must be nonnegative integers")
            if iv.lo.coef < lo or iv.hi.coef > lo + 2:
                raise ValueError("multiplicity cells must lie in the fundamental domain")

    def domain_interval(self) -> Interval:
        lo = _DOMAIN_LO[self.domain]
        return Interval(RPi(lo), RPi(lo + 2))

    def eval_periodic(self, x: RPi) -> int:
        lo = _DOMAIN_LO[self.domain]
        r = x.coef - 2 * ((x.coef - lo) // 2)
        return self.step.eval(RPi(r))

    def max_value(self) -> int:
        return max((v for _, v in self.step.cells()), default=0)

    def support(self) -> IntervalSet:
        return self.step.support()

    def to_json(self) -> dict:
        return {"domain": self.domain, "step": self.step.to_json()}


def translation_events(cells, dom_lo: Fraction):
    """Wrap weighted cells into the length-2pi domain starting at dom_lo.

    Yields ((piece of cell) - 2 pi k, weight, k) for each shift k that puts
    part of the cell into the domain.
    """
    for iv, w in cells:
        l, h = iv.lo.coef, iv.hi.coef
        for k in ints_strictly_between((l - dom_lo - 2) / 2, (h - dom_lo) / 2):
            lo = max(l, dom_lo + 2 * k)
            hi = min(h, dom_lo + 2 * k + 2)
            yield Interval(RPi(lo - 2 * k), RPi(hi - 2 * k)), w, k


def _sheet_events(s: IntervalSet, dom_lo: Fraction) -> list[tuple[Interval, int]]:
    """(cell in the domain, sheet offset k) pairs with cell + 2 pi k inside s."""
    return [(iv, k) for iv, _, k in translation_events(((p, 1) for p in s.pieces), dom_lo)]


def wrapped_sheets(
    s: IntervalSet, domain: Domain = "positive", extra: Iterable[RPi] = ()
) -> tuple[list[Interval], list[list[int]]]:
    """Refine the fundamental domain so each cell has a constant sheet stack.

    Returns the cells and, per cell, the sorted offsets k such that
    cell + 2 pi k lies inside s.
    """
    dom_lo = _DOMAIN_LO[domain]
    events = _sheet_events(s, dom_lo)
    pts = {RPi(dom_lo), RPi(dom_lo + 2)}
    for iv, _ in events:
        pts.update((iv.lo, iv.hi))
    pts.update(extra)
    grid = sorted(pts)
    cells = []
    stacks = []
    for lo, hi in pairwise(grid):
        cell = Interval(lo, hi)
        mid = cell.midpoint()
        cells.append(cell)
        stacks.append(sorted(k for iv, k in events if iv.contains(mid)))
    return cells, stacks


def wrap_multiplicity(s: IntervalSet, domain: Domain = "symmetric") -> MultiplicityFn:
    """m(w) = sum_k chi_s(w + 2 pi k) on the chosen fundamental domain."""
    events = _sheet_events(s, _DOMAIN_LO[domain])
    step = StepFn.accumulate([(iv, 1) for iv, _ in events], 0)
    return MultiplicityFn(step, domain)


@dataclass(frozen=True)
class CongruenceMap:
    """Piecewise translation by 2 pi Z carrying source onto target."""

    branches: tuple[tuple[IntervalSet, int], ...]
    source: IntervalSet
    target: IntervalSet

    def apply(self, x: RPi) -> RPi:
        for dom, t in self.branches:
            if dom.contains_point(x):
                return x + TWO_PI * t
        raise ValueError(f"{x} is not in the source set")

    def branch_map(self) -> dict[int, IntervalSet]:
        return {t: dom for dom, t in self.branches}

    def validate(self) -> VerificationReport:
        checks = []
        union = IntervalSet.empty()
        total = RPi.of(0)
        for dom, _ in self.branches:
            union = union | dom
            total = total + dom.measure()
        ok = union == self.source and total == self.source.measure()
        checks.append(Check("branches-partition-source", ok,
                            witness=union ^ self.source if not ok else None))
        image = IntervalSet.empty()
        itotal = RPi.of(0)
        for dom, t in self.branches:
            img = dom.translate(TWO_PI * t)
            image = image | img
            itotal = itotal + img.measure()
        ok = image == self.target and itotal == self.target.measure()
        checks.append(Check("images-partition-target", ok,
                            witness=image ^ self.target if not ok else None))
        return VerificationReport(tuple(checks))

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "branches": [{"domain": dom.to_json(), "offset": t} for dom, t in self.branches],
        }


@dataclass(frozen=True)
class CongruenceFailure:
    """Cell of [0, 2pi) where the two multiplicity functions disagree."""

    cell: Interval
    left_count: int
    right_count: int

    def to_json(self) -> dict:
        return {"cell": self.cell.to_json(),
                "left_count": self.left_count, "right_count": self.right_count}


def translation_congruent(
    g: IntervalSet, h: IntervalSet, identity_first: bool = False
) -> CongruenceMap | CongruenceFailure:
    """Decide 2 pi translation congruence and build an explicit map.

    Over each cell of the merged wrapped grid the two sheet stacks must have
    equal height; the map pairs the i-th lowest sheet of g with the i-th
    lowest sheet of h.  With identity_first, sheets present in both stacks
    are first paired with themselves (offset 0), which reproduces maps that
    are the identity on g intersect h.
    """
    extra = [iv.lo for iv in _sheet_events(h, Fraction(0))] + \
            [iv.hi for iv in _sheet_events(h, Fraction(0))]
    cells_g, stacks_g = wrapped_sheets(g, "positive", extra=extra)
    _, stacks_h = wrapped_sheets(h, "positive", extra=[p for c in cells_g for p in (c.lo, c.hi)])
    by_offset: dict[int, list[Interval]] = {}
    for cell, kg, kh in zip(cells_g, stacks_g, stacks_h):
        if len(kg) != len(kh):
            return CongruenceFailure(cell, len(kg), len(kh))
        if identity_first:
            common = sorted(set(kg) & set(kh))
            rest_g = [k for k in kg if k not in common]
            rest_h = [k for k in kh if k not in common]
            pairs = [(k, k) for k in common] + list(zip(rest_g, rest_h))
        else:
            pairs = list(zip(kg, kh))
        for ka, kb in pairs:
            by_offset.setdefault(kb - ka, []).append(cell.translate(TWO_PI * ka))
    branches = tuple((IntervalSet(tuple(ivs)), t) for t, ivs in sorted(by_offset.items()))
    return CongruenceMap(branches, g, h)


def _least_power_exceeding(d: int, bound: Fraction) -> int:
    """Smallest j with d**j > bound, for bound > 0."""
    j, s = 0, Fraction(1)
    while s <= bound:
        j += 1
        s *= d
    while s / d > bound:
        j -= 1
        s /= d
    return j


def _greatest_power_below(d: int, bound: Fraction) -> int:
    """Largest j with d**j < bound, for bound > 0."""
    j, s = 0, Fraction(1)
    while s >= bound:
        j -= 1
        s /= d
    while s * d < bound:
        j += 1
        s *= d
    return j


def dilation_domain(d: int) -> IntervalSet:
    """Fundamental domain [-d pi, -pi) u [pi, d pi) for x -> d x."""
    return IntervalSet.of((-d, -1), (1, d))


def dilation_events(cells, d: int) -> list[tuple[Interval, object]]:
    """Map weighted cells into the dilation fundamental domain.

    Yields ((d**j cell) clipped to the domain, weight) for every exponent j
    where the dilate meets it.  Rejects cells adhering to 0, where the
    relevant exponents would be infinite in number.
    """
    if d < 2:
        raise ValueError("dilation factor must be an integer >= 2")
    events = []
    for p, w in cells:
        l, h = p.lo.coef, p.hi.coef
        if l <= 0 <= h:
            raise ZeroAccumulationError(p)
        if l > 0:
            half = Interval.of(1, d)
            j_lo = _least_power_exceeding(d, 1 / h)
            j_hi = _greatest_power_below(d, d / l)
        else:
            half = Interval.of(-d, -1)
            j_lo = _least_power_exceeding(d, 1 / -l)
            j_hi = _greatest_power_below(d, d / -h)
        for j in range(j_lo, j_hi + 1):
            chunk = p.dilate(Fraction(d) ** j).intersect(half)
            if chunk is not None:
                events.append((chunk, w))
    return events


def dilation_multiplicity(s: IntervalSet, d: int) -> StepFn:
    """Multiplicity of the dilates {d**j s} counted on the fundamental domain."""
    return StepFn.accumulate(dilation_events(((p, 1) for p in s.pieces), d), 0)


def is_wavelet_set(s: IntervalSet, d: int) -> VerificationReport:
    """Both tiling criteria: translates tile the circle, dilates tile the line."""
    one_circle = StepFn.indicator(IntervalSet.of((0, 2)))
    m = wrap_multiplicity(s, "positive")
    bad = m.step.mismatch(one_circle)
    checks = [Check("translation-tile", bad.is_empty,
                    witness=None if bad.is_empty else bad)]
    one_dil = StepFn.indicator(dilation_domain(d))
    try:
        dm = dilation_multiplicity(s, d)
    except ZeroAccumulationError as err:
        checks.append(Check("dilation-tile", False, witness=err.witness,
                            detail="support adheres to 0; dilation multiplicity diverges"))
    else:
        bad = dm.mismatch(one_dil)
        checks.append(Check("dilation-tile", bad.is_empty,
                            witness=None if bad.is_empty else bad))
    return VerificationReport(tuple(checks))


def check_consistency(m: MultiplicityFn, d: int) -> VerificationReport:
    """Exact pointwise check of m(w) + 1 = sum_i m(w/d + 2 pi i / d) on [-pi, pi).

    The grid merges m's breakpoints with every preimage of a breakpoint
    under the d affine right-hand-side arguments (reduced mod 2 pi), so
    both sides are constant on each cell and midpoint evaluation decides
    equality everywhere.
    """
    if m.domain != "symmetric":
        raise ValueError("consistency check expects a multiplicity on [-pi, pi)")
    if d < 2:
        raise ValueError("dilation factor must be an integer >= 2")
    base = set(m.step.breakpoints) | {RPi.of(-1), RPi.of(1)}
    grid = set(base)
    for i in range(d):
        for b in base:
            # solve w/d + 2 pi i/d = b  (mod 2 pi)  for w in (-pi, pi)
            lo_t = Fraction(-1 + 2 * i, 2 * d) - b.coef / 2
            hi_t = Fraction(1 + 2 * i, 2 * d) - b.coef / 2
            for t in ints_strictly_between(lo_t, hi_t):
                grid.add(RPi(d * (b.coef + 2 * t) - 2 * i))
    pts = sorted(p for p in grid if Fraction(-1) <= p.coef <= Fraction(1))
    bad = []
    detail = ""
    for lo, hi in pairwise(pts):
        x = Interval(lo, hi).midpoint()
        lhs = m.eval_periodic(x) + 1
        rhs = sum(m.eval_periodic(x / d + RPi.of(2 * i, d)) for i in range(d))
        if lhs != rhs:
            bad.append(Interval(lo, hi))
            if not detail:
                detail = f"at {x}: m+1 = {lhs} but the d-fold sum is {rhs}"
    check = Check("consistency-equation", not bad,
                  witness=IntervalSet(tuple(bad)) if bad else None, detail=detail)
    return VerificationReport((check,))


def check_merrill(
    e: IntervalSet, d: int, j_max: int = 64
) -> tuple[VerificationReport, IntervalSet]:
    """The three generalized-scaling-set conditions, plus the emitted W = dE \\ E.

    (1) the wrapped multiplicity of E satisfies the consistency equation,
    (2) E is contained in dE, and (3) some d**J E with J <= j_max contains
    a punctured neighborhood of 0 (the dilates increase by (2), so a finite
    search decides the union condition whenever it holds within the bound).
    """
    checks = []
    m = wrap_multiplicity(e, "symmetric")
    cons = check_consistency(m, d)
    c = cons.checks[0]
    checks.append(Check("multiplicity-consistency", c.passed, c.witness, c.detail))

    dilated = e.dilate(d)
    leak = e - dilated
    checks.append(Check("nested-in-dilate", leak.is_empty,
                        witness=None if leak.is_empty else leak))

    found = None
    c_set = e
    for j in range(j_max + 1):
        for p in c_set.pieces:
            if p.lo.coef < 0 < p.hi.coef:
                eps = min(-p.lo, p.hi)
                found = (j, eps)
                break
        if found:
            break
        c_set = c_set.dilate(d)
    if found:
        j, eps = found
        checks.append(Check("zero-neighborhood", True,
                            detail=f"d^{j} E covers (-{eps}, {eps}) minus the origin"))
    else:
        checks.append(Check("zero-neighborhood", False,
                            detail=f"no punctured neighborhood of 0 within J <= {j_max}"))
    return VerificationReport(tuple(checks)), dilated - e


def _section_offset(ks: list[int]) -> int:
    """Tie-break rule for picking one sheet: 0 if present, else the smallest
    positive offset, else the largest negative one."""
    if 0 in ks:
        return 0
    pos = [k for k in ks if k > 0]
    return min(pos) if pos else max(ks)


def congruence_section(e: IntervalSet) -> IntervalSet:
    """A subset F of e whose translates cover the circle exactly once.

    Requires the wrapped multiplicity of e to be >= 1 everywhere; the sheet
    per cell is chosen by the deterministic tie-break rule above.
    """
    cells, stacks = wrapped_sheets(e, "positive")
    out = []
    for cell, ks in zip(cells, stacks):
        if not ks:
            raise SurjectivityError(cell)
        out.append(cell.translate(TWO_PI * _section_offset(ks)))
    return IntervalSet(tuple(out))
