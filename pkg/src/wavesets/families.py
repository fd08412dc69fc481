"""Closed-form generators for the two multiplicity-function families and
everything built from them: generalized scaling sets, wavelet sets,
interpolation maps and coefficients, and the perturbation family that
converges to an indicator wavelet.

Breakpoints throughout are the periodic points 2 pi j / (d**k - 1), fixed
under w -> d**k w modulo 2 pi Z.  The dilation-2 family uses a symmetric
value table; factors d >= 3 use an asymmetric seven-case table.  Both
yield a base scaling set and a shifted companion with the same wrapped
multiplicity, whose wavelet sets form an interpolation pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .intervals import Interval, IntervalSet
from .interpolation import (
    DilationPeriodicFn,
    PiecewiseWavelet,
    SymbolicCoef,
    TranslationMap,
    derive_sigma,
    interpolate,
)
from .scalars import ComplexQSqrt2, QSqrt2, RPi
from .stepfn import StepFn
from .tiling import MultiplicityFn

GRID_DILATIONS = (2, 3, 4, 5)
GRID_INDICES = (2, 3, 4, 5, 6)

Variant = Literal["base", "shifted"]


@dataclass(frozen=True)
class FamilyParams:
    """Family coordinates: dilation d >= 2, index k >= 2, and which of the
    two companion scaling sets."""

    d: int
    k: int
    variant: Variant = "base"

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dilation factor must be an integer >= 2")
        if self.k < 2:
            raise ValueError("family index k must be >= 2")
        if self.variant not in ("base", "shifted"):
            raise ValueError("variant must be 'base' or 'shifted'")


def periodic_point(d: int, k: int, j: int) -> RPi:
    """The point 2 pi j / (d**k - 1), periodic under w -> d**k w mod 2 pi."""
    if d < 2 or k < 2:
        raise ValueError("need d >= 2 and k >= 2")
    return RPi.of(2 * j, d ** k - 1)


def multiplicity_closed_form(d: int, k: int) -> MultiplicityFn:
    """The family multiplicity table on [-pi, pi), top value k - 1."""
    FamilyParams(d, k)
    D = d ** k - 1
    cells: list[tuple[Fraction, Fraction, int]] = []
    if d == 2:
        cells.append((Fraction(-1), Fraction(-(2 ** k - 2), D), 1))
        for j in range(k - 1, 1, -1):
            cells.append((Fraction(-(2 ** j), D), Fraction(-(2 ** (j - 1)), D), k - j))
        cells.append((Fraction(-2, D), Fraction(2, D), k - 1))
        for j in range(2, k):
            cells.append((Fraction(2 ** (j - 1), D), Fraction(2 ** j, D), k - j))
        cells.append((Fraction(2 ** k - 2, D), Fraction(1), 1))
    else:
        for j in range(k - 1, 1, -1):
            cells.append((Fraction(-(d ** (j - 1)) * (d - 1) * 2, D),
                          Fraction(-(d ** (j - 2)) * (d - 1) * 2, D), k - j))
        cells.append((Fraction(-(d - 1) * 2, D), Fraction(2, D), k - 1))
        for j in range(2, k):
            cells.append((Fraction(d ** (j - 2) * 2, D),
                          Fraction(d ** (j - 1) * 2, D), k - j))
        cells.append((Fraction(2, d) - Fraction((d - 1) * 2, d * D),
                      Fraction(2, d) + Fraction(2, d * D), 1))
    step_cells = [(Interval(RPi(lo), RPi(hi)), v) for lo, hi, v in cells if lo != hi]
    return MultiplicityFn(StepFn.from_cells(step_cells, 0), "symmetric")


def _base_scaling_set(d: int, k: int) -> IntervalSet:
    D = d ** k - 1
    m = multiplicity_closed_form(d, k)
    pieces = list(m.support().pieces)
    if d == 2:
        # shift [-2^j pi/D, 0) right and [0, 2^j pi/D) left by 2^j pi
        for j in range(1, k - 1):
            w = Fraction(2 ** j)
            pieces.append(Interval(RPi(w - w / D), RPi(w)))
            pieces.append(Interval(RPi(-w), RPi(-w + w / D)))
    else:
        # shift the whole region where m >= k - j right by 2 pi d^(j-1)
        for j in range(1, k - 1):
            c = Fraction(2 * d ** (j - 1))
            pieces.append(Interval(RPi(c - Fraction(d ** (j - 1) * (d - 1) * 2, D)),
                                   RPi(c + Fraction(d ** (j - 1) * 2, D))))
    return IntervalSet(tuple(pieces))


def _shift_block(d: int, k: int) -> tuple[IntervalSet, RPi]:
    """The interval the shifted variant moves, and how far right it goes."""
    D = d ** k - 1
    block = IntervalSet.of((Fraction(-(d ** (k - 2)) * (d - 1) * 2, D), Fraction(-2, d * d)))
    return block, RPi.of(2 * d ** (k - 2))


def scaling_set(p: FamilyParams) -> IntervalSet:
    """Generalized scaling set: the multiplicity support plus its shifted
    level sets; the shifted variant relocates one block by a multiple of
    2 pi, preserving the wrapped multiplicity."""
    e = _base_scaling_set(p.d, p.k)
    if p.variant == "base":
        return e
    block, shift = _shift_block(p.d, p.k)
    if not block.issubset(e):
        raise ValueError("shift block must lie inside the base scaling set")
    return (e - block) | block.translate(shift)


def wavelet_set_family(p: FamilyParams) -> IntervalSet:
    """W = dE \\ E for the family scaling set."""
    e = scaling_set(p)
    return e.dilate(p.d) - e


def pair_sigma(d: int, k: int) -> TranslationMap:
    """The three-branch congruence map from the base wavelet set onto the
    shifted one: identity on the overlap, offsets +d**(k-1) and -d**(k-2)
    (in units of 2 pi) on the two swapped blocks."""
    FamilyParams(d, k)
    D = d ** k - 1
    w1 = wavelet_set_family(FamilyParams(d, k, "base"))
    w2 = wavelet_set_family(FamilyParams(d, k, "shifted"))
    a1 = IntervalSet.of((Fraction(-(d ** (k - 1)) * (d - 1) * 2, D), Fraction(-2, d)))
    a2 = IntervalSet.of((Fraction(2 * d ** (k - 2)) - Fraction(d ** (k - 2) * (d - 1) * 2, D),
                         Fraction(2 * d ** (k - 2)) - Fraction(2, d * d)))
    overlap = w1 & w2
    branches = ((a2, -(d ** (k - 2))), (overlap, 0), (a1, d ** (k - 1)))
    return TranslationMap(branches, w1, w2, d)


def mixing_coefficients(
    w1: IntervalSet, w2: IntervalSet, sigma: TranslationMap, printed: bool = False
) -> tuple[DilationPeriodicFn, DilationPeriodicFn]:
    """Coefficient pair for interpolating between two wavelet sets.

    h1 lives on w1: 1 on the overlap and 1/sqrt2 on each swapped block.
    h2 lives on w2: 0 on the overlap, 1/sqrt2 on the image of the
    negative-offset branch and -1/sqrt2 on the image of the positive one.
    With printed=True the swapped-block magnitude becomes the symbolic
    1/sqrt(2 pi) and the overlap pair becomes (1, 1); that variant fails
    the unitarity check and exists to demonstrate exactly how.
    """
    if printed:
        c = SymbolicCoef.inv_sqrt_2pi()
        one = SymbolicCoef.one()
        on_overlap2 = SymbolicCoef.one()
    else:
        c = ComplexQSqrt2.real(QSqrt2.half_sqrt2())
        one = ComplexQSqrt2.one()
        on_overlap2 = ComplexQSqrt2.zero()
    overlap = w1 & w2
    h1_pieces = [(overlap, one)]
    h2_pieces = [(overlap, on_overlap2)]
    for dom, t in sigma.branches:
        if t == 0:
            continue
        h1_pieces.append((dom, c))
        image = dom.translate(RPi.of(2 * t))
        h2_pieces.append((image, -c if t > 0 else c))
    return (DilationPeriodicFn(tuple(h1_pieces), sigma.dilation),
            DilationPeriodicFn(tuple(h2_pieces), sigma.dilation))


def pair_coefficients(d: int, k: int, printed: bool = False
                      ) -> tuple[DilationPeriodicFn, DilationPeriodicFn]:
    """The family coefficient pair on the base/shifted wavelet sets."""
    sigma = pair_sigma(d, k)
    return mixing_coefficients(sigma.source, sigma.target, sigma, printed)


@dataclass(frozen=True)
class PairBundle:
    """An interpolation pair: two wavelet sets, the congruence map between
    them, and the mixing coefficients."""

    w1: IntervalSet
    w2: IntervalSet
    sigma: TranslationMap
    h1: DilationPeriodicFn
    h2: DilationPeriodicFn

    def interpolated(self) -> PiecewiseWavelet:
        return interpolate(self.w1, self.w2, self.h1, self.h2, self.sigma)


def interpolation_pair(d: int, k: int, printed: bool = False) -> PairBundle:
    sigma = pair_sigma(d, k)
    h1, h2 = mixing_coefficients(sigma.source, sigma.target, sigma, printed)
    return PairBundle(sigma.source, sigma.target, sigma, h1, h2)


CONVERGENCE_LO = RPi.of(-4, 7)
CONVERGENCE_HI = RPi.of(-1, 2)


def convergence_family(a: RPi) -> tuple[IntervalSet, IntervalSet]:
    """The perturbed scaling/wavelet sets (E_a, W_a) for the d=2, k=3 pair.

    The parameter ranges over [-4 pi/7, -pi/2]; the left endpoint gives
    back the base wavelet set, the right endpoint the shifted one.
    """
    if not (CONVERGENCE_LO <= a <= CONVERGENCE_HI):
        raise ValueError(f"parameter {a} outside [{CONVERGENCE_LO}, {CONVERGENCE_HI}]")
    t = a.coef
    e_a = IntervalSet.of(
        (Fraction(-2), Fraction(-12, 7)), (Fraction(-1), Fraction(-6, 7)),
        (t, Fraction(4, 7)), (Fraction(6, 7), Fraction(1)),
        (Fraction(12, 7), Fraction(2)), (Fraction(24, 7), 4 + t))
    w_a = IntervalSet.of(
        (Fraction(-4), Fraction(-24, 7)), (2 * t, Fraction(-1)),
        (Fraction(-6, 7), t), (Fraction(4, 7), Fraction(6, 7)),
        (Fraction(1), Fraction(8, 7)), (4 + t, Fraction(4)),
        (Fraction(48, 7), 8 + 2 * t))
    return e_a, w_a


def convergence_parameter(n: int) -> RPi:
    """a_n = -4 pi/7 + (pi/14) / 2**n, sliding geometrically to the endpoint."""
    if n < 1:
        raise ValueError("step index must be >= 1")
    return RPi(Fraction(-4, 7) + Fraction(1, 14) / 2 ** n)


def convergence_pair(a: RPi) -> PairBundle:
    """Interpolation pair between the unperturbed wavelet set and W_a."""
    w1 = wavelet_set_family(FamilyParams(2, 3, "base"))
    _, w2 = convergence_family(a)
    sigma = derive_sigma(w1, w2, 2)
    h1, h2 = mixing_coefficients(w1, w2, sigma)
    return PairBundle(w1, w2, sigma, h1, h2)
