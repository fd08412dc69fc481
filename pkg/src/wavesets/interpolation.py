"""Operator interpolation between a pair of wavelet sets, on supports.

The congruence map sigma between two wavelet sets extends to all of R by
dilation homogeneity, and a pair of dilation-periodic coefficient
functions mixes the two indicator wavelets.  The mixed function is again
a wavelet exactly when the 2x2 matrix built from the coefficients and
sigma is unitary; everything here is checked symbolically, with
coefficients in Q(sqrt 2) optionally scaled by powers of 1/sqrt(pi) so
that a wrong normalization fails with an exact witness instead of a
rounding artifact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .intervals import Interval, IntervalSet
from .report import Check, VerificationReport
from .scalars import ComplexQSqrt2, QSqrt2, RPi, TWO_PI
from .tiling import (
    CongruenceFailure,
    _greatest_power_below,
    _least_power_exceeding,
    translation_congruent,
)

EXTENSION_BOUND = 128


class ExtensionBoundError(ValueError):
    """No dilate of the point lands in the source within the exponent bound."""


class UncoveredDomainError(ValueError):
    """A dilation-periodic function has no value on part of the requested cell."""

    def __init__(self, witness, message: str):
        super().__init__(message)
        self.witness = witness


class CongruenceDerivationError(ValueError):
    """The two sets are not translation congruent; carries the failing cell."""

    def __init__(self, failure: CongruenceFailure):
        super().__init__(f"not 2pi translation congruent at {failure.cell} "
                         f"({failure.left_count} vs {failure.right_count} sheets)")
        self.failure = failure


class PreconditionError(ValueError):
    """An interpolation precondition failed; carries the failing report."""

    def __init__(self, name: str, report: VerificationReport):
        super().__init__(f"precondition {name} failed:\n{report}")
        self.report = report


@dataclass(frozen=True)
class SymbolicCoef:
    """Finite sum of c_e * pi**(-e/2) with c_e complex over Q(sqrt 2).

    Closed under products and conjugation; the powers of pi**(-1/2) are
    linearly independent over Q(sqrt 2), so equality is coefficientwise.
    Exponent 0 embeds the plain coefficients; exponent 1 expresses the
    1/sqrt(2 pi) normalization, whose squared modulus 1/(2 pi) then shows
    up at exponent 2.
    """

    terms: tuple[tuple[int, ComplexQSqrt2], ...]

    def __post_init__(self):
        cleaned = tuple(sorted((e, c) for e, c in self.terms if not c.is_zero))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def lift(cls, v: Any) -> "SymbolicCoef":
        if isinstance(v, SymbolicCoef):
            return v
        if isinstance(v, ComplexQSqrt2):
            return cls(((0, v),))
        if isinstance(v, QSqrt2):
            return cls(((0, ComplexQSqrt2(v, QSqrt2.zero())),))
        if isinstance(v, (int, Fraction)):
            return cls(((0, ComplexQSqrt2.real(v)),))
        raise TypeError(f"cannot lift {type(v).__name__} into the coefficient algebra")

    @classmethod
    def zero(cls) -> "SymbolicCoef":
        return cls(())

    @classmethod
    def one(cls) -> "SymbolicCoef":
        return cls(((0, ComplexQSqrt2.one()),))

    @classmethod
    def inv_sqrt_2pi(cls) -> "SymbolicCoef":
        """1/sqrt(2 pi) = (sqrt2/2) * pi**(-1/2)."""
        return cls(((1, ComplexQSqrt2.real(QSqrt2.half_sqrt2())),))

    @classmethod
    def one_over_pi(cls) -> "SymbolicCoef":
        return cls(((2, ComplexQSqrt2.one()),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SymbolicCoef") -> "SymbolicCoef":
        acc: dict[int, ComplexQSqrt2] = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc[e] + c if e in acc else c
        return SymbolicCoef(tuple(acc.items()))

    def __neg__(self) -> "SymbolicCoef":
        return SymbolicCoef(tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other: "SymbolicCoef") -> "SymbolicCoef":
        acc: dict[int, ComplexQSqrt2] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                prod = c1 * c2
                acc[e] = acc[e] + prod if e in acc else prod
        return SymbolicCoef(tuple(acc.items()))

    def conjugate(self) -> "SymbolicCoef":
        return SymbolicCoef(tuple((e, c.conjugate()) for e, c in self.terms))

    def abs2(self) -> "SymbolicCoef":
        return self * self.conjugate()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            elif e % 2 == 0:
                parts.append(f"({c})*pi^-{e // 2}")
            else:
                parts.append(f"({c})*pi^(-{e}/2)")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"terms": [{"inv_sqrt_pi_power": e, "re": c.re.to_json(), "im": c.im.to_json()}
                          for e, c in self.terms]}


def _magnitudes(iv: Interval) -> tuple[Fraction, Fraction]:
    l, h = iv.lo.coef, iv.hi.coef
    if l >= 0:
        lo, hi = l, h
    elif h <= 0:
        lo, hi = -h, -l
    else:
        raise ValueError(f"interval {iv} straddles 0")
    if lo == 0:
        raise ValueError(f"interval {iv} adheres to 0; dilation shells are unbounded")
    return lo, hi


def _sign_window(s: IntervalSet, positive: bool) -> tuple[Fraction, Fraction] | None:
    mags = []
    for p in s.pieces:
        if (p.lo.coef >= 0) != positive:
            continue
        mags.append(_magnitudes(p))
    if not mags:
        return None
    return min(m[0] for m in mags), max(m[1] for m in mags)


def _shell_exponents(d: int, iv: Interval, window: tuple[Fraction, Fraction] | None) -> range:
    """Exponents n for which d**n * iv can meet a set with the given magnitude window."""
    if window is None:
        return range(0)
    a0, a1 = _magnitudes(iv)
    b0, b1 = window
    n_lo = _least_power_exceeding(d, b0 / a1)
    n_hi = _greatest_power_below(d, b1 / a0)
    n_lo = max(n_lo, -EXTENSION_BOUND)
    n_hi = min(n_hi, EXTENSION_BOUND)
    return range(n_lo, n_hi + 1)


@dataclass(frozen=True)
class TranslationMap:
    """Piecewise 2 pi Z translation from source onto target, extended to R
    by sigma(x) = d**-n sigma(d**n x) with d**n x in the source."""

    branches: tuple[tuple[IntervalSet, int], ...]
    source: IntervalSet
    target: IntervalSet
    dilation: int

    def branch_map(self) -> dict[int, IntervalSet]:
        return {t: dom for dom, t in self.branches}

    def offset_at(self, x: RPi) -> int | None:
        for dom, t in self.branches:
            if dom.contains_point(x):
                return t
        return None

    def eval(self, x: RPi) -> RPi:
        """Exact image of x under the homogeneous extension."""
        if x.coef == 0:
            raise ValueError("the extension is undefined at 0")
        probe = Interval(x, RPi(x.coef + Fraction(1, 10 ** 9)))
        window = _sign_window(self.source, positive=x.coef > 0)
        for n in _shell_exponents(self.dilation, probe, window):
            y = x * (Fraction(self.dilation) ** n)
            t = self.offset_at(y)
            if t is not None:
                return x + TWO_PI * t * (Fraction(self.dilation) ** -n)
        raise ExtensionBoundError(
            f"no dilate of {x} lands in the source within |n| <= {EXTENSION_BOUND}")

    def validate(self) -> VerificationReport:
        checks = []
        union = IntervalSet.empty()
        total = RPi.of(0)
        for dom, _ in self.branches:
            union = union | dom
            total = total + dom.measure()
        ok = union == self.source and total == self.source.measure()
        checks.append(Check("branches-partition-source", ok,
                            witness=None if ok else union ^ self.source))
        image = IntervalSet.empty()
        itotal = RPi.of(0)
        for dom, t in self.branches:
            img = dom.translate(TWO_PI * t)
            image = image | img
            itotal = itotal + img.measure()
        ok = image == self.target and itotal == self.target.measure()
        checks.append(Check("images-partition-target", ok,
                            witness=None if ok else image ^ self.target))
        return VerificationReport(tuple(checks))

    def to_json(self) -> dict:
        return {
            "dilation": self.dilation,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "branches": [{"domain": dom.to_json(), "offset": t} for dom, t in self.branches],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TranslationMap":
        return cls(
            branches=tuple((IntervalSet.from_json(b["domain"]), int(b["offset"]))
                           for b in obj["branches"]),
            source=IntervalSet.from_json(obj["source"]),
            target=IntervalSet.from_json(obj["target"]),
            dilation=int(obj["dilation"]),
        )


@dataclass(frozen=True)
class DilationPeriodicFn:
    """Piecewise-constant function with h(d x) = h(x); values are stored on
    representative pieces and read off through the unique dilate that lands
    in them."""

    pieces: tuple[tuple[IntervalSet, Any], ...]
    dilation: int

    def domain(self) -> IntervalSet:
        out = IntervalSet.empty()
        for dom, _ in self.pieces:
            out = out | dom
        return out

    def _window(self, positive: bool):
        return _sign_window(self.domain(), positive)

    def eval_point(self, x: RPi) -> Any:
        if x.coef == 0:
            raise ValueError("dilation-periodic functions are undefined at 0")
        probe = Interval(x, RPi(x.coef + Fraction(1, 10 ** 9)))
        for n in _shell_exponents(self.dilation, probe, self._window(x.coef > 0)):
            y = x * (Fraction(self.dilation) ** n)
            for dom, v in self.pieces:
                if dom.contains_point(y):
                    return v
        raise UncoveredDomainError(x, f"no dilate of {x} lies in the function domain")

    def eval_on(self, iv: Interval) -> list[tuple[Interval, Any]]:
        """Partition iv into subcells on which the function is constant."""
        d = Fraction(self.dilation)
        out: list[tuple[Interval, Any]] = []
        covered = IntervalSet.empty()
        total = RPi.of(0)
        for n in _shell_exponents(self.dilation, iv, self._window(iv.lo.coef >= 0)):
            scaled = iv.dilate(d ** n)
            for dom, v in self.pieces:
                for hit in dom.intersect_interval(scaled).pieces:
                    sub = hit.dilate(d ** -n)
                    out.append((sub, v))
                    covered = covered | IntervalSet((sub,))
                    total = total + sub.length
        if covered != IntervalSet((iv,)):
            missing = IntervalSet((iv,)) - covered
            raise UncoveredDomainError(missing, f"function undefined on {missing}")
        if total != iv.length:
            raise UncoveredDomainError(iv, f"overlapping dilates cover {iv} more than once")
        return sorted(out, key=lambda c: c[0].lo)

    def to_json(self) -> dict:
        return {
            "dilation": self.dilation,
            "pieces": [{"domain": dom.to_json(), "value": _coef_json(v)}
                       for dom, v in self.pieces],
        }


def _coef_json(v: Any):
    return v.to_json() if hasattr(v, "to_json") else v


def _as_complex(v: Any) -> ComplexQSqrt2:
    if isinstance(v, ComplexQSqrt2):
        return v
    if isinstance(v, QSqrt2):
        return ComplexQSqrt2(v, QSqrt2.zero())
    if isinstance(v, (int, Fraction)):
        return ComplexQSqrt2.real(v)
    if isinstance(v, SymbolicCoef):
        if v.is_zero:
            return ComplexQSqrt2.zero()
        if len(v.terms) == 1 and v.terms[0][0] == 0:
            return v.terms[0][1]
    raise TypeError(f"value {v} is not representable in Q(sqrt2)")


@dataclass(frozen=True)
class PiecewiseWavelet:
    """Frequency-domain wavelet: disjoint support pieces with exact values."""

    pieces: tuple[tuple[IntervalSet, ComplexQSqrt2], ...]
    dilation: int

    def __post_init__(self):
        union = IntervalSet.empty()
        total = RPi.of(0)
        for dom, _ in self.pieces:
            union = union | dom
            total = total + dom.measure()
        if total != union.measure():
            raise ValueError("wavelet pieces must have disjoint domains")

    @classmethod
    def indicator(cls, s: IntervalSet, d: int) -> "PiecewiseWavelet":
        return cls(((s, ComplexQSqrt2.one()),), d)

    @classmethod
    def from_cells(cls, cells: list[tuple[Interval, Any]], d: int) -> "PiecewiseWavelet":
        grouped: dict[ComplexQSqrt2, list[Interval]] = {}
        for iv, v in cells:
            c = _as_complex(v)
            if c.is_zero:
                continue
            grouped.setdefault(c, []).append(iv)
        pieces = tuple(sorted(
            ((IntervalSet(tuple(ivs)), v) for v, ivs in grouped.items()),
            key=lambda p: p[0].pieces[0].lo))
        return cls(pieces, d)

    def support(self) -> IntervalSet:
        out = IntervalSet.empty()
        for dom, v in self.pieces:
            if not v.is_zero:
                out = out | dom
        return out

    def eval_point(self, x: RPi) -> ComplexQSqrt2:
        for dom, v in self.pieces:
            if dom.contains_point(x):
                return v
        return ComplexQSqrt2.zero()

    def cells(self) -> list[tuple[Interval, ComplexQSqrt2]]:
        out = []
        for dom, v in self.pieces:
            for iv in dom.pieces:
                out.append((iv, v))
        return sorted(out, key=lambda c: c[0].lo)

    def to_json(self) -> dict:
        return {
            "dilation": self.dilation,
            "pieces": [{"domain": dom.to_json(), "value": v.to_json()}
                       for dom, v in self.pieces],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PiecewiseWavelet":
        return cls(
            pieces=tuple((IntervalSet.from_json(p["domain"]),
                          ComplexQSqrt2.from_json(p["value"]))
                         for p in obj["pieces"]),
            dilation=int(obj["dilation"]),
        )


def derive_sigma(w1: IntervalSet, w2: IntervalSet, d: int) -> TranslationMap:
    """The deterministic congruence map from w1 onto w2, as a TranslationMap.

    Sheet matching is identity-first, so the map is the identity on
    w1 intersect w2 whenever the stacks allow it.
    """
    res = translation_congruent(w1, w2, identity_first=True)
    if isinstance(res, CongruenceFailure):
        raise CongruenceDerivationError(res)
    return TranslationMap(res.branches, w1, w2, d)


def is_involutive(s: TranslationMap) -> VerificationReport:
    """Check sigma(sigma(x)) = x symbolically on every branch.

    For a branch A -> A + 2 pi t, each dilate of the image that lands in a
    source branch contributes the composite x -> x + 2 pi (t + t'/d**n);
    the composite must be the identity and must cover the image exactly
    once.
    """
    checks = list(s.validate().checks)
    d = s.dilation
    for dom, t in s.branches:
        image = dom.translate(TWO_PI * t)
        covered = IntervalSet.empty()
        total = RPi.of(0)
        bad: list[tuple[Interval, Fraction]] = []
        for piece in image.pieces:
            window = _sign_window(s.source, positive=piece.lo.coef >= 0)
            for n in _shell_exponents(d, piece, window):
                scaled = piece.dilate(Fraction(d) ** n)
                for src_dom, t2 in s.branches:
                    for hit in src_dom.intersect_interval(scaled).pieces:
                        sub = hit.dilate(Fraction(d) ** -n)
                        composite = 2 * t + 2 * t2 * Fraction(d) ** -n
                        if composite != 0:
                            bad.append((sub, composite))
                        covered = covered | IntervalSet((sub,))
                        total = total + sub.length
        name = f"involutive-on-offset-{t:+d}"
        if bad:
            cell, composite = bad[0]
            checks.append(Check(name, False, witness=cell,
                                detail=f"sigma^2 shifts by {composite}pi there"))
        elif covered != image or total != image.measure():
            checks.append(Check(name, False, witness=image - covered,
                                detail="sigma^2 is not defined exactly once everywhere"))
        else:
            checks.append(Check(name, True))
    return VerificationReport(tuple(checks))


def check_unitary(h1: DilationPeriodicFn, h2: DilationPeriodicFn,
                  s: TranslationMap) -> VerificationReport:
    """Verify that [[h1, h2], [h2 o sigma, h1 o sigma]] is unitary on the source.

    Involutivity makes sigma its own inverse, so the second row is read at
    x + 2 pi t.  Each source cell is refined until all four entries are
    constant, then the two row norms and the cross product are compared to
    1 and 0 in the symbolic coefficient algebra.
    """
    if not (h1.dilation == h2.dilation == s.dilation):
        raise ValueError("coefficients and sigma must share one dilation factor")
    one = SymbolicCoef.one()
    checks = []
    for dom, t in s.branches:
        shift = TWO_PI * t
        failures = []
        try:
            for iv in dom.pieces:
                cuts = {iv.lo, iv.hi}
                for sub, _ in h1.eval_on(iv):
                    cuts.update((sub.lo, sub.hi))
                for sub, _ in h2.eval_on(iv):
                    cuts.update((sub.lo, sub.hi))
                img = iv.translate(shift)
                for sub, _ in h1.eval_on(img):
                    cuts.update((sub.lo - shift, sub.hi - shift))
                for sub, _ in h2.eval_on(img):
                    cuts.update((sub.lo - shift, sub.hi - shift))
                for cell in IntervalSet((iv,)).cells_split_at(sorted(cuts)):
                    x = cell.midpoint()
                    y = x + shift
                    e11 = SymbolicCoef.lift(h1.eval_point(x))
                    e12 = SymbolicCoef.lift(h2.eval_point(x))
                    e21 = SymbolicCoef.lift(h2.eval_point(y))
                    e22 = SymbolicCoef.lift(h1.eval_point(y))
                    row1 = e11.abs2() + e12.abs2()
                    row2 = e21.abs2() + e22.abs2()
                    cross = e11 * e21.conjugate() + e12 * e22.conjugate()
                    if row1 != one or row2 != one or not cross.is_zero:
                        failures.append({"cell": cell, "row1_norm2": row1,
                                         "row2_norm2": row2, "cross": cross})
        except UncoveredDomainError as err:
            checks.append(Check(f"unitary-on-offset-{t:+d}", False, witness=err.witness,
                                detail=str(err)))
            continue
        name = f"unitary-on-offset-{t:+d}"
        if failures:
            f = failures[0]
            checks.append(Check(name, False, witness=f,
                                detail=f"|h1|^2+|h2|^2 = {f['row1_norm2']}, "
                                       f"cross = {f['cross']} at {f['cell']}"))
        else:
            checks.append(Check(name, True))
    return VerificationReport(tuple(checks), header="unitarity of the mixing matrix")


def interpolate(w1: IntervalSet, w2: IntervalSet, h1: DilationPeriodicFn,
                h2: DilationPeriodicFn, s: TranslationMap) -> PiecewiseWavelet:
    """Assemble h1 * chi_w1 + h2 * chi_w2 after checking the preconditions."""
    inv = is_involutive(s)
    if not inv.passed:
        raise PreconditionError("involutivity", inv)
    uni = check_unitary(h1, h2, s)
    if not uni.passed:
        raise PreconditionError("unitarity", uni)
    union = w1 | w2
    cells = union.cells_split_at(w1.endpoints() + w2.endpoints())
    out: list[tuple[Interval, Any]] = []
    for cell in cells:
        in1 = w1.contains_point(cell.midpoint())
        in2 = w2.contains_point(cell.midpoint())
        cuts = {cell.lo, cell.hi}
        if in1:
            for sub, _ in h1.eval_on(cell):
                cuts.update((sub.lo, sub.hi))
        if in2:
            for sub, _ in h2.eval_on(cell):
                cuts.update((sub.lo, sub.hi))
        for sub in IntervalSet((cell,)).cells_split_at(sorted(cuts)):
            x = sub.midpoint()
            v = SymbolicCoef.zero()
            if in1:
                v = v + SymbolicCoef.lift(h1.eval_point(x))
            if in2:
                v = v + SymbolicCoef.lift(h2.eval_point(x))
            out.append((sub, v))
    return PiecewiseWavelet.from_cells(out, s.dilation)
