"""Exact arithmetic in the Steinberg algebra of a groupoid model.

Elements are finite formal combinations of indicator functions of compact
open bisections.  There is deliberately no normal form for term lists: in
a non-Hausdorff model an element need not be expressible over disjoint
bisections, so equality is decided by evaluation on a finite separating
point set rather than by normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cantor import ClopenSet
from .errors import ModelMismatch, SupportViolation
from .groupoid import (
    FiniteBisection,
    SnakeBisection,
    TestPoint,
    enumerate_test_points,
    working_depth,
)
from .scalars import QC, QC_ZERO, RadicalSum, real_max


class _UnitSpace:
    """Sentinel target meaning the whole unit space of the model."""

    def __repr__(self):
        return "UNIT_SPACE"


UNIT_SPACE = _UnitSpace()


class AlgebraElement:
    """A finite formal combination  sum of a_B * 1_B  over bisections B."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=()):
        clean = []
        for coef, bis in terms:
            if not isinstance(coef, QC):
                coef = QC(coef)
            if bis.model is not model:
                raise ModelMismatch("term bisection belongs to a different model")
            clean.append((coef, bis))
        self.model = model
        self.terms = tuple(clean)

    @classmethod
    def zero(cls, model) -> "AlgebraElement":
        return cls(model)

    @classmethod
    def indicator(cls, bis, coef=1) -> "AlgebraElement":
        return cls(bis.model, [(QC(coef) if not isinstance(coef, QC) else coef, bis)])

    def nonzero_terms(self):
        return [(c, b) for c, b in self.terms if not c.is_zero()]

    def family(self):
        return [b for _, b in self.terms]

    # -- vector-space structure

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check(self, other)
        return AlgebraElement(self.model, self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.model, [(-c, b) for c, b in self.terms])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def adj(self) -> "AlgebraElement":
        return involute(self)

    def __call__(self, p: TestPoint) -> QC:
        return evaluate(self, p)

    def __repr__(self):
        return f"AlgebraElement({len(self.terms)} terms over {self.model!r})"


def _check(f, g):
    if f.model is not g.model:
        raise ModelMismatch("elements live over different models")


def add(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    return f + g


def scale(c, f: AlgebraElement) -> AlgebraElement:
    c = c if isinstance(c, QC) else QC(c)
    return AlgebraElement(f.model, [(c * coef, b) for coef, b in f.terms])


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of 1_B * 1_D = 1_{BD}."""
    _check(f, g)
    terms = []
    for a, b in f.nonzero_terms():
        for c, d in g.nonzero_terms():
            terms.append((a * c, b.product(d)))
    return AlgebraElement(f.model, terms)


def involute(f: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(
        f.model, [(c.conjugate(), b.inverse()) for c, b in f.terms]
    )


def evaluate(f: AlgebraElement, p: TestPoint) -> QC:
    if not isinstance(p, TestPoint):
        raise TypeError("evaluation point must be a TestPoint")
    if f.model.kind == "finite" and p.kind != "arrow":
        raise ModelMismatch(f"{p} is not a point of a finite model")
    if f.model.kind == "snake" and p.kind == "arrow":
        raise ModelMismatch(f"{p} is not a point of a snake model")
    total = QC_ZERO
    for c, b in f.terms:
        if b.contains(p):
            total = total + c
    return total


def element_test_points(*elements, extra_family=(), extra_depth=0, extra_heads=()):
    """Separating points for everything built from the given elements."""
    model = elements[0].model
    family = [b for f in elements for b in f.family()]
    family.extend(extra_family)
    return enumerate_test_points(model, family, extra_depth, extra_heads)


def equals(f: AlgebraElement, g: AlgebraElement) -> bool:
    """Pointwise equality, decided on the joint separating point set."""
    _check(f, g)
    for p in element_test_points(f, g):
        if evaluate(f, p) != evaluate(g, p):
            return False
    return True


def is_zero(f: AlgebraElement) -> bool:
    return equals(f, AlgebraElement.zero(f.model))


# ---------------------------------------------------------------------------
# supports


@dataclass(frozen=True)
class SupportClass:
    """One evaluation class meeting the support, with its witness point.

    descriptor is ``('arrow', name)``, ``('word', w)`` for the cylinder of
    the depth-d word w, ``('punctured', d)`` for the depth-d all-zeros
    cylinder minus the base point, ``('base',)`` or ``('head', k)``.
    ``is_open`` states whether this class alone is an open subset of G.
    """

    descriptor: tuple
    point: TestPoint
    is_open: bool
    value: QC


@dataclass(frozen=True)
class SupportDescription:
    classes: tuple
    is_open: bool

    def descriptors(self):
        return [cls.descriptor for cls in self.classes]

    def points(self):
        return [cls.point for cls in self.classes]


def _snake_class_of(p: TestPoint, depth: int) -> tuple:
    if p.kind == "base":
        return ("base",)
    if p.kind == "head":
        return ("head", p.value)
    word = str(p.value)
    if len(word) > depth:  # the punctured representative 0^d 1
        return ("punctured", depth)
    return ("word", word.ljust(depth, "0"))


def open_support(f: AlgebraElement) -> SupportDescription:
    """The evaluation classes where f is nonzero, and openness of their union.

    A base or head class is never open on its own; the union is open iff
    every such class in the support sits over a nonzero punctured class.
    """
    points = element_test_points(f)
    classes = []
    if f.model.kind == "finite":
        for p in points:
            v = evaluate(f, p)
            if not v.is_zero():
                classes.append(SupportClass(("arrow", p.value), p, True, v))
        return SupportDescription(tuple(classes), True)
    depth = working_depth(f.family())
    punctured_nonzero = False
    needs_halo = False
    for p in points:
        v = evaluate(f, p)
        if v.is_zero():
            continue
        desc = _snake_class_of(p, depth)
        is_open = desc[0] in ("word", "punctured")
        if desc[0] == "punctured":
            punctured_nonzero = True
        if desc[0] in ("base", "head"):
            needs_halo = True
        classes.append(SupportClass(desc, p, is_open, v))
    overall = (not needs_halo) or punctured_nonzero
    return SupportDescription(tuple(classes), overall)


def _target_family(f: AlgebraElement, target):
    """Bisections and depth/head data a containment check must refine."""
    if target is UNIT_SPACE:
        return [], 0, ()
    if isinstance(target, (FiniteBisection, SnakeBisection)):
        return [target], 0, ()
    if isinstance(target, ClopenSet):
        return [], target.depth(), ()
    if isinstance(target, frozenset) or isinstance(target, set):
        return [], 0, ()
    # otherwise: an iterable of bisections (a region given as a union)
    members = list(target)
    return members, 0, ()


def _point_in_target(model, p: TestPoint, target) -> bool:
    if target is UNIT_SPACE:
        if model.kind == "finite":
            return model.is_unit(p.value)
        return p.kind in ("unit", "base")
    if isinstance(target, (FiniteBisection, SnakeBisection)):
        return target.contains(p)
    if isinstance(target, ClopenSet):
        if p.kind == "unit":
            return target.contains_point(p.value)
        if p.kind == "base":
            return target.contains_base()
        return False
    if isinstance(target, (frozenset, set)):
        return p.kind == "arrow" and p.value in target
    return any(member.contains(p) for member in target)


def is_supported_in(f: AlgebraElement, target) -> bool:
    """True iff every nonzero evaluation class of f lies inside the target.

    Targets: UNIT_SPACE, a bisection, a region (unit set or ClopenSet), or
    an iterable of bisections read as their union.
    """
    members, extra_depth, extra_heads = _target_family(f, target)
    points = element_test_points(
        f, extra_family=members, extra_depth=extra_depth, extra_heads=extra_heads
    )
    for p in points:
        if evaluate(f, p).is_zero():
            continue
        if not _point_in_target(f.model, p, target):
            return False
    return True


# ---------------------------------------------------------------------------
# norms and spectra


def sup_norm(f: AlgebraElement) -> RadicalSum:
    """max |f| over the groupoid, exact."""
    return real_max(evaluate(f, p).magnitude() for p in element_test_points(f))


def i_norm(f: AlgebraElement) -> RadicalSum:
    """sup over units of the larger fiber absolute sum, exact.

    For snake models the supremum runs over evaluation classes; fiber sums
    are constant on each class, so this loses nothing.
    """
    if f.model.kind == "finite":
        best = RadicalSum()
        for u in f.model.units:
            ssum = RadicalSum()
            rsum = RadicalSum()
            for a in f.model.arrows:
                if f.model.src[a] != u and f.model.rng[a] != u:
                    continue
                mag = evaluate(f, TestPoint.arrow(a)).magnitude()
                if f.model.src[a] == u:
                    ssum = ssum + mag
                if f.model.rng[a] == u:
                    rsum = rsum + mag
            best = real_max([best, ssum, rsum])
        return best
    sums = []
    base_sum = evaluate(f, TestPoint.base()).magnitude()
    for k in sorted({b.head for b in f.family() if b.head != 0}):
        base_sum = base_sum + evaluate(f, TestPoint.head(k)).magnitude()
    sums.append(base_sum)
    for p in element_test_points(f):
        if p.kind == "unit":
            sums.append(evaluate(f, p).magnitude())
    return real_max(sums)


@dataclass(frozen=True)
class Spectrum:
    """Values attained on a compact open unit window (a finite set)."""

    values: frozenset

    def radius(self) -> RadicalSum:
        return real_max(v.magnitude() for v in self.values)

    def __contains__(self, v):
        v = v if isinstance(v, QC) else QC(v)
        return v in self.values


def _window_points(f: AlgebraElement, window):
    """Unit evaluation points of the window, at a depth refining f and it."""
    model = f.model
    if model.kind == "finite":
        if not isinstance(window, (frozenset, set)):
            raise TypeError("finite-model windows are unit sets")
        return [TestPoint.arrow(u) for u in sorted(window)]
    if not isinstance(window, ClopenSet):
        raise TypeError("snake-model windows are clopen sets")
    pts = element_test_points(f, extra_depth=window.depth())
    out = []
    for p in pts:
        if p.kind == "unit" and window.contains_point(p.value):
            out.append(p)
        elif p.kind == "base" and window.contains_base():
            out.append(p)
    return out


def unit_spectrum(f: AlgebraElement, window=None) -> Spectrum:
    """The set of values f attains on a compact open unit window.

    f must be supported in the window; 0 enters the spectrum exactly when
    f vanishes somewhere on the window.  With no window given, the source
    window of f's term bisections is used.
    """
    if window is None:
        from .rewriting import unit_support_window

        window = unit_support_window(f)
    if not is_supported_in(f, window):
        raise SupportViolation("support escapes the requested unit window")
    pts = _window_points(f, window)
    if not pts:
        return Spectrum(frozenset([QC_ZERO]))
    return Spectrum(frozenset(evaluate(f, p) for p in pts))


def spectral_radius(f: AlgebraElement, window=None) -> RadicalSum:
    return unit_spectrum(f, window).radius()
