"""Constructive support-rewriting algorithms.

The four operations here rewrite term lists without changing pointwise
values: confining every term of an element inside a covering region,
restricting an element to a sub-bisection, producing a compact open unit
window around a unit-supported element, and splitting an element along a
cover of bisections with an exact sup-norm budget per summand.

All choices are deterministic.  Escape sets and patches are built from
evaluation classes at the working depth of the participating bisections;
every element in play is constant on those classes, which is asserted at
runtime wherever an algorithm relies on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    UNIT_SPACE,
    AlgebraElement,
    element_test_points,
    evaluate,
    is_supported_in,
    sup_norm,
)
from .cantor import ClopenSet
from .errors import AxiomError, SupportViolation
from .groupoid import (
    FiniteBisection,
    SnakeBisection,
    TestPoint,
    contains_bisection,
    difference_within,
    disjointify,
    intersect_within,
    occurring_heads,
    working_depth,
)
from .scalars import QC_ZERO, RadicalSum


def _as_members(region) -> list:
    if isinstance(region, (FiniteBisection, SnakeBisection)):
        return [region]
    members = list(region)
    if not members:
        return members
    return members


def _class_bisection(model, p: TestPoint, depth: int):
    """The smallest class-shaped compact open bisection holding the point p."""
    if model.kind == "finite":
        return FiniteBisection(model, frozenset([p.value]))
    if p.kind == "base":
        return SnakeBisection(model, ClopenSet(["0" * depth]), 0)
    if p.kind == "head":
        return SnakeBisection(model, ClopenSet(["0" * depth]), p.value)
    word = str(p.value)
    if len(word) > depth:
        # the punctured class has no compact open cover of its own; callers
        # must have covered it through the capped neighborhood already
        raise AxiomError(
            "cannot represent a neighborhood of the punctured class as a bisection"
        )
    return SnakeBisection(model, ClopenSet([word.ljust(depth, "0")]), 0)


def _caps_first(points) -> list:
    return sorted(points, key=lambda p: 0 if p.kind in ("base", "head") else 1)


def _sum_terms(terms, model) -> AlgebraElement:
    return AlgebraElement(model, terms)


def rewrite_within(f: AlgebraElement, region) -> AlgebraElement:
    """Rewrite f so every term bisection is contained in the covering region.

    The region is a bisection or an iterable of bisections read as their
    union; f must be supported in it.  Escaping terms are peeled off one at
    a time: for the first escaping term B1, every escape class carries a
    cancelling family (all current terms through the class, whose
    coefficients sum to zero because f vanishes there), a class-shaped
    neighborhood inside that family's intersection is removed from each
    family member, and the values are unchanged.
    """
    members = _as_members(region)
    if not is_supported_in(f, members):
        raise SupportViolation("support is not contained in the target region")
    model = f.model
    terms = list(f.nonzero_terms())

    def in_region(p):
        return any(m.contains(p) for m in members)

    while True:
        family = [b for _, b in terms] + members
        depth = working_depth(family) if model.kind == "snake" else 0
        points = element_test_points(
            _sum_terms(terms, model), extra_family=members
        )
        escape_idx = None
        for t, (_, bis) in enumerate(terms):
            if any(bis.contains(p) and not in_region(p) for p in points):
                escape_idx = t
                break
        if escape_idx is None:
            return _sum_terms(terms, model)

        b1 = terms[escape_idx][1]
        escapes = _caps_first(
            [p for p in points if b1.contains(p) and not in_region(p)]
        )
        chosen = []  # (neighborhood, cancelling term indices)
        for p in escapes:
            if any(nbhd.contains(p) for nbhd, _ in chosen):
                continue
            cancel = [t for t, (_, bis) in enumerate(terms) if bis.contains(p)]
            assert escape_idx in cancel
            total = QC_ZERO
            for t in cancel:
                total = total + terms[t][0]
            assert total.is_zero(), "escape point carries a nonzero value"
            nbhd = _class_bisection(model, p, depth)
            for t in cancel:
                assert contains_bisection(terms[t][1], nbhd)
            chosen.append((nbhd, cancel))

        pieces = disjointify([nbhd for nbhd, _ in chosen], within=b1)
        new_terms = []
        for t, (coef, bis) in enumerate(terms):
            shrunk = bis
            for (_, cancel), piece in zip(chosen, pieces):
                if t in cancel:
                    shrunk = difference_within(shrunk, piece)
            new_terms.append((coef, shrunk))
        assert not any(
            new_terms[escape_idx][1].contains(p) and not in_region(p) for p in points
        )
        terms = new_terms


def restrict(f: AlgebraElement, b, within) -> AlgebraElement:
    """The element equal to f on the bisection b and zero elsewhere.

    Requires b inside the bisection `within` and f supported in `within`;
    the result is built by confining f's terms to `within` and meeting
    each with b.
    """
    if not contains_bisection(within, b):
        raise SupportViolation("restriction target is not contained in the ambient bisection")
    if not is_supported_in(f, within):
        raise SupportViolation("support escapes the ambient bisection")
    confined = rewrite_within(f, [within])
    terms = [(coef, intersect_within(bis, b)) for coef, bis in confined.nonzero_terms()]
    return AlgebraElement(f.model, terms)


def unit_support_window(f: AlgebraElement):
    """A compact open unit region containing the support of f.

    Returns the source image of the union of f's term bisections, so the
    window can exceed the support when terms cancel.
    """
    if not is_supported_in(f, UNIT_SPACE):
        raise SupportViolation("support is not contained in the unit space")
    if f.model.kind == "finite":
        units = set()
        for _, bis in f.nonzero_terms():
            units |= bis.source_region()
        return frozenset(units)
    window = ClopenSet.empty()
    for _, bis in f.nonzero_terms():
        window = window | bis.source_region()
    return window


def trivial_bound(f: AlgebraElement) -> RadicalSum:
    """Sum of coefficient magnitudes of the current term list.

    This bounds every representation norm but depends on the term list,
    not just on the function f.
    """
    total = RadicalSum()
    for coef, _ in f.terms:
        total = total + coef.magnitude()
    return total


@dataclass
class Decomposition:
    """An exact splitting f = sum of parts, one part per cover bisection."""

    parts: list  # (AlgebraElement, assigned bisection) pairs, cover order
    epsilon: Fraction
    repair_iterations: int

    def total(self) -> AlgebraElement:
        model = self.parts[0][0].model
        terms = []
        for part, _ in self.parts:
            terms.extend(part.terms)
        return AlgebraElement(model, terms)


def _tile(bis, depth: int) -> list:
    """Disjoint class-shaped bisections tiling bis at the working depth."""
    if isinstance(bis, FiniteBisection):
        return [FiniteBisection(bis.model, frozenset([a])) for a in sorted(bis.arrows)]
    cells = []
    zeros = "0" * depth
    for idx in range(1, 2**depth):
        w = format(idx, f"0{depth}b")
        if bis.clopen.contains_point(w):
            cells.append(SnakeBisection(bis.model, ClopenSet([w]), 0))
    if bis.clopen.contains_base():
        cells.append(SnakeBisection(bis.model, ClopenSet([zeros]), bis.head))
    return cells


def _parse_epsilon(epsilon) -> Fraction:
    if isinstance(epsilon, float):
        raise TypeError("epsilon must be exact: pass a Fraction, an int, or a decimal string")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return eps


def bounded_summands(f: AlgebraElement, cover, epsilon) -> Decomposition:
    """Split f along the cover with every summand's sup norm within budget.

    Postconditions, all exact: the parts sum to f pointwise, part i is
    supported in cover[i], and sup_norm(part i) <= sup_norm(f) + epsilon.

    Phase one confines f's terms to the cover union and tiles each term
    into class cells, assigning every cell to a containing cover member
    (the candidate order rotates with the term index, so overlapping
    covers genuinely produce oversized initial parts).  Phase two repairs
    oversized parts: on each class where a part exceeds the budget, the
    other parts through that class are restricted to a patch and folded
    into the oversized one, which caps it at values of f.  The number of
    oversized parts strictly decreases per round, which is asserted.
    """
    eps = _parse_epsilon(epsilon)
    cover = list(cover)
    k = len(cover)
    if not is_supported_in(f, cover):
        raise SupportViolation("cover does not contain the support")
    model = f.model
    if k == 0:
        return Decomposition([], eps, 0)

    confined = rewrite_within(f, cover)
    depth = (
        working_depth([b for _, b in confined.terms] + cover)
        if model.kind == "snake"
        else 0
    )

    buckets: list[list] = [[] for _ in range(k)]
    for t, (coef, bis) in enumerate(confined.nonzero_terms()):
        for cell in _tile(bis, depth):
            if cell.is_empty():
                continue
            for j in range(k):
                i = (t + j) % k
                if contains_bisection(cover[i], cell):
                    buckets[i].append((coef, cell))
                    break
            else:
                raise AxiomError("tile cell is not contained in any cover member")
    parts = [AlgebraElement(model, bucket) for bucket in buckets]

    budget = sup_norm(f) + eps
    rounds = 0
    violators = [i for i in range(k) if sup_norm(parts[i]) > budget]
    while violators:
        rounds += 1
        i = violators[0]
        parts = _repair_round(f, parts, cover, i, budget, depth)
        remaining = [j for j in range(k) if sup_norm(parts[j]) > budget]
        assert len(remaining) < len(violators), "repair round must shrink the violator set"
        violators = remaining
    return Decomposition(list(zip(parts, cover)), eps, rounds)


def _repair_round(f, parts, cover, i, budget, depth):
    model = f.model
    k = len(cover)
    probe = AlgebraElement(
        model, [term for part in parts for term in part.terms]
    )
    points = element_test_points(
        probe,
        extra_family=cover,
        extra_heads=occurring_heads(cover) if model.kind == "snake" else (),
    )
    escapes = _caps_first(
        [
            p
            for p in points
            if cover[i].contains(p) and evaluate(parts[i], p).magnitude() >= budget
        ]
    )
    patches = []  # (patch bisection, indices j != i whose parts fold in)
    for p in escapes:
        if any(patch.contains(p) for patch, _ in patches):
            continue
        fold = [j for j in range(k) if j != i and cover[j].contains(p)]
        contributions = evaluate(parts[i], p)
        for j in fold:
            contributions = contributions + evaluate(parts[j], p)
        assert contributions == evaluate(f, p), "cancelling family misses the value of f"
        patch = _class_bisection(model, p, depth)
        assert contains_bisection(cover[i], patch)
        for j in fold:
            assert contains_bisection(cover[j], patch)
        if model.kind == "snake" and p.kind in ("base", "head"):
            rep = TestPoint.unit("0" * depth + "1")
            for j in fold + [i]:
                assert evaluate(parts[j], rep) == evaluate(parts[j], p), (
                    "part is not constant on the capped patch"
                )
        patches.append((patch, fold))

    pieces = disjointify([patch for patch, _ in patches], within=cover[i])
    snapshot = list(parts)
    new_parts = list(parts)
    fold_terms = list(parts[i].terms)
    for (_, fold), piece in zip(patches, pieces):
        for j in fold:
            moved = restrict(snapshot[j], piece, within=cover[j])
            fold_terms.extend(moved.terms)
            new_parts[j] = new_parts[j] - moved
    new_parts[i] = AlgebraElement(model, fold_terms)
    return new_parts
