"""Ample groupoid backends and their compact open bisections.

Two model families are implemented:

* ``FiniteGroupoid`` — an explicit finite set of arrows with composition
  and inverse tables, validated exhaustively against the groupoid axioms.
* ``SnakeGroupoid`` — a group bundle over the Cantor set whose isotropy is
  trivial except over the all-zeros base point, where it is Z_n (n >= 2)
  or the integers.  These are ample but non-Hausdorff: the extra arrows
  ("heads") over the base point can only be separated from the base by
  punctured neighborhoods.

Every compact open bisection of a snake model is encoded as a pair
``(C, h)`` with C clopen and h a head choice: ``(C, 0)`` denotes C itself,
and ``(C, h != 0)`` denotes ``(C minus the base point) with the head h
adjoined`` (legal only when C contains the base point).  This encoding is
complete: arrows are loops, a bisection holds at most one arrow over the
base, and compactness forces a punctured cylinder to be capped by either
the base or a single head.  The classification is a construction of this
library, not a quoted result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cantor import ClopenSet
from .errors import AxiomError, InfiniteFiber, ModelMismatch, SupportViolation


# ---------------------------------------------------------------------------
# test points


@dataclass(frozen=True)
class TestPoint:
    """A single element of a groupoid, exactly representable.

    kinds: ``arrow`` (finite model), ``unit`` (snake, the point w*000...
    for a binary word w with no trailing zeros), ``base`` (the all-zeros
    point) and ``head`` (the isotropy arrow gamma_k over the base).
    """

    kind: str
    value: object = None

    @staticmethod
    def arrow(name: str) -> "TestPoint":
        return TestPoint("arrow", name)

    @staticmethod
    def unit(word: str) -> "TestPoint":
        if any(ch not in "01" for ch in word):
            raise ValueError(f"bad unit word {word!r}")
        word = word.rstrip("0")
        if not word:
            return TestPoint("base")
        return TestPoint("unit", word)

    @staticmethod
    def base() -> "TestPoint":
        return TestPoint("base")

    @staticmethod
    def head(k: int) -> "TestPoint":
        if k == 0:
            return TestPoint("base")
        return TestPoint("head", k)

    def __str__(self):
        if self.kind == "arrow":
            return str(self.value)
        if self.kind == "unit":
            return f"unit:{self.value}"
        if self.kind == "base":
            return "base"
        return f"head:{self.value}"


# ---------------------------------------------------------------------------
# finite models


class FiniteGroupoid:
    """A finite discrete groupoid given by explicit tables.

    Units are arrows; ``compose(a, b)`` is defined exactly when
    ``src(a) == rng(b)``.
    """

    kind = "finite"

    def __init__(self, units, arrows, src, rng, compose, inv, name="finite"):
        self.units = tuple(units)
        self.arrows = tuple(arrows)
        self.src = dict(src)
        self.rng = dict(rng)
        self._compose = dict(compose)
        self._inv = dict(inv)
        self.name = name

    # -- structure maps

    def compose(self, a: str, b: str) -> str:
        try:
            return self._compose[(a, b)]
        except KeyError:
            raise AxiomError(f"composition undefined for ({a}, {b})") from None

    def can_compose(self, a: str, b: str) -> bool:
        return self.src[a] == self.rng[b]

    def inv(self, a: str) -> str:
        return self._inv[a]

    def is_unit(self, a: str) -> bool:
        return a in self._unit_set

    @property
    def _unit_set(self):
        return frozenset(self.units)

    # -- validation

    def validate(self) -> None:
        """Exhaustive check of the groupoid axioms; raises AxiomError."""
        unit_set = set(self.units)
        arrow_set = set(self.arrows)
        if not unit_set <= arrow_set:
            missing = sorted(unit_set - arrow_set)[0]
            raise AxiomError(f"unit {missing} is not an arrow")
        for a in self.arrows:
            if a not in self.src or a not in self.rng:
                raise AxiomError(f"arrow {a} lacks src/rng")
            if self.src[a] not in unit_set or self.rng[a] not in unit_set:
                raise AxiomError(f"arrow {a} has src/rng outside the unit set")
            if a not in self._inv:
                raise AxiomError(f"missing inverse for arrow {a}")
            if self._inv[a] not in arrow_set:
                raise AxiomError(f"inverse of {a} is not an arrow")
        for u in self.units:
            if self.src[u] != u or self.rng[u] != u:
                raise AxiomError(f"unit {u} is not a loop at itself")
        for (a, b), c in self._compose.items():
            if a not in arrow_set or b not in arrow_set:
                raise AxiomError(f"composition row ({a}, {b}) uses unknown arrows")
            if self.src[a] != self.rng[b]:
                raise AxiomError(f"composition defined for non-composable ({a}, {b})")
            if c not in arrow_set:
                raise AxiomError(f"composition ({a}, {b}) = {c} is not an arrow")
            if self.src[c] != self.src[b] or self.rng[c] != self.rng[a]:
                raise AxiomError(f"composition ({a}, {b}) = {c} breaks src/rng")
        for a in self.arrows:
            for b in self.arrows:
                if self.can_compose(a, b) and (a, b) not in self._compose:
                    raise AxiomError(f"missing composition for composable ({a}, {b})")
        for a in self.arrows:
            u, v = self.src[a], self.rng[a]
            if self.compose(a, u) != a:
                raise AxiomError(f"right identity fails: ({a}, {u})")
            if self.compose(v, a) != a:
                raise AxiomError(f"left identity fails: ({v}, {a})")
            ai = self._inv[a]
            if self._inv[ai] != a:
                raise AxiomError(f"inverse not involutive at {a}")
            if self.compose(ai, a) != u:
                raise AxiomError(f"inv({a})*{a} != src({a})")
            if self.compose(a, ai) != v:
                raise AxiomError(f"{a}*inv({a}) != rng({a})")
        for a in self.arrows:
            for b in self.arrows:
                if not self.can_compose(a, b):
                    continue
                ab = self.compose(a, b)
                for c in self.arrows:
                    if not self.can_compose(b, c):
                        continue
                    if self.compose(ab, c) != self.compose(a, self.compose(b, c)):
                        raise AxiomError(f"non-associative composition at ({a}, {b}, {c})")

    # -- bisections and points

    def bisection(self, arrows) -> "FiniteBisection":
        return FiniteBisection(self, frozenset(arrows))

    def unit_bisection(self) -> "FiniteBisection":
        return FiniteBisection(self, frozenset(self.units))

    def point(self, name: str) -> TestPoint:
        if name not in self.src:
            raise ValueError(f"unknown arrow {name!r}")
        return TestPoint.arrow(name)

    def fiber(self, x: TestPoint):
        if x.kind != "arrow" or not self.is_unit(x.value):
            raise ValueError(f"{x} is not a unit of this model")
        return [TestPoint.arrow(a) for a in sorted(self.arrows) if self.src[a] == x.value]

    def unit_region(self) -> frozenset:
        return frozenset(self.units)

    def __repr__(self):
        return f"FiniteGroupoid({self.name}, {len(self.units)} units, {len(self.arrows)} arrows)"


class FiniteBisection:
    """A set of arrows of a finite model on which src and rng are injective."""

    __slots__ = ("model", "arrows")

    def __init__(self, model: FiniteGroupoid, arrows: frozenset):
        unknown = arrows - set(model.arrows)
        if unknown:
            raise ValueError(f"unknown arrows {sorted(unknown)}")
        srcs = [model.src[a] for a in arrows]
        rngs = [model.rng[a] for a in arrows]
        if len(set(srcs)) != len(srcs) or len(set(rngs)) != len(rngs):
            raise AxiomError(f"arrow set {sorted(arrows)} is not a bisection")
        self.model = model
        self.arrows = frozenset(arrows)

    def product(self, other: "FiniteBisection") -> "FiniteBisection":
        _same_model(self, other)
        m = self.model
        out = {
            m.compose(a, b)
            for a in self.arrows
            for b in other.arrows
            if m.can_compose(a, b)
        }
        return FiniteBisection(m, frozenset(out))

    def inverse(self) -> "FiniteBisection":
        return FiniteBisection(self.model, frozenset(self.model.inv(a) for a in self.arrows))

    def source_region(self):
        return frozenset(self.model.src[a] for a in self.arrows)

    def range_region(self):
        return frozenset(self.model.rng[a] for a in self.arrows)

    def contains(self, p: TestPoint) -> bool:
        return p.kind == "arrow" and p.value in self.arrows

    def is_empty(self) -> bool:
        return not self.arrows

    def __eq__(self, other):
        return (
            isinstance(other, FiniteBisection)
            and self.model is other.model
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash(self.arrows)

    def __repr__(self):
        return f"FiniteBisection({sorted(self.arrows)})"


# ---------------------------------------------------------------------------
# snake models


class SnakeGroupoid:
    """Group bundle over the Cantor set with isotropy Z_n or Z at the base."""

    kind = "snake"

    def __init__(self, heads):
        # heads: an integer n >= 2 for Z_n, or None for integer heads
        if heads is not None and (not isinstance(heads, int) or heads < 2):
            raise ValueError("head group must be Z_n with n >= 2, or Z")
        self.heads = heads
        self.name = f"snake-Z{heads}" if heads else "snake-Z"

    def head_norm(self, k: int) -> int:
        return k % self.heads if self.heads is not None else k

    def head_add(self, a: int, b: int) -> int:
        return self.head_norm(a + b)

    def head_neg(self, a: int) -> int:
        return self.head_norm(-a)

    def head_values(self):
        """Nonzero head labels; only available for cyclic head groups."""
        if self.heads is None:
            raise InfiniteFiber("the integer-headed snake has infinitely many heads")
        return list(range(1, self.heads))

    def validate(self) -> None:
        pass  # constructor constraints are the full axiom set here

    def bisection(self, clopen: ClopenSet, head: int = 0) -> "SnakeBisection":
        return SnakeBisection(self, clopen, head)

    def unit_bisection(self) -> "SnakeBisection":
        return SnakeBisection(self, ClopenSet.full(), 0)

    def fiber(self, x: TestPoint):
        if x.kind == "unit":
            return [x]
        if x.kind == "base":
            if self.heads is None:
                return LazyIntegerFiber()
            return [TestPoint.base()] + [TestPoint.head(k) for k in self.head_values()]
        raise ValueError(f"{x} is not a unit of this model")

    def unit_region(self) -> ClopenSet:
        return ClopenSet.full()

    def __repr__(self):
        return f"SnakeGroupoid({self.name})"


class LazyIntegerFiber:
    """The base fiber of the integer-headed snake: base, then heads by |k|."""

    infinite = True

    def __iter__(self):
        yield TestPoint.base()
        for k in itertools.count(1):
            yield TestPoint.head(k)
            yield TestPoint.head(-k)

    def describe(self) -> str:
        return "base together with heads k for every nonzero integer k"

    def __repr__(self):
        return "LazyIntegerFiber()"


class SnakeBisection:
    """Compact open bisection of a snake model, encoded as (clopen, head)."""

    __slots__ = ("model", "clopen", "head")

    def __init__(self, model: SnakeGroupoid, clopen: ClopenSet, head: int = 0):
        head = model.head_norm(head)
        if head != 0 and not clopen.contains_base():
            raise AxiomError("a head-capped bisection needs the base point in its clopen set")
        self.model = model
        self.clopen = clopen
        self.head = head

    @classmethod
    def _canonical(cls, model, clopen, head):
        head = model.head_norm(head)
        if not clopen.contains_base():
            head = 0
        return cls(model, clopen, head)

    def product(self, other: "SnakeBisection") -> "SnakeBisection":
        _same_model(self, other)
        meet = self.clopen & other.clopen
        return SnakeBisection._canonical(
            self.model, meet, self.model.head_add(self.head, other.head)
        )

    def inverse(self) -> "SnakeBisection":
        return SnakeBisection(self.model, self.clopen, self.model.head_neg(self.head))

    def source_region(self) -> ClopenSet:
        return self.clopen

    range_region = source_region

    def contains(self, p: TestPoint) -> bool:
        if p.kind == "base":
            return self.head == 0 and self.clopen.contains_base()
        if p.kind == "head":
            return self.head != 0 and self.head == self.model.head_norm(p.value)
        if p.kind == "unit":
            return self.clopen.contains_point(p.value)
        return False

    def is_empty(self) -> bool:
        return self.clopen.is_empty()

    def depth(self) -> int:
        return self.clopen.depth()

    def __eq__(self, other):
        return (
            isinstance(other, SnakeBisection)
            and self.model is other.model
            and self.clopen == other.clopen
            and self.head == other.head
        )

    def __hash__(self):
        return hash((self.clopen, self.head))

    def __repr__(self):
        cap = "unit" if self.head == 0 else f"head {self.head}"
        return f"SnakeBisection({self.clopen!r}, {cap})"


# ---------------------------------------------------------------------------
# shared operations


def _same_model(a, b):
    if a.model is not b.model:
        raise ModelMismatch("operands belong to different groupoid models")


def bisection_product(b, d):
    return b.product(d)


def bisection_inverse(b):
    return b.inverse()


def source_region(b):
    return b.source_region()


def range_region(b):
    return b.range_region()


def fiber(model, x: TestPoint):
    return model.fiber(x)


def fiber_product_points(b, x: TestPoint) -> list:
    """The set B*{x} for a unit point x; always empty or a singleton."""
    if isinstance(b, FiniteBisection):
        m = b.model
        out = [a for a in sorted(b.arrows) if m.src[a] == x.value]
        return [TestPoint.arrow(a) for a in out]
    if x.kind == "base":
        if not b.clopen.contains_base():
            return []
        return [TestPoint.head(b.head)] if b.head != 0 else [TestPoint.base()]
    return [x] if b.contains(x) else []


def working_depth(bisections, extra_depth: int = 0) -> int:
    depths = [b.depth() for b in bisections]
    return max([1, extra_depth] + depths)


def occurring_heads(bisections, extra_heads=()) -> list:
    heads = {b.head for b in bisections if b.head != 0}
    heads.update(h for h in extra_heads if h != 0)
    return sorted(heads)


def enumerate_test_points(model, family, extra_depth: int = 0, extra_heads=()) -> list:
    """A finite point set on which linear combinations over the family are
    faithfully determined.

    Finite models: all arrows appearing in the family.  Snake models: one
    representative per depth-d cylinder class (d = max cylinder word length,
    at least 1), a punctured representative for the all-zeros class, the
    base point, and every head that occurs.
    """
    if model.kind == "finite":
        arrows = sorted(set().union(*[b.arrows for b in family]) if family else set())
        return [TestPoint.arrow(a) for a in arrows]
    d = working_depth(family, extra_depth)
    points = []
    for bits in itertools.product("01", repeat=d):
        w = "".join(bits)
        if w != "0" * d:
            points.append(TestPoint.unit(w))
    points.append(TestPoint.unit("0" * d + "1"))
    points.append(TestPoint.base())
    points.extend(TestPoint.head(k) for k in occurring_heads(family, extra_heads))
    return points


# -- containment and Hausdorff-local set algebra on bisections


def contains_bisection(outer, inner) -> bool:
    """Exact set containment inner <= outer for bisections of one model."""
    _same_model(outer, inner)
    if isinstance(inner, FiniteBisection):
        return inner.arrows <= outer.arrows
    if not inner.clopen.subset_of(outer.clopen):
        return False
    if inner.head != 0:
        return outer.head == inner.head
    if inner.clopen.contains_base():
        return outer.head == 0
    return True


def intersect_within(b1, b2):
    """Intersection of two bisections lying in a common Hausdorff bisection."""
    _same_model(b1, b2)
    if isinstance(b1, FiniteBisection):
        return FiniteBisection(b1.model, b1.arrows & b2.arrows)
    meet = b1.clopen & b2.clopen
    if b1.head == b2.head:
        return SnakeBisection._canonical(b1.model, meet, b1.head)
    # mismatched caps inside one Hausdorff bisection cannot both touch base
    if meet.contains_base():
        raise AxiomError("intersection is not compact open: operands share no Hausdorff ambient")
    return SnakeBisection(b1.model, meet, 0)


def difference_within(b1, b2):
    """Set difference b1 minus b2 for bisections in a common Hausdorff bisection."""
    _same_model(b1, b2)
    if isinstance(b1, FiniteBisection):
        return FiniteBisection(b1.model, b1.arrows - b2.arrows)
    rest = b1.clopen - b2.clopen
    if b1.head == b2.head:
        return SnakeBisection._canonical(b1.model, rest, 0)
    if b1.head == 0:
        if b1.clopen.contains_base() and b2.clopen.contains_base():
            raise AxiomError("difference is not compact open: operands share no Hausdorff ambient")
        return SnakeBisection._canonical(b1.model, rest, 0)
    # b1 head-capped, b2 differently capped: the cap of b1 survives
    if not rest.contains_base():
        raise AxiomError("difference is not compact open: operands share no Hausdorff ambient")
    return SnakeBisection(b1.model, rest, b1.head)


def disjointify(cover, within) -> list:
    """Order-preserving disjoint refinement of a cover inside one bisection.

    Returns D_1, D_2 minus D_1, D_3 minus (D_1 union D_2), ...; the input
    order is never re-sorted and empty leftovers are kept in place.
    """
    cover = list(cover)
    for i, member in enumerate(cover):
        if not contains_bisection(within, member):
            raise SupportViolation(
                f"cover member {i} is not contained in the ambient bisection"
            )
    out = []
    for member in cover:
        piece = member
        for earlier in out:
            piece = difference_within(piece, earlier)
        out.append(piece)
    return out
