"""Regular representations on fibers, reduced norm, and the norm sandwich.

The regular representation at a unit x acts on the square-summable space
of the fiber at x; its matrix has exact entries.  Operator norms are the
only place floating point enters the library, via the oracle module's
power iteration, and every reported norm carries its tolerance.  The full
norm (supremum over all representations) is never computed, only squeezed
between the reduced norm and the coefficient-sum bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, element_test_points, evaluate, i_norm, open_support, sup_norm
from .errors import InfiniteFiber, ModelMismatch
from .groupoid import LazyIntegerFiber, TestPoint
from .oracle import matrix_norm
from .rewriting import trivial_bound
from .scalars import QC, QC_ZERO, RadicalSum, real_max

FIBER_NORM_TOL = 1e-10
SYMBOL_GRID = 1 << 16


@dataclass(frozen=True)
class FiberOperator:
    """Matrix of the regular representation of f on one fiber."""

    point: TestPoint
    basis: tuple
    entries: tuple  # rows of exact QC entries

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[e.to_complex() for e in row] for row in self.entries], dtype=complex
        )

    def matmul(self, other: "FiberOperator") -> "FiberOperator":
        assert self.basis == other.basis
        n = self.dimension
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = QC_ZERO
                for m in range(n):
                    acc = acc + self.entries[r][m] * other.entries[m][c]
                row.append(acc)
            rows.append(tuple(row))
        return FiberOperator(self.point, self.basis, tuple(rows))

    def conjugate_transpose(self) -> "FiberOperator":
        n = self.dimension
        rows = tuple(
            tuple(self.entries[c][r].conjugate() for c in range(n)) for r in range(n)
        )
        return FiberOperator(self.point, self.basis, rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)


def _head_index(p: TestPoint) -> int:
    return 0 if p.kind == "base" else int(p.value)


def regular_rep(f: AlgebraElement, x: TestPoint) -> FiberOperator:
    """The matrix of f acting on the fiber at the unit x.

    Column gamma carries f(alpha) in row alpha*gamma for every arrow alpha
    composable with gamma; bisection terms hit each column at most once.
    """
    model = f.model
    fiber = model.fiber(x)
    if isinstance(fiber, LazyIntegerFiber):
        raise InfiniteFiber("the base fiber is infinite; use symbol_norm")
    basis = tuple(fiber)
    n = len(basis)
    entries = [[QC_ZERO for _ in range(n)] for _ in range(n)]
    if model.kind == "finite":
        index = {p.value: i for i, p in enumerate(basis)}
        for col, gamma in enumerate(basis):
            top = model.rng[gamma.value]
            for alpha in model.arrows:
                if model.src[alpha] != top:
                    continue
                v = evaluate(f, TestPoint.arrow(alpha))
                if v.is_zero():
                    continue
                entries[index[model.compose(alpha, gamma.value)]][col] = v
    elif x.kind == "unit":
        entries[0][0] = evaluate(f, x)
    else:
        n_heads = model.heads
        for col, gamma in enumerate(basis):
            g = _head_index(gamma)
            for alpha in basis:
                v = evaluate(f, alpha)
                if v.is_zero():
                    continue
                row = (_head_index(alpha) + g) % n_heads
                entries[row][col] = v
    return FiberOperator(x, basis, tuple(tuple(row) for row in entries))


def fiber_norm(f: AlgebraElement, x: TestPoint, tol: float = FIBER_NORM_TOL) -> float:
    """Operator norm of the fiber matrix at x, within tol (one-sided from below)."""
    op = regular_rep(f, x)
    if op.dimension == 0:
        return 0.0
    return matrix_norm(op.to_numpy(), tol=tol)


def _representative_units(f: AlgebraElement):
    model = f.model
    if model.kind == "finite":
        return [TestPoint.arrow(u) for u in model.units]
    if model.heads is None:
        raise InfiniteFiber("the base fiber is infinite; use symbol_norm")
    points = [p for p in element_test_points(f) if p.kind == "unit"]
    points.append(TestPoint.base())
    return points


def reduced_norm(f: AlgebraElement, tol: float = FIBER_NORM_TOL) -> float:
    """Supremum of fiber norms over one representative unit per class.

    The fiber operator depends on the unit only through membership of the
    fiber in the term bisections, which is constant on evaluation classes,
    so the class representatives already realise the supremum.
    """
    best = 0.0
    for x in _representative_units(f):
        best = max(best, fiber_norm(f, x, tol))
    return best


@dataclass(frozen=True)
class SymbolNorm:
    value: float
    error: float  # one-sided grid error bound


def symbol_norm(f: AlgebraElement) -> SymbolNorm:
    """Norm of the base-fiber operator of the integer-headed snake.

    That operator is convolution on the integers by the finitely supported
    head-coefficient sequence, so its norm is the maximum modulus of the
    trigonometric symbol; the maximum is scanned on a fixed grid and the
    error bound is grid step times the derivative bound.
    """
    model = f.model
    if model.kind != "snake" or model.heads is not None:
        raise ModelMismatch("symbol_norm applies to the integer-headed snake only")
    coeffs = {0: evaluate(f, TestPoint.base())}
    for k in sorted({b.head for b in f.family() if b.head != 0}):
        coeffs[k] = evaluate(f, TestPoint.head(k))
    theta = 2.0 * np.pi * np.arange(SYMBOL_GRID) / SYMBOL_GRID
    total = np.zeros(SYMBOL_GRID, dtype=complex)
    deriv_bound = 0.0
    for k, c in coeffs.items():
        if c.is_zero():
            continue
        total += c.to_complex() * np.exp(1j * k * theta)
        deriv_bound += abs(k) * float(c.magnitude())
    value = float(np.abs(total).max()) if coeffs else 0.0
    error = (2.0 * np.pi / SYMBOL_GRID) * deriv_bound
    return SymbolNorm(value, error)


def _fits_single_bisection(f: AlgebraElement) -> bool:
    """Whether the support of f is contained in some compact open bisection."""
    support = open_support(f)
    if f.model.kind == "finite":
        arrows = [cls.descriptor[1] for cls in support.classes]
        srcs = [f.model.src[a] for a in arrows]
        rngs = [f.model.rng[a] for a in arrows]
        return len(set(srcs)) == len(srcs) and len(set(rngs)) == len(rngs)
    caps = [cls for cls in support.classes if cls.descriptor[0] in ("base", "head")]
    return len(caps) <= 1


@dataclass(frozen=True)
class NormReport:
    """Every computable norm of an element, and the full-norm sandwich.

    The full norm itself is a supremum over all representations and is
    reported only as bounded: below by the reduced norm and above by the
    coefficient-sum bound (and by the sup norm when the support fits in a
    single bisection).
    """

    sup_norm: RadicalSum
    i_norm: RadicalSum
    reduced_norm: float
    reduced_tol: float
    trivial_bound: RadicalSum
    bisection_bound: bool

    def full_norm_lower(self) -> float:
        return max(self.reduced_norm - self.reduced_tol, 0.0)

    def full_norm_upper(self) -> float:
        upper = self.trivial_bound
        if self.bisection_bound:
            upper = self.sup_norm if self.sup_norm < upper else upper
        return float(upper)

    def records_line(self) -> str:
        return (
            f"sup={float(self.sup_norm)!r} "
            f"inorm={float(self.i_norm)!r} "
            f"reduced={self.reduced_norm!r} "
            f"reduced_tol={self.reduced_tol!r} "
            f"mf={float(self.trivial_bound)!r} "
            f"bisection_bound={'true' if self.bisection_bound else 'false'}"
        )


def norm_sandwich(f: AlgebraElement, tol: float = FIBER_NORM_TOL) -> NormReport:
    """Assemble all computable norms of f; the full norm is only bracketed.

    Over the integer-headed snake the reduced norm is assembled from the
    base-fiber symbol norm and the one-dimensional fibers elsewhere, with
    the symbol grid error as its tolerance.
    """
    sup = sup_norm(f)
    inorm = i_norm(f)
    mf = trivial_bound(f)
    try:
        reduced = reduced_norm(f, tol)
        reduced_tol = tol
    except InfiniteFiber:
        sym = symbol_norm(f)
        off_base = real_max(
            evaluate(f, p).magnitude()
            for p in element_test_points(f)
            if p.kind == "unit"
        )
        reduced = max(sym.value, float(off_base))
        reduced_tol = max(sym.error, tol)
    report = NormReport(
        sup_norm=sup,
        i_norm=inorm,
        reduced_norm=reduced,
        reduced_tol=reduced_tol,
        trivial_bound=mf,
        bisection_bound=_fits_single_bisection(f),
    )
    assert report.reduced_norm <= float(report.i_norm) + report.reduced_tol + 1e-12
    assert report.reduced_norm <= float(report.trivial_bound) + report.reduced_tol + 1e-12
    if report.bisection_bound:
        assert report.reduced_norm <= float(report.sup_norm) + report.reduced_tol + 1e-12
    return report
