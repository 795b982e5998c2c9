"""Independent brute-force implementations used only for verification.

These deliberately share no code paths with the operations they check:
pointwise values are re-summed from raw term lists instead of calling the
algebra layer, and the operator-norm routine works on plain dense
matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import ModelMismatch
from .scalars import QC, QC_ZERO

DIMENSION_CAP = 512

POWER_TOL = 1e-10
POWER_MAX_ITER = 100_000


def _pointwise(f, arrow: str) -> QC:
    # raw re-summation over the term list, bypassing algebra.evaluate
    total = QC_ZERO
    for coef, bis in f.terms:
        if arrow in bis.arrows:
            total = total + coef
    return total


def brute_convolve(f, g) -> dict:
    """Exact convolution values on every arrow of a finite model.

    (f*g)(gamma) is the double sum of f(alpha)g(beta) over factorisations
    alpha beta = gamma, enumerated directly from the composition table.
    """
    if f.model is not g.model:
        raise ModelMismatch("operands belong to different models")
    model = f.model
    if model.kind != "finite":
        raise ModelMismatch("brute_convolve needs a finite model")
    fv = {a: _pointwise(f, a) for a in model.arrows}
    gv = {a: _pointwise(g, a) for a in model.arrows}
    out = {a: QC_ZERO for a in model.arrows}
    for alpha in model.arrows:
        if fv[alpha].is_zero():
            continue
        for beta in model.arrows:
            if not model.can_compose(alpha, beta):
                continue
            out[model.compose(alpha, beta)] += fv[alpha] * gv[beta]
    return out


def brute_support(f) -> frozenset:
    """Exhaustive scan for the arrows where f is nonzero (finite model)."""
    if f.model.kind != "finite":
        raise ModelMismatch("brute_support needs a finite model")
    return frozenset(a for a in f.model.arrows if not _pointwise(f, a).is_zero())


class DenseMatrix:
    """Square complex matrix holder with a dimension cap."""

    def __init__(self, rows, cap: int = DIMENSION_CAP):
        data = np.asarray(rows, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError("matrix must be square")
        if data.shape[0] > cap:
            raise ValueError(f"dimension {data.shape[0]} exceeds cap {cap}")
        if not np.all(np.isfinite(data.view(float))):
            raise ValueError("matrix entries must be finite")
        self.data = data

    @property
    def dimension(self) -> int:
        return self.data.shape[0]


def matrix_norm(m, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> float:
    """Largest singular value via deterministic block power iteration.

    Iterates A = M*M on the fixed start block [all-ones | identity].  A
    single all-ones start is not enough: structured operators (circulants
    in particular) routinely have the all-ones vector exactly inside a
    non-leading eigenspace, so the canonical basis vectors ride along and
    the largest column estimate is taken.  Estimates only ever approach
    the true value from below.
    """
    if not isinstance(m, DenseMatrix):
        m = DenseMatrix(m)
    a = m.data.conj().T @ m.data
    n = a.shape[0]
    if n == 0:
        return 0.0
    block = np.concatenate(
        [np.full((n, 1), 1.0 / np.sqrt(n), dtype=complex), np.eye(n, dtype=complex)],
        axis=1,
    )
    est = 0.0
    for _ in range(max_iter):
        image = a @ block
        norms = np.linalg.norm(image, axis=0)
        new_est = float(norms.max())
        alive = norms > 0
        if not alive.any():
            return 0.0
        block = image[:, alive] / norms[alive]
        if abs(new_est - est) <= tol * max(1.0, new_est):
            est = new_est
            break
        est = new_est
    return float(np.sqrt(est))
