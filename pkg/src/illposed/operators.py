"""Forward operators: dense or diagonal linear maps, and nonlinear maps.

Adjoints are taken with respect to the trapezoid-weighted inner product of
the grid, so ``inner(A u, v) == inner(u, adjoint_apply(A, v))`` holds for the
weighted geometry, not the plain matrix transpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonFiniteError, UnsupportedOperatorError
from .grids import Grid, check_vec

LINEAR_DENSE = "linear-dense"
LINEAR_DIAGONAL = "linear-diagonal"
NONLINEAR = "nonlinear"


@dataclass(frozen=True)
class OperatorSpec:
    """A forward map A from grid vectors to grid vectors.

    ``matrix`` / ``diagonal`` hold the payload for the linear kinds.  The
    nonlinear kind carries callables: ``apply_fn(u)``, the directional
    derivative ``jacobian_fn(u, v)``, optionally its plain transpose
    ``jacobian_adjoint_fn(u, w)`` and a projection ``domain_project_fn(u)``
    onto the operator domain (for example a positivity clamp).
    """

    kind: str
    grid: Grid
    injective: bool
    matrix: Optional[np.ndarray] = None
    diagonal: Optional[np.ndarray] = None
    apply_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    jacobian_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    jacobian_adjoint_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    domain_project_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in (LINEAR_DENSE, LINEAR_DIAGONAL, NONLINEAR):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        n = self.grid.n
        if self.kind == LINEAR_DENSE:
            if self.matrix is None or self.matrix.shape != (n, n):
                raise ValueError(f"dense operator needs an ({n}, {n}) matrix")
        elif self.kind == LINEAR_DIAGONAL:
            if self.diagonal is None or self.diagonal.shape != (n,):
                raise ValueError(f"diagonal operator needs {n} diagonal entries")
        else:
            if self.apply_fn is None or self.jacobian_fn is None:
                raise ValueError("nonlinear operator needs apply_fn and jacobian_fn")

    @property
    def is_linear(self) -> bool:
        return self.kind in (LINEAR_DENSE, LINEAR_DIAGONAL)


def dense_operator(grid: Grid, matrix: np.ndarray, injective: bool) -> OperatorSpec:
    matrix = np.asarray(matrix, dtype=float)
    return OperatorSpec(LINEAR_DENSE, grid, injective, matrix=matrix)


def diagonal_operator(grid: Grid, diagonal: np.ndarray,
                      injective: Optional[bool] = None) -> OperatorSpec:
    diagonal = np.asarray(diagonal, dtype=float)
    if injective is None:
        injective = bool(np.all(diagonal != 0.0))
    return OperatorSpec(LINEAR_DIAGONAL, grid, injective, diagonal=diagonal)


def identity_operator(grid: Grid) -> OperatorSpec:
    return diagonal_operator(grid, np.ones(grid.n), injective=True)


def nonlinear_operator(grid, apply_fn, jacobian_fn, injective,
                       jacobian_adjoint_fn=None, domain_project_fn=None) -> OperatorSpec:
    return OperatorSpec(
        NONLINEAR, grid, injective,
        apply_fn=apply_fn, jacobian_fn=jacobian_fn,
        jacobian_adjoint_fn=jacobian_adjoint_fn,
        domain_project_fn=domain_project_fn,
    )


def _check_output(op: OperatorSpec, out: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise NonFiniteError(
            f"operator produced a non-finite value at index {bad}", index=bad
        )
    return out


def apply(op: OperatorSpec, u: np.ndarray) -> np.ndarray:
    """Evaluate A(u)."""
    u = check_vec(op.grid, u, "operator input")
    if op.kind == LINEAR_DENSE:
        out = op.matrix @ u
    elif op.kind == LINEAR_DIAGONAL:
        out = op.diagonal * u
    else:
        out = np.asarray(op.apply_fn(u), dtype=float)
    return _check_output(op, out)


def adjoint_apply(op: OperatorSpec, v: np.ndarray) -> np.ndarray:
    """Evaluate the adjoint of a linear A in the weighted inner product."""
    if not op.is_linear:
        raise UnsupportedOperatorError("adjoint is only defined for linear operators")
    v = check_vec(op.grid, v, "adjoint input")
    if op.kind == LINEAR_DIAGONAL:
        out = op.diagonal * v
    else:
        w = op.grid.weights
        out = (op.matrix.T @ (w * v)) / w
    return _check_output(op, out)


def jacobian_apply(op: OperatorSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Directional derivative A'(u) v of a nonlinear operator."""
    if op.kind != NONLINEAR:
        raise UnsupportedOperatorError("jacobian_apply is for nonlinear operators")
    u = check_vec(op.grid, u, "base point")
    v = check_vec(op.grid, v, "direction")
    return _check_output(op, np.asarray(op.jacobian_fn(u, v), dtype=float))


def jacobian_adjoint_apply(op: OperatorSpec, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Plain transpose A'(u)^T w, built column by column when no closed form is set."""
    if op.kind != NONLINEAR:
        raise UnsupportedOperatorError("jacobian_adjoint_apply is for nonlinear operators")
    if op.jacobian_adjoint_fn is not None:
        return np.asarray(op.jacobian_adjoint_fn(u, w), dtype=float)
    n = op.grid.n
    jac = np.empty((n, n))
    eye = np.eye(n)
    for j in range(n):
        jac[:, j] = op.jacobian_fn(u, eye[j])
    return jac.T @ w


def domain_project(op: OperatorSpec, u: np.ndarray) -> np.ndarray:
    """Project onto the operator domain (identity when no projection is set)."""
    if op.domain_project_fn is None:
        return u
    return np.asarray(op.domain_project_fn(u), dtype=float)


def as_matrix(op: OperatorSpec) -> np.ndarray:
    """Dense matrix of a linear operator."""
    if op.kind == LINEAR_DENSE:
        return op.matrix
    if op.kind == LINEAR_DIAGONAL:
        return np.diag(op.diagonal)
    raise UnsupportedOperatorError("nonlinear operators have no matrix form")
