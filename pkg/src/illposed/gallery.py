"""Reproducible ill-posed test problems with known true solutions.

Each problem packages an operator, the true solution sampled from a fixed
closed-form profile, and the exact data ``f = A(y)``.  Refining the grid
changes the vectors but not the underlying function, so errors are
comparable across resolutions.

The ``diag-unbounded`` family deserves a caveat: no fixed finite-dimensional
matrix is literally unbounded or has a discontinuous inverse.  The family
encodes both properties asymptotically, with operator norms and inverse
norms that diverge together as the grid is refined.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, UnsupportedOperatorError
from .grids import Grid, save_vector
from .operators import (OperatorSpec, apply, as_matrix, dense_operator,
                        diagonal_operator, nonlinear_operator)

PROBLEM_NAMES = ("diag-unbounded", "volterra-int", "fredholm-gauss", "autoconv")
ILL_POSED_RATIO = 1e3


@dataclass(frozen=True)
class ProblemInstance:
    """A gallery problem: operator, true solution, exact data, provenance."""

    name: str
    grid: Grid
    op: OperatorSpec
    y_true: Optional[np.ndarray]
    f_exact: np.ndarray
    notes: str


@dataclass(frozen=True)
class ConditionReport:
    """Extreme singular values of a linear problem in the weighted geometry."""

    sigma_max: float
    sigma_min: float
    ratio: float
    ill_posed: bool


def _alternating_diagonal(n: int) -> np.ndarray:
    """Entries k+1 at even indices and 1/(k+1) at odd ones."""
    d = np.empty(n)
    k = np.arange((n + 1) // 2)
    d[0::2] = k[: len(d[0::2])] + 1.0
    d[1::2] = 1.0 / (k[: len(d[1::2])] + 1.0)
    return d


def _volterra_matrix(grid: Grid) -> np.ndarray:
    """Cumulative trapezoid integration from the left endpoint.

    Row 0 integrates over the half cell [a, a + h/2] so the matrix stays
    lower triangular with a strictly positive diagonal (hence injective);
    a zero first row would make the discretization singular.
    """
    n, h = grid.n, grid.h
    M = np.tril(np.full((n, n), h))
    M[:, 0] = h / 2.0
    np.fill_diagonal(M, h / 2.0)
    M[0, 0] = h / 2.0
    return M


def _fredholm_gauss_matrix(grid: Grid, sigma: float) -> np.ndarray:
    x = grid.nodes
    kernel = np.exp(-((x[:, None] - x[None, :]) ** 2) / (2.0 * sigma**2))
    return kernel * grid.gram_diagonal[None, :]


def autoconvolve(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Trapezoid discretization of (u * u)(x) = int_0^x u(t) u(x-t) dt."""
    c = np.convolve(u, u)[: grid.n]
    return grid.h * (c - u[0] * u)


def autoconvolve_jacobian(grid: Grid, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    c = np.convolve(u, v)[: grid.n]
    return grid.h * (2.0 * c - u[0] * v - v[0] * u)


def autoconvolve_jacobian_adjoint(grid: Grid, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    corr = np.convolve(w, u[::-1])[grid.n - 1:]
    out = grid.h * (2.0 * corr - u[0] * w)
    out[0] -= grid.h * float(np.dot(u, w))
    return out


def build_problem(name: str, n: int, sigma: float = 0.1,
                  a: float = 0.0, b: float = 1.0) -> ProblemInstance:
    """Construct a gallery problem on an ``n``-node grid over ``[a, b]``."""
    if name not in PROBLEM_NAMES:
        raise ConfigurationError(
            f"unknown problem {name!r}; valid names: {', '.join(PROBLEM_NAMES)}")
    # n = 3 is allowed so the brute-force oracles can cross-check the solvers
    # at the search dimension cap; production runs go through the batch
    # driver, which requires n >= 4
    if n < 3:
        raise ConfigurationError(f"gallery problems need n >= 3, got n={n}")
    grid = Grid(n, a, b)
    x = grid.nodes

    if name == "diag-unbounded":
        op = diagonal_operator(grid, _alternating_diagonal(n), injective=True)
        y = np.sin(np.pi * x)
        notes = ("diagonal entries alternate between k+1 and 1/(k+1): norms and "
                 "inverse norms both diverge under refinement, modeling an "
                 "unbounded operator with discontinuous inverse; injective "
                 "because every entry is nonzero")
    elif name == "volterra-int":
        op = dense_operator(grid, _volterra_matrix(grid), injective=True)
        y = np.sin(np.pi * x)
        notes = ("cumulative trapezoid integration (half-cell first row); "
                 "solving A u = f is numerical differentiation; injective by "
                 "lower triangularity with positive diagonal")
    elif name == "fredholm-gauss":
        op = dense_operator(grid, _fredholm_gauss_matrix(grid, sigma), injective=True)
        y = np.sin(np.pi * x)
        notes = (f"first-kind integral operator with Gaussian kernel, sigma={sigma}; "
                 "severely ill-conditioned; injective because the Gaussian kernel "
                 "matrix is strictly totally positive")
    else:  # autoconv
        op = nonlinear_operator(
            grid,
            apply_fn=lambda u: autoconvolve(grid, u),
            jacobian_fn=lambda u, v: autoconvolve_jacobian(grid, u, v),
            jacobian_adjoint_fn=lambda u, w: autoconvolve_jacobian_adjoint(grid, u, w),
            domain_project_fn=lambda u: np.maximum(u, 0.0),
            injective=True,
        )
        y = 1.0 + x * (1.0 - x)
        notes = ("nonlinear autoconvolution restricted to the positive cone, "
                 "where injectivity is asserted; solvers clamp iterates to be "
                 "nonnegative before any constraint projection")

    f = apply(op, y)
    return ProblemInstance(name=name, grid=grid, op=op, y_true=y, f_exact=f,
                           notes=notes)


def condition_report(p: ProblemInstance) -> ConditionReport:
    """Extreme singular values of the operator as a map of the weighted space."""
    if not p.op.is_linear:
        raise UnsupportedOperatorError(
            f"condition report needs a linear operator; {p.name!r} is nonlinear")
    M = as_matrix(p.op)
    s = np.sqrt(p.grid.weights)
    sv = np.linalg.svd((s[:, None] * M) / s[None, :], compute_uv=False)
    smax, smin = float(sv[0]), float(sv[-1])
    ratio = np.inf if smin == 0.0 else smax / smin
    return ConditionReport(sigma_max=smax, sigma_min=smin, ratio=float(ratio),
                           ill_posed=ratio > ILL_POSED_RATIO)


def export_problem(p: ProblemInstance, directory) -> list:
    """Write y, f and the operator payload as CSV files; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    written = []
    if p.y_true is not None:
        path = os.path.join(directory, f"{p.name}-y.csv")
        save_vector(path, p.y_true)
        written.append(path)
    path = os.path.join(directory, f"{p.name}-f.csv")
    save_vector(path, p.f_exact)
    written.append(path)
    if p.op.kind == "linear-diagonal":
        path = os.path.join(directory, f"{p.name}-diagonal.csv")
        save_vector(path, p.op.diagonal)
        written.append(path)
    elif p.op.kind == "linear-dense":
        path = os.path.join(directory, f"{p.name}-matrix.csv")
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            for row in p.op.matrix:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")
        written.append(path)
    return written
