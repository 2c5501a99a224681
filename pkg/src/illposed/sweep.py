"""Batch driver: single solves, noise-level sweeps, certificates, CSV reports.

The CSV artifact is a pure function of the configuration: per-level noise
seeds derive from the base seed and the position of each level in the
configured list, and the wall-clock column is left empty in the file (two
identical runs must produce byte-identical CSVs; measured timings go to the
console summary and to the in-memory report instead).
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from math import isnan
from typing import Dict, List, Optional, Tuple

from .errors import ConfigurationError, SolverFailureError
from .gallery import ProblemInstance, build_problem
from .grids import l2_norm
from .noise import EXACT_NORM, inject_noise
from .operators import apply
from .quasisolution import minimize_on_compactum, quasi_certificate
from .stabilizers import Compactum, Stabilizer, phi_value
from .variational import (SolveOptions, minimize_variational,
                          variational_certificate)

CSV_COLUMNS = (
    "delta", "method", "error_l2", "residual_noisy", "residual_exact",
    "phi_u", "F_value", "cert_18", "cert_19", "cert_110", "cert_24",
    "cert_26", "lambda_star", "wall_ms",
)

METHOD_VARIATIONAL = "variational"
METHOD_QUASI = "quasi"
METHOD_BOTH = "both"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERDICT = 2


@dataclass
class SweepConfig:
    """Configuration of a solve or sweep run; flags override config-file keys."""

    problem: str
    n: int = 64
    sigma: float = 0.1
    method: str = METHOD_BOTH
    deltas: Tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4)
    seed: int = 42
    noise_mode: str = EXACT_NORM
    alpha0: float = 1.0
    alpha1: float = 1.0
    rho: Optional[float] = None
    rho_factor: float = 1.5
    out: Optional[str] = None

    def __post_init__(self):
        if self.method not in (METHOD_VARIATIONAL, METHOD_QUASI, METHOD_BOTH):
            raise ConfigurationError(f"unknown method {self.method!r}")
        if not self.deltas:
            raise ConfigurationError("at least one noise level is required")
        if any(d <= 0.0 for d in self.deltas):
            raise ConfigurationError("noise levels must be strictly positive")
        if self.n < 4:
            raise ConfigurationError(f"n must be at least 4, got {self.n}")

    @property
    def methods(self) -> List[str]:
        if self.method == METHOD_BOTH:
            return [METHOD_VARIATIONAL, METHOD_QUASI]
        return [self.method]


@dataclass
class SweepRow:
    delta: float
    method: str
    error_l2: Optional[float] = None
    residual_noisy: Optional[float] = None
    residual_exact: Optional[float] = None
    phi_u: Optional[float] = None
    F_value: Optional[float] = None
    cert_18: Optional[bool] = None
    cert_19: Optional[bool] = None
    cert_110: Optional[bool] = None
    cert_24: Optional[bool] = None
    cert_26: Optional[bool] = None
    lambda_star: Optional[float] = None
    wall_ms: Optional[float] = None
    solver_error: Optional[str] = None

    @property
    def certificates_ok(self) -> bool:
        checks = [self.cert_18, self.cert_19, self.cert_110,
                  self.cert_24, self.cert_26]
        if self.solver_error is not None:
            return False
        return all(c for c in checks if c is not None)


@dataclass
class SweepReport:
    config: SweepConfig
    rows: List[SweepRow] = field(default_factory=list)

    @property
    def all_certificates_pass(self) -> bool:
        return all(row.certificates_ok for row in self.rows)

    def error_decreasing(self, method: str) -> Optional[bool]:
        """Whether the error at the smallest level beats the largest one."""
        rows = [r for r in self.rows if r.method == method and r.error_l2 is not None]
        if len(rows) < 2:
            return None
        largest = max(rows, key=lambda r: r.delta)
        smallest = min(rows, key=lambda r: r.delta)
        return smallest.error_l2 < largest.error_l2

    @property
    def exit_code(self) -> int:
        ok = self.all_certificates_pass
        for method in self.config.methods:
            verdict = self.error_decreasing(method)
            if verdict is False:
                ok = False
        return EXIT_OK if ok else EXIT_VERDICT


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    value = float(value)
    if isnan(value):
        return ""
    return repr(value)


def rows_to_csv(rows: List[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = [_format_cell(getattr(row, col)) for col in CSV_COLUMNS[:-1]]
        cells.append("")  # wall_ms stays empty: the file must be reproducible
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def delta_seed(config: SweepConfig, delta_index: int) -> int:
    """Noise seed for one level: appending levels never reshuffles earlier rows."""
    return config.seed + delta_index


def resolve_rho(config: SweepConfig, problem: ProblemInstance,
                stab: Stabilizer) -> float:
    if config.rho is not None:
        print("warning: explicit rho given; the convergence guarantee needs the "
              "true solution inside the constraint set, which is not checked",
              file=sys.stderr)
        return config.rho
    if problem.y_true is None:
        raise ConfigurationError(
            "rho-factor policy needs a known true solution; pass an explicit rho")
    return config.rho_factor * phi_value(stab, problem.grid, problem.y_true)


def solve_one(problem: ProblemInstance, method: str, delta: float,
              noise_seed: int, config: SweepConfig) -> SweepRow:
    """Run one (method, delta) cell and evaluate its certificates."""
    stab = Stabilizer(config.alpha0, config.alpha1)
    grid = problem.grid
    noisy = inject_noise(grid, problem.f_exact, delta, noise_seed,
                         mode=config.noise_mode)
    opts = SolveOptions(seed=config.seed)
    row = SweepRow(delta=delta, method=method)
    started = time.perf_counter()
    try:
        if method == METHOD_VARIATIONAL:
            res = minimize_variational(problem.op, noisy.f_delta, delta, stab, opts)
            res.residual_exact = l2_norm(grid, apply(problem.op, res.u_delta)
                                         - problem.f_exact)
            cert = variational_certificate(res, problem, delta, stab)
            row.residual_noisy = res.residual_noisy
            row.residual_exact = res.residual_exact
            row.phi_u = res.phi_u
            row.F_value = res.F_value
            row.lambda_star = res.lambda_star
            row.cert_18 = cert.bound_18_ok
            row.cert_19 = cert.bound_19_ok
            row.cert_110 = cert.bound_110_ok
            u = res.u_delta
        else:
            K = Compactum(stab, resolve_rho(config, problem, stab))
            res = minimize_on_compactum(problem.op, noisy.f_delta, K, opts)
            cert = quasi_certificate(res, problem.op, problem.f_exact, delta)
            row.residual_noisy = res.residual_noisy
            row.residual_exact = res.residual_exact
            row.phi_u = phi_value(stab, grid, res.u_delta)
            row.lambda_star = res.lambda_star
            row.cert_24 = cert.bound_24_ok
            row.cert_26 = cert.bound_26_ok
            u = res.u_delta
        if problem.y_true is not None:
            row.error_l2 = l2_norm(grid, u - problem.y_true)
    except SolverFailureError as exc:
        row.solver_error = str(exc)
    row.wall_ms = 1000.0 * (time.perf_counter() - started)
    return row


def run_solve(config: SweepConfig) -> SweepReport:
    """Single-level run: one row per selected method at the first noise level."""
    problem = build_problem(config.problem, config.n, sigma=config.sigma)
    delta = config.deltas[0]
    report = SweepReport(config=config)
    for method in config.methods:
        report.rows.append(
            solve_one(problem, method, delta, delta_seed(config, 0), config))
    return report


def run_sweep(config: SweepConfig) -> SweepReport:
    """One row per (delta, method); rows are reported by descending delta."""
    problem = build_problem(config.problem, config.n, sigma=config.sigma)
    seeds = {delta: delta_seed(config, j) for j, delta in enumerate(config.deltas)}
    report = SweepReport(config=config)
    for delta in sorted(set(config.deltas), reverse=True):
        for method in config.methods:
            report.rows.append(
                solve_one(problem, method, delta, seeds[delta], config))
    if config.out is not None:
        write_report_csv(report, config.out)
    return report


def write_report_csv(report: SweepReport, path: str) -> None:
    text = rows_to_csv(report.rows)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def print_summary(report: SweepReport, stream=None) -> None:
    stream = stream or sys.stdout
    total_ms = 0.0
    for row in report.rows:
        certs = [
            name for name, ok in (("18", row.cert_18), ("19", row.cert_19),
                                  ("110", row.cert_110), ("24", row.cert_24),
                                  ("26", row.cert_26))
            if ok is not None and ok
        ]
        failures = [
            name for name, ok in (("18", row.cert_18), ("19", row.cert_19),
                                  ("110", row.cert_110), ("24", row.cert_24),
                                  ("26", row.cert_26))
            if ok is False
        ]
        status = "FAIL " + ",".join(failures) if failures else "pass " + ",".join(certs)
        if row.solver_error is not None:
            status = f"SOLVER FAILURE ({row.solver_error})"
        err = "n/a" if row.error_l2 is None else f"{row.error_l2:.6e}"
        print(f"delta={row.delta:<8g} method={row.method:<12s} "
              f"error={err} [{status}] ({row.wall_ms:.1f} ms)", file=stream)
        total_ms += row.wall_ms or 0.0
    print(f"all-certificates-pass: {report.all_certificates_pass}", file=stream)
    for method in report.config.methods:
        verdict = report.error_decreasing(method)
        if verdict is not None:
            print(f"error-decreasing[{method}]: {verdict}", file=stream)
    print(f"total wall time: {total_ms:.1f} ms", file=stream)


# --- flat key = value configuration files ----------------------------------

_CONFIG_PARSERS = {
    "problem": str,
    "n": int,
    "sigma": float,
    "method": str,
    "delta": float,
    "deltas": lambda s: tuple(float(x) for x in s.split(",") if x.strip()),
    "seed": int,
    "noise_mode": str,
    "alpha0": float,
    "alpha1": float,
    "rho": float,
    "rho_factor": float,
    "out": str,
}


def parse_config_file(path: str) -> Dict[str, object]:
    """Parse a flat ``key = value`` file with ``#`` comments."""
    values: Dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_PARSERS:
                raise ConfigurationError(
                    f"{path}:{lineno}: unknown key {key!r}; valid keys: "
                    f"{', '.join(sorted(_CONFIG_PARSERS))}")
            try:
                values[key] = _CONFIG_PARSERS[key](value.strip())
            except ValueError as exc:
                raise ConfigurationError(
                    f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    if "delta" in values and "deltas" not in values:
        values["deltas"] = (values.pop("delta"),)
    else:
        values.pop("delta", None)
    return values
