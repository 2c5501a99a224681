"""Regularized solvers for ill-posed operator equations with noisy data.

Two constructions with checkable guarantees: a variational method that
nearly minimizes ``||A(u) - f_delta|| + delta * phi(u)``, and residual
minimization over a compact constraint set.  Both come with certificate
inequalities that any returned solution must satisfy when the problem
hypotheses hold, plus a gallery of ill-posed test problems and brute-force
oracles to validate the solvers at small scale.
"""

from .errors import (BudgetExceededError, CertificateUnavailableError,
                     ConfigurationError, GridMismatchError, IllposedError,
                     InvalidParameterError, NonFiniteError,
                     SingularSystemError, SolverFailureError,
                     UnsupportedOperatorError)
from .gallery import (ConditionReport, ProblemInstance, build_problem,
                      condition_report, export_problem)
from .grids import Grid, inner_product, l2_norm, load_vector, save_vector
from .noise import NoisyData, inject_noise
from .operators import (OperatorSpec, adjoint_apply, apply, as_matrix,
                        dense_operator, diagonal_operator, domain_project,
                        identity_operator, jacobian_apply,
                        jacobian_adjoint_apply, nonlinear_operator)
from .oracle import (SearchBox, brute_force_minimize, refine_1d,
                     refine_coordinatewise)
from .quasisolution import (QuasiCertificate, QuasiResult,
                            minimize_on_compactum, quasi_certificate)
from .stabilizers import (Compactum, Stabilizer, contains, penalty_matrix,
                          phi_batch, phi_value, project_onto)
from .sweep import (SweepConfig, SweepReport, SweepRow, parse_config_file,
                    run_solve, run_sweep)
from .variational import (SolveOptions, VariationalCertificate,
                          VariationalResult, f_functional,
                          minimize_variational, tikhonov_point,
                          variational_certificate)

__version__ = "0.1.0"
