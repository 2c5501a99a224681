import numpy as np
import pytest

from illposed import (CertificateUnavailableError, Grid,
                      InvalidParameterError, ProblemInstance,
                      SingularSystemError, SolveOptions, SolverFailureError,
                      Stabilizer, VariationalResult, apply, build_problem,
                      dense_operator, diagonal_operator, f_functional,
                      identity_operator, inject_noise, jacobian_apply,
                      l2_norm, minimize_variational, phi_value,
                      tikhonov_point, variational_certificate)
from illposed.variational import _TikhonovPath

DELTAS = (1e-1, 1e-2, 1e-3, 1e-4)


# --- the functional ----------------------------------------------------------

def test_f_at_truth_with_clean_data(default_stab):
    p = build_problem("diag-unbounded", 32)
    delta = 1e-3
    value = f_functional(p.op, p.f_exact, delta, default_stab, p.y_true)
    assert value == pytest.approx(delta * phi_value(default_stab, p.grid, p.y_true),
                                  rel=1e-12)


def test_f_reduces_to_penalty_when_residual_vanishes(default_stab, rng):
    g = Grid(16)
    op = identity_operator(g)
    u = rng.standard_normal(16)
    assert f_functional(op, u, 0.05, default_stab, u) == pytest.approx(
        0.05 * phi_value(default_stab, g, u), rel=1e-12)


@pytest.mark.parametrize("delta", DELTAS)
def test_f_at_truth_bounded_by_worst_case_noise(default_stab, delta):
    # with noise of norm exactly delta, F(y) = delta * (1 + phi(y))
    p = build_problem("volterra-int", 48)
    noisy = inject_noise(p.grid, p.f_exact, delta, 5)
    c1 = 1.0 + phi_value(default_stab, p.grid, p.y_true)
    value = f_functional(p.op, noisy.f_delta, delta, default_stab, p.y_true)
    assert value <= c1 * delta * (1 + 1e-12)
    assert value == pytest.approx(c1 * delta, rel=1e-10)


def test_nonpositive_delta_rejected(default_stab):
    p = build_problem("diag-unbounded", 8)
    with pytest.raises(InvalidParameterError):
        f_functional(p.op, p.f_exact, 0.0, default_stab, p.y_true)
    with pytest.raises(InvalidParameterError):
        minimize_variational(p.op, p.f_exact, -1.0, default_stab)


# --- the inner path solver ---------------------------------------------------

def test_tikhonov_identity_at_zero_returns_data(default_stab, rng):
    g = Grid(10)
    f_delta = rng.standard_normal(10)
    u = tikhonov_point(identity_operator(g), default_stab, f_delta, 0.0)
    assert np.allclose(u, f_delta, rtol=1e-10, atol=1e-14)


def test_tikhonov_huge_penalty_crushes_solution(default_stab):
    p = build_problem("diag-unbounded", 16)
    u = tikhonov_point(p.op, default_stab, p.f_exact, 1e12)
    assert l2_norm(p.grid, u) <= 1e-6 * l2_norm(p.grid, p.f_exact)


@pytest.mark.parametrize("lam", [0.0, 0.1, 2.0])
def test_tikhonov_matches_diagonal_closed_form(lam, rng):
    # with a diagonal A and the plain-norm stabilizer the weights cancel:
    # u_k = a_k f_k / (a_k^2 + lam)
    g = Grid(4)
    a = np.array([1.0, 2.0, 0.5, 3.0])
    op = diagonal_operator(g, a)
    stab = Stabilizer(1.0, 0.0)
    f_delta = rng.standard_normal(4)
    expected = a * f_delta / (a * a + lam)
    u = tikhonov_point(op, stab, f_delta, lam)
    assert np.allclose(u, expected, rtol=1e-12)


def test_singular_system_names_lambda(default_stab):
    g = Grid(4)
    row = np.array([1.0, 2.0, 3.0, 4.0])
    op = dense_operator(g, np.outer(np.ones(4), row), injective=False)
    with pytest.raises(SingularSystemError) as err:
        tikhonov_point(op, default_stab, np.ones(4), 0.0)
    assert err.value.lam == 0.0
    assert "lambda=0" in str(err.value)


def test_negative_lambda_rejected(default_stab):
    with pytest.raises(InvalidParameterError):
        tikhonov_point(identity_operator(Grid(4)), default_stab, np.ones(4), -1.0)


def test_path_monotonicity(default_stab, linear_problems):
    # residual grows and the stabilizer shrinks along the path
    lams = np.logspace(-12, 12, 25)
    for p in linear_problems.values():
        noisy = inject_noise(p.grid, p.f_exact, 1e-2, 3)
        path = _TikhonovPath(p.op, default_stab, noisy.f_delta)
        residuals, phis = [], []
        for lam in lams:
            u = path.point(lam)
            residuals.append(l2_norm(p.grid, apply(p.op, u) - noisy.f_delta))
            phis.append(phi_value(default_stab, p.grid, u))
        for i in range(len(lams) - 1):
            assert residuals[i + 1] >= residuals[i] * (1 - 1e-9)
            assert phis[i + 1] <= phis[i] * (1 + 1e-9) + 1e-300


# --- the outer minimization --------------------------------------------------

def test_consistent_identity_recovers_truth(default_stab):
    g = Grid(32)
    y = np.sin(np.pi * g.nodes)
    res = minimize_variational(identity_operator(g), y, 1e-8, default_stab)
    assert l2_norm(g, res.u_delta - y) <= 1e-6


def test_result_invariants(default_stab):
    p = build_problem("volterra-int", 32)
    delta = 1e-2
    noisy = inject_noise(p.grid, p.f_exact, delta, 11)
    res = minimize_variational(p.op, noisy.f_delta, delta, default_stab)
    assert res.F_value == pytest.approx(res.residual_noisy + delta * res.phi_u,
                                        rel=1e-10)
    assert res.m_hat <= res.F_value * (1 + 1e-15)
    assert res.lambda_star > 0.0


@pytest.mark.parametrize("delta", DELTAS)
def test_certificate_chain_diag(default_stab, delta):
    p = build_problem("diag-unbounded", 64)
    noisy = inject_noise(p.grid, p.f_exact, delta, 42)
    res = minimize_variational(p.op, noisy.f_delta, delta, default_stab)
    phi_y = phi_value(default_stab, p.grid, p.y_true)
    assert res.F_value <= (2.0 + phi_y) * delta + 1e-9
    assert res.phi_u <= 2.0 + phi_y + 1e-9
    # the infimum estimate sits below the value at the truth
    f_at_truth = f_functional(p.op, noisy.f_delta, delta, default_stab, p.y_true)
    assert res.m_hat <= f_at_truth + 1e-9
    assert f_at_truth <= (1.0 + phi_y) * delta + 1e-9


def test_certificate_thresholds_forced_by_arithmetic(default_stab):
    # phi(y) = 4 makes the thresholds 5*delta, 6*delta and 6
    g = Grid(9)
    y = np.full(9, 2.0)
    stab = Stabilizer(1.0, 0.0)
    op = identity_operator(g)
    problem = ProblemInstance(name="const", grid=g, op=op, y_true=y,
                              f_exact=apply(op, y), notes="")
    assert phi_value(stab, g, y) == pytest.approx(4.0, rel=1e-14)
    delta = 0.01

    def cert_for(m_hat, F_value, phi_u):
        res = VariationalResult(u_delta=y, F_value=F_value, residual_noisy=0.0,
                                phi_u=phi_u, lambda_star=1.0, m_hat=m_hat)
        return variational_certificate(res, problem, delta, stab)

    passing = cert_for(m_hat=0.05, F_value=0.06, phi_u=6.0)
    assert passing.c1 == pytest.approx(5.0) and passing.c == pytest.approx(6.0)
    assert passing.all_ok
    assert min(passing.slack_18, passing.slack_19, passing.slack_110) >= 0.0
    assert not cert_for(m_hat=0.0500001, F_value=0.06, phi_u=6.0).bound_18_ok
    assert not cert_for(m_hat=0.05, F_value=0.0600001, phi_u=6.0).bound_19_ok
    assert not cert_for(m_hat=0.05, F_value=0.06, phi_u=6.0001).bound_110_ok


def test_corrupted_solution_fails_certificates(default_stab):
    p = build_problem("diag-unbounded", 32)
    delta = 1e-2
    noisy = inject_noise(p.grid, p.f_exact, delta, 21)
    res = minimize_variational(p.op, noisy.f_delta, delta, default_stab)
    bad = 10.0 * res.u_delta
    bad_F = f_functional(p.op, noisy.f_delta, delta, default_stab, bad)
    corrupted = VariationalResult(
        u_delta=bad, F_value=bad_F,
        residual_noisy=l2_norm(p.grid, apply(p.op, bad) - noisy.f_delta),
        phi_u=phi_value(default_stab, p.grid, bad),
        lambda_star=res.lambda_star, m_hat=bad_F)
    cert = variational_certificate(corrupted, p, delta, default_stab)
    assert not cert.all_ok


def test_certificate_requires_truth(default_stab):
    p = build_problem("diag-unbounded", 16)
    blind = ProblemInstance(name=p.name, grid=p.grid, op=p.op, y_true=None,
                            f_exact=p.f_exact, notes="")
    res = minimize_variational(p.op, p.f_exact, 1e-2, default_stab)
    with pytest.raises(CertificateUnavailableError):
        variational_certificate(res, blind, 1e-2, default_stab)


def test_deterministic_given_inputs(default_stab):
    p = build_problem("fredholm-gauss", 48)
    noisy = inject_noise(p.grid, p.f_exact, 1e-3, 9)
    a = minimize_variational(p.op, noisy.f_delta, 1e-3, default_stab)
    b = minimize_variational(p.op, noisy.f_delta, 1e-3, default_stab)
    assert np.array_equal(a.u_delta, b.u_delta)
    assert a.lambda_star == b.lambda_star


# --- nonlinear path ----------------------------------------------------------

def test_gradient_matches_central_differences(default_stab, rng):
    p = build_problem("autoconv", 48)
    gram = p.grid.gram_diagonal
    noisy = inject_noise(p.grid, p.f_exact, 1e-2, 17)

    def half_residual_sq(u):
        r = apply(p.op, u) - noisy.f_delta
        return 0.5 * float(np.sum(gram * r * r))

    for _ in range(20):
        u = np.abs(1.0 + 0.3 * rng.standard_normal(p.grid.n))
        v = rng.standard_normal(p.grid.n)
        r = apply(p.op, u) - noisy.f_delta
        analytic = float(np.sum(gram * r * jacobian_apply(p.op, u, v)))
        eps = 1e-5
        numeric = (half_residual_sq(u + eps * v) - half_residual_sq(u - eps * v)) / (2 * eps)
        assert numeric == pytest.approx(analytic, rel=1e-6)


def test_nonlinear_non_convergence_carries_best_iterate(default_stab):
    p = build_problem("autoconv", 32)
    noisy = inject_noise(p.grid, p.f_exact, 1e-2, 2)
    opts = SolveOptions(seed=3, max_iter=1)
    with pytest.raises(SolverFailureError) as err:
        minimize_variational(p.op, noisy.f_delta, 1e-2, default_stab, opts)
    assert err.value.best_point is not None
    assert np.isfinite(err.value.best_value)


def test_nonlinear_solve_is_deterministic_and_reported_honestly(default_stab):
    p = build_problem("autoconv", 64)
    delta = 1e-1
    noisy = inject_noise(p.grid, p.f_exact, delta, 42)
    opts = SolveOptions(seed=7)
    res = minimize_variational(p.op, noisy.f_delta, delta, default_stab, opts)
    again = minimize_variational(p.op, noisy.f_delta, delta, default_stab, opts)
    assert np.array_equal(res.u_delta, again.u_delta)
    assert np.isnan(res.lambda_star)
    assert res.F_value == pytest.approx(res.residual_noisy + delta * res.phi_u,
                                        rel=1e-10)
    # the verdict must recompute from the stored quantities, pass or fail
    cert = variational_certificate(res, p, delta, default_stab)
    expected = res.F_value <= cert.c * delta + cert.tol
    assert cert.bound_19_ok == expected
    assert l2_norm(p.grid, res.u_delta - p.y_true) < 0.5
