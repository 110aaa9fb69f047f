import numpy as np
import pytest

from quadham.core import (
    ChartMismatchError,
    CoordChart,
    DomainError,
    ScalarField,
    State,
    VectorField,
    cofactor_residual,
    domain_from_guards,
    grad_fd,
    lie_derivative,
    sample_states,
)

CHART = CoordChart("c3", ("x", "y", "z"))


def test_chart_symbols_and_dim():
    assert CHART.dim == 3
    assert [str(s) for s in CHART.symbols()] == ["x", "y", "z"]


def test_state_requires_matching_dim():
    s = State(np.array([1.0, 2.0, 3.0]), 0.5)
    assert s.dim == 3 and s.t == 0.5


def test_scalar_field_eval_grad_hess_dt():
    x, y, z = CHART.symbols()
    import sympy as sp
    from quadham.core import TIME

    F = ScalarField.from_expr(CHART, x**2 * y + sp.sin(z) + TIME * x, name="F")
    s = State(np.array([1.0, 2.0, 0.0]), 3.0)
    assert F.eval(s) == pytest.approx(2.0 + 0.0 + 3.0)
    np.testing.assert_allclose(F.grad(s), [2 * 1 * 2 + 3.0, 1.0, 1.0])
    assert F.dt(s) == pytest.approx(1.0)
    H = F.hess(s)
    assert H[0, 1] == pytest.approx(2.0)
    np.testing.assert_allclose(H, H.T)


def test_grad_fd_matches_analytic():
    x, y, z = CHART.symbols()
    import sympy as sp

    F = ScalarField.from_expr(CHART, sp.exp(x) * y**3 - z * x)
    s = State(np.array([0.3, -1.1, 0.7]))
    np.testing.assert_allclose(grad_fd(F, s), F.grad(s), atol=1e-9)


def test_vector_field_jacobian_and_autonomy():
    x, y, z = CHART.symbols()
    from quadham.core import TIME

    X = VectorField.from_exprs(CHART, [y, -x * z, x * y])
    assert X.autonomous
    s = State(np.array([1.0, 2.0, 3.0]))
    J = X.jac(s)
    np.testing.assert_allclose(J[1], [-3.0, 0.0, -1.0])
    Xt = VectorField.from_exprs(CHART, [y * TIME, x, z])
    assert not Xt.autonomous


def test_vector_field_nonfinite_raises_domain_error():
    x, y, z = CHART.symbols()
    X = VectorField.from_exprs(CHART, [1 / x, y, z])
    with np.errstate(divide="ignore"), pytest.raises(DomainError):
        X.eval(State(np.array([0.0, 1.0, 1.0])))


def test_lie_derivative_zero_for_first_integral():
    x, y, z = CHART.symbols()
    X = VectorField.from_exprs(CHART, [y, -x, 0])
    F = ScalarField.from_expr(CHART, x**2 + y**2)
    s = State(np.array([0.7, -0.4, 1.0]))
    assert lie_derivative(X, F, s) == pytest.approx(0.0, abs=1e-14)


def test_lie_derivative_chart_mismatch():
    other = CoordChart("c2", ("a", "b"))
    a, b = other.symbols()
    F = ScalarField.from_expr(other, a * b)
    x, y, z = CHART.symbols()
    X = VectorField.from_exprs(CHART, [y, -x, 0])
    with pytest.raises(ChartMismatchError):
        lie_derivative(X, F, State(np.array([1.0, 2.0])))


def test_cofactor_residual_darboux_pair():
    x, y, z = CHART.symbols()
    X = VectorField.from_exprs(CHART, [-x * y, y, z])
    J = ScalarField.from_expr(CHART, x)
    lam = ScalarField.from_expr(CHART, -y)
    s = State(np.array([1.3, 0.2, -0.5]))
    assert cofactor_residual(X, J, lam, s) == pytest.approx(0.0, abs=1e-14)


def test_domain_from_guards_rejects_near_zero():
    x, y, z = CHART.symbols()
    dom = domain_from_guards(CHART, nonzero=[x + y])
    assert dom(np.array([1.0, 1.0, 0.0]), 0.0)
    assert not dom(np.array([1.0, -1.0, 0.0]), 0.0)


def test_sample_states_deterministic_and_in_domain():
    dom = lambda c, t: c[0] > 0
    a = sample_states(CHART, 25, seed=3, domain=dom, t=0.4)
    b = sample_states(CHART, 25, seed=3, domain=dom, t=0.4)
    assert all(s.coords[0] > 0 for s in a)
    assert all(np.array_equal(p.coords, q.coords) for p, q in zip(a, b))
    c = sample_states(CHART, 25, seed=4, domain=dom)
    assert not np.array_equal(a[0].coords, c[0].coords)
