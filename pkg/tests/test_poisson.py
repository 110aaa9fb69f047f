import numpy as np
import pytest

from quadham.core import CoordChart, ScalarField, State, sample_states
from quadham.poisson import (
    PoissonUV,
    assemble_matrix,
    bracket,
    build_3d_pair,
    build_uv_from_pair,
    casimir_residual,
    compatibility_lambda,
    corrupt_v_component,
    degeneracy,
    hamiltonian_vector_field,
    jacobi_residual_bruteforce,
    jacobi_residual_uv,
    matrix3_pencil,
    nambu_field,
    scale_uv,
    uv_pencil,
)
from quadham.systems import get_system, uv_from_exprs

CHART4 = CoordChart("t4", ("u", "x", "y", "z"), distinguished_index=0)


def _const_uv(U, V):
    return PoissonUV(
        CHART4,
        lambda c, t: np.asarray(U, dtype=float),
        lambda c, t: np.asarray(V, dtype=float),
        lambda c, t: np.zeros((3, 4)),
        lambda c, t: np.zeros((3, 4)),
    )


def test_assemble_matrix_block_layout():
    p = _const_uv([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    s = State(np.zeros(4))
    N = p.matrix(s)
    np.testing.assert_allclose(N, -N.T)
    np.testing.assert_allclose(N[0, 1:], [-1.0, -2.0, -3.0])
    # spatial block is the Hodge dual of V: N[1,2] = -V3, N[2,3] = -V1, N[1,3] = V2
    assert N[1, 2] == -6.0 and N[2, 3] == -4.0 and N[1, 3] == 5.0


def test_constant_structure_satisfies_jacobi():
    p = _const_uv([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    s = State(np.array([0.3, -0.2, 0.9, 1.4]))
    sc, vec = jacobi_residual_uv(p, s)
    assert abs(sc) < 1e-14 and np.max(np.abs(vec)) < 1e-14
    assert jacobi_residual_bruteforce(p, s) < 1e-9


def test_build_uv_from_pair_casimirs_and_degeneracy():
    u, x, y, z = CHART4.symbols()
    Ha = ScalarField.from_expr(CHART4, x**2 - z**2, "Ha")
    Hb = ScalarField.from_expr(CHART4, z**2 + u**2 - y**2, "Hb")
    p = build_uv_from_pair(Ha, Hb, CHART4)
    for s in sample_states(CHART4, 40, seed=1):
        assert abs(degeneracy(p, s)) < 1e-12
        assert casimir_residual(p, Ha, s) < 1e-12
        assert casimir_residual(p, Hb, s) < 1e-12
        sc, vec = jacobi_residual_uv(p, s)
        assert abs(sc) < 1e-10 and np.max(np.abs(vec)) < 1e-10


def test_bracket_antisymmetry():
    desc = get_system("shivamoggi")
    lab, N, H = desc.structures[0]
    F = desc.integrals["H2"]
    s = State(np.array([1.0, 0.8, -0.4, 0.6]))
    assert bracket(N, H, F, s) == pytest.approx(-bracket(N, F, H, s))


def test_hamiltonian_vector_field_reproduces_flow_up_to_theta():
    desc = get_system("shivamoggi")
    s = State(np.array([1.0, 0.8, -0.4, 0.6]))
    th = desc.theta.eval(s)
    for lab, N, H in desc.structures:
        xv = th * hamiltonian_vector_field(N, H, s)
        np.testing.assert_allclose(xv, desc.field.eval(s), atol=1e-12)


def test_compatibility_and_pencil():
    desc = get_system("shivamoggi")
    (_, N1, _), (_, N2, _) = desc.structures[0], desc.structures[1]
    s = State(np.array([0.9, 1.2, 0.5, -0.7]))
    assert abs(compatibility_lambda(N1, N2, s)) < 1e-12
    pen = uv_pencil(N1, N2, 0.37)
    sc, vec = jacobi_residual_uv(pen, s)
    assert abs(sc) < 1e-10 and np.max(np.abs(vec)) < 1e-10


def test_scale_uv_keeps_hamiltonian_structure():
    desc = get_system("shivamoggi")
    lab, N, H = desc.structures[0]
    u, x, y, z = desc.chart.symbols()
    th = ScalarField.from_expr(desc.chart, 2 + x**2, "th")
    scaled = scale_uv(N, th)
    s = State(np.array([0.4, 1.1, -0.3, 0.8]))
    np.testing.assert_allclose(scaled.matrix(s), th.eval(s) * N.matrix(s), atol=1e-13)
    sc, vec = jacobi_residual_uv(scaled, s)
    assert abs(sc) < 1e-10 and np.max(np.abs(vec)) < 1e-10


def test_corrupt_v_component_breaks_jacobi():
    desc = get_system("shivamoggi")
    lab, N, H = desc.structures[0]
    bad = corrupt_v_component(N, 1)
    worst = 0.0
    for s in sample_states(desc.chart, 20, seed=2, domain=desc.sample_domain):
        worst = max(worst, jacobi_residual_bruteforce(bad, s))
    assert worst > 1e-2


def test_3d_pair_and_nambu():
    desc = get_system("lorenz_conservative")
    H1, H2 = desc.integrals["H1"], desc.integrals["H2"]
    n2, n1 = build_3d_pair(H1, H2, desc.chart)
    for s in sample_states(desc.chart, 30, seed=5):
        w = nambu_field(H2, H1, s)
        np.testing.assert_allclose(w, desc.field.eval(s), atol=1e-12)
    (_, Na, _), (_, Nb, _) = desc.matrices3
    pen = matrix3_pencil(Na, Nb, -1.4)
    s = State(np.array([0.6, -0.9, 1.1]))
    assert jacobi_residual_bruteforce(pen, s) < 1e-8


def test_poisson_uv_requires_distinguished_first():
    bad = CoordChart("b4", ("a", "b", "c", "d"), distinguished_index=2)
    with pytest.raises(ValueError):
        PoissonUV(bad, lambda c, t: np.zeros(3), lambda c, t: np.zeros(3))


def test_uv_from_exprs_analytic_jacobians():
    u, x, y, z = CHART4.symbols()
    p = uv_from_exprs(CHART4, [u * x, y**2, z], [x, 0, -z])
    s = State(np.array([1.0, 2.0, 3.0, 4.0]))
    Ju = np.asarray(p.u_jac_fn(s.coords, s.t))
    np.testing.assert_allclose(Ju[0], [2.0, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(Ju[1], [0.0, 0.0, 6.0, 0.0])
