"""Degenerate Poisson structures in 3D and 4D.

4D structures are represented by two three-component vector functions (U, V)
filling the antisymmetric block matrix

    N = [[ 0,   -U1,  -U2,  -U3],
         [ U1,   0,   -V3,   V2],
         [ U2,   V3,   0,   -V1],
         [ U3,  -V2,   V1,   0 ]],

with the chart's distinguished coordinate in row/column 0.  Structures built
from a pair of scalar fields via `build_uv_from_pair` are degenerate
(U.V = 0) and satisfy the Jacobi identity by construction; both facts are
checked numerically, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from quadham.core import (
    ChartMismatchError,
    CoordChart,
    ScalarField,
    State,
    VectorField,
)


def _hodge3(v: np.ndarray) -> np.ndarray:
    """3x3 antisymmetric matrix M with M @ w = v x w."""
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


@dataclass(frozen=True)
class PoissonUV:
    """4D Poisson structure in (U, V) block form.

    ``u_jac_fn``/``v_jac_fn``, when present, return the 3x4 derivative arrays
    d(U_i)/d(x_a) over the full chart ordering (distinguished coordinate
    first); otherwise finite differences are used by the Jacobi checker.
    """

    chart: CoordChart
    u_fn: Callable
    v_fn: Callable
    u_jac_fn: Optional[Callable] = None
    v_jac_fn: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        if self.chart.dim != 4 or self.chart.distinguished_index != 0:
            raise ValueError("PoissonUV requires a 4D chart with the distinguished coordinate first")

    def U(self, s: State) -> np.ndarray:
        return np.asarray(self.u_fn(s.coords, s.t), dtype=float).reshape(3)

    def V(self, s: State) -> np.ndarray:
        return np.asarray(self.v_fn(s.coords, s.t), dtype=float).reshape(3)

    def matrix(self, s: State) -> np.ndarray:
        return assemble_matrix(self, s)

    @property
    def has_analytic_jac(self) -> bool:
        return self.u_jac_fn is not None and self.v_jac_fn is not None


@dataclass(frozen=True)
class PoissonMatrix3:
    """3D Poisson structure given directly as an antisymmetric matrix field."""

    chart: CoordChart
    matrix_fn: Callable
    name: str = ""

    def __post_init__(self):
        if self.chart.dim != 3:
            raise ValueError("PoissonMatrix3 requires a 3D chart")

    def matrix(self, s: State) -> np.ndarray:
        return np.asarray(self.matrix_fn(s.coords, s.t), dtype=float).reshape(3, 3)


@dataclass(frozen=True)
class CompatReport:
    """Maxima of absolute residuals for a family of structures over a sample set."""

    lambda_max: float
    degeneracy_max: float
    jacobi_max_scalar: float
    jacobi_max_vector: float
    samples: int


def assemble_matrix(p: PoissonUV, s: State) -> np.ndarray:
    """The block Poisson matrix; antisymmetric by construction."""
    U, V = p.U(s), p.V(s)
    N = np.zeros((4, 4))
    N[0, 1:] = -U
    N[1:, 0] = U
    N[1:, 1:] = _hodge3(V)
    return N


def bracket(N, F: ScalarField, G: ScalarField, s: State) -> float:
    """Poisson bracket {F, G} = grad(F) . N grad(G) in full chart dimension."""
    if not F.chart.same_as(G.chart) or not F.chart.same_as(N.chart):
        raise ChartMismatchError("bracket arguments live on different charts")
    return float(F.grad(s) @ N.matrix(s) @ G.grad(s))


def _matrix_entry_derivs(N, s: State, h: float) -> np.ndarray:
    """d(N^{cd})/d(x_a) by central differences; shape (dim, dim, dim), axis 0 = a."""
    n = s.dim
    out = np.empty((n, n, n))
    for a in range(n):
        ha = h * (1.0 + abs(s.coords[a]))
        cp, cm = s.coords.copy(), s.coords.copy()
        cp[a] += ha
        cm[a] -= ha
        out[a] = (N.matrix(State(cp, s.t)) - N.matrix(State(cm, s.t))) / (2 * ha)
    return out


def jacobi_residual_bruteforce(N, s: State, h: float = 1e-5) -> float:
    """Max |cyclic antisymmetrized Jacobi component| with finite-difference
    entry derivatives.  4 independent components in 4D, 1 in 3D, 0 in 2D."""
    n = s.dim
    M = N.matrix(s)
    dN = _matrix_entry_derivs(N, s, h)
    worst = 0.0
    for b in range(n):
        for c in range(b + 1, n):
            for d in range(c + 1, n):
                total = 0.0
                for a in range(n):
                    total += (
                        M[a, b] * dN[a, c, d]
                        + M[a, c] * dN[a, d, b]
                        + M[a, d] * dN[a, b, c]
                    )
                worst = max(worst, abs(total))
    return worst


def _uv_jacs(p: PoissonUV, s: State, h: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """3x4 derivative arrays of U and V, analytic when available, else
    Richardson-extrapolated central differences."""
    if p.has_analytic_jac:
        Ju = np.asarray(p.u_jac_fn(s.coords, s.t), dtype=float).reshape(3, 4)
        Jv = np.asarray(p.v_jac_fn(s.coords, s.t), dtype=float).reshape(3, 4)
        return Ju, Jv
    Ju = np.empty((3, 4))
    Jv = np.empty((3, 4))
    for k in range(4):
        hk = h * (1.0 + abs(s.coords[k]))
        deltas = []
        for step in (hk, hk / 2):
            cp, cm = s.coords.copy(), s.coords.copy()
            cp[k] += step
            cm[k] -= step
            sp_, sm = State(cp, s.t), State(cm, s.t)
            du = (p.U(sp_) - p.U(sm)) / (2 * step)
            dv = (p.V(sp_) - p.V(sm)) / (2 * step)
            deltas.append((du, dv))
        Ju[:, k] = (4 * deltas[1][0] - deltas[0][0]) / 3
        Jv[:, k] = (4 * deltas[1][1] - deltas[0][1]) / 3
    return Ju, Jv


def jacobi_residual_uv(p: PoissonUV, s: State, h: float = 1e-4) -> tuple[float, np.ndarray]:
    """Jacobi identity residuals in the split (scalar, vector) form.

    scalar = d_u(U.V) - V.(d_u U - curl V)
    vector = grad(U.V) - V div(U) + U x (d_u U - curl V)
    """
    U, V = p.U(s), p.V(s)
    Ju, Jv = _uv_jacs(p, s, h)
    du_U = Ju[:, 0]
    du_V = Jv[:, 0]
    Su = Ju[:, 1:]  # spatial Jacobian, Su[i, j] = d(U_i)/d(x_j)
    Sv = Jv[:, 1:]
    curl_v = np.array([Sv[2, 1] - Sv[1, 2], Sv[0, 2] - Sv[2, 0], Sv[1, 0] - Sv[0, 1]])
    div_u = np.trace(Su)
    K = du_U - curl_v
    du_uv = du_U @ V + U @ du_V
    grad_uv = Su.T @ V + Sv.T @ U
    scalar = du_uv - V @ K
    vector = grad_uv - V * div_u + np.cross(U, K)
    return float(scalar), vector


def degeneracy(p: PoissonUV, s: State) -> float:
    """U.V; zero for degenerate (rank-deficient) structures."""
    return float(p.U(s) @ p.V(s))


def build_uv_from_pair(Ha: ScalarField, Hb: ScalarField, chart: CoordChart) -> PoissonUV:
    """Structure with U = grad3(Ha) x grad3(Hb), V = d_u(Ha) grad3(Hb) - d_u(Hb) grad3(Ha).

    Ha and Hb are Casimirs of the result.  Analytic U/V Jacobians are derived
    from the fields' Hessians when both carry one.
    """
    if not Ha.chart.same_as(chart) or not Hb.chart.same_as(chart):
        raise ChartMismatchError("pair fields must share the target chart")

    def u_fn(c, t):
        ga, gb = Ha.grad_fn(c, t), Hb.grad_fn(c, t)
        return np.cross(ga[1:], gb[1:])

    def v_fn(c, t):
        ga, gb = Ha.grad_fn(c, t), Hb.grad_fn(c, t)
        return ga[0] * gb[1:] - gb[0] * ga[1:]

    u_jac = v_jac = None
    if Ha.hess_fn is not None and Hb.hess_fn is not None:

        def u_jac(c, t):
            ga, gb = Ha.grad_fn(c, t), Hb.grad_fn(c, t)
            ha, hb = Ha.hess_fn(c, t), Hb.hess_fn(c, t)
            out = np.empty((3, 4))
            for k in range(4):
                out[:, k] = np.cross(ha[1:, k], gb[1:]) + np.cross(ga[1:], hb[1:, k])
            return out

        def v_jac(c, t):
            ga, gb = Ha.grad_fn(c, t), Hb.grad_fn(c, t)
            ha, hb = Ha.hess_fn(c, t), Hb.hess_fn(c, t)
            out = np.empty((3, 4))
            for k in range(4):
                out[:, k] = (
                    ha[0, k] * gb[1:]
                    + ga[0] * hb[1:, k]
                    - hb[0, k] * ga[1:]
                    - gb[0] * ha[1:, k]
                )
            return out

    name = f"N({Ha.name},{Hb.name})" if Ha.name and Hb.name else ""
    return PoissonUV(chart, u_fn, v_fn, u_jac, v_jac, name=name)


def tri_hamiltonian_set(
    H1: ScalarField, H2: ScalarField, H3: ScalarField, chart: CoordChart
) -> tuple[PoissonUV, PoissonUV, PoissonUV]:
    """Cyclic construction: N(i) is built from the other two Hamiltonians,
    which become its Casimirs."""
    return (
        build_uv_from_pair(H2, H3, chart),
        build_uv_from_pair(H3, H1, chart),
        build_uv_from_pair(H1, H2, chart),
    )


def hamiltonian_vector_field(p: PoissonUV, H: ScalarField, s: State) -> np.ndarray:
    """N(s) @ grad4(H)(s)."""
    return assemble_matrix(p, s) @ H.grad(s)


def hamiltonian_vector_field_expanded(
    Ha: ScalarField, Hb: ScalarField, H: ScalarField, s: State
) -> np.ndarray:
    """Expanded cross-product form of N(Ha,Hb) @ grad4(H); cross-check for
    `hamiltonian_vector_field`."""
    ga, gb, g = Ha.grad(s), Hb.grad(s), H.grad(s)
    U = np.cross(ga[1:], gb[1:])
    out = np.empty(4)
    out[0] = -U @ g[1:]
    out[1:] = (
        U * g[0]
        + np.cross(gb[1:], g[1:]) * ga[0]
        + np.cross(g[1:], ga[1:]) * gb[0]
    )
    return out


def casimir_residual(p: PoissonUV, C: ScalarField, s: State) -> float:
    """Max-norm of N @ grad4(C); zero iff C is a Casimir at s."""
    return float(np.max(np.abs(assemble_matrix(p, s) @ C.grad(s))))


def compatibility_lambda(pi: PoissonUV, pj: PoissonUV, s: State) -> float:
    """Lambda_ij = U_i.V_j + U_j.V_i; zero iff the pair is compatible."""
    if not pi.chart.same_as(pj.chart):
        raise ChartMismatchError("compatibility requires a shared chart")
    return float(pi.U(s) @ pj.V(s) + pj.U(s) @ pi.V(s))


def conformal_match(
    X: VectorField, p: PoissonUV, H: ScalarField, theta: ScalarField, s: State
) -> float:
    """Max-norm of X - theta * (N grad4 H)."""
    return float(
        np.max(np.abs(X.eval(s) - theta.eval(s) * hamiltonian_vector_field(p, H, s)))
    )


def uv_pencil(pi: PoissonUV, pj: PoissonUV, c: float, name: str = "") -> PoissonUV:
    """Linear pencil (U_i + c U_j, V_i + c V_j)."""
    u_jac = v_jac = None
    if pi.has_analytic_jac and pj.has_analytic_jac:
        u_jac = lambda co, t: np.asarray(pi.u_jac_fn(co, t)) + c * np.asarray(pj.u_jac_fn(co, t))
        v_jac = lambda co, t: np.asarray(pi.v_jac_fn(co, t)) + c * np.asarray(pj.v_jac_fn(co, t))
    return PoissonUV(
        pi.chart,
        lambda co, t: np.asarray(pi.u_fn(co, t)) + c * np.asarray(pj.u_fn(co, t)),
        lambda co, t: np.asarray(pi.v_fn(co, t)) + c * np.asarray(pj.v_fn(co, t)),
        u_jac,
        v_jac,
        name=name or f"{pi.name}+{c}*{pj.name}",
    )


def scale_uv(p: PoissonUV, theta: ScalarField, name: str = "") -> PoissonUV:
    """Conformal rescaling theta*N; stays Poisson for degenerate structures."""
    u_jac = v_jac = None
    if p.has_analytic_jac and theta.hess_fn is not None:

        def u_jac(c, t):
            th, g = theta.eval_fn(c, t), theta.grad_fn(c, t)
            return th * np.asarray(p.u_jac_fn(c, t)) + np.outer(p.u_fn(c, t), g)

        def v_jac(c, t):
            th, g = theta.eval_fn(c, t), theta.grad_fn(c, t)
            return th * np.asarray(p.v_jac_fn(c, t)) + np.outer(p.v_fn(c, t), g)

    return PoissonUV(
        p.chart,
        lambda c, t: theta.eval_fn(c, t) * np.asarray(p.u_fn(c, t)),
        lambda c, t: theta.eval_fn(c, t) * np.asarray(p.v_fn(c, t)),
        u_jac,
        v_jac,
        name=name or f"{theta.name}*{p.name}",
    )


def corrupt_v_component(p: PoissonUV, comp: int) -> PoissonUV:
    """Flip the sign of one V component: a deliberately broken structure used
    to prove the Jacobi checkers can fail."""
    flip = np.ones(3)
    flip[comp] = -1.0

    def v_fn(c, t):
        return flip * np.asarray(p.v_fn(c, t))

    v_jac = None
    if p.v_jac_fn is not None:
        v_jac = lambda c, t: flip[:, None] * np.asarray(p.v_jac_fn(c, t))
    return PoissonUV(p.chart, p.u_fn, v_fn, p.u_jac_fn, v_jac, name=f"{p.name}:corrupt{comp}")


def matrix3_from_grad(H: ScalarField, sign: float, name: str = "") -> PoissonMatrix3:
    """3D matrix M^{ab} = sign * eps^{abc} d_c(H); M @ w = sign * grad(H) x w."""

    def matrix_fn(c, t):
        return sign * _hodge3(H.grad_fn(c, t))

    return PoissonMatrix3(H.chart, matrix_fn, name=name)


def build_3d_pair(
    H1: ScalarField, H2: ScalarField, chart3: CoordChart
) -> tuple[PoissonMatrix3, PoissonMatrix3]:
    """Compatible 3D pair from two conserved quantities.

    Returns (Na, Nb) with Na built from H2's gradient and Nb from H1's; the
    pairing convention is Na @ grad(H1) = Nb @ grad(H2) = grad(H2) x grad(H1),
    fixed here because the naming in the source material is inconsistent and
    only the numbers decide.
    """
    if not H1.chart.same_as(chart3) or not H2.chart.same_as(chart3):
        raise ChartMismatchError("3D pair fields must share the target chart")
    return (
        matrix3_from_grad(H2, -1.0, name=f"N({H2.name})"),
        matrix3_from_grad(H1, +1.0, name=f"N({H1.name})"),
    )


def matrix3_pencil(na: PoissonMatrix3, nb: PoissonMatrix3, c: float) -> PoissonMatrix3:
    return PoissonMatrix3(
        na.chart,
        lambda co, t: np.asarray(na.matrix_fn(co, t)) + c * np.asarray(nb.matrix_fn(co, t)),
        name=f"{na.name}+{c}*{nb.name}",
    )


def nambu_field(H1: ScalarField, H2: ScalarField, s: State) -> np.ndarray:
    """grad(H1) x grad(H2) on a 3D chart."""
    if H1.chart.dim != 3:
        raise ChartMismatchError("Nambu form requires a 3D chart")
    return np.cross(H1.grad(s), H2.grad(s))
