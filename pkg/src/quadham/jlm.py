"""Jacobi-last-multiplier machinery for planar systems.

Verifies given multipliers, Hamiltonians, auxiliary functions and canonical
coordinates for planar reductions; it never solves the multiplier PDE for an
unknown M.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from quadham.core import ChartMismatchError, CoordChart, ScalarField, State, VectorField


@dataclass(frozen=True)
class PlanarSystem:
    """xdot = f(x, y, t), ydot = g(x, y, t) on a 2D chart (x-like first)."""

    chart: CoordChart
    f: ScalarField
    g: ScalarField
    autonomous: bool
    name: str = ""

    def __post_init__(self):
        if self.chart.dim != 2:
            raise ValueError("PlanarSystem requires a 2D chart")
        if not self.f.chart.same_as(self.chart) or not self.g.chart.same_as(self.chart):
            raise ChartMismatchError("planar rate fields must share the system chart")

    def as_vector_field(self) -> VectorField:
        def eval_fn(c, t):
            return np.array([self.f.eval_fn(c, t), self.g.eval_fn(c, t)])

        def jac_fn(c, t):
            return np.vstack([self.f.grad_fn(c, t), self.g.grad_fn(c, t)])

        return VectorField(
            self.chart, eval_fn, autonomous=self.autonomous, jac_fn=jac_fn, name=self.name
        )

    def in_domain(self, s: State) -> bool:
        return self.f.in_domain(s) and self.g.in_domain(s)


@dataclass(frozen=True)
class MultiplierBundle:
    """Multiplier, optional auxiliaries, Hamiltonian and canonical pair for a
    planar system.  psi/phi are None on the time-independent-multiplier branch."""

    M: ScalarField
    H: ScalarField
    Q: ScalarField
    P: ScalarField
    psi: Optional[ScalarField] = None
    phi: Optional[ScalarField] = None


def multiplier_pde_residual(sys: PlanarSystem, M: ScalarField, s: State) -> float:
    """dM/dt + d_x(M f) + d_y(M g), with analytic partials."""
    f, g = sys.f, sys.g
    Mg = M.grad(s)
    return (
        M.dt(s)
        + Mg[0] * f.eval(s)
        + M.eval(s) * f.grad(s)[0]
        + Mg[1] * g.eval(s)
        + M.eval(s) * g.grad(s)[1]
    )


def hamiltonian_consistency(
    sys: PlanarSystem, M: ScalarField, H: ScalarField, s: State
) -> tuple[float, float]:
    """Residuals of M (f dy - g dx) = dH for a time-independent multiplier:
    (d_x H + M g, d_y H - M f)."""
    Hg = H.grad(s)
    m = M.eval(s)
    return (Hg[0] + m * sys.g.eval(s), Hg[1] - m * sys.f.eval(s))


def aux_condition_residual(
    sys: PlanarSystem, M: ScalarField, psi: ScalarField, phi: ScalarField, s: State
) -> float:
    """d_x(M (f - psi)) + d_y(M (g - phi)); zero iff the auxiliary pair keeps
    the shifted one-form closed."""
    f, g = sys.f, sys.g
    m, Mg = M.eval(s), M.grad(s)
    return (
        Mg[0] * (f.eval(s) - psi.eval(s))
        + m * (f.grad(s)[0] - psi.grad(s)[0])
        + Mg[1] * (g.eval(s) - phi.eval(s))
        + m * (g.grad(s)[1] - phi.grad(s)[1])
    )


def timedep_hamiltonian_consistency(
    sys: PlanarSystem,
    M: ScalarField,
    psi: Optional[ScalarField],
    phi: Optional[ScalarField],
    H: ScalarField,
    s: State,
) -> tuple[float, float]:
    """Spatial residuals of M ((f-psi) dy - (g-phi) dx) = dH + theta dt.

    The dt component is absorbed by the unconstrained theta and is not
    checked.  With psi = phi = None this reduces to `hamiltonian_consistency`.
    """
    Hg = H.grad(s)
    m = M.eval(s)
    fv = sys.f.eval(s) - (psi.eval(s) if psi is not None else 0.0)
    gv = sys.g.eval(s) - (phi.eval(s) if phi is not None else 0.0)
    return (Hg[0] + m * gv, Hg[1] - m * fv)


def canonical_jacobian_check(M: ScalarField, Q: ScalarField, P: ScalarField, s: State) -> float:
    """det d(Q,P)/d(x,y) - M; zero when (Q, P) is a canonical pair for the
    symplectic form M dx^dy at fixed t."""
    Qg, Pg = Q.grad(s), P.grad(s)
    det = Qg[0] * Pg[1] - Qg[1] * Pg[0]
    return float(det - M.eval(s))


def canonical_equations_residual(
    sys: PlanarSystem, H: ScalarField, s: State
) -> tuple[float, float]:
    """Residuals (Qdot - dH/dP, Pdot + dH/dQ) for a system already written in
    canonical coordinates (chart order (Q, P))."""
    Hg = H.grad(s)
    return (sys.f.eval(s) - Hg[1], sys.g.eval(s) + Hg[0])


def total_vs_partial_dt_residual(sys: PlanarSystem, H: ScalarField, s: State) -> float:
    """dH/dt along the flow minus the explicit partial dH/dt; zero whenever
    the spatial part of dH cancels against the flow (canonical systems)."""
    Hg = H.grad(s)
    return float(Hg[0] * sys.f.eval(s) + Hg[1] * sys.g.eval(s))
