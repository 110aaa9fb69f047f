"""Coordinate charts, states, scalar/vector fields and integral residual operators.

Fields are defined symbolically (sympy) and lambdified, so analytic gradients,
Hessians and explicit time partials come for free.  A finite-difference
gradient (`grad_fd`) is kept as an independent oracle against the analytic
derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import sympy as sp

TIME = sp.Symbol("t", real=True)

#: denominators smaller than this in magnitude are treated as singular
DENOM_GUARD = 1e-9
#: arcsin arguments closer than this to +-1 are treated as singular
ASIN_GUARD = 1e-12


class ChartMismatchError(ValueError):
    """Two objects defined on different coordinate charts were combined."""


class DomainError(ValueError):
    """A field was evaluated (or a stencil placed) outside its domain."""


@dataclass(frozen=True)
class CoordChart:
    """An ordered coordinate chart of dimension 2, 3 or 4.

    For 4D charts used by the block Poisson-matrix construction,
    ``distinguished_index`` marks the coordinate that plays the role of the
    first (non-spatial) block coordinate; all registered charts put it first.
    """

    name: str
    labels: tuple[str, ...]
    distinguished_index: Optional[int] = None

    def __post_init__(self):
        if len(self.labels) not in (2, 3, 4):
            raise ValueError(f"chart dimension must be 2, 3 or 4, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"chart labels must be unique: {self.labels}")
        if self.distinguished_index is not None and not (
            0 <= self.distinguished_index < len(self.labels)
        ):
            raise ValueError("distinguished_index out of range")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def symbols(self) -> tuple[sp.Symbol, ...]:
        return sp.symbols(self.labels, real=True) if self.dim > 1 else ()

    def same_as(self, other: "CoordChart") -> bool:
        return self.labels == other.labels


@dataclass(frozen=True)
class State:
    """A point of a chart together with a time value."""

    coords: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        if coords.ndim != 1:
            raise ValueError("state coordinates must be a flat vector")
        if not np.all(np.isfinite(coords)) or not np.isfinite(self.t):
            raise ValueError(f"non-finite state: coords={coords}, t={self.t}")

    @property
    def dim(self) -> int:
        return self.coords.shape[0]


def _lambdify(chart: CoordChart, expr) -> Callable:
    return sp.lambdify((*chart.symbols(), TIME), expr, modules="numpy")


@dataclass(frozen=True)
class ScalarField:
    """Real-valued function of state with analytic gradient and time partial."""

    chart: CoordChart
    eval_fn: Callable
    grad_fn: Callable
    dt_fn: Callable
    domain_fn: Optional[Callable] = None
    hess_fn: Optional[Callable] = None
    name: str = ""
    expr: Optional[sp.Expr] = field(default=None, compare=False)

    @classmethod
    def from_expr(
        cls,
        chart: CoordChart,
        expr,
        name: str = "",
        domain: Optional[Callable] = None,
    ) -> "ScalarField":
        expr = sp.sympify(expr)
        syms = chart.symbols()
        grad_exprs = [sp.diff(expr, s) for s in syms]
        hess_exprs = [[sp.diff(g, s) for s in syms] for g in grad_exprs]
        f = _lambdify(chart, expr)
        g = _lambdify(chart, grad_exprs)
        d = _lambdify(chart, sp.diff(expr, TIME))
        h = _lambdify(chart, hess_exprs)
        n = chart.dim
        return cls(
            chart=chart,
            eval_fn=lambda c, t: float(f(*c, t)),
            grad_fn=lambda c, t: np.asarray(g(*c, t), dtype=float).reshape(n),
            dt_fn=lambda c, t: float(d(*c, t)),
            hess_fn=lambda c, t: np.asarray(h(*c, t), dtype=float).reshape(n, n),
            domain_fn=domain,
            name=name,
            expr=expr,
        )

    def eval(self, s: State) -> float:
        return self.eval_fn(s.coords, s.t)

    def grad(self, s: State) -> np.ndarray:
        return self.grad_fn(s.coords, s.t)

    def dt(self, s: State) -> float:
        return self.dt_fn(s.coords, s.t)

    def hess(self, s: State) -> np.ndarray:
        if self.hess_fn is None:
            raise ValueError(f"field {self.name!r} carries no analytic Hessian")
        return self.hess_fn(s.coords, s.t)

    def in_domain(self, s: State) -> bool:
        if s.dim != self.chart.dim:
            return False
        return True if self.domain_fn is None else bool(self.domain_fn(s.coords, s.t))


@dataclass(frozen=True)
class VectorField:
    """Right-hand side of an ODE system on a chart."""

    chart: CoordChart
    eval_fn: Callable
    autonomous: bool = True
    jac_fn: Optional[Callable] = None
    name: str = ""
    exprs: Optional[tuple] = field(default=None, compare=False)

    @classmethod
    def from_exprs(cls, chart: CoordChart, exprs: Sequence, name: str = "") -> "VectorField":
        exprs = [sp.sympify(e) for e in exprs]
        if len(exprs) != chart.dim:
            raise ValueError("component count does not match chart dimension")
        syms = chart.symbols()
        autonomous = all(TIME not in e.free_symbols for e in exprs)
        jac_exprs = [[sp.diff(e, s) for s in syms] for e in exprs]
        f = _lambdify(chart, exprs)
        j = _lambdify(chart, jac_exprs)
        n = chart.dim
        return cls(
            chart=chart,
            eval_fn=lambda c, t: np.asarray(f(*c, t), dtype=float).reshape(n),
            autonomous=autonomous,
            jac_fn=lambda c, t: np.asarray(j(*c, t), dtype=float).reshape(n, n),
            name=name,
            exprs=tuple(exprs),
        )

    def eval(self, s: State) -> np.ndarray:
        out = self.eval_fn(s.coords, s.t)
        if not np.all(np.isfinite(out)):
            raise DomainError(f"vector field {self.name!r} non-finite at {s}")
        return out

    def jac(self, s: State) -> np.ndarray:
        if self.jac_fn is not None:
            return self.jac_fn(s.coords, s.t)
        return _jac_fd(self, s)


def domain_from_guards(
    chart: CoordChart,
    nonzero: Sequence = (),
    positive: Sequence = (),
    eps: float = DENOM_GUARD,
) -> Callable:
    """Domain predicate: every `nonzero` expression bounded away from 0,
    every `positive` expression strictly above `eps`."""
    fns = [_lambdify(chart, sp.sympify(e)) for e in nonzero]
    pos = [_lambdify(chart, sp.sympify(e)) for e in positive]

    def check(coords, t):
        return all(abs(f(*coords, t)) > eps for f in fns) and all(
            f(*coords, t) > eps for f in pos
        )

    return check


def grad_fd(field: ScalarField, s: State, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with one Richardson extrapolation step.

    Independent oracle for analytic gradients.  The step is scaled per
    coordinate as h*(1+|x_i|); if a stencil point leaves the field's domain
    the step is shrunk, and a DomainError is raised if that fails.
    """
    if not field.in_domain(s):
        raise DomainError(f"state outside domain of {field.name!r}")
    n = s.dim
    out = np.empty(n)
    for i in range(n):
        hi = h * (1.0 + abs(s.coords[i]))
        for _ in range(5):
            pts = []
            for step in (hi, hi / 2):
                for sign in (1.0, -1.0):
                    c = s.coords.copy()
                    c[i] += sign * step
                    pts.append(State(c, s.t))
            if all(field.in_domain(p) for p in pts):
                break
            hi *= 0.2
        else:
            raise DomainError(
                f"stencil for {field.name!r} leaves domain at coordinate {i}"
            )
        d1 = (field.eval(pts[0]) - field.eval(pts[1])) / (2 * hi)
        d2 = (field.eval(pts[2]) - field.eval(pts[3])) / hi
        out[i] = (4 * d2 - d1) / 3
    return out


def _jac_fd(X: VectorField, s: State, h: float = 1e-6) -> np.ndarray:
    n = s.dim
    J = np.empty((n, n))
    for j in range(n):
        hj = h * (1.0 + abs(s.coords[j]))
        cp, cm = s.coords.copy(), s.coords.copy()
        cp[j] += hj
        cm[j] -= hj
        J[:, j] = (X.eval(State(cp, s.t)) - X.eval(State(cm, s.t))) / (2 * hj)
    return J


def lie_derivative(X: VectorField, F: ScalarField, s: State) -> float:
    """Derivative of F along the flow of X (including the explicit t partial).

    Vanishes identically iff F is a first integral.
    """
    if not X.chart.same_as(F.chart):
        raise ChartMismatchError(f"{X.name!r} on {X.chart.labels}, {F.name!r} on {F.chart.labels}")
    return F.dt(s) + float(np.dot(X.eval(s), F.grad(s)))


def cofactor_residual(X: VectorField, J: ScalarField, lam: ScalarField, s: State) -> float:
    """X(J) - lam*J; zero iff J is a second integral with cofactor lam."""
    return lie_derivative(X, J, s) - lam.eval(s) * J.eval(s)


def sample_states(
    chart: CoordChart,
    n: int,
    seed: int,
    domain: Optional[Callable] = None,
    low: float = -2.0,
    high: float = 2.0,
    t: float = 0.0,
) -> list[State]:
    """Uniform rejection sampling of in-domain states, reproducible by seed."""
    rng = np.random.default_rng(seed)
    out: list[State] = []
    tries = 0
    while len(out) < n:
        c = rng.uniform(low, high, size=chart.dim)
        tries += 1
        if tries > 1000 * max(n, 10):
            raise RuntimeError(f"rejection sampling stalled on chart {chart.name!r}")
        if domain is None or domain(c, t):
            out.append(State(c, t))
    return out
