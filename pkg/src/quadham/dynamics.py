"""Numerical integration, invariant drift and Lyapunov spectra.

Two integrators are provided: a fixed-step classical Runge-Kutta 4 and an
adaptive Dormand-Prince 4(5) pair with PI step control.  Drift of declared
invariants along trajectories is the package's dynamical conservation oracle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from quadham.core import DomainError, ScalarField, State, VectorField

# Dormand-Prince 4(5) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "dopri45"  # or "rk4", "euler"
    dt: float = 1e-3  # fixed step, or initial step for the adaptive method
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 2_000_000
    dt_min: float = 1e-12
    dt_max: float = 1.0

    def __post_init__(self):
        if self.method not in ("dopri45", "rk4", "euler"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass
class Trajectory:
    """Sampled solution; coordinates row-per-time, invariant values alongside."""

    labels: tuple[str, ...]
    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim)
    invariants: dict = field(default_factory=dict)  # name -> ndarray over times
    meta: dict = field(default_factory=dict)

    def state_at(self, i: int) -> State:
        return State(self.states[i], float(self.times[i]))

    def write_csv(self, path) -> None:
        """RFC-4180 output with full-precision floats."""
        fmt = lambda x: format(float(x), ".17g")
        names = sorted(self.invariants)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
            w.writerow(["t", *self.labels, *names])
            for i, t in enumerate(self.times):
                row = [fmt(t), *(fmt(v) for v in self.states[i])]
                row.extend(fmt(self.invariants[n][i]) for n in names)
                w.writerow(row)


def _rk4_step(f: Callable, c: np.ndarray, t: float, h: float) -> np.ndarray:
    k1 = f(c, t)
    k2 = f(c + h / 2 * k1, t + h / 2)
    k3 = f(c + h / 2 * k2, t + h / 2)
    k4 = f(c + h * k3, t + h)
    return c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _dopri_step(f: Callable, c: np.ndarray, t: float, h: float):
    k = np.empty((7, c.shape[0]))
    k[0] = f(c, t)
    for i in range(1, 7):
        acc = c + h * sum(a * k[j] for j, a in enumerate(_DP_A[i]))
        k[i] = f(acc, t + _DP_C[i] * h)
    c5 = c + h * (_DP_B5 @ k)
    c4 = c + h * (_DP_B4 @ k)
    return c5, c5 - c4


def integrate(
    X: VectorField,
    s0: State,
    t_end: float,
    config: Optional[IntegratorConfig] = None,
    invariants: Optional[dict] = None,
    n_samples: int = 200,
) -> Trajectory:
    """Integrate from s0.t to t_end, recording about n_samples states.

    The adaptive method uses the embedded 4th-order error estimate with PI
    step-size control (safety 0.9, growth clamped to [0.2, 5]).
    """
    cfg = config or IntegratorConfig()
    f = lambda c, t: X.eval(State(c, t))
    t, c = s0.t, s0.coords.copy()
    if t_end <= t:
        raise ValueError("t_end must exceed the initial time")
    sample_dt = (t_end - t) / max(n_samples, 1)
    next_sample = t + sample_dt
    times, rows = [t], [c.copy()]
    steps = 0
    rejects = 0
    aborted = ""

    try:
        with np.errstate(over="ignore", invalid="ignore"):
            if cfg.method in ("rk4", "euler"):
                n_steps = max(1, math.ceil((t_end - t) / cfg.dt))
                h = (t_end - t) / n_steps
                for _ in range(n_steps):
                    if cfg.method == "rk4":
                        c = _rk4_step(f, c, t, h)
                    else:
                        c = c + h * f(c, t)
                    if not np.all(np.isfinite(c)):
                        raise DomainError(f"non-finite state at t={t + h}")
                    t += h
                    if t >= next_sample - 1e-12 or t >= t_end - 1e-12:
                        times.append(t)
                        rows.append(c.copy())
                        next_sample += sample_dt
                steps = n_steps
            else:
                h = cfg.dt
                err_prev = 1.0
                while t < t_end - 1e-14:
                    h = min(h, t_end - t, cfg.dt_max)
                    c5, err_vec = _dopri_step(f, c, t, h)
                    scale = cfg.atol + cfg.rtol * np.maximum(np.abs(c), np.abs(c5))
                    err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
                    if err <= 1.0 and np.all(np.isfinite(c5)):
                        t += h
                        c = c5
                        steps += 1
                        if t >= next_sample - 1e-12 or t >= t_end - 1e-12:
                            times.append(t)
                            rows.append(c.copy())
                            next_sample += sample_dt
                        fac = 0.9 * err ** (-0.7 / 5) * err_prev ** (0.4 / 5) if err > 0 else 5.0
                        err_prev = max(err, 1e-10)
                    else:
                        rejects += 1
                        fac = max(0.2, 0.9 * max(err, 1e-10) ** (-1 / 5)) if np.isfinite(err) else 0.2
                    h *= min(5.0, max(0.2, fac))
                    if h < cfg.dt_min:
                        raise DomainError(f"step size underflow at t={t}")
                    if steps + rejects > cfg.max_steps:
                        raise RuntimeError("max step count exceeded")
    except DomainError as exc:
        # solution left the domain (finite-time escape or singular field):
        # return the partial trajectory, flagged
        aborted = str(exc)

    traj = Trajectory(
        labels=X.chart.labels,
        times=np.asarray(times),
        states=np.asarray(rows),
        meta={"method": cfg.method, "steps": steps, "rejected": rejects, "aborted": aborted},
    )
    for name, F in (invariants or {}).items():
        traj.invariants[name] = np.array(
            [F.eval_fn(traj.states[i], traj.times[i]) for i in range(len(traj.times))]
        )
    return traj


@dataclass(frozen=True)
class DriftReport:
    name: str
    initial: float
    max_abs_drift: float
    relative_drift: float  # max |I(t) - I(0)| / (1 + |I(0)|)


def drift_report(traj: Trajectory) -> list[DriftReport]:
    """Per-invariant normalized drift along an already-computed trajectory."""
    out = []
    for name in sorted(traj.invariants):
        vals = traj.invariants[name]
        i0 = float(vals[0])
        d = float(np.max(np.abs(vals - i0)))
        out.append(DriftReport(name, i0, d, d / (1.0 + abs(i0))))
    return out


def max_drift(traj: Trajectory) -> float:
    reps = drift_report(traj)
    return max((r.relative_drift for r in reps), default=0.0)


@dataclass(frozen=True)
class LyapunovResult:
    exponents: np.ndarray
    stderr: np.ndarray  # spread of the running estimate over the final half
    time: float
    renorms: int


def lyapunov_spectrum(
    X: VectorField,
    s0: State,
    t_total: float = 2000.0,
    dt: float = 0.01,
    renorm_interval: float = 1.0,
    seed: int = 0,
) -> LyapunovResult:
    """Full Lyapunov spectrum by tangent-space QR reorthonormalization.

    The joint (state, tangent-frame) system is advanced with fixed-step RK4
    using the field's analytic Jacobian; the frame is re-orthonormalized every
    `renorm_interval` time units and log |r_ii| increments are accumulated.
    The reported spread is the standard deviation of the running exponent
    estimates sampled over the final half of the run.
    """
    n = s0.dim
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))

    def joint(y: np.ndarray, t: float) -> np.ndarray:
        c, frame = y[:n], y[n:].reshape(n, n)
        s = State(c, t)
        return np.concatenate([X.eval(s), (X.jac(s) @ frame).ravel()])

    y = np.concatenate([s0.coords, Q.ravel()])
    t = s0.t
    sums = np.zeros(n)
    steps_per_renorm = max(1, round(renorm_interval / dt))
    h = renorm_interval / steps_per_renorm
    n_renorms = max(1, round(t_total / renorm_interval))
    history = []
    for k in range(n_renorms):
        for _ in range(steps_per_renorm):
            y = _rk4_step(joint, y, t, h)
            t += h
        frame = y[n:].reshape(n, n)
        Q, R = np.linalg.qr(frame)
        diag = np.abs(np.diag(R))
        # keep a consistent orientation so the frame evolves continuously
        signs = np.sign(np.diag(R))
        signs[signs == 0] = 1.0
        Q = Q * signs
        sums += np.log(np.maximum(diag, 1e-300))
        y[n:] = Q.ravel()
        elapsed = (k + 1) * renorm_interval
        history.append(sums / elapsed)
    hist = np.asarray(history)
    tail = hist[len(hist) // 2 :]
    return LyapunovResult(
        exponents=hist[-1],
        stderr=tail.std(axis=0),
        time=t - s0.t,
        renorms=n_renorms,
    )


def convergence_order(
    X: VectorField,
    s0: State,
    t_end: float,
    method: str = "rk4",
    dts: Sequence[float] = (0.02, 0.01, 0.005),
    reference: Optional[ScalarField] = None,
) -> float:
    """Observed order from errors at successively halved steps.

    The error at each dt is measured against a much finer solution of the
    same method; the order is the mean slope of log2(error) between levels.
    """
    fine = integrate(
        X, s0, s0.t + t_end, IntegratorConfig(method=method, dt=min(dts) / 16), n_samples=1
    ).states[-1]
    errs = []
    for dt in dts:
        end = integrate(
            X, s0, s0.t + t_end, IntegratorConfig(method=method, dt=dt), n_samples=1
        ).states[-1]
        errs.append(float(np.max(np.abs(end - fine))))
    orders = []
    for e0, e1, d0, d1 in zip(errs, errs[1:], dts, dts[1:]):
        if e1 > 0 and e0 > 0:
            orders.append(math.log(e0 / e1) / math.log(d0 / d1))
    if not orders:
        raise RuntimeError("errors vanished; cannot estimate an order")
    return float(np.mean(orders))
