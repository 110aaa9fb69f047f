import csv

import numpy as np
import pytest

from quadham.core import CoordChart, State, VectorField
from quadham.dynamics import (
    IntegratorConfig,
    convergence_order,
    drift_report,
    integrate,
    lyapunov_spectrum,
    max_drift,
)
from quadham.systems import get_system

HARMONIC = get_system("harmonic")


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(method="leapfrog")
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.0)


def test_integrate_rejects_backward_time():
    with pytest.raises(ValueError):
        integrate(HARMONIC.field, State(np.array([1.0, 0.0])), -1.0)


def test_harmonic_period_return_rk4():
    s0 = State(np.array([1.0, 0.0]))
    traj = integrate(
        HARMONIC.field, s0, 2 * np.pi, IntegratorConfig(method="rk4", dt=1e-3),
        invariants=HARMONIC.integrals,
    )
    np.testing.assert_allclose(traj.states[-1], s0.coords, atol=1e-10)
    assert max_drift(traj) < 1e-12
    assert traj.meta["aborted"] == ""


def test_dopri_adapts_and_matches_tolerance():
    s0 = State(np.array([1.0, 0.0]))
    traj = integrate(
        HARMONIC.field, s0, 50.0,
        IntegratorConfig(method="dopri45", rtol=1e-10, atol=1e-12),
        invariants=HARMONIC.integrals,
    )
    assert max_drift(traj) < 1e-8
    assert traj.meta["steps"] < 5000  # far fewer steps than fixed dt=1e-3 would need


def test_convergence_orders():
    s0 = State(np.array([1.0, 0.0]))
    assert 3.8 < convergence_order(HARMONIC.field, s0, 3.0, method="rk4") < 4.2
    assert 0.8 < convergence_order(HARMONIC.field, s0, 3.0, method="euler") < 1.2


def test_blowup_returns_partial_flagged_trajectory():
    chart = CoordChart("bl", ("x", "y"))
    x, y = chart.symbols()
    X = VectorField.from_exprs(chart, [x**2, 0], name="blowup")
    traj = integrate(X, State(np.array([1.0, 0.0])), 5.0, IntegratorConfig(method="rk4", dt=1e-3))
    assert traj.meta["aborted"]
    assert traj.times[-1] < 5.0
    assert np.all(np.isfinite(traj.states))


def test_invariant_drift_registered_systems():
    for name in ("shivamoggi", "lu_autonomous", "qi_special"):
        desc = get_system(name)
        traj = integrate(
            desc.field, desc.default_state, desc.drift_horizon,
            IntegratorConfig(method="rk4", dt=1e-3), invariants=desc.integrals,
        )
        assert traj.meta["aborted"] == ""
        for r in drift_report(traj):
            if r.name in desc.drift_laws:
                continue
            assert r.relative_drift < 1e-7, f"{name}:{r.name} drift {r.relative_drift}"


def test_csv_output_format(tmp_path):
    s0 = State(np.array([1.0, 0.0]))
    traj = integrate(
        HARMONIC.field, s0, 1.0, IntegratorConfig(method="rk4", dt=0.01),
        invariants=HARMONIC.integrals, n_samples=10,
    )
    path = tmp_path / "out.csv"
    traj.write_csv(path)
    raw = path.read_bytes()
    assert b"\r\n" in raw
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "y", "H"]
    assert len(rows) == len(traj.times) + 1
    assert float(rows[1][3]) == pytest.approx(0.5)
    # full precision round-trips
    assert float(rows[-1][1]) == traj.states[-1][0]


def test_lyapunov_harmonic_near_zero():
    res = lyapunov_spectrum(HARMONIC.field, State(np.array([1.0, 0.0])), t_total=50.0)
    assert np.max(np.abs(res.exponents)) < 1e-6
    assert res.renorms == 50


def test_lyapunov_seed_reproducible():
    s0 = State(np.array([1.0, 0.0]))
    a = lyapunov_spectrum(HARMONIC.field, s0, t_total=10.0, seed=2)
    b = lyapunov_spectrum(HARMONIC.field, s0, t_total=10.0, seed=2)
    np.testing.assert_array_equal(a.exponents, b.exponents)


def test_single_step_counts_reported():
    traj = integrate(
        HARMONIC.field, State(np.array([1.0, 0.0])), 0.5,
        IntegratorConfig(method="euler", dt=0.01),
    )
    assert traj.meta["method"] == "euler"
    assert traj.meta["steps"] == 50
