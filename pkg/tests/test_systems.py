import numpy as np
import pytest

from quadham.core import State, lie_derivative, sample_states
from quadham.systems import (
    ConstraintError,
    LevelValues,
    REGISTRY_NAMES,
    apply_transform,
    eval_field,
    get_system,
    lorenz_field,
    raychaudhuri_fourth_condition,
    raychaudhuri_solve_fourth_n,
    reduce_system,
    registry,
)


def test_registry_names_and_count():
    assert len(REGISTRY_NAMES) == 10
    assert set(REGISTRY_NAMES) == {
        "lorenz_rho0", "lorenz_conservative", "shivamoggi", "raychaudhuri",
        "lu_original", "lu_transformed", "lu_autonomous",
        "qi_original", "qi_transformed", "qi_special",
    }
    assert [d.name for d in registry()] == list(REGISTRY_NAMES)


@pytest.mark.parametrize("name,coords,expected", [
    ("shivamoggi", [1.0, 2.0, 1.0, 1.0], [-1.0, 1.0, 1.0, 2.0]),
    ("lorenz_conservative", [1.0, 2.0, 3.0], [2.0, -2.0, 2.0]),
    ("qi_special", [0.0, 1.0, 1.0, 1.0], [2.0, -1.0, 1.0, 2.0]),
])
def test_eval_field_reference_values(name, coords, expected):
    np.testing.assert_allclose(eval_field(name, State(np.array(coords))), expected)


def test_unknown_system_and_parameter():
    with pytest.raises(KeyError):
        get_system("nope")
    with pytest.raises(KeyError):
        get_system("lu_original", zeta=1.0)


def test_field_scope_constraint_blocks_build():
    with pytest.raises(ConstraintError):
        get_system("lu_transformed", gamma=1.0)
    with pytest.raises(ConstraintError):
        get_system("qi_special", gamma=0.5)


def test_integrals_scope_constraint_checked_lazily():
    # the original form builds fine off the constraint surface; only the
    # conservation claims require the relation
    desc = get_system("lu_original", gamma=1.0, beta=2.0, delta=-2.0)
    with pytest.raises(ConstraintError):
        desc.check_constraints(scope="integrals")


@pytest.mark.parametrize("name", REGISTRY_NAMES)
def test_all_declared_integrals_or_laws(name):
    desc = get_system(name)
    try:
        desc.check_constraints(scope="integrals")
    except ConstraintError:
        pytest.skip("defaults violate the conservation constraint")
    states = sample_states(desc.chart, 40, seed=11, domain=desc.sample_domain, t=0.31)
    for nm, I in desc.integrals.items():
        ok = [s for s in states if I.in_domain(s)]
        assert ok, f"no in-domain samples for {nm}"
        if nm in desc.drift_laws:
            law = desc.drift_laws[nm]
            worst = max(abs(lie_derivative(desc.field, I, s) - law.eval(s)) for s in ok)
        else:
            worst = max(abs(lie_derivative(desc.field, I, s)) for s in ok)
        assert worst < 1e-10, f"{name}:{nm} residual {worst}"


def test_darboux_pairs_raychaudhuri():
    from quadham.core import cofactor_residual

    desc = get_system("raychaudhuri")
    for s in sample_states(desc.chart, 30, seed=3, domain=desc.sample_domain):
        for J, lam in desc.darboux:
            assert abs(cofactor_residual(desc.field, J, lam, s)) < 1e-12


def test_lorenz_rho0_transform_roundtrip_and_pushforward():
    desc = get_system("lorenz_rho0")
    tr = desc.transforms["from_lorenz"]
    src = lorenz_field(0.5, 0.0, 1.0)
    for s in sample_states(tr.src_chart, 20, seed=4, t=0.5):
        back = tr.inverse(tr.forward(s))
        np.testing.assert_allclose(back.coords, s.coords, atol=1e-12)
        assert back.t == pytest.approx(s.t, abs=1e-12)
        assert tr.pushforward_residual(src, desc.field, s) < 1e-12


def test_lu_time_map_is_exact_pushforward():
    desc = get_system("lu_transformed")
    tr = desc.transforms["time_map"]
    tgt = get_system("lu_autonomous")
    for s in sample_states(desc.chart, 20, seed=5, domain=desc.sample_domain, t=0.2):
        assert tr.pushforward_residual(desc.field, tgt.field, s) < 1e-12


def test_qi_time_map_not_ambient_pushforward():
    desc = get_system("qi_transformed")
    assert not desc.transforms["time_map"].exact_pushforward


def test_apply_transform_directions():
    s = State(np.array([1.0, 1.0, 1.0, 1.0]), 0.0)
    fwd = apply_transform("lu_original", "to_transformed", s, "forward")
    back = apply_transform("lu_original", "to_transformed", fwd, "inverse")
    np.testing.assert_allclose(back.coords, s.coords, atol=1e-12)
    with pytest.raises(ValueError):
        apply_transform("lu_original", "to_transformed", s, "sideways")


def test_reduce_system_level_validation():
    with pytest.raises(ValueError):
        reduce_system("raychaudhuri", LevelValues(0.0, 1.0))
    with pytest.raises(ValueError):
        LevelValues(1.0, -1.0)
    with pytest.raises(KeyError):
        reduce_system("shivamoggi", LevelValues(1.0, 1.0))


def test_reduction_lift_lands_on_level_set():
    lv = LevelValues(1.2, 1.5)
    rm = reduce_system("lu_autonomous", lv)
    desc = get_system("lu_autonomous")
    amb = rm.lift(np.array([0.4, 0.3]), 0.0)
    assert desc.integrals["H1"].eval(amb) == pytest.approx(lv.kappa)
    assert desc.integrals["H2"].eval(amb) == pytest.approx(lv.tau)
    np.testing.assert_allclose(rm.project(amb.coords), [0.4, 0.3])


def test_published_planar_forms_match_at_defaults():
    for name, which in (
        ("raychaudhuri", "planar"),
        ("lu_transformed", "planar"),
        ("lu_autonomous", "planar"),
        ("qi_transformed", "planar"),
        ("qi_special", "planar_tbar"),
    ):
        rm = reduce_system(name, LevelValues(1.4, 1.9), which=which)
        key = "matches_published" if "matches_published" in rm.notes else "published_planar_matches"
        assert rm.notes[key], f"{name} reduced form does not match its published one"


def test_raychaudhuri_fourth_integral_solver():
    desc = get_system("raychaudhuri")
    s = State(np.array([0.8, 0.5, 1.1, 0.9]))
    n = raychaudhuri_solve_fourth_n(desc.integrals, 0.3, -0.7, s)
    assert abs(raychaudhuri_fourth_condition(desc.integrals, 0.3, -0.7, n, s)) < 1e-12


def test_qi_special_h3_drift_law():
    desc = get_system("qi_special")
    law = desc.drift_laws["H3"]
    for s in sample_states(desc.chart, 25, seed=6, domain=desc.sample_domain):
        got = lie_derivative(desc.field, desc.integrals["H3"], s)
        assert got == pytest.approx(law.eval(s), abs=1e-12)
        assert law.eval(s) == pytest.approx(-s.coords[3] ** 2)


def test_parameter_override_reaches_field():
    base = eval_field("lu_autonomous", State(np.array([0.1, 0.2, 0.3, 0.4])))
    # alpha enters the second component; the constraint couples the others
    other = eval_field(
        "lu_autonomous",
        State(np.array([0.1, 0.2, 0.3, 0.4])),
        params={"alpha": 2.0, "gamma": -4.0, "beta": 4.0, "delta": -4.0},
    )
    assert base[1] != other[1]
    np.testing.assert_allclose(base[[0, 2, 3]], other[[0, 2, 3]])
