"""Claim suites: every structural statement in the registry, measured.

Each claim is evaluated numerically over seeded random samples and reported
with its maximum residual, tolerance and status.  A claim whose residual
exceeds tolerance is a hard failure unless it checks a published statement
that the numerics contradict; those are reported as ``mismatch-reported``
together with the measured alternative, and do not fail a run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from quadham import __version__
from quadham.core import State, grad_fd, cofactor_residual, lie_derivative, sample_states
from quadham.dynamics import IntegratorConfig, drift_report, integrate
from quadham.jlm import (
    aux_condition_residual,
    canonical_equations_residual,
    canonical_jacobian_check,
    multiplier_pde_residual,
    timedep_hamiltonian_consistency,
    total_vs_partial_dt_residual,
)
from quadham.poisson import (
    casimir_residual,
    compatibility_lambda,
    conformal_match,
    degeneracy,
    hamiltonian_vector_field,
    jacobi_residual_bruteforce,
    jacobi_residual_uv,
    matrix3_pencil,
    nambu_field,
    uv_pencil,
)
from quadham.systems import (
    LevelValues,
    get_system,
    lorenz_field,
    raychaudhuri_solve_fourth_n,
    raychaudhuri_fourth_condition,
)

TOL = {
    "conservation": 1e-10,
    "darboux": 1e-10,
    "casimir": 1e-8,
    "degeneracy": 1e-12,
    "jacobi_uv": 1e-8,
    "jacobi_bf": 1e-5,
    "compat": 1e-10,
    "conformal": 1e-8,
    "displayed": 1e-10,
    "extra": 1e-10,
    "jlm": 1e-8,
    "canonical": 1e-8,
    "roundtrip": 1e-12,
    "pushforward": 1e-8,
    "reduction": 1e-6,
    "drift": 1e-7,
    "drift_law": 1e-5,
    "grad": 1e-6,
    "timemap": 1e-6,
    "fourth": 1e-10,
    "biham": 1e-10,
    "h3scale": 1e-8,
}


@dataclass(frozen=True)
class Claim:
    id: str
    anchor: str
    description: str
    measured: float
    tolerance: float
    status: str  # "pass" | "fail" | "mismatch-reported"
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "description": self.description,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    system: str
    params: dict
    seed: int
    samples: int
    version: str = __version__
    claims: list = dc_field(default_factory=list)

    def add(self, claim: Claim) -> None:
        if any(c.id == claim.id for c in self.claims):
            raise ValueError(f"duplicate claim id {claim.id!r}")
        self.claims.append(claim)

    def finish(self) -> "VerificationReport":
        self.claims.sort(key=lambda c: c.id)
        return self

    @property
    def failed(self) -> list:
        return [c for c in self.claims if c.status == "fail"]

    @property
    def mismatches(self) -> list:
        return [c for c in self.claims if c.status == "mismatch-reported"]

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "params": self.params,
            "environment": {
                "seed": self.seed,
                "samples": self.samples,
                "version": self.version,
            },
            "claims": [c.to_dict() for c in self.claims],
            "summary": {
                "total": len(self.claims),
                "passed": sum(c.status == "pass" for c in self.claims),
                "failed": len(self.failed),
                "mismatch_reported": len(self.mismatches),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _status(measured: float, tol: float, expect_mismatch: bool = False) -> str:
    if measured <= tol:
        return "pass"
    return "mismatch-reported" if expect_mismatch else "fail"


def _maxabs(values) -> float:
    return float(max((abs(v) for v in values), default=0.0))


_ANCHOR = {
    "lorenz_rho0": {"system": "has", "integrals": "tindepc", "matrix": "j1", "transform": "lor"},
    "lorenz_conservative": {"system": "clor", "integrals": "hc12", "matrix": "j1l",
                            "transform": "trclim"},
    "shivamoggi": {"system": "SE", "integrals": "FISE", "structure": "N",
                   "displayed": "PoiShi", "conformal": "3.1", "extra": "3.1"},
    "raychaudhuri": {"system": "RE", "integrals": "FIRE", "structure": "N", "displayed": "3.2",
                     "conformal": "3.2", "darboux": "3.2", "reduction": "RedRay",
                     "jlm": "HonRay", "fourth": "3.2"},
    "lu_original": {"system": "LuG", "integrals": "ILu1", "transform": "cov"},
    "lu_transformed": {"system": "LunonAut", "integrals": "ILu", "reduction": "Lu3",
                       "jlm": "HamLu1", "canonical": "Lu2DCan", "transform": "3.3",
                       "extra": "LuI3", "displayed": "LuI3"},
    "lu_autonomous": {"system": "Lu2aut", "integrals": "H3Ray", "structure": "N",
                      "displayed": "3.3", "conformal": "3.3", "reduction": "Lu2aut",
                      "jlm": "HamLu1"},
    "qi_original": {"system": "QiSystem", "integrals": "QiFI", "transform": "Qitrans"},
    "qi_transformed": {"system": "hyperQid", "integrals": "QiFI2", "reduction": "QiPl1",
                       "jlm": "hyperQiJLM", "canonical": "Qi2DCan", "transform": "3.4"},
    "qi_special": {"system": "hyperQid", "integrals": "QiH32", "structure": "N",
                   "displayed": "3.4", "reduction": "QiPl1", "jlm": "5.13"},
    "harmonic": {"system": "", "integrals": ""},
}


def _anchor(system: str, kind: str) -> str:
    return _ANCHOR.get(system, {}).get(kind, "")


def _sample(desc, n: int, seed: int, t_values=(0.0, 0.37, 0.81)) -> list:
    states = []
    per = max(1, n // len(t_values))
    for i, tv in enumerate(t_values):
        states.extend(
            sample_states(desc.chart, per, seed + 7 * i, desc.sample_domain, t=tv)
        )
    return states


def verify_system(name: str, samples: int = 200, seed: int = 0, params=None) -> VerificationReport:
    """Run the whole claim suite for one registered system."""
    desc = get_system(name, **(params or {}))
    desc.check_constraints(scope="integrals")
    rep = VerificationReport(system=name, params=dict(desc.params), seed=seed, samples=samples)
    states = _sample(desc, samples, seed)
    rng = np.random.default_rng(seed)

    _conservation_claims(rep, desc, states)
    _darboux_claims(rep, desc, states)
    _gradient_claim(rep, desc, states)
    _structure_claims(rep, desc, states, rng)
    _matrix3_claims(rep, desc, states, rng)
    _transform_claims(rep, desc, states)
    _reduction_claims(rep, desc, samples, seed)
    _canonical_claims(rep, desc, samples, seed)
    _drift_claims(rep, desc)
    if name == "lu_transformed":
        _time_map_consistency_claim(rep, desc)
    if name == "raychaudhuri":
        _raychaudhuri_fourth_claim(rep, desc, states, rng)
    return rep.finish()


def _conservation_claims(rep, desc, states):
    for nm in sorted(desc.integrals):
        I = desc.integrals[nm]
        ok = [s for s in states if I.in_domain(s)]
        if nm in desc.drift_laws:
            law = desc.drift_laws[nm]
            raw = _maxabs(lie_derivative(desc.field, I, s) for s in ok)
            rep.add(Claim(
                id=f"conservation:{nm}",
                anchor=_anchor(desc.name, "integrals"),
                description=f"{nm} constant along the flow",
                measured=raw,
                tolerance=TOL["conservation"],
                status=_status(raw, TOL["conservation"], expect_mismatch=True),
                detail="the published conservation statement does not hold; "
                f"see drift-law:{nm} for the measured rate",
            ))
            res = _maxabs(lie_derivative(desc.field, I, s) - law.eval(s) for s in ok)
            rep.add(Claim(
                id=f"drift-law:{nm}",
                anchor=_anchor(desc.name, "integrals"),
                description=f"measured d{nm}/dt matches {law.name}",
                measured=res,
                tolerance=TOL["drift_law"],
                status=_status(res, TOL["drift_law"]),
            ))
        else:
            raw = _maxabs(lie_derivative(desc.field, I, s) for s in ok)
            rep.add(Claim(
                id=f"conservation:{nm}",
                anchor=_anchor(desc.name, "integrals"),
                description=f"{nm} constant along the flow",
                measured=raw,
                tolerance=TOL["conservation"],
                status=_status(raw, TOL["conservation"]),
            ))


def _darboux_claims(rep, desc, states):
    for J, lam in desc.darboux:
        ok = [s for s in states if J.in_domain(s)]
        raw = _maxabs(cofactor_residual(desc.field, J, lam, s) for s in ok)
        rep.add(Claim(
            id=f"darboux:{J.name}",
            anchor=_anchor(desc.name, "darboux"),
            description=f"X({J.name}) = ({lam.name})*{J.name}",
            measured=raw,
            tolerance=TOL["darboux"],
            status=_status(raw, TOL["darboux"]),
        ))


def _gradient_claim(rep, desc, states):
    fields = dict(desc.integrals)
    if desc.theta is not None:
        fields["theta"] = desc.theta
    for J, lam in desc.darboux:
        fields[J.name] = J
    worst = 0.0
    for nm, F in fields.items():
        for s in states[:40]:
            if not F.in_domain(s):
                continue
            g = F.grad(s)
            diff = np.max(np.abs(g - grad_fd(F, s)) / (1.0 + np.abs(g)))
            worst = max(worst, float(diff))
    rep.add(Claim(
        id="gradient-oracle",
        anchor="",
        description="analytic gradients agree with finite differences",
        measured=worst,
        tolerance=TOL["grad"],
        status=_status(worst, TOL["grad"]),
    ))


def _structure_claims(rep, desc, states, rng):
    if not desc.structures and not desc.extra_structures:
        return
    hams = {lab: H for lab, _, H in desc.structures}
    for lab, N, H in desc.structures:
        ok = [s for s in states if all(F.in_domain(s) for F in desc.integrals.values())]
        dg = _maxabs(
            degeneracy(N, s) / (1.0 + np.linalg.norm(N.U(s)) * np.linalg.norm(N.V(s)))
            for s in ok
        )
        rep.add(Claim(
            id=f"degeneracy:{lab}",
            anchor=_anchor(desc.name, "structure"),
            description=f"U.V = 0 for {lab} (scaled by |U||V|)",
            measured=dg,
            tolerance=TOL["degeneracy"],
            status=_status(dg, TOL["degeneracy"]),
        ))
        juv = 0.0
        for s in ok:
            sc, vec = jacobi_residual_uv(N, s)
            juv = max(juv, abs(sc), float(np.max(np.abs(vec))))
        rep.add(Claim(
            id=f"jacobi-uv:{lab}",
            anchor="dsjk",
            description=f"Jacobi identity for {lab}, split form",
            measured=juv,
            tolerance=TOL["jacobi_uv"],
            status=_status(juv, TOL["jacobi_uv"]),
        ))
        jbf = _maxabs(_scaled_bruteforce(N, s) for s in ok[: max(20, len(ok) // 3)])
        rep.add(Claim(
            id=f"jacobi-bruteforce:{lab}",
            anchor="jcb",
            description=f"Jacobi identity for {lab}, finite-difference oracle (scaled)",
            measured=jbf,
            tolerance=TOL["jacobi_bf"],
            status=_status(jbf, TOL["jacobi_bf"]),
        ))
        cas = 0.0
        for lab2, H2 in hams.items():
            if lab2 == lab:
                continue
            cas = max(cas, _maxabs(casimir_residual(N, H2, s) for s in ok))
        rep.add(Claim(
            id=f"casimir:{lab}",
            anchor=_anchor(desc.name, "structure"),
            description=f"companion Hamiltonians are Casimirs of {lab}",
            measured=cas,
            tolerance=TOL["casimir"],
            status=_status(cas, TOL["casimir"]),
        ))
        if desc.theta is not None:
            cm = _maxabs(conformal_match(desc.field, N, H, desc.theta, s) for s in ok)
            rep.add(Claim(
                id=f"conformal:{lab}",
                anchor=_anchor(desc.name, "conformal"),
                description=f"X = theta * {lab} grad({H.name}) with theta = {desc.theta.expr}",
                measured=cm,
                tolerance=TOL["conformal"],
                status=_status(cm, TOL["conformal"]),
            ))

    labs = [lab for lab, _, _ in desc.structures]
    for i in range(len(labs)):
        for j in range(i + 1, len(labs)):
            Ni, Nj = desc.structures[i][1], desc.structures[j][1]
            ok = [s for s in states if all(F.in_domain(s) for F in desc.integrals.values())]
            lam = _maxabs(
                compatibility_lambda(Ni, Nj, s)
                / (1.0 + np.linalg.norm(Ni.U(s)) * np.linalg.norm(Nj.V(s)))
                for s in ok
            )
            rep.add(Claim(
                id=f"compatibility:{labs[i]}-{labs[j]}",
                anchor="lam",
                description=f"Lambda({labs[i]},{labs[j]}) = 0 (scaled)",
                measured=lam,
                tolerance=TOL["compat"],
                status=_status(lam, TOL["compat"]),
            ))
            c = float(rng.uniform(-1.0, 1.0))
            pen = uv_pencil(Ni, Nj, c)
            pj = 0.0
            for s in ok[:30]:
                sc, vec = jacobi_residual_uv(pen, s)
                pj = max(pj, abs(sc), float(np.max(np.abs(vec))))
            rep.add(Claim(
                id=f"pencil-jacobi:{labs[i]}-{labs[j]}",
                anchor="supern",
                description=f"pencil {labs[i]} + ({c:.3f})*{labs[j]} is Poisson",
                measured=pj,
                tolerance=TOL["jacobi_uv"],
                status=_status(pj, TOL["jacobi_uv"]),
            ))

    reg = {lab: N for lab, N, _ in desc.structures}
    for lab, disp in desc.displayed:
        if lab not in reg:
            continue
        table, worst = _component_table(reg[lab], disp, states, desc)
        rep.add(Claim(
            id=f"displayed:{lab}",
            anchor=_anchor(desc.name, "displayed"),
            description=f"published (U,V) of {lab} vs the pair construction",
            measured=worst,
            tolerance=TOL["displayed"],
            status=_status(worst, TOL["displayed"], expect_mismatch=True),
            detail=table,
        ))

    for lab, N, H in desc.extra_structures:
        ok = [s for s in states if H.in_domain(s)]
        res = _maxabs(
            float(np.max(np.abs(desc.field.eval(s) - hamiltonian_vector_field(N, H, s))))
            for s in ok
        )
        expected_broken = "published" in lab.lower() or lab == "N_LuI3"
        rep.add(Claim(
            id=f"extra-structure:{lab}",
            anchor=_anchor(desc.name, "extra"),
            description=f"X = N grad({H.name}) for the {lab} structure",
            measured=res,
            tolerance=TOL["extra"],
            status=_status(res, TOL["extra"], expect_mismatch=expected_broken),
            detail="" if res <= TOL["extra"] else
            "the published vectors do not generate the flow",
        ))
        dg = _maxabs(degeneracy(N, s) for s in ok)
        rep.add(Claim(
            id=f"extra-degeneracy:{lab}",
            anchor=_anchor(desc.name, "extra"),
            description=f"U.V = 0 for the {lab} structure",
            measured=dg,
            tolerance=TOL["degeneracy"],
            status=_status(dg, TOL["degeneracy"]),
        ))


def _scaled_bruteforce(N, s) -> float:
    raw = jacobi_residual_bruteforce(N, s)
    M = np.abs(N.matrix(s))
    return raw / (1.0 + float(np.max(M)) ** 2)


def _component_table(reg, disp, states, desc) -> str:
    ok = [s for s in states if all(F.in_domain(s) for F in desc.integrals.values())][:60]
    rows = []
    worst = 0.0
    for vec, tag in ((lambda n, s: n.U(s), "U"), (lambda n, s: n.V(s), "V")):
        diffs = np.zeros(3)
        for s in ok:
            a, b = vec(reg, s), vec(disp, s)
            diffs = np.maximum(diffs, np.abs(a - b) / (1.0 + np.abs(a)))
        for i in range(3):
            verdict = "match" if diffs[i] <= TOL["displayed"] else "MISMATCH"
            rows.append(f"{tag}[{i + 1}]: {verdict} (max rel diff {diffs[i]:.3e})")
        worst = max(worst, float(np.max(diffs)))
    return "; ".join(rows), worst


def _matrix3_claims(rep, desc, states, rng):
    if not desc.matrices3:
        return
    for lab, N, H in desc.matrices3:
        res = _maxabs(
            float(np.max(np.abs(desc.field.eval(s) - N.matrix(s) @ H.grad(s))))
            for s in states
        )
        rep.add(Claim(
            id=f"bi-hamiltonian:{lab}",
            anchor=_anchor(desc.name, "matrix"),
            description=f"X = {lab} grad({H.name})",
            measured=res,
            tolerance=TOL["biham"],
            status=_status(res, TOL["biham"]),
        ))
        jb = _maxabs(jacobi_residual_bruteforce(N, s) for s in states[:60])
        rep.add(Claim(
            id=f"jacobi3:{lab}",
            anchor="jcb",
            description=f"3D Jacobi identity for {lab}",
            measured=jb,
            tolerance=TOL["jacobi_bf"],
            status=_status(jb, TOL["jacobi_bf"]),
        ))
    (la, Na, _), (lb, Nb, _) = desc.matrices3[0], desc.matrices3[1]
    pj = 0.0
    for _ in range(10):
        c = float(rng.uniform(-2.0, 2.0))
        pen = matrix3_pencil(Na, Nb, c)
        pj = max(pj, _maxabs(jacobi_residual_bruteforce(pen, s) for s in states[:20]))
    rep.add(Claim(
        id="pencil-jacobi3",
        anchor="jcb",
        description=f"pencils {la} + c*{lb} are Poisson at 10 random c",
        measured=pj,
        tolerance=TOL["jacobi_bf"],
        status=_status(pj, TOL["jacobi_bf"]),
    ))
    _nambu_claim(rep, desc, states)


def _nambu_claim(rep, desc, states):
    H1, H2 = desc.integrals["H1"], desc.integrals["H2"]
    candidates = {"H1xH2": (H1, H2), "H2xH1": (H2, H1)}
    best = None
    for tag, (Fa, Fb) in candidates.items():
        s0 = states[0]
        X0 = desc.field.eval(s0)
        W0 = nambu_field(Fa, Fb, s0)
        k = np.argmax(np.abs(X0))
        if abs(W0[k]) < 1e-12:
            continue
        scale = X0[k] / W0[k]
        res = _maxabs(
            float(np.max(np.abs(desc.field.eval(s) - scale * nambu_field(Fa, Fb, s))))
            for s in states
        )
        if best is None or res < best[2]:
            best = (tag, scale, res)
    tag, scale, res = best
    rep.add(Claim(
        id="nambu-ordering",
        anchor="nambu",
        description="cross-product (Nambu) form reproduces the flow in one ordering",
        measured=res,
        tolerance=TOL["biham"],
        status=_status(res, TOL["biham"]),
        detail=f"ordering {tag}, constant scale {scale:g}",
    ))


def _transform_claims(rep, desc, states):
    for nm in sorted(desc.transforms):
        tr = desc.transforms[nm]
        if tr.source == desc.name:
            src_field, src_states = desc.field, states
        elif tr.source == "lorenz":
            src_field = lorenz_field(0.5, 0.0, 1.0)
            src_states = sample_states(tr.src_chart, 60, rep.seed, t=0.2)
        else:
            src_field, src_states = None, None
        if src_states is None:
            continue
        rt = _maxabs(
            float(np.max(np.abs(tr.inverse(tr.forward(s)).coords - s.coords)
                         / (1.0 + np.abs(s.coords))))
            for s in src_states
        )
        rep.add(Claim(
            id=f"transform-roundtrip:{nm}",
            anchor=_anchor(desc.name, "transform"),
            description=f"{nm} forward-then-inverse is the identity",
            measured=rt,
            tolerance=TOL["roundtrip"],
            status=_status(rt, TOL["roundtrip"]),
        ))
        if not tr.exact_pushforward:
            continue
        tgt_field = desc.field if tr.target == desc.name or tr.source == "lorenz" else None
        if tgt_field is None:
            tgt = get_system(tr.target, **_shared_params(tr.target, desc.params))
            tgt_field = tgt.field
        pf = _maxabs(tr.pushforward_residual(src_field, tgt_field, s) for s in src_states)
        rep.add(Claim(
            id=f"transform-pushforward:{nm}",
            anchor=_anchor(desc.name, "transform"),
            description=f"{nm} maps the flow onto the target field",
            measured=pf,
            tolerance=TOL["pushforward"],
            status=_status(pf, TOL["pushforward"]),
        ))


def _shared_params(target: str, params: dict) -> dict:
    from quadham.systems import _BUILDERS

    defaults = _BUILDERS[target][1]
    return {k: v for k, v in params.items() if k in defaults}


def _reduction_claims(rep, desc, samples, seed):
    rng = np.random.default_rng(seed + 11)
    for nm in sorted(desc.reductions):
        lvs = [LevelValues(float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.5, 2.0)))
               for _ in range(2)]
        worst = {"pde": 0.0, "aux": 0.0, "ham": 0.0, "can": 0.0}
        has_aux = False
        derived_ok = True
        for lv in lvs:
            rm = desc.reductions[nm](lv)
            b = rm.bundle
            tvs = (0.6, 1.3) if rm.ambient_time else (0.0, 0.4)

            def ok_point(c, t):
                st = State(c, t)
                if not rm.system.in_domain(st):
                    return False
                for F in (b.M, b.H, b.Q, b.P, b.psi, b.phi):
                    if F is not None and not F.in_domain(st):
                        return False
                # keep the multiplier well-conditioned; near its singular locus
                # the residuals lose float precision without being informative
                return abs(b.M.eval(st)) <= 100.0

            pts = []
            for i, tv in enumerate(tvs):
                pts.extend(sample_states(
                    rm.system.chart, max(10, samples // 8), seed + i,
                    domain=ok_point, t=tv,
                ))
            worst["pde"] = max(worst["pde"], _maxabs(
                multiplier_pde_residual(rm.system, b.M, s) for s in pts))
            worst["ham"] = max(worst["ham"], _maxabs(
                r for s in pts
                for r in timedep_hamiltonian_consistency(rm.system, b.M, b.psi, b.phi, b.H, s)))
            worst["can"] = max(worst["can"], _maxabs(
                canonical_jacobian_check(b.M, b.Q, b.P, s) for s in pts))
            if b.psi is not None:
                has_aux = True
                worst["aux"] = max(worst["aux"], _maxabs(
                    aux_condition_residual(rm.system, b.M, b.psi, b.phi, s) for s in pts))
            derived_ok = derived_ok and rm.notes.get("published_planar_matches", True)
        for key, cid, desc_text in (
            ("pde", f"jlm-multiplier:{nm}", "multiplier transport equation"),
            ("ham", f"jlm-hamiltonian:{nm}", "Hamiltonian one-form consistency"),
            ("can", f"jlm-canonical:{nm}", "canonical pair Jacobian equals M"),
        ):
            rep.add(Claim(
                id=cid,
                anchor=_anchor(desc.name, "jlm"),
                description=f"{desc_text} for reduction {nm}",
                measured=worst[key],
                tolerance=TOL["jlm"],
                status=_status(worst[key], TOL["jlm"]),
            ))
        if has_aux:
            rep.add(Claim(
                id=f"jlm-aux:{nm}",
                anchor=_anchor(desc.name, "jlm"),
                description=f"auxiliary pair keeps the shifted one-form closed ({nm})",
                measured=worst["aux"],
                tolerance=TOL["jlm"],
                status=_status(worst["aux"], TOL["jlm"]),
            ))
        rm = desc.reductions[nm](LevelValues(1.2, 1.5))
        note = rm.notes.get("published_form_note", "")
        rep.add(Claim(
            id=f"reduction-derived:{nm}",
            anchor=_anchor(desc.name, "reduction"),
            description=f"published planar form of {nm} equals the derived one",
            measured=0.0 if derived_ok else 1.0,
            tolerance=0.5,
            status="pass" if derived_ok else "mismatch-reported",
            detail=note,
        ))
        cons = _reduction_consistency(desc, rm)
        if cons is not None:
            rep.add(Claim(
                id=f"reduction-consistency:{nm}",
                anchor=_anchor(desc.name, "reduction"),
                description=f"planar and ambient trajectories agree for {nm}",
                measured=cons,
                tolerance=TOL["reduction"],
                status=_status(cons, TOL["reduction"]),
            ))
        if desc.name == "raychaudhuri":
            _raychaudhuri_h3_scale_claim(rep, desc, rm)


def _reduction_consistency(desc, rm) -> float:
    if rm.project is None:
        return None
    t0 = 1.0 if rm.ambient_time else 0.0
    p0 = None
    for q in (0.3, 0.1, -0.2):
        cand = np.array([0.8, q])
        if rm.system.in_domain(State(cand, t0)):
            p0 = cand
            break
    if p0 is None:
        return None
    cfg = IntegratorConfig(method="dopri45", rtol=1e-11, atol=1e-13)
    t1 = t0 + 1.0
    planar = integrate(rm.system.as_vector_field(), State(p0, t0), t1, cfg, n_samples=1)
    amb_t0 = rm.ambient_time(t0) if rm.ambient_time else t0
    amb_t1 = rm.ambient_time(t1) if rm.ambient_time else t1
    ambient = integrate(desc.field, rm.lift(p0, amb_t0), amb_t1, cfg, n_samples=1)
    if planar.meta["aborted"] or ambient.meta["aborted"]:
        return float("inf")
    return float(np.max(np.abs(rm.project(ambient.states[-1]) - planar.states[-1])))


def _raychaudhuri_h3_scale_claim(rep, desc, rm):
    H3 = desc.integrals["H3"]
    ratios = []
    for q in (0.4, 0.9, 1.4, -0.6):
        p = np.array([q, 1.0 + 0.3 * q])
        s2 = State(p, 0.0)
        if not rm.system.in_domain(s2):
            continue
        amb = rm.lift(p, 0.0)
        h = rm.bundle.H.eval(s2)
        h3 = H3.eval(amb)
        if abs(h3) > 1e-9:
            ratios.append(h / h3)
    spread = float(np.max(ratios) - np.min(ratios)) if len(ratios) > 1 else float("inf")
    rep.add(Claim(
        id="reduction-h3-scale",
        anchor=_anchor(desc.name, "jlm"),
        description="reconstructed planar Hamiltonian is a constant multiple of H3 "
        "on the level set",
        measured=spread,
        tolerance=TOL["h3scale"],
        status=_status(spread, TOL["h3scale"]),
        detail=f"ratio {ratios[0]:.6g}" if ratios else "",
    ))


def _raychaudhuri_fourth_claim(rep, desc, states, rng):
    worst = 0.0
    for s in states[:50]:
        if not all(F.in_domain(s) for F in desc.integrals.values()):
            continue
        l, m = rng.uniform(-2, 2), rng.uniform(-2, 2)
        n = raychaudhuri_solve_fourth_n(desc.integrals, l, m, s)
        worst = max(worst, abs(raychaudhuri_fourth_condition(desc.integrals, l, m, n, s)))
    rep.add(Claim(
        id="fourth-integral-condition",
        anchor=_anchor(desc.name, "fourth"),
        description="coefficient condition for the fourth-integral pencil is satisfiable",
        measured=worst,
        tolerance=TOL["fourth"],
        status=_status(worst, TOL["fourth"]),
    ))


def _canonical_claims(rep, desc, samples, seed):
    if desc.canonical is None:
        return
    cm = desc.canonical(LevelValues(1.2, 1.5))
    lo, hi = cm.sample_bounds
    pts = []
    for i, tv in enumerate((0.0, 0.4)):
        pts.extend(sample_states(cm.system.chart, max(10, samples // 8), seed + i,
                                 low=lo, high=hi, t=tv))
    ce = _maxabs(r for s in pts for r in canonical_equations_residual(cm.system, cm.H, s))
    rep.add(Claim(
        id="canonical-equations",
        anchor=_anchor(desc.name, "canonical"),
        description="Hamilton's equations hold in canonical coordinates "
        "(dQ/dt = dH/dP, dP/dt = -dH/dQ)",
        measured=ce,
        tolerance=TOL["canonical"],
        status=_status(ce, TOL["canonical"]),
    ))
    dh = _maxabs(total_vs_partial_dt_residual(cm.system, cm.H, s) for s in pts)
    rep.add(Claim(
        id="canonical-dHdt",
        anchor=_anchor(desc.name, "canonical"),
        description="dH/dt along the canonical flow equals the explicit time partial",
        measured=dh,
        tolerance=TOL["canonical"],
        status=_status(dh, TOL["canonical"]),
    ))


def _drift_claims(rep, desc):
    if desc.drift_horizon <= 0:
        return
    traj = integrate(
        desc.field,
        desc.default_state,
        desc.default_state.t + desc.drift_horizon,
        IntegratorConfig(method="rk4", dt=1e-3),
        invariants=desc.integrals,
        n_samples=100,
    )
    if traj.meta["aborted"]:
        rep.add(Claim(
            id="drift:trajectory",
            anchor=_anchor(desc.name, "system"),
            description="reference trajectory for drift measurement",
            measured=float("inf"),
            tolerance=TOL["drift"],
            status="fail",
            detail=traj.meta["aborted"],
        ))
        return
    for r in drift_report(traj):
        if r.name in desc.drift_laws:
            law = desc.drift_laws[r.name]
            res = _maxabs(
                lie_derivative(desc.field, desc.integrals[r.name], traj.state_at(i))
                - law.eval(traj.state_at(i))
                for i in range(len(traj.times))
            )
            rep.add(Claim(
                id=f"drift:{r.name}",
                anchor=_anchor(desc.name, "integrals"),
                description=f"{r.name} drift along a T={desc.drift_horizon:g} trajectory",
                measured=r.relative_drift,
                tolerance=TOL["drift"],
                status=_status(r.relative_drift, TOL["drift"], expect_mismatch=True),
                detail=f"pointwise residual against {law.name} along the "
                f"trajectory: {res:.3e}",
            ))
        else:
            rep.add(Claim(
                id=f"drift:{r.name}",
                anchor=_anchor(desc.name, "integrals"),
                description=f"{r.name} drift along a T={desc.drift_horizon:g} trajectory",
                measured=r.relative_drift,
                tolerance=TOL["drift"],
                status=_status(r.relative_drift, TOL["drift"]),
            ))


def _time_map_consistency_claim(rep, desc):
    tr = desc.transforms["time_map"]
    tgt = get_system(tr.target, **_shared_params(tr.target, desc.params))
    s0 = desc.default_state
    cfg = IntegratorConfig(method="dopri45", rtol=1e-11, atol=1e-13)
    a = integrate(desc.field, s0, s0.t + 1.0, cfg, n_samples=1)
    end_t = tr.forward(State(a.states[-1], a.times[-1]))
    start_t = tr.forward(s0)
    b = integrate(tgt.field, start_t, end_t.t, cfg, n_samples=1)
    res = float(np.max(np.abs(b.states[-1] - end_t.coords)))
    rep.add(Claim(
        id="time-map-consistency",
        anchor=_anchor(desc.name, "transform"),
        description="integrating in t then rescaling time matches integrating "
        "the autonomous form",
        measured=res,
        tolerance=TOL["timemap"],
        status=_status(res, TOL["timemap"]),
    ))


def merge_reports(reports: list) -> dict:
    """Concatenate several report dicts; environments kept per source."""
    versions = {r["environment"]["version"] for r in reports}
    merged = {
        "sources": [
            {"system": r["system"], "params": r["params"], "environment": r["environment"]}
            for r in reports
        ],
        "claims": [
            dict(c, system=r["system"]) for r in reports for c in r["claims"]
        ],
        "summary": {
            "total": sum(r["summary"]["total"] for r in reports),
            "passed": sum(r["summary"]["passed"] for r in reports),
            "failed": sum(r["summary"]["failed"] for r in reports),
            "mismatch_reported": sum(r["summary"]["mismatch_reported"] for r in reports),
        },
    }
    merged["claims"].sort(key=lambda c: (c["system"], c["id"]))
    if len(versions) > 1:
        merged["warning"] = f"mixed versions: {sorted(versions)}"
    return merged
