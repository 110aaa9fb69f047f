"""Command-line interface.

Exit codes: 0 success, 1 at least one verification claim failed hard,
2 usage error (unknown system, malformed arguments, empty input),
3 parameter constraint violation.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from quadham import __version__
from quadham.core import State
from quadham.dynamics import IntegratorConfig, drift_report, integrate, lyapunov_spectrum
from quadham.systems import ConstraintError, REGISTRY_NAMES, get_system
from quadham.verify import merge_reports, verify_system

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_CONSTRAINT = 3


def _default_seed() -> int:
    raw = os.environ.get("QUADHAM_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            print(f"bad --params entry {item!r}, expected name=value", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            print(f"bad --params value {v!r} for {k!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return out


def _get_system_or_exit(name: str, params: dict):
    try:
        return get_system(name, **params)
    except ConstraintError as exc:
        print(f"constraint violated: {exc.constraint}", file=sys.stderr)
        raise SystemExit(EXIT_CONSTRAINT)
    except KeyError as exc:
        print(str(exc.args[0]), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_verify(args) -> int:
    params = _parse_params(args.params)
    _get_system_or_exit(args.system, params)  # argument validation (exit 2/3)
    try:
        rep = verify_system(args.system, samples=args.samples, seed=args.seed, params=params)
    except ConstraintError as exc:
        print(f"constraint violated: {exc.constraint}", file=sys.stderr)
        return EXIT_CONSTRAINT
    doc = rep.to_dict()
    if not args.deterministic:
        doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    for c in rep.claims:
        line = f"[{c.status}] {c.id}: measured {c.measured:.3e} (tol {c.tolerance:.0e})"
        if c.detail:
            line += f" -- {c.detail}"
        print(line)
    s = doc["summary"]
    print(
        f"{rep.system}: {s['passed']} passed, {s['failed']} failed, "
        f"{s['mismatch_reported']} mismatch-reported"
    )
    if not args.out:
        print(text, end="")
    return EXIT_CLAIM_FAILED if rep.failed else EXIT_OK


def cmd_integrate(args) -> int:
    params = _parse_params(args.params)
    desc = _get_system_or_exit(args.system, params)
    if args.x0 is not None:
        vals = [v for chunk in args.x0.split(",") for v in chunk.split()]
        if len(vals) != desc.chart.dim:
            print(
                f"--x0 needs {desc.chart.dim} values for {args.system}, got {len(vals)}",
                file=sys.stderr,
            )
            return EXIT_USAGE
        try:
            s0 = State(np.array([float(v) for v in vals]), args.t0)
        except ValueError:
            print(f"--x0 values must be numeric: {args.x0!r}", file=sys.stderr)
            return EXIT_USAGE
    else:
        s0 = State(desc.default_state.coords, args.t0)
    cfg = IntegratorConfig(method=args.method, dt=args.dt)
    if args.t1 <= s0.t:
        from quadham.dynamics import Trajectory

        traj = Trajectory(
            labels=desc.chart.labels,
            times=np.array([s0.t]),
            states=s0.coords[None, :],
            invariants={
                nm: np.array([F.eval(s0)]) for nm, F in desc.integrals.items()
            },
            meta={"method": args.method, "steps": 0, "rejected": 0, "aborted": ""},
        )
    else:
        traj = integrate(desc.field, s0, args.t1, cfg, invariants=desc.integrals,
                         n_samples=args.samples)
    traj.write_csv(args.out)
    print(f"wrote {len(traj.times)} rows to {args.out}")
    if traj.meta["aborted"]:
        print(f"integration aborted early: {traj.meta['aborted']}")
    for r in drift_report(traj):
        print(f"drift {r.name}: max |dI| {r.max_abs_drift:.3e} (relative {r.relative_drift:.3e})")
    if args.plot:
        from quadham.plotting import plot_trajectory

        print(f"figure written to {plot_trajectory(traj, args.plot)}")
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    params = _parse_params(args.params)
    desc = _get_system_or_exit(args.system, params)
    T = args.T if args.T is not None else 1000.0
    res = lyapunov_spectrum(
        desc.field, desc.default_state, t_total=T, dt=args.dt, seed=args.seed
    )
    doc = {
        "system": args.system,
        "T": T,
        "T_defaulted": args.T is None,
        "dt": args.dt,
        "seed": args.seed,
        "exponents": [float(x) for x in res.exponents],
        "spread": [float(x) for x in res.stderr],
        "renorms": res.renorms,
        "version": __version__,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return EXIT_OK


def cmd_report(args) -> int:
    if not args.inputs:
        print("report requires at least one input file", file=sys.stderr)
        return EXIT_USAGE
    docs = []
    for path in args.inputs:
        try:
            with open(path) as fh:
                docs.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    merged = merge_reports(docs)
    text = json.dumps(merged, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    if "warning" in merged:
        print(f"warning: {merged['warning']}", file=sys.stderr)
    s = merged["summary"]
    print(
        f"merged {len(docs)} reports: {s['passed']} passed, {s['failed']} failed, "
        f"{s['mismatch_reported']} mismatch-reported",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadham",
        description="Structure verification and integration for quadratic "
        "multi-Hamiltonian systems",
    )
    parser.add_argument("--version", action="version", version=f"quadham {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("verify", help="run the claim suite for one system")
    p.add_argument("system", help=f"one of: {', '.join(REGISTRY_NAMES)}")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--params", action="append", metavar="NAME=VALUE")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--deterministic", action="store_true",
                   help="omit timestamps so identical runs produce identical bytes")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("integrate", help="integrate a system and write CSV")
    p.add_argument("system")
    p.add_argument("--x0", help="comma-separated initial coordinates")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--method", choices=("dopri45", "rk4", "euler"), default="dopri45")
    p.add_argument("--samples", type=int, default=200, help="approximate output rows")
    p.add_argument("--out", default="trajectory.csv")
    p.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
    p.add_argument("--params", action="append", metavar="NAME=VALUE")
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("lyapunov", help="Lyapunov spectrum from the default state")
    p.add_argument("system")
    p.add_argument("--T", type=float, default=None,
                   help="total integration time (default 1000, recorded in the output)")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--out")
    p.add_argument("--params", action="append", metavar="NAME=VALUE")
    p.set_defaults(fn=cmd_lyapunov)

    p = sub.add_parser("report", help="merge verification reports")
    p.add_argument("inputs", nargs="*", help="JSON reports produced by 'verify'")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors and 0 for --help/--version
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
