"""Command-line front end: verify / simulate / scatter / integrate-form.

All commands are deterministic given their config and seed; simulation and
scattering emit CSV plus a JSON manifest recording every tolerance, so rerun
from the manifest reproduces the bytes.  Exit codes: 0 success, 1 failed
properties or singular stop, 2 bad usage or config, 3 scatter grid entirely
failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import algebra as ta
from . import calculus as tc
from . import dynamics as td
from .algebra import Ternary
from .config import ConfigError, FormConfig, load_config, write_manifest
from .errors import (
    JacobianSingular,
    NoSecondSolution,
    SingularApproach,
    TernionError,
)
from .verify import SUITE_NAMES, run_suite

__all__ = ["main"]


def _thread_count() -> int:
    raw = os.environ.get("TERNION_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# verify


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed (seed {args.seed})")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(
                [dataclasses.asdict(r) for r in results], fh, indent=2, sort_keys=True, default=str
            )
            fh.write("\n")
    if failed:
        first = failed[0]
        print(
            "first counterexample: "
            + json.dumps({"check": first.name, "data": first.counterexample}, default=str)
        )
        return 1
    return 0


# --------------------------------------------------------------------------
# simulate


def _simulate_run(cfg):
    if cfg.kind == "planar":
        sol = td.planar_solution(cfg.g, cfg.m2, cfg.z0, cfg.z1)
        s0 = td.state_from_planar(sol, cfg.z_start)
        t_end = s0.t + (sol.t(cfg.z_stop) - sol.t(cfg.z_start))
    else:
        sol = None
        s0 = td.MonopoleState(*cfg.state)
        t_end = s0.t + cfg.t_end
    return sol, s0, t_end


def _write_trajectory(path, traj, closed_form=None):
    header = td.TRAJECTORY_HEADER + (",r1_closed" if closed_form is not None else "")
    max_dev = 0.0
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for t, y, m, e in zip(traj.times, traj.states, traj.m_ledger, traj.energy):
            cells = [t, *y, *m, e]
            if closed_form is not None:
                r1c = closed_form(y)
                max_dev = max(max_dev, abs(r1c - y[1]) / max(1e-300, abs(y[1])))
                cells.append(r1c)
            fh.write(",".join(repr(float(c)) for c in cells) + "\n")
    return max_dev


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config, "simulate")
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    if args.compare_closed_form and cfg.kind != "planar":
        raise ConfigError("--compare-closed-form needs a planar config")

    sol, s0, t_end = _simulate_run(cfg)
    status = "ok"
    try:
        traj = td.integrate(s0, cfg.g, t_end, tol=cfg.tol, max_step=cfg.max_step)
    except SingularApproach as exc:
        traj = exc.trajectory
        status = "singular-stop"
        print(f"singular approach: {exc}", file=sys.stderr)

    closed = None
    if args.compare_closed_form and sol is not None:
        closed = lambda y: sol.r1(y[0] / y[1])  # noqa: E731
    max_dev = _write_trajectory(args.out, traj, closed)

    drift = traj.max_m_drift()
    print(
        f"{len(traj)} samples ({traj.n_accepted} accepted / {traj.n_rejected} rejected steps), "
        f"M drift ({drift[0]:.3e}, {drift[1]:.3e}, {drift[2]:.3e}), |dE| = {traj.energy_change():.3e}"
    )
    if closed is not None:
        print(f"max relative deviation from closed-form r1(z): {max_dev:.3e}")

    if args.manifest:
        extras = {
            "conservation": {
                "m_drift": [float(d) for d in drift],
                "energy_change": traj.energy_change(),
            },
            "steps": {"accepted": traj.n_accepted, "rejected": traj.n_rejected},
        }
        if closed is not None:
            extras["closed_form_max_rel_dev"] = max_dev
        if status == "singular-stop":
            extras["truncated"] = "stopped at the singular-approach guard"
        write_manifest(args.manifest, "simulate", cfg, {"trajectory_csv": args.out}, status, extras)
    if status == "singular-stop" and not args.allow_singular_stop:
        return 1
    return 0


# --------------------------------------------------------------------------
# scatter


def _scatter_row(cfg, m1, m2):
    try:
        res = td.scattering_map(
            td.ScatteringSetup(g=cfg.g, y1=cfg.y1, z1=cfg.z1, v1_inf=cfg.v1_inf, m1=m1, m2=m2)
        )
        return (m1, m2, res, "ok")
    except NoSecondSolution:
        return (m1, m2, None, "NoSecondSolution")
    except JacobianSingular:
        return (m1, m2, None, "JacobianSingular")
    except TernionError as exc:
        return (m1, m2, None, type(exc).__name__)


def _cmd_scatter(args) -> int:
    cfg = load_config(args.config, "scatter")
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    points = [(m1, m2) for m1 in cfg.m1_grid for m2 in cfg.m2_grid]
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda p: _scatter_row(cfg, *p), points))
    else:
        rows = [_scatter_row(cfg, *p) for p in points]
    td.write_scatter_csv(rows, args.out)
    n_ok = sum(1 for r in rows if r[3] == "ok")
    print(f"{n_ok}/{len(rows)} grid points solved -> {args.out}")
    if args.manifest:
        write_manifest(
            args.manifest,
            "scatter",
            cfg,
            {"table_csv": args.out},
            "ok" if n_ok else "all-failed",
            {"rows_ok": n_ok, "rows_total": len(rows)},
        )
    return 0 if n_ok else 3


# --------------------------------------------------------------------------
# integrate-form


_FIELDS = {
    "one": lambda: tc.TernaryField(lambda z: ta.ONE, name="one"),
    "identity": lambda: tc.TernaryField(lambda z: z, name="identity"),
    "square": lambda: tc.TernaryField(lambda z: ta.mul(z, z), name="square"),
    "reciprocal": lambda: tc.TernaryField(ta.inverse, name="reciprocal"),
    "inverse-conjugate": lambda: tc.TernaryField(
        lambda z: ta.scale(z, 1.0 / ta.norm_cubed(z)), name="inverse-conjugate"
    ),
}


def _form_domain(cfg: FormConfig):
    p = cfg.params
    if cfg.kind == "line":
        if cfg.preset == "trisectrice-loop":
            return tc.trisectrice_loop(p.get("rho", 1.0), p.get("phi", 0.0))
        if cfg.preset == "segment":
            a = Ternary(*p["from"])
            b = Ternary(*p["to"])
            diff = b - a
            return tc.Curve(lambda t: a + ta.scale(diff, t), 0.0, 1.0, derivative=lambda t: diff)
    elif cfg.kind == "surface":
        if cfg.preset == "cubic-band":
            return tc.cubic_band_patch(p.get("rho", 1.0), p["a1"], p["a2"])
        if cfg.preset == "polar-band":
            return tc.polar_band_patch(p.get("rho", 1.0), p["phi_lo"], p["phi_hi"])
        if cfg.preset == "sphere":
            return tc.sphere_patch(Ternary(*p["center"]), p["radius"])
    elif cfg.kind == "volume":
        if cfg.preset == "box":
            b = p["box"]
            return ((b[0], b[1]), (b[2], b[3]), (b[4], b[5]))
    raise ConfigError(f"unknown {cfg.kind} preset {cfg.preset!r}")


def _cmd_form(args) -> int:
    if args.config:
        cfg = load_config(args.config, "integrate-form")
    else:
        params = {}
        for key in ("rho", "phi", "a1", "a2", "phi_lo", "phi_hi", "radius"):
            val = getattr(args, key.replace("-", "_"))
            if val is not None:
                params[key] = val
        for key in ("center", "from", "to"):
            val = getattr(args, "from_" if key == "from" else key)
            if val is not None:
                params[key] = [float(v) for v in val.split(",")]
        if args.box is not None:
            params["box"] = [float(v) for v in args.box.split(",")]
        cfg = FormConfig(
            kind=args.kind,
            preset=args.preset,
            field_name=args.field,
            tol=args.tol if args.tol is not None else 1e-9,
            params=params,
        )
    if cfg.field_name not in _FIELDS:
        raise ConfigError(f"unknown field {cfg.field_name!r}; choose from {sorted(_FIELDS)}")
    field = _FIELDS[cfg.field_name]()
    domain = _form_domain(cfg)
    if cfg.kind == "line":
        value = tc.line_integral(field, domain, tol=cfg.tol)
    elif cfg.kind == "surface":
        value = tc.surface_integral_2form(field, domain, tol=cfg.tol)
    else:
        value = tc.volume_integral_3form(field, domain, tol=cfg.tol)
    doc = {
        "kind": cfg.kind,
        "preset": cfg.preset,
        "field": cfg.field_name,
        "tol": cfg.tol,
        "value": list(value.components()),
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        write_manifest(args.manifest, "integrate-form", cfg, {"result": args.out or "-"}, "ok")
    return 0


# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ternion",
        description="Ternary complex analysis and monopole dynamics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a seeded property suite")
    p.add_argument("suite", choices=SUITE_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="integrate a monopole trajectory to CSV")
    p.add_argument("--config", required=True, help="JSON config (or a previous manifest)")
    p.add_argument("--out", default="trajectory.csv")
    p.add_argument("--manifest", help="write a JSON run manifest here")
    p.add_argument("--tol", type=float, default=None, help="override the config tolerance")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--allow-singular-stop", action="store_true")
    p.add_argument(
        "--compare-closed-form",
        action="store_true",
        help="append the closed-form r1(z) column (planar configs only)",
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("scatter", help="scattering table over an (M1, M2) grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="scatter.csv")
    p.add_argument("--manifest")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_scatter)

    p = sub.add_parser("integrate-form", help="line/surface/volume form integrals")
    p.add_argument("kind", choices=FormConfig.KINDS, nargs="?")
    p.add_argument("--config", help="JSON config (overrides the flag parameters)")
    p.add_argument("--preset")
    p.add_argument("--field", default="inverse-conjugate", choices=sorted(_FIELDS))
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--rho", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--a1", type=float)
    p.add_argument("--a2", type=float)
    p.add_argument("--phi-lo", dest="phi_lo", type=float)
    p.add_argument("--phi-hi", dest="phi_hi", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--center", help="x0,x1,x2")
    p.add_argument("--from", dest="from_", help="x0,x1,x2")
    p.add_argument("--to", help="x0,x1,x2")
    p.add_argument("--box", help="x0lo,x0hi,x1lo,x1hi,x2lo,x2hi")
    p.add_argument("--out", default="-")
    p.add_argument("--manifest")
    p.set_defaults(func=_cmd_form)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "integrate-form" and not args.config and not (args.kind and args.preset):
        print("integrate-form needs either --config or KIND and --preset", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        print("run `ternion --help` for usage", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TernionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
