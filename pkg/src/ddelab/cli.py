"""Command-line harness: wave construction, region maps, atlas sweeps,
simulations, parameter sweeps, and the self-verification suite.

All numeric output is written with 17 significant digits so repeated runs are
byte-identical (manifests carry the only wall-time field).  Exit codes:
0 ok, 1 verify failure, 2 invalid parameters, 3 domain too short, 4 step
rejected.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import sim, stability, verify, wave_core
from .errors import StepRejectedError, TailTooFatError
from .grid import Grid
from .params import ModelParams, WaveContext

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_PARAMS = 2
EXIT_DOMAIN_TOO_SHORT = 3
EXIT_STEP_REJECTED = 4


# ---------------------------------------------------------------- output

def fmt(value) -> str:
    """17-significant-digit text for floats; plain str otherwise."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def _json_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return "null"
        return fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{k}": {_json_text(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items):
            return "[" + ", ".join(_json_text(v) for v in items) + "]"
        inner = ",\n".join(f"{pad}  {_json_text(v, indent + 1)}" for v in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, np.floating):
        return _json_text(float(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path: Path, obj) -> None:
    path.write_text(_json_text(obj) + "\n")


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(outdir: Path, command: str, fields: dict, outputs: list[str],
                    seed: int | None = None, wall_time_s: float | None = None) -> Path:
    data = {"command": command}
    data.update(fields)
    data["outputs"] = sorted(outputs)
    if seed is not None:
        data["seed"] = int(seed)
    if wall_time_s is not None:
        data["wall_time_s"] = wall_time_s
    path = outdir / "manifest.json"
    write_json(path, data)
    return path


# ---------------------------------------------------------------- parsing

def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _resolve_params(args) -> ModelParams:
    if getattr(args, "mu", None) is not None:
        if getattr(args, "b", None) is not None:
            raise ValueError("give either -b or --mu, not both")
        return ModelParams(args.a, args.mu * args.a, args.p)
    if getattr(args, "b", None) is None:
        raise ValueError("one of -b or --mu is required")
    return ModelParams(args.a, args.b, args.p)


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_model_flags(sp, mu_scalar=True):
    sp.add_argument("-a", type=float, required=True, help="coefficient of u_xxxx")
    sp.add_argument("-b", type=float, default=None, help="coefficient of u_xxtt")
    if mu_scalar:
        sp.add_argument("--mu", type=float, default=None, help="dispersion ratio b/a")
    sp.add_argument("-p", type=float, required=True, help="nonlinearity exponent")


def _add_grid_flags(sp):
    sp.add_argument("-L", type=float, default=None, help="domain length (auto if omitted)")
    sp.add_argument("-N", type=int, default=None, help="grid points, power of two")


def _add_sim_flags(sp):
    _add_grid_flags(sp)
    sp.add_argument("--dt", type=float, default=None, help="time step (stability bound if omitted)")
    sp.add_argument("--t-end", type=float, default=10.0, dest="t_end")
    sp.add_argument("--lambda", type=float, default=1.0, dest="lam",
                    help="amplitude factor of the initial data (>= 1)")
    sp.add_argument("--h-cut", type=float, default=0.0, dest="h_cut",
                    help="high-pass cutoff wavenumber for the initial data")
    sp.add_argument("--blow-threshold", type=float, default=50.0, dest="blow_threshold")
    sp.add_argument("--record-every", type=int, default=10, dest="record_every")
    sp.add_argument("--no-dealias", action="store_true", dest="no_dealias")


# ---------------------------------------------------------------- commands

def cmd_wave(args) -> int:
    t0 = time.perf_counter()
    params = _resolve_params(args)
    ctx = WaveContext(params, args.c)
    grid = wave_core.default_grid(ctx, length=args.L, n_points=args.N)
    field = wave_core.profile_on_grid(ctx, grid)
    alpha = stability.alpha_and_C(ctx)[0] if ctx.c != 0.0 else 1.0
    rep = wave_core.functionals(field, ctx, alpha)
    nsq, dsq, npp = rep.norms
    pohozaev_scale = ctx.A * nsq + ctx.B * dsq
    out = _outdir(args)
    write_csv(out / "profile.csv", ["x", "phi"], zip(grid.x, field.values))
    write_json(out / "functionals.json", {
        "a": params.a, "b": params.b, "p": params.p, "mu": params.mu, "c": ctx.c,
        "length": grid.length, "n_points": grid.n_points,
        "v": rep.v, "p1": rep.p1, "p2": rep.p2, "e": rep.e, "m": rep.m,
        "k_alpha": rep.k_alpha, "alpha": rep.alpha,
        "norm_l2_sq": nsq, "norm_dx_l2_sq": dsq, "norm_lp1": npp,
        "pohozaev_p1_rel": rep.p1 / pohozaev_scale,
        "pohozaev_p2_rel": rep.p2 / pohozaev_scale,
        "ode_residual_rel": wave_core.ode_residual_rel(field, ctx),
        "d_closed_form": wave_core.d_of_c(ctx, "closed_form"),
        "d_quadrature": wave_core.d_of_c(ctx, "quadrature", grid),
    })
    _write_manifest(out, "wave",
                    {"a": params.a, "b": params.b, "p": params.p, "mu": params.mu,
                     "c": ctx.c, "length": grid.length, "n_points": grid.n_points},
                    ["profile.csv", "functionals.json"],
                    wall_time_s=time.perf_counter() - t0)
    print(f"wave: wrote profile.csv and functionals.json to {out}")
    return EXIT_OK


def cmd_region(args) -> int:
    t0 = time.perf_counter()
    if args.mu is not None:
        if args.a is not None or args.b is not None:
            raise ValueError("give either --mu or (-a, -b), not both")
        mus = _parse_float_list(args.mu)
    else:
        if args.a is None or args.b is None:
            raise ValueError("region needs --mu or both -a and -b")
        mus = [args.b / args.a]
    for mu in mus:
        if not 0.0 <= mu < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {mu}")
    zs = np.linspace(0.0, 1.0, args.points)
    rows = []
    reports = []
    for mu in mus:
        gs = stability.g_eval(zs, args.p, mu)
        rows.extend(zip(zs, [mu] * len(zs), gs))
        rep = stability.classify_region(args.p, mu)
        reports.append({
            "p": rep.p, "mu": rep.mu, "kind": rep.kind,
            "roots_in_unit": list(rep.roots_in_unit),
            "interval_lo": rep.interval[0] if rep.interval else None,
            "interval_hi": rep.interval[1] if rep.interval else None,
        })
    out = _outdir(args)
    write_csv(out / "gcurve.csv", ["z", "mu", "G"], rows)
    write_json(out / "region.json", reports if len(reports) > 1 else reports[0])
    _write_manifest(out, "region",
                    {"p": args.p, "mu_list": mus, "points": args.points},
                    ["gcurve.csv", "region.json"],
                    wall_time_s=time.perf_counter() - t0)
    for rep in reports:
        print(f"region: p={fmt(rep['p'])} mu={fmt(rep['mu'])} -> {rep['kind']}")
    return EXIT_OK


def cmd_atlas(args) -> int:
    t0 = time.perf_counter()
    if not (1.0 < args.p_min < args.p_max <= 12.0):
        raise ValueError(f"need 1 < p_min < p_max <= 12, got [{args.p_min}, {args.p_max}]")
    mus = _parse_float_list(args.mu)
    for mu in mus:
        if not 0.0 <= mu <= 1.0:
            raise ValueError(f"atlas mu must lie in [0, 1], got {mu}")
    pgrid = np.linspace(args.p_min, args.p_max, args.resolution)
    atlas_rows = []
    for mu in mus:
        for p in pgrid:
            for idx, z in enumerate(stability.roots_in_unit_interval(float(p), mu)):
                atlas_rows.append((mu, float(p), z, idx))
    mucrit_rows = []
    for p in pgrid:
        if p > 5.0:
            mucrit_rows.append((float(p), stability.critical_mu(float(p))))
    out = _outdir(args)
    write_csv(out / "atlas.csv", ["mu", "p", "z_root", "root_index"], atlas_rows)
    write_csv(out / "mucrit.csv", ["p", "mu_crit"], mucrit_rows)
    _write_manifest(out, "atlas",
                    {"p_min": args.p_min, "p_max": args.p_max,
                     "resolution": args.resolution, "mu_list": mus},
                    ["atlas.csv", "mucrit.csv"],
                    wall_time_s=time.perf_counter() - t0)
    print(f"atlas: {len(atlas_rows)} root samples, {len(mucrit_rows)} critical ratios")
    return EXIT_OK


def _run_simulation(params: ModelParams, c: float, lam: float, h_cut: float,
                    length: float | None, n_points: int | None,
                    dt: float | None, t_end: float, dealias: bool,
                    blow_threshold: float, record_every: int):
    ctx = WaveContext(params, c)
    grid = wave_core.default_grid(ctx, length=length, n_points=n_points)
    data = sim.perturbed_initial_data(ctx, lam, h_cut, grid)
    cfg = sim.SimConfig(
        dt=dt if dt is not None else sim.stable_dt(params, grid),
        t_end=t_end, dealias=dealias,
        blow_threshold=blow_threshold, record_every=record_every,
    )
    rec = sim.integrate(data.state, params, cfg, ctx=ctx, v0=data.v0)
    return grid, cfg, data, rec


def _record_rows(rec: sim.SimRecord):
    dists = rec.orbital_dist if rec.orbital_dist is not None else [math.nan] * len(rec.times)
    return zip(rec.times, rec.E, rec.M, rec.sup_u, rec.H, dists)


RUN_CSV_HEADER = ["t", "E", "M", "sup_u", "H", "orbital_dist"]


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    params = _resolve_params(args)
    grid, cfg, data, rec = _run_simulation(
        params, args.c, args.lam, args.h_cut, args.L, args.N,
        args.dt, args.t_end, not args.no_dealias,
        args.blow_threshold, args.record_every,
    )
    out = _outdir(args)
    write_csv(out / "run.csv", RUN_CSV_HEADER, _record_rows(rec))
    _write_manifest(out, "simulate", {
        "a": params.a, "b": params.b, "p": params.p, "mu": params.mu, "c": args.c,
        "lambda": args.lam, "h_cut": args.h_cut,
        "length": grid.length, "n_points": grid.n_points,
        "dt": cfg.dt, "t_end": cfg.t_end, "dealias": cfg.dealias,
        "blow_threshold": cfg.blow_threshold, "record_every": cfg.record_every,
        "initial_distance_h1": data.dist_h1,
        "verdict": rec.verdict, "blow_time": rec.blow_time,
        "max_imag_residue": rec.max_imag_residue,
    }, ["run.csv"], wall_time_s=time.perf_counter() - t0)
    print(f"simulate: verdict={rec.verdict}"
          + (f" at t={fmt(rec.blow_time)}" if rec.blow_time is not None else ""))
    return EXIT_OK


def _sweep_worker(task):
    (a, b, p, c, lam, h_cut, length, n_points, dt, t_end,
     dealias, blow_threshold, record_every) = task
    params = ModelParams(a, b, p)
    grid, cfg, data, rec = _run_simulation(
        params, c, lam, h_cut, length, n_points, dt, t_end,
        dealias, blow_threshold, record_every,
    )
    sup_ratio = float(np.max(rec.sup_u)) / rec.sup_u[0] if rec.sup_u[0] > 0 else math.nan
    summary = (
        c, lam, rec.verdict,
        rec.blow_time if rec.blow_time is not None else math.nan,
        sup_ratio,
        float(np.max(np.abs(rec.E - rec.E[0]))) / max(abs(rec.E[0]), 1e-300),
        float(np.max(np.abs(rec.M - rec.M[0]))) / max(abs(rec.M[0]), 1e-300),
        float(rec.orbital_dist[-1]) if rec.orbital_dist is not None else math.nan,
    )
    rows = list(_record_rows(rec))
    return summary, rows


SWEEP_CSV_HEADER = ["c", "lambda", "verdict", "blow_time", "sup_ratio_max",
                    "e_drift_rel", "m_drift_rel", "orbital_dist_final"]


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    params = _resolve_params(args)
    cs = sorted(_parse_float_list(args.c_list))
    if not cs:
        raise ValueError("--c-list must name at least one velocity")
    tasks = [
        (params.a, params.b, params.p, c, args.lam, args.h_cut, args.L, args.N,
         args.dt, args.t_end, not args.no_dealias, args.blow_threshold,
         args.record_every)
        for c in cs
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(t) for t in tasks]
    out = _outdir(args)
    outputs = ["sweep.csv"]
    # per-tuple files are named by position in the sorted key order
    for i, (_, rows) in enumerate(results):
        name = f"run_{i:03d}.csv"
        write_csv(out / name, RUN_CSV_HEADER, rows)
        outputs.append(name)
    write_csv(out / "sweep.csv", SWEEP_CSV_HEADER, [s for s, _ in results])
    _write_manifest(out, "sweep", {
        "a": params.a, "b": params.b, "p": params.p, "mu": params.mu,
        "c_list": cs, "lambda": args.lam, "t_end": args.t_end, "jobs": args.jobs,
    }, outputs, wall_time_s=time.perf_counter() - t0)
    print(f"sweep: {len(cs)} runs -> {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    result = verify.run_all(seed=args.seed)
    out = _outdir(args)
    write_json(out / "verify.json", result)
    _write_manifest(out, "verify", {"passed": result["passed"]}, ["verify.json"],
                    seed=args.seed, wall_time_s=time.perf_counter() - t0)
    for check in result["checks"]:
        status = "ok  " if check["passed"] else "FAIL"
        print(f"{status} {check['name']:<28} samples={check['samples']:<5} "
              f"worst={fmt(check['worst_residual'])} tol={fmt(check['tolerance'])}")
    if not result["passed"]:
        failing = ", ".join(c["name"] for c in result["checks"] if not c["passed"])
        print(f"verification failed: {failing}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("verification passed")
    return EXIT_OK


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddelab",
        description="Solitary waves of the double dispersion equation: "
                    "profiles, stability maps, and pseudospectral runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("wave", help="construct a profile and its functionals")
    _add_model_flags(sp)
    sp.add_argument("-c", type=float, required=True, help="wave velocity")
    _add_grid_flags(sp)
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_wave)

    sp = sub.add_parser("region", help="classify stability regions and sample G")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("--mu", type=str, default=None, help="comma list of ratios b/a")
    sp.add_argument("-a", type=float, default=None)
    sp.add_argument("-b", type=float, default=None)
    sp.add_argument("--points", type=int, default=512)
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("atlas", help="root curves over the (z, p) plane per mu")
    sp.add_argument("--p-min", type=float, default=1.2, dest="p_min")
    sp.add_argument("--p-max", type=float, default=8.0, dest="p_max")
    sp.add_argument("--resolution", type=int, default=35)
    sp.add_argument("--mu", type=str, default="0,0.1,0.3,0.5,0.7,0.9,1")
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_atlas)

    sp = sub.add_parser("simulate", help="integrate perturbed traveling-wave data")
    _add_model_flags(sp)
    sp.add_argument("-c", type=float, required=True, help="wave velocity")
    _add_sim_flags(sp)
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="simulate across a list of velocities")
    _add_model_flags(sp)
    _add_sim_flags(sp)
    sp.add_argument("--c-list", type=str, required=True, dest="c_list")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the seeded invariant suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--outdir", default=".")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TailTooFatError as exc:
        print(f"error: domain too short: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_TOO_SHORT
    except StepRejectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STEP_REJECTED
    except ValueError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID_PARAMS


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
