"""Command-line interface.

Angles are in radians.  Exit codes: 0 success, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, analysis, defaults
from .berger import BergerContext, FrameVector
from .export import dumps_kv, loads_kv, make_manifest, timestamp, trajectory_csv, write_text
from .flows import (
    FlowParams,
    TrajectorySample,
    geodesic_curve,
    lorentz_residual_analytic,
    magnetic_curve,
    omega_closed_form,
)
from .verify import SUITES, Grid, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got {text!r}")
    return vals


def _vector(text: str) -> list[float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected three components A,B,C")
    return vals


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


# trajectories


def resolve_params(c: float, q: float, theta: float | None, psi: float, omega: list[float] | None) -> dict:
    """Resolved, fully explicit trajectory parameters (floats only)."""
    if not c > -3.0:
        raise UsageError(f"c must exceed -3 (got {c!r})")
    if omega is not None:
        v = FrameVector(*omega)
        n = v.norm()
        if n == 0.0:
            raise UsageError("omega must be nonzero")
        if abs(n - 1.0) > 1e-12:
            print(f"warning: omega normalized from norm {n!r}", file=sys.stderr)
            v = FrameVector(v.A / n, v.B / n, v.C / n)
        p = FlowParams(BergerContext(c), q, v)
    else:
        p = FlowParams.from_angles(c, q, defaults.THETA if theta is None else theta, psi)
    w = p.omega0
    return {"c": c, "q": q, "omega0": [w.A, w.B, w.C], "theta": p.theta}


def _flow_params(params: dict) -> FlowParams:
    return FlowParams(BergerContext(params["c"]), params["q"], FrameVector(*params["omega0"]))


def trajectory_samples(kind: str, params: dict, t_end: float, n: int) -> list[TrajectorySample]:
    p = _flow_params(params)
    if kind == "geodesic":
        p = FlowParams(p.ctx, 0.0, p.omega0)
        curve = geodesic_curve(p.omega0, p.ctx)
    else:
        curve = magnetic_curve(p)
    times = np.linspace(0.0, t_end, n)
    return [TrajectorySample(float(t), curve.at(float(t)), omega_closed_form(float(t), p)) for t in times]


def run_trajectory(kind: str, params: dict, out: str | None, manifest_path: str | None) -> int:
    t_end, n = params["t_end"], params["n"]
    if not (t_end > 0 and math.isfinite(t_end)):
        raise UsageError("t-end must be positive")
    samples = trajectory_samples(kind, params, t_end, n)
    text = trajectory_csv(samples, BergerContext(params["c"]))
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)
        manifest_path = manifest_path or out + ".manifest"
    if manifest_path:
        write_text(manifest_path, dumps_kv(make_manifest(kind, params, [out] if out else [])))
    return EXIT_OK


def cmd_trajectory(args) -> int:
    q = 0.0 if args.command == "geodesic" else args.q
    params = resolve_params(args.c, q, args.theta, args.psi, args.omega)
    params.update(t_end=args.t_end, n=args.n)
    return run_trajectory(args.command, params, args.out, args.manifest)


# verification


def _check_line(chk) -> str:
    status = "PASS" if chk.passed else "FAIL"
    extra = "".join(f" {k}={v!r}" for k, v in chk.info.items())
    return f"{status} {chk.name} deviation={chk.deviation!r} tol={chk.tol!r}{extra}"


def run_verify(suite: str, grid: Grid, report: str | None, quiet: bool = False) -> int:
    checks = run_suite(suite, grid)
    failed = [chk for chk in checks if not chk.passed]
    if not quiet:
        for chk in checks:
            print(_check_line(chk))
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if report:
        body = {
            "suite": suite,
            "grid": {"c": list(grid.c), "q": list(grid.q), "theta": list(grid.theta)},
            "passed": not failed,
            "checks": {
                str(i): {"name": chk.name, "deviation": chk.deviation, "tol": chk.tol, "passed": chk.passed}
                for i, chk in enumerate(checks)
            },
        }
        manifest = make_manifest("verify", {"suite": suite}, [report])
        manifest["report"] = body
        write_text(report, dumps_kv(manifest))
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_verify(args) -> int:
    grid = Grid(
        tuple(args.c) if args.c else defaults.GRID_C,
        tuple(args.q) if args.q else defaults.GRID_Q,
        tuple(args.theta) if args.theta else defaults.GRID_THETA,
    )
    for c in grid.c:
        if not c > -3.0:
            raise UsageError(f"c must exceed -3 (got {c!r})")
    return run_verify(args.suite, grid, args.report, args.quiet)


# analysis


def run_analyze(query: str, c: float, q: float, theta: float, n: int, max_den: int, tol: float) -> dict:
    if query == "diameter":
        return {"diameter": analysis.diameter(c)}
    if query == "lambda":
        return {"lambda": analysis.lambda_engel(theta, c)}
    if query == "length-bound":
        return {"length_bound": analysis.length_bound(theta, c)}
    if query == "conjugate":
        ct = analysis.conjugate_times(theta, c, n)
        out = {"slope": ct.slope, "lambda": ct.lam, "roots": list(ct.roots), "pi_family": list(ct.pi_family)}
        if ct.lam > 1e-12:  # the rescaling degenerates as lambda -> 0
            out["roots_rescaled"] = list(ct.rescaled(ct.roots))
            out["pi_family_rescaled"] = list(ct.rescaled(ct.pi_family))
        return out
    if query == "period-geodesic":
        rep = analysis.geodesic_period_test(theta, c, max_den, tol)
    elif query == "period-magnetic":
        rep = analysis.magnetic_period_test(q, theta, max_den, tol)
    else:
        raise UsageError(f"unknown query {query!r}")
    out = {"verdict": rep.verdict, "periodic": rep.is_periodic}
    if rep.value is not None:
        out["value"] = rep.value
    if rep.rational is not None:
        out["rational"] = f"{rep.rational[0]}/{rep.rational[1]}"
    if rep.period is not None:
        out["period"] = rep.period
    return out


ANALYZE_QUERIES = ("period-geodesic", "period-magnetic", "lambda", "conjugate", "length-bound", "diameter")


def cmd_analyze(args) -> int:
    try:
        result = run_analyze(args.query, args.c, args.q, args.theta, args.n, args.max_den, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(dumps_kv(result))
    return EXIT_OK


# sweeps


def _sweep_tuple(job):
    """Evaluate one tuple; never raises (failures are reported)."""
    idx, c, q, theta, t_end, n, outdir, stamp = job
    tag = f"t{idx:04d}"
    entry = {"c": c, "q": q, "theta": theta}
    try:
        params = resolve_params(c, q, theta, 0.0, None)
        params.update(t_end=t_end, n=n)
        samples = trajectory_samples("magnetic", params, t_end, n)
        ctx = BergerContext(c)
        p = _flow_params(params)
        times = [s.t for s in samples]
        res = lorentz_residual_analytic(magnetic_curve(p), ctx, q, times).max_norm
        cs = [s.omega.C for s in samples]
        speeds = [s.omega.norm() for s in samples]
        report = {
            "lorentz_residual": res,
            "contact_drift": max(cs) - min(cs),
            "speed_drift": max(speeds) - min(speeds),
        }
        csv_name, report_name = f"{tag}.csv", f"{tag}.report"
        write_text(os.path.join(outdir, csv_name), trajectory_csv(samples, ctx))
        manifest = make_manifest("magnetic", params, [csv_name])
        manifest["timestamp"] = stamp
        write_text(os.path.join(outdir, f"{tag}.manifest"), dumps_kv(manifest))
        write_text(os.path.join(outdir, report_name), dumps_kv({"params": params, "report": report}))
        entry.update(status="ok", csv=csv_name, report=report_name, **report)
    except Exception as exc:  # isolate the tuple
        entry.update(status="failed", error=f"{type(exc).__name__}: {exc}")
    return tag, entry


def run_sweep(cs, qs, thetas, t_end: float, n: int, outdir: str, workers: int) -> int:
    try:
        os.makedirs(outdir, exist_ok=True)
        probe = os.path.join(outdir, ".write-test")
        write_text(probe, "")
        os.remove(probe)
    except OSError as exc:
        raise UsageError(f"output directory {outdir!r} is not writable: {exc}")
    stamp = timestamp()
    jobs = [(i, c, q, th, t_end, n, outdir, stamp) for i, (c, q, th) in enumerate((c, q, th) for c in cs for q in qs for th in thetas)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_tuple, jobs))
    else:
        results = [_sweep_tuple(j) for j in jobs]
    tuples = dict(results)
    failed = sorted(tag for tag, e in tuples.items() if e["status"] != "ok")
    params = {"c": list(cs), "q": list(qs), "theta": list(thetas), "t_end": t_end, "n": n}
    index = make_manifest("sweep", params, [e["csv"] for e in tuples.values() if "csv" in e])
    index["timestamp"] = stamp
    index["tuples"] = tuples
    index["failed"] = failed
    write_text(os.path.join(outdir, "index.manifest"), dumps_kv(index))
    print(f"{len(tuples) - len(failed)}/{len(tuples)} tuples ok; index at {os.path.join(outdir, 'index.manifest')}")
    for tag in failed:
        print(f"failed {tag}: {tuples[tag]['error']}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_sweep(args) -> int:
    if not (args.t_end > 0):
        raise UsageError("t-end must be positive")
    return run_sweep(args.c, args.q, args.theta, args.t_end, args.n, args.out, args.workers)


# replay


def cmd_replay(args) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        m = loads_kv(fh.read())
    cmd, params = m.get("command"), m.get("params", {})
    if cmd in ("geodesic", "magnetic"):
        out = args.out or (m["outputs"][0] if m.get("outputs") else None)
        return run_trajectory(cmd, params, out, None)
    if cmd == "sweep":
        outdir = args.out or os.path.dirname(os.path.abspath(args.manifest))
        return run_sweep(params["c"], params["q"], params["theta"], params["t_end"], params["n"], outdir, 1)
    if cmd == "verify":
        r = m.get("report", {}).get("grid", {})
        grid = Grid(tuple(r.get("c", defaults.GRID_C)), tuple(r.get("q", defaults.GRID_Q)), tuple(r.get("theta", defaults.GRID_THETA)))
        out = args.out or (m["outputs"][0] if m.get("outputs") else None)
        return run_verify(params["suite"], grid, out)
    raise UsageError(f"cannot replay command {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bergerflow", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in (("geodesic", "closed-form geodesic through the identity"), ("magnetic", "closed-form contact magnetic trajectory")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--c", type=float, default=defaults.C, help="curvature parameter, c > -3")
        if name == "magnetic":
            p.add_argument("--q", type=float, default=defaults.Q, help="charge")
        p.add_argument("--theta", type=float, default=None, help="contact angle in radians")
        p.add_argument("--psi", type=float, default=defaults.PSI, help="azimuth of Omega(0) in the (e1, e2) plane, radians")
        p.add_argument("--omega", type=_vector, default=None, metavar="A,B,C", help="explicit Omega(0); normalized with a warning")
        p.add_argument("--t-end", type=float, default=defaults.T_END)
        p.add_argument("--n", type=_positive_int, default=defaults.N_ROWS, help="number of rows")
        p.add_argument("--out", default=None, help="CSV path (default: stdout)")
        p.add_argument("--manifest", default=None, help="manifest path (default: OUT.manifest)")
        p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--c", type=_floats, default=None, help="comma list; default grid otherwise")
    p.add_argument("--q", type=_floats, default=None)
    p.add_argument("--theta", type=_floats, default=None, help="radians")
    p.add_argument("--report", default=None, help="write a key-value report here")
    p.add_argument("--quiet", action="store_true", help="print only the summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="analysis queries")
    p.add_argument("query", choices=ANALYZE_QUERIES)
    p.add_argument("--c", type=float, default=defaults.C)
    p.add_argument("--q", type=float, default=defaults.Q)
    p.add_argument("--theta", type=float, default=defaults.THETA, help="radians")
    p.add_argument("--n", type=_positive_int, default=5, help="number of conjugate times")
    p.add_argument("--max-den", type=_positive_int, default=defaults.MAX_DEN)
    p.add_argument("--tol", type=float, default=defaults.RATIONAL_TOL)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="trajectories and reports over a (c, q, theta) grid")
    p.add_argument("--c", type=_floats, default=list(defaults.GRID_C))
    p.add_argument("--q", type=_floats, default=list(defaults.GRID_Q))
    p.add_argument("--theta", type=_floats, default=list(defaults.GRID_THETA), help="radians")
    p.add_argument("--t-end", type=float, default=defaults.T_END)
    p.add_argument("--n", type=_positive_int, default=defaults.SWEEP_ROWS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="override the output path")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
