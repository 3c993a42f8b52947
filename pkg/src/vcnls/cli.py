"""Command-line front end: ``vcnls {solve,figure,verify,simulate}``.

Exit codes: 0 when every gate passes, 1 on a verification failure, 2 on a
usage or scenario error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .characteristic import BasisError
from .coeffs import ScenarioError, list_scenarios, load_scenario
from .riccati import ConsistencyError
from .seeds import ProfileError
from .transforms import BalanceError, family_closed_forms, family_solution, closed_form_solution, solve_scenario
from .validate import GridError, GridSpec, parse_grid, pde_residual, system_residual

PHASE_FLAGS = ("mu0", "alpha0", "beta0", "gamma0", "delta0", "eps0", "kappa0")
SYSTEM_GATE = 1e-7
PDE_GATE = 1e-6
REGRESSION_GATE = 1e-8

# scenario -> (closed form, how to read its parameters from the scenario)
CLOSED_FORMS = {
    "bending_bright": "g1",
    "bending_dark": "g2",
    "sch1": "Periodic1",
    "sch1_fastdecay": "FastDecay",
    "sch2": "Peregrine1",
    "sch2_perturbed": "Peregrine2",
}

FIGURES = {
    "fig1a": ("family", {"h0": -2.0, "beta0": 2 / 3, "delta0": 0.0}, "0:6:121,-10:10:201"),
    "fig1b": ("family", {"h0": -2.0, "beta0": 2 / 3, "delta0": 1.0}, "0:6:121,-10:10:201"),
    "fig2a": ("family", {"h0": 2.0, "beta0": 2 / 3, "delta0": 0.0}, "0:6:121,-10:10:201"),
    "fig2b": ("family", {"h0": 2.0, "beta0": 2 / 3, "delta0": 1.0}, "0:6:121,-10:10:201"),
    "fig3a": ("bending_bright", {"v": 1.0, "delta0": -30.0, "eps0": 0.0}, "0:3:121,-20:20:401"),
    "fig3b": ("bending_bright", {"v": 1.0, "delta0": 1 / 6, "eps0": -1 / 6}, "0:3:121,-20:20:401"),
    "fig3c": ("bending_bright", {"v": 1.0, "delta0": 0.0, "eps0": -10.0}, "0:3:121,-20:20:401"),
    "fig4a": ("bending_dark", {"A": 2.0, "delta0": -1.0, "eps0": 0.0}, "0:3:121,-10:10:201"),
    "fig4b": ("bending_dark", {"A": 2.0, "delta0": 0.0, "eps0": 0.0}, "0:3:121,-10:10:201"),
    "fig4c": ("bending_dark", {"A": 2.0, "delta0": 0.0, "eps0": -2.0}, "0:3:121,-10:10:201"),
    "fig5": ("sch1", {"v": -2.0, "kappa0": 0.0}, "0:6:121,-10:10:201"),
    "fig6": ("sch1_fastdecay", {"v": -2.0, "kappa0": 0.0}, "0:2:81,-10:10:201"),
    "fig7": ("sch2", {"A": 0.5, "kappa0": 0.0}, "0:1.5:61,-10:10:201"),
    "fig8": ("sch2_perturbed", {"A": 0.5, "kappa0": 0.0}, "0:1.5:61,-10:10:201"),
}


class UsageError(Exception):
    pass


# ------------------------------------------------------------ helpers

def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_table(path: Path, header, columns, fmt):
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    if fmt == "json":
        path = path.with_suffix(".json")
        rows = [dict(zip(header, map(float, row))) for row in data]
        path.write_text(json.dumps(rows, indent=1) + "\n")
    else:
        path = path.with_suffix(".csv")
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header=",".join(header), comments="")
    return path


def _write_manifest(out: Path, name: str, manifest: dict) -> Path:
    outputs = []
    for p in manifest.pop("_files", []):
        outputs.append({"path": p.name, "sha256": _sha256(p)})
    manifest["outputs"] = outputs
    path = out / f"{name}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=float) + "\n")
    return path


def _overrides(args) -> dict:
    ov = {k: getattr(args, k) for k in PHASE_FLAGS if getattr(args, k, None) is not None}
    for k in ("l0", "c0", "xi0", "h0", "y"):
        v = getattr(args, k, None)
        if v is not None:
            ov[k] = v
    return ov


def _default_grid(scenario, exact) -> GridSpec:
    t0, t1 = scenario.time_domain
    lo, hi = exact.domain
    if exact.predicted_blowup is not None:
        t1 = min(t1, 0.9 * exact.predicted_blowup)
    a = max(t0, lo) + 0.02 * (t1 - t0)
    b = min(t1, hi) - 0.02 * (t1 - t0)
    if exact.dimension == 2:
        return GridSpec(a, b, 11, -4.0, 4.0, 41, -4.0, 4.0, 41)
    return GridSpec(a, b, 101, -8.0, 8.0, 201)


def _closed_form_for(scenario, sol):
    """Reference closed form with the scenario's parameters, or None."""
    name = CLOSED_FORMS.get(scenario.name)
    p = sol.params
    seed = scenario.seed.get("params", {})
    if name == "g1":
        return closed_form_solution(name, v=seed.get("v", 1.0), delta0=p.delta0, eps0=p.eps0, kappa0=p.kappa0, gamma0=p.gamma0)
    if name == "g2":
        return closed_form_solution(name, A=seed.get("A", 2.0), delta0=p.delta0, eps0=p.eps0, kappa0=p.kappa0, gamma0=p.gamma0)
    if name in ("Periodic1", "FastDecay"):
        return closed_form_solution(name, v=seed.get("v", -2.0), kappa0=p.kappa0)
    if name in ("Peregrine1", "Peregrine2"):
        return closed_form_solution(name, A=seed.get("A", 0.5), kappa0=p.kappa0)
    return None


def _regression(exact, closed, grid: GridSpec):
    ts = np.linspace(max(grid.t0, 1e-3), grid.t1, 21)
    xs = np.linspace(grid.x0, grid.x1, 81)
    T, X = np.meshgrid(ts, xs, indexing="ij")
    a, b = exact.psi(T, X), closed.psi(T, X)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def run_checks(scenario_name, overrides=None, grid=None, threshold=PDE_GATE, tol=None):
    """Solve a scenario and apply the residual gates; returns (summary, sol, exact, grid)."""
    scenario = load_scenario(scenario_name)
    sol, exact = solve_scenario(scenario, overrides or {})
    grid = parse_grid(grid) if isinstance(grid, str) else (grid or _default_grid(scenario, exact))
    gates = {}
    ts = np.linspace(grid.t0, grid.t1, 400)
    sys_coeffs = sol.coeffs if sol.kind == "ermakov" else scenario.coefficients.with_(dimension=1)
    sr = system_residual(sol, sys_coeffs, threshold=SYSTEM_GATE, t=ts)
    gates["system_residual"] = {"max": sr.max_abs, "threshold": SYSTEM_GATE, "passed": sr.passed,
                                "worst_equation": sr.details["worst_equation"], "worst_t": sr.worst_point[0]}
    pr = pde_residual(exact, grid=grid, threshold=threshold)
    gates["pde_residual"] = {"max": pr.max_abs, "threshold": threshold, "passed": pr.passed,
                             "worst_point": list(pr.worst_point)}
    closed = _closed_form_for(scenario, sol) if exact.dimension == 1 else None
    if closed is not None:
        dev = _regression(exact, closed, grid)
        gates["closed_form"] = {"name": CLOSED_FORMS[scenario.name], "max": dev, "threshold": REGRESSION_GATE,
                                "passed": dev <= REGRESSION_GATE}
    if sol.kind == "ermakov":
        ts2 = np.linspace(0.0, scenario.time_domain[1], 301)
        cf = family_closed_forms({k: getattr(sol.params, k) for k in PHASE_FLAGS}, ts2)
        dev = max(float(np.max(np.abs(getattr(sol, k)(ts2) - cf[k]))) for k in cf)
        gates["family_closed_form"] = {"max": dev, "threshold": REGRESSION_GATE, "passed": dev <= REGRESSION_GATE}
    passed = all(g["passed"] for g in gates.values())
    summary = {"scenario": scenario.name, "phase": sol.kind, "chain": exact.chain, "gates": gates, "passed": passed,
               "predicted_blowup": exact.predicted_blowup, "domain": list(exact.domain)}
    return summary, sol, exact, grid


# ------------------------------------------------------------ commands

def cmd_solve(args) -> int:
    t_start = time.perf_counter()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary, sol, exact, grid = run_checks(args.scenario, _overrides(args), args.grid, tol=args.tol)
    files = []
    ts = np.linspace(grid.t0, grid.t1, grid.nt)
    vals = sol.evaluate(ts)
    names = ("alpha", "beta", "gamma", "delta", "eps", "kappa", "mu")
    files.append(_write_table(out / f"{args.scenario}_phase", ("t",) + names, [ts] + [np.broadcast_to(vals[n], ts.shape) for n in names], args.format))
    if exact.dimension == 1:
        T, X = np.meshgrid(*grid.axes(), indexing="ij")
        psi = exact.psi(T, X)
        files.append(_write_table(out / f"{args.scenario}_psi", ("t", "x", "abs2", "re", "im"),
                                  [T, X, np.abs(psi) ** 2, psi.real, psi.imag], args.format))
    manifest = {"command": "solve", "scenario": args.scenario, "parameters": _overrides(args),
                "grid": grid.__dict__, "summary": summary, "predicted_blowup": summary["predicted_blowup"],
                "passed": summary["passed"], "wall_time": time.perf_counter() - t_start, "_files": files}
    path = _write_manifest(out, f"{args.scenario}_solve", manifest)
    _report(summary)
    print(f"manifest: {path}")
    return 0 if summary["passed"] else 1


def _figure_solution(fid):
    kind, params, grid = FIGURES[fid]
    if kind == "family":
        _, exact = family_solution(params)
        fc = lambda t: family_closed_forms(params, t)

        def reference(T, X):
            v = fc(T)
            F = np.tanh if params["h0"] > 0 else (lambda z: 1 / np.cosh(z))
            b0, a0 = params["beta0"], params.get("alpha0", 0.0)
            return F(v["beta"] * X + v["eps"]) ** 2 / np.sqrt(b0**4 * np.sin(T) ** 2 + (2 * a0 * np.sin(T) + np.cos(T)) ** 2)

        return exact, reference, grid
    scenario = load_scenario(kind)
    ov = {k: v for k, v in params.items() if k in PHASE_FLAGS}
    seed_ov = {k: v for k, v in params.items() if k not in PHASE_FLAGS}
    ov.update(seed_ov)
    sol, exact = solve_scenario(scenario, ov)
    closed = closed_form_solution(CLOSED_FORMS[kind], **params)
    return exact, (lambda T, X: np.abs(closed.psi(T, X)) ** 2), grid


def cmd_figure(args) -> int:
    t_start = time.perf_counter()
    if args.figure not in FIGURES:
        raise UsageError(f"unknown figure {args.figure!r}; known: {', '.join(sorted(FIGURES))}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    exact, reference, default_grid = _figure_solution(args.figure)
    grid = parse_grid(args.grid or default_grid)
    T, X = np.meshgrid(*grid.axes(), indexing="ij")
    amp = np.abs(exact.psi(T, X)) ** 2
    f = _write_table(out / args.figure, ("t", "x", "abs2"), [T, X, amp], args.format)
    rng = np.random.default_rng(20240611)
    pts_t = rng.uniform(max(grid.t0, 0.05), grid.t1, 25)
    pts_x = rng.uniform(grid.x0, grid.x1, 25)
    got = np.abs(exact.psi(pts_t, pts_x)) ** 2
    ref = reference(pts_t, pts_x)
    dev = float(np.max(np.abs(got - ref)) / max(1.0, float(np.max(np.abs(ref)))))
    passed = dev <= REGRESSION_GATE
    manifest = {"command": "figure", "figure": args.figure, "parameters": FIGURES[args.figure][1],
                "grid": grid.__dict__, "spot_check": {"points": 25, "max_deviation": dev, "threshold": REGRESSION_GATE},
                "passed": passed, "wall_time": time.perf_counter() - t_start, "_files": [f]}
    path = _write_manifest(out, args.figure, manifest)
    print(f"{args.figure}: spot-check deviation {dev:.3e} {'PASS' if passed else 'FAIL'}")
    print(f"manifest: {path}")
    return 0 if passed else 1


def _verify_one(job):
    name, threshold = job
    try:
        summary, *_ = run_checks(name, threshold=threshold)
        return summary
    except Exception as exc:  # reported as a failed row
        return {"scenario": name, "passed": False, "error": f"{type(exc).__name__}: {exc}", "gates": {}}


def cmd_verify(args) -> int:
    t_start = time.perf_counter()
    names = list_scenarios() if args.target == "all" else [args.target]
    for n in names:
        load_scenario(n)
    jobs = [(n, args.threshold) for n in names]
    if len(jobs) > 1 and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    results.sort(key=lambda r: r["scenario"])
    for r in results:
        _report(r)
    passed = all(r["passed"] for r in results)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        manifest = {"command": "verify", "target": args.target, "threshold": args.threshold, "results": results,
                    "passed": passed, "wall_time": time.perf_counter() - t_start}
        print(f"manifest: {_write_manifest(out, 'verify', manifest)}")
    print(f"{sum(r['passed'] for r in results)}/{len(results)} scenarios pass")
    return 0 if passed else 1


def cmd_simulate(args) -> int:
    from .simulate import compare_to_exact, integrate

    t_start = time.perf_counter()
    scenario = load_scenario(args.scenario)
    sol, exact = solve_scenario(scenario, _overrides(args))
    if exact.dimension != 1:
        raise UsageError("the simulator is one-dimensional")
    t0 = scenario.time_domain[0] if args.t0 is None else args.t0
    t1 = args.t1 if args.t1 is not None else scenario.time_domain[1]
    times = np.linspace(t0, t1, args.snapshots)
    traj = integrate(exact.coeffs, exact, t0, t1, scheme=args.scheme, n=args.n, times=times, tol=args.tol or 1e-10,
                     space=args.space, boundary=args.boundary)
    rows = compare_to_exact(traj, exact)
    final = rows[-1]["L2"] if rows else float("inf")
    passed = traj.stop_reason == "completed" and final <= args.threshold
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    f = traj.to_csv(out / f"{args.scenario}_sim.csv")
    manifest = {"command": "simulate", "scenario": args.scenario, "parameters": _overrides(args),
                "run": traj.manifest(), "errors": rows, "threshold": args.threshold, "passed": passed,
                "wall_time": time.perf_counter() - t_start, "_files": [f]}
    path = _write_manifest(out, f"{args.scenario}_simulate", manifest)
    for r in rows:
        print(f"t={r['t']:.4f}  L2={r['L2']:.3e}  Linf={r['Linf']:.3e}")
    print(f"stop: {traj.stop_reason} at t={traj.t_stop:.6g}; {'PASS' if passed else 'FAIL'}")
    print(f"manifest: {path}")
    return 0 if passed else 1


def _report(summary):
    status = "PASS" if summary["passed"] else "FAIL"
    if "error" in summary:
        print(f"{summary['scenario']:<16} {status}  {summary['error']}")
        return
    parts = []
    for name, g in summary["gates"].items():
        extra = ""
        if not g["passed"] and "worst_point" in g:
            extra = f" worst_point={tuple(round(v, 6) for v in g['worst_point'])}"
        parts.append(f"{name}={g['max']:.2e}{'' if g['passed'] else '!'}{extra}")
    tstar = summary.get("predicted_blowup")
    if tstar is not None:
        parts.append(f"T*={tstar:.12g}")
    print(f"{summary['scenario']:<16} {status}  " + "  ".join(parts))


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vcnls", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("--scenario", required=True)
        for k in PHASE_FLAGS:
            sp.add_argument(f"--{k}", type=float)
        sp.add_argument("--l0", type=int, choices=(-1, 1))
        sp.add_argument("--c0", type=float)
        sp.add_argument("--xi0", type=float)
        sp.add_argument("--h0", type=float)
        sp.add_argument("--y", type=float)
        sp.add_argument("--out", default="vcnls_out")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--tol", type=float)

    s = sub.add_parser("solve", help="solve a scenario, check it and write CSV")
    common(s)
    s.add_argument("--grid")
    s.set_defaults(func=cmd_solve)

    f = sub.add_parser("figure", help="write the data behind a figure")
    f.add_argument("figure")
    f.add_argument("--grid")
    f.add_argument("--out", default="vcnls_out")
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="run the residual gates on one or all scenarios")
    v.add_argument("target", nargs="?", default="all")
    v.add_argument("--threshold", type=float, default=PDE_GATE)
    v.add_argument("--workers", type=int, default=4)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("simulate", help="integrate a scenario directly and compare with its exact solution")
    common(m)
    m.add_argument("--t0", type=float)
    m.add_argument("--t1", type=float)
    m.add_argument("--n", type=int, default=512)
    m.add_argument("--scheme", choices=("mol", "split_step"), default="mol")
    m.add_argument("--space", choices=("fd4", "spectral"), default="fd4")
    m.add_argument("--boundary", choices=("dirichlet", "periodic", "exact"), default="dirichlet")
    m.add_argument("--snapshots", type=int, default=5)
    m.add_argument("--threshold", type=float, default=1e-4)
    m.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BalanceError, ConsistencyError, BasisError, ProfileError, GridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
