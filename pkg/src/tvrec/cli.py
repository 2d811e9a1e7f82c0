"""Command-line entry point.

Subcommands: solve, certify, width, bounds, phase, phase-fit, uniqmc. Every
run with a data output also writes <out>.manifest.json recording the resolved
parameters, the master seed actually used, and the wall-clock duration. Exit
codes: 0 success, 2 parameter errors, 1 runtime failures.

Seeds resolve as --seed flag, then the TVREC_SEED environment variable, then
system entropy (recorded in the manifest either way).
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
import time

import numpy as np

from . import __version__
from .certificates import dual_certificate, fuchs_check, nsp_check
from .experiments import (PhaseConfig, PhaseGrid, fit_transition_slope,
                          run_phase_grid, run_uniqueness_mc)
from .fileio import (atomic_write_text, dumps_canonical, format_float,
                     load_grid_csv, load_matrix_csv, load_signal_csv,
                     save_grid_csv)
from .geometry import (BOUND_FORMULAS, BoundQuery, evaluate_bound,
                       mean_width_k0s, mean_width_tv_ball)
from .solvers import tv_lp_oracle, tv_primal_dual


class ParameterError(Exception):
    """Invalid flag value; maps to exit code 2."""


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TVREC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParameterError(f"TVREC_SEED must be an integer, got '{env}'")
    return secrets.randbits(62)


def _write_manifest(out: str, subcommand: str, params: dict, seed,
                    outputs: list[str], started: float):
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "master_seed": seed,
        "artifact_version": __version__,
        "outputs": outputs,
        "duration_seconds": time.monotonic() - started,
    }
    atomic_write_text(out + ".manifest.json", dumps_canonical(manifest) + "\n")


def _load_input(path: str, loader, flag: str):
    try:
        return loader(path)
    except FileNotFoundError:
        raise RuntimeError(f"cannot read {flag} file: {path}")
    except ValueError as exc:
        raise RuntimeError(f"cannot parse {flag} file {path}: {exc}")


def _cmd_solve(args) -> int:
    started = time.monotonic()
    a = _load_input(args.matrix, load_matrix_csv, "--matrix")
    y = _load_input(args.y, load_signal_csv, "--y")
    if args.eps < 0:
        raise ParameterError("--eps must be >= 0")
    if args.method == "lp":
        if args.eps != 0.0:
            raise ParameterError("--method lp solves the equality program; --eps must be 0")
        res = tv_lp_oracle(a, y)
    else:
        res = tv_primal_dual(a, y, args.eps)
    payload = {
        "status": res.status,
        "objective": res.objective,
        "residual": res.residual,
        "iterations": res.iterations,
        "x_hat": list(res.x_hat) if res.x_hat is not None else None,
    }
    atomic_write_text(args.out, dumps_canonical(payload) + "\n")
    _write_manifest(args.out, "solve",
                    {"matrix": args.matrix, "y": args.y, "eps": args.eps,
                     "method": args.method, "out": args.out},
                    None, [args.out], started)
    return 0


def _cmd_certify(args) -> int:
    started = time.monotonic()
    a = _load_input(args.matrix, load_matrix_csv, "--matrix")
    payload = {"method": args.method, "verdict": None, "margin": None,
               "worst_ratio": None, "witness_I": None}
    if args.method == "nsp":
        if args.s is None:
            raise ParameterError("--method nsp requires --s")
        report = nsp_check(a, args.s)
        payload["verdict"] = "Holds" if report.holds else "Fails"
        payload["worst_ratio"] = report.worst_ratio
        payload["witness_I"] = (list(report.witness_set)
                                if report.witness_set is not None else None)
    else:
        if args.x is None:
            raise ParameterError(f"--method {args.method} requires --x")
        x = _load_input(args.x, load_signal_csv, "--x")
        if args.method == "dual":
            cert = dual_certificate(a, x)
            payload["verdict"] = cert.verdict
            payload["margin"] = cert.margin
        else:
            ok, margin = fuchs_check(a, x)
            payload["verdict"] = "Pass" if ok else "Fail"
            payload["margin"] = margin
    atomic_write_text(args.out, dumps_canonical(payload) + "\n")
    _write_manifest(args.out, "certify",
                    {"matrix": args.matrix, "x": args.x, "method": args.method,
                     "s": args.s, "out": args.out},
                    None, [args.out], started)
    return 0


def _cmd_width(args) -> int:
    started = time.monotonic()
    seed = _resolve_seed(args)
    if args.samples < 10:
        raise ParameterError("--samples must be >= 10")
    if args.set == "k0s":
        if args.s is None:
            raise ParameterError("--set k0s requires --s")
        est = mean_width_k0s(args.n, args.s, args.samples, seed)
    else:
        if args.tau is None:
            raise ParameterError("--set tvball requires --tau")
        est = mean_width_tv_ball(args.n, args.tau, args.samples, seed)
    payload = {
        "set": est.set_descriptor,
        "mean": est.mean,
        "std_error": est.std_error,
        "samples": est.samples,
        "seed": seed,
    }
    atomic_write_text(args.out, dumps_canonical(payload) + "\n")
    _write_manifest(args.out, "width",
                    {"set": args.set, "n": args.n, "s": args.s, "tau": args.tau,
                     "samples": args.samples, "out": args.out},
                    seed, [args.out], started)
    return 0


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ParameterError(f"--param expects key=value, got '{pair}'")
        key, _, value = pair.partition("=")
        try:
            params[key] = float(value)
        except ValueError:
            raise ParameterError(f"--param {key} must be numeric, got '{value}'")
    return params


def _cmd_bounds(args) -> int:
    started = time.monotonic()
    params = _parse_params(args.param)
    try:
        value = evaluate_bound(BoundQuery(args.kind, params))
    except ValueError as exc:
        raise ParameterError(str(exc))
    _, formula = BOUND_FORMULAS[args.kind]
    print(format_float(value))
    print(f"formula: {formula}")
    if args.out:
        payload = {"kind": args.kind, "params": params, "value": value,
                   "formula": formula}
        atomic_write_text(args.out, dumps_canonical(payload) + "\n")
        _write_manifest(args.out, "bounds",
                        {"kind": args.kind, "params": params, "out": args.out},
                        None, [args.out], started)
    return 0


def _cmd_phase(args) -> int:
    started = time.monotonic()
    seed = _resolve_seed(args)
    try:
        n_list = tuple(int(v) for v in args.n_list.split(","))
    except ValueError:
        raise ParameterError(f"--n-list must be comma-separated integers, got '{args.n_list}'")
    try:
        cfg = PhaseConfig(s=args.s, n_list=n_list, m_stride=args.m_stride,
                          trials=args.trials, ensemble=args.ensemble,
                          eps=args.eps, seed=seed)
    except ValueError as exc:
        raise ParameterError(str(exc))
    workers = args.workers if args.workers else (os.cpu_count() or 1)
    grid = run_phase_grid(cfg, workers=workers)
    save_grid_csv(args.out, grid.cells)
    _write_manifest(args.out, "phase",
                    {"s": args.s, "n_list": list(n_list), "m_stride": args.m_stride,
                     "trials": args.trials, "ensemble": args.ensemble,
                     "eps": args.eps, "success_tol": cfg.success_tol,
                     "out": args.out, "workers": workers},
                    seed, [args.out], started)
    return 0


def _cmd_phase_fit(args) -> int:
    started = time.monotonic()
    cells = _load_input(args.grid, load_grid_csv, "--grid")
    if not 0 < args.threshold < 1:
        raise ParameterError("--threshold must be in (0, 1)")
    cfg = PhaseConfig(n_list=tuple(sorted(set(n for n, _ in cells))),
                      m_grid={n: tuple(sorted(m for nn, m in cells if nn == n))
                              for n in set(n for n, _ in cells)})
    fit = fit_transition_slope(PhaseGrid(cells, cfg, {}), args.threshold)
    payload = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "threshold": fit.threshold,
        "points": [list(p) for p in fit.points],
        "residual_sumsq": fit.residual_sumsq,
        "alt_slope": fit.alt_slope,
        "alt_intercept": fit.alt_intercept,
        "alt_residual_sumsq": fit.alt_residual_sumsq,
    }
    atomic_write_text(args.out, dumps_canonical(payload) + "\n")
    _write_manifest(args.out, "phase-fit",
                    {"grid": args.grid, "threshold": args.threshold,
                     "out": args.out},
                    None, [args.out], started)
    return 0


def _cmd_uniqmc(args) -> int:
    started = time.monotonic()
    seed = _resolve_seed(args)
    try:
        m_list = tuple(int(v) for v in args.m_list.split(","))
    except ValueError:
        raise ParameterError(f"--m-list must be comma-separated integers, got '{args.m_list}'")
    lines = ["m,fraction"]
    for m in m_list:
        try:
            result = run_uniqueness_mc(args.ensemble, args.n, m, args.s,
                                       args.trials, seed)
        except ValueError as exc:
            raise ParameterError(str(exc))
        lines.append(f"{m},{format_float(result.fraction)}")
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    _write_manifest(args.out, "uniqmc",
                    {"ensemble": args.ensemble, "n": args.n,
                     "m_list": list(m_list), "s": args.s, "trials": args.trials,
                     "out": args.out},
                    seed, [args.out], started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvrec",
        description="TV recovery lab: solvers, certificates, widths, bounds, experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the TV program for one system")
    p.add_argument("--matrix", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--method", choices=["lp", "pd"], default="pd")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="uniqueness certificates")
    p.add_argument("--matrix", required=True)
    p.add_argument("--x")
    p.add_argument("--method", choices=["dual", "fuchs", "nsp"], required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("width", help="Monte Carlo mean width estimates")
    p.add_argument("--set", choices=["k0s", "tvball"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_width)

    p = sub.add_parser("bounds", help="closed-form bound evaluators")
    p.add_argument("--kind", choices=sorted(BOUND_FORMULAS), required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("phase", help="recovery phase-transition grid")
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--n-list", default="32,64,128,256")
    p.add_argument("--m-stride", type=int, default=2)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--ensemble", choices=["rademacher", "gaussian"],
                   default="rademacher")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_phase)

    p = sub.add_parser("phase-fit", help="fit the transition slope of a grid CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_phase_fit)

    p = sub.add_parser("uniqmc", help="Monte Carlo uniqueness fractions")
    p.add_argument("--ensemble", choices=["rademacher", "gaussian", "identity"],
                   default="gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-list", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_uniqmc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
