"""Command-line surface: reproducible runs with machine-readable reports.

Every command echoes its full resolved configuration, so a report alone
suffices to reproduce the run; with ``--json`` the output is a schema-stable
document that is byte-identical across repeated runs. Exit codes: 0 success,
1 input error, 2 hypothesis failure (the report carries the witness),
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cones, counting, families, laplace, montecarlo, solver, steps as steps_mod

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 2
EXIT_NONCONVERGENCE = 3

# acceptance-suite tolerances surfaced by `verify`
RATE_TOL = 5e-3
MC_SIGMA = 4.0


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # input errors (including flag misuse) exit with code 1, keeping 2 and 3
    # reserved for hypothesis failures and non-convergence
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_(EXIT_INPUT, message)


class SystemExit_(Exception):
    def __init__(self, code, message):
        self.code = code
        self.message = message
        super().__init__(message)


def _load_measure(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read step file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed step file {path}: {exc}")
    if not isinstance(doc, dict) or "steps" not in doc or "dim" not in doc:
        raise InputError(f'step file {path} must be {{"dim": d, "steps": [[..],..], "weights"?: [..]}}')
    steps = doc["steps"]
    try:
        arr = np.asarray(steps, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"step file {path}: steps must be numeric vectors")
    if arr.ndim != 2 or arr.shape[1] != doc["dim"]:
        raise InputError(f"step file {path}: steps must be vectors of length dim={doc['dim']}")
    try:
        if "weights" in doc and doc["weights"] is not None:
            return steps_mod.probability_measure(arr, doc["weights"]), doc
        return steps_mod.from_step_set(arr), doc
    except ValueError as exc:
        raise InputError(f"step file {path}: {exc}")


def _parse_cone(literal, dim):
    try:
        if literal == "orthant":
            return cones.orthant(dim)
        if literal.startswith("halfspace:"):
            u = [float(v) for v in literal.split(":", 1)[1].split(",")]
            return cones.halfspace(u)
        if literal.startswith("rays:"):
            return cones.generated(json.loads(literal.split(":", 1)[1]))
        if literal.startswith("ineq:"):
            return cones.inequalities(json.loads(literal.split(":", 1)[1]))
    except (ValueError, json.JSONDecodeError, cones.ConeError) as exc:
        raise InputError(f"bad cone literal {literal!r}: {exc}")
    raise InputError(f"unknown cone literal {literal!r} "
                     "(use orthant, halfspace:u1,u2, rays:[[..]], ineq:[[..]])")


def _parse_point(text, what="start"):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"bad {what} {text!r}: expected comma-separated numbers")


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}{k}.", obj[k])
        elif isinstance(obj, list) and len(obj) > 12:
            print(f"{prefix[:-1]}: [{obj[0]}, {obj[1]}, ... {len(obj)} items ..., {obj[-1]}]")
        else:
            print(f"{prefix[:-1]}: {obj}")
    walk("", report)


def _floats(vec):
    return [float(v) for v in np.asarray(vec).ravel()]


def cmd_rate(args):
    measure, doc = _load_measure(args.steps)
    cone = _parse_cone(args.cone, measure.dim)
    report = {
        "command": "rate",
        "config": {"steps_file": args.steps, "steps": doc["steps"],
                   "weights": _floats(measure.weights), "dim": measure.dim,
                   "cone": args.cone, "tol": args.tol, "threads": args.threads,
                   "seed": args.seed},
    }
    try:
        cert = solver.minimize_on_dual(laplace.FiniteLaplace(measure), cone, tol=args.tol)
    except solver.ImproperModelError as exc:
        report["status"] = "improper"
        report["witness"] = _floats(exc.witness)
        _emit(report, args.json)
        return EXIT_HYPOTHESIS
    except solver.NonConvergenceError as exc:
        report["status"] = "non-convergence"
        report["message"] = str(exc)
        _emit(report, args.json)
        return EXIT_NONCONVERGENCE
    report["status"] = "ok"
    report["certificate"] = cert.to_dict()
    _emit(report, args.json)
    return EXIT_OK


def _series_rows(series, estimate):
    rows = []
    p = estimate.period
    for n in range(series.n_max + 1):
        if series.mode == counting.EXACT:
            value = series.values[n]
        else:
            lv = series.log_value(n)
            value = lv if lv is not None else None
        ln, lp = series.log_value(n), series.log_value(n - p) if n >= p else None
        ratio = float(np.exp((ln - lp) / p)) if (n >= p and ln is not None and lp is not None) else None
        rows.append((n, value, ratio, estimate.extrapolated))
    return rows


def cmd_enumerate(args):
    measure, doc = _load_measure(args.steps)
    start = tuple(int(v) for v in _parse_point(args.start))
    weights = None if "weights" not in doc or doc["weights"] is None else measure.weights
    mode = counting.EXACT if args.mode == "exact" else counting.LOG_SCALED
    try:
        series = counting.count_walks(measure.steps, start, args.n, weights=weights, mode=mode)
    except (ValueError, cones.UnsupportedConeError) as exc:
        raise InputError(str(exc))
    estimate = counting.estimate_rate(series)
    rows = _series_rows(series, estimate)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,count_or_logprob,ratio,extrapolated_rate\n")
            for n, value, ratio, extrap in rows:
                fh.write(f"{n},{'' if value is None else value},"
                         f"{'' if ratio is None else ratio},{extrap}\n")
    report = {
        "command": "enumerate",
        "config": {"steps_file": args.steps, "steps": doc["steps"],
                   "weights": None if weights is None else _floats(weights),
                   "start": list(start), "n": args.n, "mode": args.mode,
                   "csv": args.csv, "threads": args.threads, "seed": args.seed},
        "status": "ok",
        "values": [None if (v := series.log_value(n)) is None else
                   (series.values[n] if series.mode == counting.EXACT else v)
                   for n in range(series.n_max + 1)],
        "value_kind": "exact_count" if series.mode == counting.EXACT else "log_value",
        "estimate": {"raw_ratio": estimate.raw_ratio, "period": estimate.period,
                     "extrapolated": estimate.extrapolated},
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_verify(args):
    measure, doc = _load_measure(args.steps)
    cone = _parse_cone(args.cone, measure.dim)
    start = tuple(int(v) for v in _parse_point(args.start))
    mc_n = args.mc_n if args.mc_n is not None else min(args.n, 60)
    report = {
        "command": "verify",
        "config": {"steps_file": args.steps, "steps": doc["steps"],
                   "weights": _floats(measure.weights), "start": list(start),
                   "n": args.n, "mc_n": mc_n, "seed": args.seed,
                   "trials": args.trials, "cone": args.cone,
                   "threads": args.threads},
    }

    def dp_extrapolated(x, horizon):
        series = counting.count_walks(measure.steps, x, horizon, weights=measure.weights)
        return counting.estimate_rate(series).extrapolated

    try:
        cert = solver.minimize_on_dual(laplace.FiniteLaplace(measure), cone)
    except solver.ImproperModelError as exc:
        # rate limit inapplicable: decay may depend on the start; show it
        report["status"] = "inapplicable"
        report["message"] = "rate theorem inapplicable (support in a dual half-space)"
        report["witness"] = _floats(exc.witness)
        shift = np.ones(measure.dim, dtype=np.int64)
        starts = [np.array(start), np.array(start) + shift, np.array(start) + 2 * shift]
        report["per_start_rates"] = [
            {"start": [int(v) for v in x], "extrapolated": dp_extrapolated(x, args.n)}
            for x in starts
        ]
        _emit(report, args.json)
        return EXIT_HYPOTHESIS
    except solver.NonConvergenceError as exc:
        report["status"] = "non-convergence"
        report["message"] = str(exc)
        _emit(report, args.json)
        return EXIT_NONCONVERGENCE

    dp_rate = dp_extrapolated(start, args.n)
    series_mc = counting.count_walks(measure.steps, start, mc_n, weights=measure.weights)
    dp_survival = series_mc.float_value(mc_n)
    config = montecarlo.SimConfig(seed=args.seed, trials=args.trials, n=mc_n)
    mc = montecarlo.tilted_survival(measure, cert, start, cone, config)
    rate_gap = abs(dp_rate - cert.rho)
    mc_gap = abs(mc.estimate - dp_survival)
    mc_band = MC_SIGMA * mc.stderr
    report["status"] = "ok"
    report["certificate"] = cert.to_dict()
    report["dp"] = {"extrapolated_rate": dp_rate, "survival_at_mc_n": dp_survival}
    report["mc"] = {"tilted_estimate": mc.estimate, "stderr": mc.stderr}
    report["checks"] = {
        "rate_tolerance": RATE_TOL,
        "rate_gap": rate_gap,
        "rate_pass": bool(rate_gap <= RATE_TOL),
        "mc_band": mc_band,
        "mc_gap": mc_gap,
        "mc_pass": bool(mc_gap <= mc_band),
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_check(args):
    measure, doc = _load_measure(args.steps)
    cone = _parse_cone(args.cone, measure.dim)
    h2 = steps_mod.check_h2prime(measure, cone)
    report = {
        "command": "check",
        "config": {"steps_file": args.steps, "steps": doc["steps"],
                   "weights": _floats(measure.weights), "cone": args.cone,
                   "depth": args.depth, "threads": args.threads, "seed": args.seed},
        "status": "ok" if h2.proper else "improper",
        "h1": steps_mod.check_h1(measure),
        "h1_via_covariance": steps_mod.check_h1_via_covariance(measure),
        "h2prime": {"proper": h2.proper,
                    "witness": None if h2.witness is None else _floats(h2.witness)},
    }
    if measure.is_lattice():
        h3 = steps_mod.check_h3(measure.steps, args.depth)
        report["h3"] = {"ok": h3.ok,
                        "path": None if h3.path is None else [list(s) for s in h3.path],
                        "exhausted": h3.exhausted}
        fd = counting.find_delta(measure.steps, cone, n_max=args.depth)
        report["find_delta"] = {
            "found": fd.found, "delta": fd.delta, "n0": fd.n0,
            "path": None if fd.path is None else [list(s) for s in fd.path],
            "h2_witness": None if fd.h2_witness is None else _floats(fd.h2_witness),
        }
    else:
        report["h3"] = None
        report["find_delta"] = None
    _emit(report, args.json)
    return EXIT_OK if h2.proper else EXIT_HYPOTHESIS


def cmd_halfspace(args):
    if args.start is None:
        start = (args.N, args.N)
    else:
        start = tuple(int(v) for v in _parse_point(args.start))
    try:
        check = families.halfspace_verify(args.p, args.N, start, args.n)
    except ValueError as exc:
        raise InputError(str(exc))
    report = {
        "command": "halfspace",
        "config": {"p": args.p, "N": args.N, "n": args.n, "start": list(start),
                   "threads": args.threads, "seed": args.seed},
        "status": "ok",
        "closed_form": check.closed_form,
        "dp_estimate": check.dp_estimate,
        "abs_error": check.abs_error,
        "alt_start": list(check.alt_start),
        "alt_estimate": check.alt_estimate,
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_brownian(args):
    drift = np.array(_parse_point(args.drift, "drift"))
    cone = _parse_cone(args.cone, drift.shape[0])
    try:
        closed = solver.brownian_rate(drift, cone)
    except cones.UnsupportedConeError as exc:
        raise InputError(str(exc))
    cert = solver.minimize_on_dual(laplace.GaussianLaplace(drift), cone)
    report = {
        "command": "brownian",
        "config": {"drift": _floats(drift), "cone": args.cone,
                   "threads": args.threads, "seed": args.seed},
        "status": "ok",
        "closed_form": closed,
        "solver_rho": cert.rho,
        "abs_diff": abs(closed - cert.rho),
        "x_star": _floats(cert.x_star),
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_scan(args):
    measure, doc = _load_measure(args.steps)
    report = {
        "command": "scan",
        "config": {"steps_file": args.steps, "steps": doc["steps"],
                   "grid": args.grid, "threads": args.threads, "seed": args.seed},
    }
    try:
        growth = solver.growth_constant(measure.steps)
        scan = solver.hyperplane_scan(measure.steps, args.grid)
    except solver.ImproperModelError as exc:
        report["status"] = "improper"
        report["witness"] = _floats(exc.witness)
        _emit(report, args.json)
        return EXIT_HYPOTHESIS
    report["status"] = "ok"
    report["growth_constant"] = growth.k_s
    report["scan_minimum"] = scan.k_min
    report["gap"] = scan.k_min - growth.k_s
    report["argmin_direction"] = _floats(scan.direction)
    _emit(report, args.json)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="conewalks",
                     description="Cone non-exit decay rates: certificates, enumeration, simulation")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for any randomness (default 0, never entropy)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for component parallelism (default 1)")

    p = sub.add_parser("rate", help="rate certificate from dual-cone minimization")
    p.add_argument("--steps", required=True, help="JSON step file")
    p.add_argument("--cone", default="orthant")
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("enumerate", help="exact confined-walk counts and rate extrapolation")
    p.add_argument("--steps", required=True)
    p.add_argument("--start", required=True, help='lattice start, e.g. "1,1"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "log"], default="log")
    p.add_argument("--csv", default=None, help="write the series as CSV")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="solver vs exact enumeration vs tilted Monte Carlo")
    p.add_argument("--steps", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--n", type=int, required=True, help="enumeration horizon")
    p.add_argument("--mc-n", type=int, default=None, help="Monte Carlo horizon (default min(n, 60))")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--cone", default="orthant")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="hypothesis checks and the delta search")
    p.add_argument("--steps", required=True)
    p.add_argument("--cone", default="orthant")
    p.add_argument("--depth", type=int, default=None, help="search depth for H3/delta")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("halfspace", help="closed-form half-space family vs enumeration")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=1500)
    p.add_argument("--start", default=None, help='diagonal start (default "N,N")')
    common(p)
    p.set_defaults(func=cmd_halfspace)

    p = sub.add_parser("brownian", help="Gaussian rate: projection formula vs solver")
    p.add_argument("--drift", required=True, help='drift vector, e.g. "-1,-1"')
    p.add_argument("--cone", default="orthant")
    common(p)
    p.set_defaults(func=cmd_brownian)

    p = sub.add_parser("scan", help="hyperplane scan vs growth constant")
    p.add_argument("--steps", required=True)
    p.add_argument("--grid", type=int, default=721)
    common(p)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit_ as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (cones.ConeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
