"""Command-line interface: ``qslasym <command> [options]``.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 property
violation (``monotone-suite`` only).
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .bounds import bound_report, reports_to_csv
from .channels import (
    dilation_residuals,
    dilation_to_channel,
    harmonic_residual,
    incoherence_residual,
    random_energy_conserving_unitary,
    verify_ti,
)
from .config import DEFAULT
from .distinguishability import Measure
from .errors import ParseError, QSLError, ValidationError
from .evolution import orbit_scan, solve_tau, speed
from .measures import measure_report
from .states import Hamiltonian
from .suites import run_suite

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_VIOLATION = 0, 2, 3, 4


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {text!r}") from None


def _tolerances(args):
    overrides = {}
    if getattr(args, "config", None):
        obj = fileio._load(args.config)
        overrides.update(obj.get("tolerances", obj) if isinstance(obj, dict) else {})
    for item in getattr(args, "tol", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"--tol expects name=value, got {item!r}")
        try:
            overrides[key.strip()] = float(value)
        except ValueError:
            raise ParseError(f"bad tolerance value in {item!r}") from None
    try:
        tol = DEFAULT.updated(**overrides)
    except (KeyError, TypeError) as exc:
        raise ParseError(str(exc)) from None
    for k, v in tol.as_dict().items():
        if not v > 0:
            raise ValidationError(f"tolerance {k} must be positive")
    return tol


def _emit(args, text: str):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _flat_csv(rows) -> str:
    buf = io.StringIO()
    keys = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_cell(r[k]) for k in keys])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else v


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flatten(v, f"{prefix}{k}."))
        else:
            out[prefix + k] = v
    return out


def cmd_measures(args):
    tol = _tolerances(args)
    prob = fileio.load_problem(args.input, tol)
    orders = _float_list(args.orders) if args.orders else [0.5]
    rep = measure_report(prob.state, prob.hamiltonian, orders).as_dict()
    rep["tolerances"] = tol.as_dict()
    if args.format == "csv":
        _emit(args, _flat_csv([_flatten(rep)]))
    else:
        _emit(args, fileio.dumps(rep))
    return EXIT_OK


def cmd_tau(args):
    tol = _tolerances(args)
    prob = fileio.load_problem(args.input, tol)
    measure = Measure.parse(args.measure)
    res = solve_tau(prob.state, prob.hamiltonian, measure, args.epsilon,
                    horizon=args.horizon, t_tol=args.t_tol, tol=tol)
    out = res.as_dict()
    out["speed"] = speed(res)
    out["horizon_limited"] = not res.reached
    out["tolerances"] = tol.as_dict()
    if args.format == "csv":
        _emit(args, _flat_csv([_flatten(out)]))
    else:
        _emit(args, fileio.dumps(out))
    return EXIT_OK


def cmd_bounds(args):
    tol = _tolerances(args)
    prob = fileio.load_problem(args.input, tol)
    rep = bound_report(prob.state, prob.hamiltonian, args.epsilon, args.epsilon_renyi,
                       horizon=args.horizon, t_tol=args.t_tol, tol=tol)
    if args.format == "csv":
        _emit(args, reports_to_csv([rep], [prob.name or "0"]))
    else:
        _emit(args, fileio.dumps(rep.as_dict()))
    return EXIT_OK


def cmd_orbit(args):
    tol = _tolerances(args)
    prob = fileio.load_problem(args.input, tol)
    if args.steps < 2:
        raise ValidationError("--steps must be at least 2")
    if not args.tmax > 0:
        raise ValidationError("--tmax must be positive")
    times = np.linspace(0.0, args.tmax, args.steps)
    sample = orbit_scan(prob.state, prob.hamiltonian, Measure.parse(args.measure), times)
    _emit(args, sample.to_csv())
    return EXIT_OK


def cmd_channel_random(args):
    tol = _tolerances(args)
    dims = _int_list(args.dims)
    if len(dims) not in (1, 2) or min(dims) < 2:
        raise ValidationError("--dims takes 'd' or 'd_sys,d_env' with every entry >= 2")
    d_sys, d_env = dims[0], dims[-1]
    if args.hamiltonian:
        h_sys = fileio.load_hamiltonian(args.hamiltonian, tol)
        if h_sys.dim != d_sys:
            raise ValidationError(f"Hamiltonian dim {h_sys.dim} does not match --dims {d_sys}")
    else:
        h_sys = Hamiltonian.diagonal(np.arange(d_sys, dtype=float), tol)
    h_env = Hamiltonian.diagonal(np.resize(h_sys.eigenvalues, d_env), tol)
    dil = random_energy_conserving_unitary(h_sys, h_env, args.seed, args.env_index, tol)
    ch = dilation_to_channel(dil, h_sys, tol)
    unit, cons = dilation_residuals(dil, h_sys)
    prefix = Path(args.out)
    files = {"channel": f"{prefix}_channel.json", "dilation": f"{prefix}_dilation.json"}
    Path(files["channel"]).write_text(fileio.dumps(fileio.channel_to_json(ch)))
    Path(files["dilation"]).write_text(fileio.dumps(fileio.dilation_to_json(dil)))
    meta = {
        "files": files,
        "seed": args.seed,
        "dims": [d_sys, d_env],
        "block_sizes": dil.block_sizes,
        "n_kraus": len(ch.kraus),
        "completeness_residual": ch.completeness_residual,
        "harmonic_residual": harmonic_residual(ch, h_sys),
        "unitarity_residual": unit,
        "energy_conservation_residual": cons,
    }
    sys.stdout.write(fileio.dumps(meta))
    return EXIT_OK


def cmd_channel_verify(args):
    tol = _tolerances(args)
    ch = fileio.load_channel(args.channel)
    h = fileio.load_hamiltonian(args.hamiltonian, tol)
    h.check_dim(ch.dim)

    def check(value, limit):
        return {"residual": value, "threshold": limit, "status": "PASS" if value <= limit else "FAIL"}

    report = {
        "completeness": check(ch.completeness_residual, tol.complete),
        "covariance": check(verify_ti(ch, h), tol.harmonic),
        "harmonic_kraus": (check(harmonic_residual(ch, h), tol.harmonic) if ch.omega is not None
                           else {"residual": None, "threshold": tol.harmonic, "status": "N/A"}),
        "incoherence": check(incoherence_residual(ch, h), tol.incoherent_kraus),
    }
    if args.format == "csv":
        rows = [{"check": k, **v} for k, v in report.items()]
        _emit(args, _flat_csv(rows))
    else:
        _emit(args, fileio.dumps(report))
    return EXIT_OK


def cmd_monotone_suite(args):
    if args.trials < 1:
        raise ValidationError("--trials must be at least 1")
    dims = _int_list(args.dims) if args.dims else [2, 3, 4]
    if not dims or min(dims) < 2:
        raise ValidationError("--dims entries must be >= 2")
    results = run_suite(args.seed, args.trials, tuple(dims), args.inject_non_ti)
    rows = [r.row() for r in results]
    if args.format == "json":
        _emit(args, fileio.dumps(rows))
    else:
        _emit(args, _flat_csv(rows))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qslasym", description="Speed limits, asymmetry measures and TI channels.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--config", help="JSON file of tolerance overrides")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override one tolerance")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("measures", parents=[common], help="asymmetry measures of a state")
    s.add_argument("--input", required=True)
    s.add_argument("--orders", help="Dyson skew orders, comma-separated (default 0.5)")
    s.set_defaults(func=cmd_measures)

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--input", required=True)
    solver.add_argument("--horizon", type=float)
    solver.add_argument("--t-tol", dest="t_tol", type=float)

    s = sub.add_parser("tau", parents=[common, solver], help="minimum time to reach distinguishability epsilon")
    s.add_argument("--measure", default="trace", help="trace | renyi[:s] | infidelity | perp")
    s.add_argument("--epsilon", type=float, required=True)
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("bounds", parents=[common, solver], help="speed limits against solved times")
    s.add_argument("--epsilon", type=float, default=1.0, help="trace-distance epsilon")
    s.add_argument("--epsilon-renyi", dest="epsilon_renyi", type=float, default=1.0)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("orbit", parents=[common], help="CSV of D(rho, rho(t)) on a time grid")
    s.add_argument("--input", required=True)
    s.add_argument("--measure", default="trace")
    s.add_argument("--tmax", type=float, default=2 * math.pi)
    s.add_argument("--steps", type=int, default=201)
    s.set_defaults(func=cmd_orbit)

    ch = sub.add_parser("channel", help="TI channel tools")
    chsub = ch.add_subparsers(dest="channel_command", required=True)
    s = chsub.add_parser("random", parents=[common], help="sample an energy-conserving dilation")
    s.add_argument("--dims", required=True, help="'d' or 'd_sys,d_env'")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--hamiltonian", help="system Hamiltonian JSON (default diag(0..d-1))")
    s.add_argument("--env-index", dest="env_index", type=int, default=0)
    s.set_defaults(func=cmd_channel_random)
    s = chsub.add_parser("verify", parents=[common], help="covariance / harmonic / incoherence checks")
    s.add_argument("--channel", required=True)
    s.add_argument("--hamiltonian", required=True)
    s.set_defaults(func=cmd_channel_verify)

    s = sub.add_parser("monotone-suite", parents=[common], help="randomised property checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--dims", help="comma-separated dimensions (default 2,3,4)")
    s.add_argument("--inject-non-ti", dest="inject_non_ti", action="store_true",
                   help="use non-TI level permutations to demonstrate detection")
    s.set_defaults(func=cmd_monotone_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "channel" and args.channel_command == "random" and not args.out:
        parser.error("channel random requires --out PREFIX")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, QSLError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
