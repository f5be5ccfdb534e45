"""Command-line entry point.

Subcommands: approximate, compare, sweep, volume, decompose, selftest.
Output is JSON (numbers at 17 significant digits) or CSV for sweeps.

Exit codes: 0 ok, 2 bad input (invalid state, oversized sweep, argument
errors), 3 capability error (a set/option combination that has no solver).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from enum import Enum

import numpy as np

from .bloch import BlochVector, validate
from .comparison import compare
from .cr_geometry import EXACT_VOLUME, decompose_b_alpha, membership_predicate, relative_volume
from .errors import InvalidState, NotInRegion, PureStateUnsupported
from .fidelity_solver import kkt_residual, solve
from .oracle import OracleConfig, oracle_solve
from .selftest import run_selftest
from .sets import WeightVector, parse_set_id
from .trace_solver import solve_trace

EXIT_OK, EXIT_INPUT, EXIT_CAPABILITY = 0, 2, 3
MAX_SWEEP_POINTS = 10_000_000
SWEEP_QUANTITIES = ("region", "distance", "cr-membership")


class CapabilityError(Exception):
    pass


# ------------------------------------------------------------ serialization

def _num(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, Enum):
        return json.dumps(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, BlochVector):
        return to_json(list(obj.as_tuple()))
    if isinstance(obj, WeightVector):
        return to_json(list(obj.values))
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(record, out=None):
    (out or sys.stdout).write(to_json(record) + "\n")


# ----------------------------------------------------------------- commands

def _state(args) -> BlochVector:
    return validate(args.rx, args.ry, args.rz)


def cmd_approximate(args) -> int:
    r = _state(args)
    key = args.set.strip().lower()
    if key == "b-alpha":
        raise CapabilityError("set b-alpha needs an angle: use b-alpha:<radians>")
    aset = parse_set_id(args.set)
    cfg = OracleConfig(grid_step=args.grid_step, polish_iters=args.polish_iters)
    record = {"target": r, "set": aset.set_id, "metric": args.metric}
    if aset.kind == "b3":
        res = solve(r) if args.metric == "fidelity" else solve_trace(r)
    else:
        print(f"notice: no closed form for {aset.set_id}; using the oracle",
              file=sys.stderr)
        res = oracle_solve(r, aset, args.metric, cfg)
    record.update({
        "region": res.label,
        "distance": res.distance,
        "weights": res.weights,
        "optimal_bloch": res.optimal_bloch,
        "provenance": res.provenance,
    })
    if aset.kind == "b3" and args.metric == "fidelity":
        try:
            k = kkt_residual(r, res)
            record["kkt_residuals"] = {
                "stationarity": k.stationarity_residual,
                "complementarity": k.complementarity_residual,
                "feasibility": k.feasibility_residual,
            }
        except PureStateUnsupported:
            record["kkt_residuals"] = None
    if args.oracle_check:
        record["oracle_distance"] = oracle_solve(r, aset, args.metric, cfg).distance
    if res.notes:
        record["notes"] = list(res.notes)
    _emit(record)
    return EXIT_OK


def cmd_compare(args) -> int:
    rep = compare(_state(args))
    w = rep.witness
    _emit({
        "target": _state(args),
        "g_fidelity": rep.g_fidelity,
        "g_trace": rep.g_trace,
        "regime": rep.regime,
        "claim_holds": rep.claim_holds,
        "witness": {
            "h_fidelity": w.h_fidelity, "h_trace": w.h_trace, "lambda": w.lam,
            "r_sum": w.r_sum, "norm_sq": w.norm_sq,
            "fidelity_region": w.fidelity_label, "trace_region": w.trace_label,
            "fidelity_bloch": w.fidelity_bloch, "trace_bloch": w.trace_bloch,
            "pair_term": w.pair_term, "appd_quantity": w.appd_quantity,
        },
    })
    return EXIT_OK


def _sweep_axes(args):
    n = args.resolution
    if n < 2:
        raise InvalidState("resolution must be >= 2")
    if n ** 3 > MAX_SWEEP_POINTS:
        raise InvalidState(f"sweep of {n}^3 points exceeds {MAX_SWEEP_POINTS}")
    axes = []
    for name in ("x", "y", "z"):
        lo, hi = getattr(args, f"{name}_range")
        if not -1.0 <= lo <= hi <= 1.0:
            raise InvalidState(f"{name} range must lie within [-1, 1]")
        axes.append(np.linspace(lo, hi, n) if lo < hi else np.full(1, lo))
    return axes


def _sweep_values(args, pts, valid):
    emit = args.emit
    fam = args.set.strip().lower()
    if emit == "cr-membership":
        pred = membership_predicate(fam)
        return [bool(m) for m in pred(pts[:, 0], pts[:, 1], pts[:, 2])]
    if fam != "b3":
        raise CapabilityError(f"--emit {emit} has closed forms for b3 only")
    fn = solve if args.metric == "fidelity" else solve_trace
    out = []
    for p, ok in zip(pts, valid):
        if not ok:
            out.append(None)
            continue
        res = fn(validate(*p))
        out.append(res.label if emit == "region" else res.distance)
    return out


def cmd_sweep(args) -> int:
    xs, ys, zs = _sweep_axes(args)
    grid = np.stack(np.meshgrid(xs, ys, zs, indexing="ij"), axis=-1).reshape(-1, 3)
    # valid means a physical state; the tiny slack admits rounded pure states
    valid = np.einsum("ij,ij->i", grid, grid) <= 1.0 + 2e-12
    values = _sweep_values(args, grid, valid)
    values = [v if ok else None for v, ok in zip(values, valid)]
    quantity = args.emit.replace("-", "_")
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        if args.format == "json":
            for p, ok, v in zip(grid, valid, values):
                _emit({"x": p[0], "y": p[1], "z": p[2], "valid": bool(ok), quantity: v}, out)
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["x", "y", "z", "valid", quantity])
            for p, ok, v in zip(grid, valid, values):
                if isinstance(v, bool):
                    cell = int(v)
                elif isinstance(v, float):
                    cell = _num(v)
                else:
                    cell = "" if v is None else v
                w.writerow([_num(p[0]), _num(p[1]), _num(p[2]), int(ok), cell])
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def cmd_volume(args) -> int:
    fam = args.set.strip().lower()
    key = "b-alpha" if fam.startswith("b-alpha") else parse_set_id(fam).kind
    value, err = relative_volume(key, args.method, args.samples, args.seed)
    record = {"set": key, "method": args.method, "value": value, "stderr": err,
              "exact": EXACT_VOLUME[key]}
    if args.method == "montecarlo":
        record.update({"samples": args.samples, "seed": args.seed})
    _emit(record)
    return EXIT_OK


def cmd_decompose(args) -> int:
    d = decompose_b_alpha(_state(args))
    _emit({"target": _state(args), "alpha": d.alpha, "p4": d.p4, "p5": d.p5,
           "p6": d.p6, "reconstruction": d.reconstruct()})
    return EXIT_OK


def cmd_selftest(args) -> int:
    results, report = run_selftest(args.samples, args.seed)
    sys.stdout.write(report)
    return EXIT_OK if all(r.passed for r in results) else 1


# ------------------------------------------------------------------- parser

def _add_state(p):
    for name in ("rx", "ry", "rz"):
        p.add_argument(name, type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fidapprox",
        description="Optimal convex approximation of qubit states by mixtures of pure states.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approximate", help="optimal mixture for one target")
    _add_state(p)
    p.add_argument("--set", default="b3", help="b3, b3-alpha0 or b-alpha:<radians>")
    p.add_argument("--metric", choices=("fidelity", "trace"), default="fidelity")
    p.add_argument("--oracle-check", action="store_true",
                   help="also report the brute-force oracle distance")
    p.add_argument("--grid-step", type=float, default=OracleConfig.grid_step)
    p.add_argument("--polish-iters", type=int, default=OracleConfig.polish_iters)
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("compare", help="eigenvalue gaps of both optimal states")
    _add_state(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="evaluate a quantity on a 3-D grid")
    p.add_argument("--resolution", type=int, default=21, help="points per axis")
    for name in ("x", "y", "z"):
        p.add_argument(f"--{name}-range", type=float, nargs=2, default=(-1.0, 1.0),
                       metavar=("LO", "HI"))
    p.add_argument("--emit", choices=SWEEP_QUANTITIES, default="region")
    p.add_argument("--set", default="b3")
    p.add_argument("--metric", choices=("fidelity", "trace"), default="fidelity")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("volume", help="relative CR volume")
    p.add_argument("--set", default="b3", help="b3, b3-alpha0 or b-alpha")
    p.add_argument("--method", choices=("exact", "montecarlo"), default="exact")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("decompose", help="B-alpha angle and weights for a CR target")
    _add_state(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("selftest", help="run the seeded verification suites")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (InvalidState, NotInRegion, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
