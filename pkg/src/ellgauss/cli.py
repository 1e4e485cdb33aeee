"""Command-line interface.

Every command prints JSON records, one per line, on standard output; a short
human-readable summary goes to standard error unless ``--json`` is given.

Exit codes: 0 success, 1 mathematical error (singular or supersingular curve,
inapplicable method), 2 verification failure, 3 usage error.

Randomness comes from Python's ``random.Random`` (Mersenne Twister) seeded
with ``--seed``, so sweeps are reproducible.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from collections import Counter

from .counters import counting
from .curve import Curve
from .driver import CountConfig, count_points, random_curve, trace_mod
from .errors import EllGaussError, OracleMismatch

EXIT_OK, EXIT_MATH, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ell_list(text):
    try:
        ells = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None
    return ells


def build_parser():
    parser = _Parser(prog="ellgauss", description="Elliptic curve point counting over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, curve=True):
        if curve:
            p.add_argument("--p", type=int, required=True)
            p.add_argument("--a", type=int, required=True)
            p.add_argument("--b", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="suppress the summary on stderr")

    c = sub.add_parser("count", help="count points on y^2 = x^3 + ax + b")
    common(c)
    c.add_argument("--method", choices=["auto", "gauss", "classical", "baseline"], default="auto")
    c.add_argument("--ell-set", type=_ell_list, default=None)
    c.add_argument("--verify-oracle", action="store_true")
    c.add_argument("--iso", choices=["direct", "inductive"], default="direct")

    t = sub.add_parser("trace-mod", help="trace of Frobenius modulo one prime")
    common(t)
    t.add_argument("--ell", type=int, required=True)
    t.add_argument("--method", choices=["auto", "gauss", "classical", "baseline"], default="auto")
    t.add_argument("--iso", choices=["direct", "inductive"], default="direct")

    v = sub.add_parser("verify", help="randomized sweep against exhaustive counting")
    common(v, curve=False)
    v.add_argument("--pmax", type=int, default=500)
    v.add_argument("--curves", type=int, default=20)
    v.add_argument("--method", choices=["auto", "gauss", "classical", "baseline"], default="auto")

    b = sub.add_parser("bench", help="Frobenius cost in C versus a p-th power in B")
    common(b)
    b.add_argument("--ell", type=int, default=None)
    b.add_argument("--ell-set", type=_ell_list, default=None)
    return parser


def emit(record, out):
    out.write(json.dumps(record, sort_keys=True) + "\n")


def _record(command, inputs, outputs, counters, start):
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "counters": {k: int(v) for k, v in counters.items()},
        "wall_time": round(time.perf_counter() - start, 4),
    }


def _curve_inputs(args):
    return {"p": args.p, "a": args.a, "b": args.b}


def cmd_count(args, out, err):
    start = time.perf_counter()
    curve = Curve(args.p, args.a, args.b)
    config = CountConfig(method=args.method, ells=args.ell_set, seed=args.seed,
                         verify_oracle=args.verify_oracle, iso_method=args.iso)
    with counting() as ops:
        result = count_points(curve, config)
    outputs = result.as_json()
    outputs.pop("counters")
    emit(_record("count", {**_curve_inputs(args), "method": args.method}, outputs, ops, start), out)
    if not args.json:
        err.write(f"#E = {result.count} (t = {result.t})\n")
    return EXIT_OK


def cmd_trace_mod(args, out, err):
    start = time.perf_counter()
    curve = Curve(args.p, args.a, args.b)
    with counting() as ops:
        res = trace_mod(curve, args.ell, args.method, args.iso)
    inputs = {**_curve_inputs(args), "ell": args.ell, "method": args.method}
    emit(_record("trace-mod", inputs, res.as_json(), ops, start), out)
    if not args.json:
        err.write(f"t mod {args.ell} in {list(res.values)} via {res.method}\n")
    return EXIT_OK


def cmd_verify(args, out, err):
    start = time.perf_counter()
    rng = random.Random(args.seed)
    methods = Counter()
    passed = failed = 0
    for i in range(args.curves):
        curve = random_curve(rng, pmax=args.pmax)
        config = CountConfig(method=args.method, seed=args.seed + i, verify_oracle=True)
        entry = {"p": curve.p, "a": curve.a, "b": curve.b}
        try:
            result = count_points(curve, config)
            entry.update(count=result.count, t=result.t, ok=True,
                         residues=[r.as_json() for r in result.residues])
            for r in result.residues:
                methods[r.method] += 1
            passed += 1
        except (OracleMismatch, EllGaussError) as exc:
            entry.update(ok=False, error=type(exc).__name__, message=str(exc))
            failed += 1
        emit({"command": "verify", "curve": i, **entry}, out)
    if args.curves == 0 and not args.json:
        err.write("warning: empty sweep passes vacuously\n")
    summary = {"passed": passed, "failed": failed, "total": args.curves,
               "method_coverage": dict(sorted(methods.items()))}
    inputs = {"pmax": args.pmax, "curves": args.curves, "seed": args.seed, "method": args.method}
    emit(_record("verify", inputs, summary, {}, start), out)
    if not args.json:
        err.write(f"{passed}/{args.curves} pass\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_bench(args, out, err):
    from .atkin_gauss import frobenius_costs, solve_iso, build_cyclotomic
    from .ray import build_ray

    curve = Curve(args.p, args.a, args.b)
    ells = args.ell_set or ([args.ell] if args.ell else [5, 7, 11, 13])
    status = EXIT_OK
    for ell in ells:
        start = time.perf_counter()
        inputs = {**_curve_inputs(args), "ell": ell}
        ray = build_ray(curve, ell)
        if ray.kind != "atkin":
            emit(_record("bench", inputs, {"skipped": "not an Atkin prime"}, {}, start), out)
            continue
        iso = solve_iso(ray.B, build_cyclotomic(ray.A, ell, ray.c))
        costs = frobenius_costs(iso)
        costs.update(r=ray.r, n=ray.n)
        emit(_record("bench", inputs, costs, {}, start), out)
        if not args.json:
            err.write(f"ell={ell} r={ray.r}: C-Frobenius {costs['route_i_frobenius']} "
                      f"vs B-powmod {costs['route_ii_powmod']} base-field mults\n")
    return status


COMMANDS = {"count": cmd_count, "trace-mod": cmd_trace_mod, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        emit({"error": "UsageError", "message": str(exc)}, out)
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out, err)
    except OracleMismatch as exc:
        emit({"error": type(exc).__name__, "message": str(exc)}, out)
        return EXIT_VERIFY
    except (EllGaussError, ValueError) as exc:
        emit({"error": type(exc).__name__, "message": str(exc)}, out)
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_MATH


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
