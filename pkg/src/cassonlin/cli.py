"""Command line interface.

    cassonlin h2 "s1^2"
    cassonlin verify-hopf
    cassonlin curves "s1^4" --out curves/

Exit codes: 0 success, 1 bad input or failed verification, 2 closure is
not a 2-component link, 3 unresolved tangency, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .braid import artin_action, parse_braid
from .errors import BraidSyntaxError, NotTwoComponents, TangencyUnresolved, UnsupportedEpsilon
from .invariant import CassonLinResult, casson_lin_h2, verify_hopf
from .pillowcase import DEFAULT_RESOLUTION, PILLOWCASE_TOL, fmt_angle, sample_curves, write_curve_csv
from .repspace import HOPF_EPSILON, SignTuple

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_COMPONENTS = 2
EXIT_TANGENCY = 3
EXIT_IO = 4


def summary(result: CassonLinResult) -> dict:
    return {
        "braid": str(result.braid),
        "epsilon": list(result.epsilon),
        "intersections": [
            {
                "theta_delta": float(fmt_angle(d.theta_delta)),
                "theta_gamma": float(fmt_angle(d.theta_gamma)),
                "theta1": float(fmt_angle(d.point.theta1)),
                "theta2": float(fmt_angle(d.point.theta2)),
                "sign": d.sign,
            }
            for d in result.intersections
        ],
        "h2": result.h2,
        "lk": result.lk,
        "agrees": result.agrees,
    }


SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["braid", "epsilon", "intersections", "h2", "lk", "agrees"],
    "additionalProperties": False,
    "properties": {
        "braid": {"type": "string"},
        "epsilon": {"type": "array", "items": {"enum": [-1, 1]}, "minItems": 2, "maxItems": 2},
        "intersections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["theta_delta", "theta_gamma", "theta1", "theta2", "sign"],
                "additionalProperties": False,
                "properties": {
                    "theta_delta": {"type": "number"},
                    "theta_gamma": {"type": "number"},
                    "theta1": {"type": "number"},
                    "theta2": {"type": "number"},
                    "sign": {"enum": [-1, 1]},
                },
            },
        },
        "h2": {"type": "integer"},
        "lk": {"type": "integer"},
        "agrees": {"type": "boolean"},
    },
}


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _compute(args) -> CassonLinResult:
    return casson_lin_h2(parse_braid(args.braid, 2), resolution=args.scan_resolution, tol=args.tol)


def _guarded(fn, args) -> int:
    try:
        return fn(args)
    except (BraidSyntaxError, IndexError, UnsupportedEpsilon) as exc:
        return _fail(f"parse: {exc}", EXIT_INPUT)
    except NotTwoComponents as exc:
        return _fail(f"closure: {exc}", EXIT_COMPONENTS)
    except TangencyUnresolved as exc:
        return _fail(f"intersection: {exc}", EXIT_TANGENCY)


def cmd_h2(args) -> int:
    result = _compute(args)
    if args.format == "json":
        print(json.dumps(summary(result), indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theta", "theta1", "theta2", "sign"])
        for d in result.intersections:
            writer.writerow([fmt_angle(d.theta_delta), fmt_angle(d.point.theta1), fmt_angle(d.point.theta2), d.sign])
        sys.stdout.write(buf.getvalue())
    else:
        print(f"h2 = {result.h2}, lk = {result.lk}")
        print(f"{'theta':>16} {'theta1':>16} {'theta2':>16} {'sign':>5}")
        for d in result.intersections:
            print(
                f"{fmt_angle(d.theta_delta):>16} {fmt_angle(d.point.theta1):>16} "
                f"{fmt_angle(d.point.theta2):>16} {d.sign:>+5d}"
            )
        print("agrees with h2 = -lk" if result.agrees else "DISAGREES with h2 = -lk")
    if not result.complete:
        return _fail("intersection: some intersections were not transverse", EXIT_TANGENCY)
    return EXIT_OK


def cmd_verify_hopf(args) -> int:
    trace = verify_hopf()
    if args.format == "json":
        out = {
            "entries": [
                {"name": e.name, "value": e.value, "expected": e.expected, "passed": e.passed}
                for e in trace.entries
            ],
            "passed": trace.passed,
        }
        print(json.dumps(out, indent=2, default=str))
    else:
        for e in trace.entries:
            status = "PASS" if e.passed else "FAIL"
            if e.name == "det M":
                line = f"det M = {e.value}"
            elif e.name == "oriented basis":
                line = f"oriented basis = {e.value}"
            elif e.name == "h2":
                line = f"h2 = {e.value}"
            else:
                line = f"{e.name} = {e.value}  (expected {e.expected})"
            print(f"[{status}] {line}")
        print(f"runtime {trace.seconds:.3f} s")
    return EXIT_OK if trace.passed else EXIT_INPUT


def cmd_curves(args) -> int:
    b = parse_braid(args.braid, 2)
    result = _compute(args)
    eps = SignTuple(HOPF_EPSILON)
    deltas, gammas = sample_curves(eps, artin_action(b), args.scan_resolution)
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_curve_csv(deltas, out / "delta.csv")
        write_curve_csv(gammas, out / "gamma.csv")
        with open(out / "summary.json", "w") as fh:
            json.dump(summary(result), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        return _fail(f"io: {exc}", EXIT_IO)
    if args.format != "json":
        print(f"wrote {out / 'delta.csv'}, {out / 'gamma.csv'}, {out / 'summary.json'}")
    else:
        print(json.dumps(summary(result), indent=2))
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, suppress):
        # subcommands repeat the global flags so they may follow the command name
        def default(v):
            return argparse.SUPPRESS if suppress else v

        p.add_argument("--format", choices=("text", "json", "csv"), default=default("text"))
        p.add_argument("--scan-resolution", type=_positive_int, metavar="N", default=default(DEFAULT_RESOLUTION))
        p.add_argument("--tol", type=_positive_float, metavar="X", default=default(PILLOWCASE_TOL),
                       help="fixed-point residual accepted at an intersection")

    parser = argparse.ArgumentParser(prog="cassonlin", description="Casson-Lin invariant of 2-strand braid closures")
    add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("h2", help="compute h2 and the linking number")
    p.add_argument("braid")
    add_globals(p, suppress=True)
    p.set_defaults(func=cmd_h2)

    p = sub.add_parser("verify-hopf", help="replay the Hopf link sign computation")
    add_globals(p, suppress=True)
    p.set_defaults(func=cmd_verify_hopf)

    p = sub.add_parser("curves", help="write the two curves as CSV plus a JSON summary")
    p.add_argument("braid")
    p.add_argument("--out", required=True)
    add_globals(p, suppress=True)
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _guarded(args.func, args)


if __name__ == "__main__":
    sys.exit(main())
