"""Homogeneous geodesic vectors of left-invariant metrics on Lie groups.

Exit codes: 0 zero found, 1 nonexistence certified, 2 inconclusive, 3 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from homgeo import e11
from homgeo.catalog import builtin_names, load_entry
from homgeo.config import MODES, SolverConfig
from homgeo.connection import koszul_coefficients
from homgeo.algebra import pseudo_orthonormalize, signature, validate
from homgeo.errors import HomGeoError
from homgeo.pipeline import connection_table, run_pipeline
from homgeo.report import EXIT_ERROR, FORMATS, emit_report

SUBCOMMAND_MODE = {"find-null": "null-only", "find-all": "all", "certify": "certify"}


def _config(args, mode: str) -> SolverConfig:
    return SolverConfig(grid=args.grid, tol_zero=args.tol, mode=mode)


def _print(obj, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for key, value in obj.items():
            print(f"{key}: {value}")


def cmd_validate(args) -> int:
    entry = load_entry(args.source)
    rep = validate(entry.algebra)
    _print(
        {
            "entry": entry.name,
            "passed": rep.passed,
            "antisymmetry_defect": rep.antisymmetry_defect,
            "jacobi_defect": rep.jacobi_defect,
            "signature": list(signature(entry.metric)),
        },
        args.format,
    )
    return 0 if rep.passed else EXIT_ERROR


def cmd_connection(args) -> int:
    entry = load_entry(args.source)
    sig = signature(entry.metric)
    frame = pseudo_orthonormalize(entry.metric, lorentzian=sig[1] == 1)
    table = connection_table(koszul_coefficients(entry.algebra, frame))
    if args.format == "json":
        table["signature"] = list(frame.signature)
        print(json.dumps(table, indent=2, sort_keys=True))
    else:
        print(f"signature: {frame.signature}")
        for item in table["nonzero"]:
            print(f"gamma[{item['i']}][{item['j']}][{item['k']}] = {item['value']:.12g}")
        print(f"torsion defect {table['torsion_defect']:.3g}, compatibility defect {table['compatibility_defect']:.3g}")
    return 0


def cmd_pipeline(args) -> int:
    mode = SUBCOMMAND_MODE.get(args.command) or args.mode
    entry = load_entry(args.source)
    report = run_pipeline(entry, _config(args, mode))
    sys.stdout.write(emit_report(report, args.format))
    return report.exit_code


def cmd_verify_e11(args) -> int:
    suite = e11.run_suite(steps=args.steps)
    ok = all(v["passed"] for v in suite["frame_vectors"].values()) and not suite["null_e1_plus_e3"]["passed_any"]
    suite["passed"] = ok
    if args.format == "json":
        print(json.dumps(suite, indent=2, sort_keys=True))
    else:
        print(f"Christoffel finite-difference deviation: {suite['christoffel_fd_deviation']:.3g}")
        for name, item in suite["frame_vectors"].items():
            print(f"{name}: deviation {item['deviation']:.3g} -> {'pass' if item['passed'] else 'FAIL'}")
        nul = suite["null_e1_plus_e3"]
        print(f"E1+E3: min deviation {nul['min_deviation']:.3g} over {nul['count']} values of k (expected to fail)")
        print(f"speed drift {suite['speed_drift_max']:.3g}, orthogonality {suite['orthogonality_max']:.3g}")
        print("pass" if ok else "FAIL")
    return 0 if ok else EXIT_ERROR


def cmd_list(args) -> int:
    for name in builtin_names():
        print(f"builtin:{name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homgeo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--grid", type=int, default=None, help="grid resolution (circle angles or samples per angle)")
    common.add_argument("--tol", type=float, default=1e-9, help="zero tolerance")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (
        ("validate", cmd_validate, "check antisymmetry and the Jacobi identity"),
        ("connection", cmd_connection, "print the connection coefficients in a pseudo-orthonormal frame"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source", help="entry file or builtin:NAME")
        p.set_defaults(func=func)

    for name, helptext in (
        ("find-null", "null geodesic vectors via the tangent field on the sphere of null directions"),
        ("find-all", "all geodesic vectors"),
        ("certify", "certify existence or nonexistence of null geodesic vectors"),
        ("report", "full pipeline with an explicit --mode"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source", help="entry file or builtin:NAME")
        if name == "report":
            p.add_argument("--mode", choices=MODES, default="verify")
        p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify-e11", parents=[common], help="coordinate-level checks on E(1,1)")
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_verify_e11)

    p = sub.add_parser("list", parents=[common], help="list built-in entries")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except HomGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR + 1


if __name__ == "__main__":
    sys.exit(main())
