"""Command-line interface.

Commands
--------
measure   evaluate sharpness / unsharpness / bias measures of an operator file
spectrum  print the spectral summary of an operator file
coexist   decide coexistence of a qubit pair file
scan      sweep the coexistence criterion over a parameter grid
verify    run a verification suite

Exit codes: 0 success / coexistent / all checks pass, 1 not coexistent /
a check failed, 2 invalid input, 3 marginal.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import io as sio
from .effect_core import EPS_EIG, EffectError, dispersion, validate_effect
from .measures import CATALOGUE, MeasureError, evaluate, get_measure
from .oracle import DEFAULT_RESOLUTION, DEFAULT_ROUNDS, joint_feasible_bruteforce
from .qubit import MARGINAL_BAND, Status, are_coexistent
from .scan import SCAN_HEADER, locate_flips, parse_range, scan
from .suites import DEFAULT_DIMS, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MARGINAL = 0, 1, 2, 3
MEASURE_HEADER = ("measure", "dim", "value")
SPECTRUM_HEADER = ("quantity", "value")
VERIFY_HEADER = ("suite", "check", "result", "detail")


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 0.0:
        raise argparse.ArgumentTypeError(f"tolerance must be >= 0, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # the flags are accepted before and after the command name; on the
    # subparsers the defaults are suppressed so they do not clobber the
    # values parsed at top level
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=_nonneg_float, default=d(None),
                        help=f"effect validation tolerance (default {EPS_EIG:g})")
    parser.add_argument("--seed", type=_seed, default=d(0), help="RNG seed (default 0)")
    parser.add_argument("--samples", type=_positive_int, default=d(None),
                        help="sample count for verify (default 10000)")
    parser.add_argument("--format", choices=("csv", "json"), default=d(None),
                        help="output format (default: json for coexist, csv otherwise)")
    parser.add_argument("--oracle", action="store_true", default=d(False),
                        help="coexist: append the brute-force feasibility result")
    parser.add_argument("--out", type=Path, default=d(None), help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sharpbias", description=__doc__.split("\n\n")[0])
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    m = sub.add_parser("measure", parents=[common], help="evaluate measures of an operator")
    m.add_argument("operator", type=Path, help="operator JSON file")
    m.add_argument("--measures", default=None,
                   help="comma-separated names (default: every measure defined at the operator's dimension)")

    s = sub.add_parser("spectrum", parents=[common], help="spectral summary of an operator")
    s.add_argument("operator", type=Path)

    c = sub.add_parser("coexist", parents=[common], help="coexistence verdict for a qubit pair")
    c.add_argument("pair", type=Path, help='pair JSON file {"A": {"a0", "a"}, "B": {...}}')
    c.add_argument("--band", type=_nonneg_float, default=MARGINAL_BAND, help="marginal band on lhs")
    c.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    c.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)

    g = sub.add_parser("scan", parents=[common], help="sweep the criterion over a grid")
    g.add_argument("--a0", default="0.5", help="value or start:stop:step (stop inclusive)")
    g.add_argument("--b0", default="0.5")
    g.add_argument("--ra", default="0:0.5:0.01")
    g.add_argument("--rb", default="ra", help='range, or "ra" to tie |b| to |a|')
    g.add_argument("--angle", default="90", help="angle between the Bloch vectors in degrees")
    g.add_argument("--band", type=_nonneg_float, default=MARGINAL_BAND)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", help=f"one of: {', '.join(SUITES)}, all")
    v.add_argument("--dims", default=",".join(map(str, DEFAULT_DIMS)),
                   help="comma-separated dimensions for axioms/identities")
    return p


# -- commands --------------------------------------------------------------------

def _load_effect(path: Path, tol):
    try:
        H = sio.load_operator(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return validate_effect(H, EPS_EIG if tol is None else tol)


def cmd_measure(args) -> tuple[str, int]:
    if args.measures is not None:
        names = [n.strip() for n in args.measures.split(",") if n.strip()]
        if not names:
            raise UsageError("empty measure list")
        for n in names:
            get_measure(n)  # reject unknown names before touching the file
    A = _load_effect(args.operator, args.tol)
    if args.measures is None:
        names = [n for n, spec in CATALOGUE.items() if A.dim == 2 or not spec.qubit_only]
    reports = [evaluate(n, A) for n in names]
    if args.format == "json":
        return sio.dumps({"schema": sio.SCHEMA,
                          "measures": [{"measure": r.name, "dim": r.dim, "value": r.value} for r in reports]}), EXIT_OK
    return sio.csv_text(MEASURE_HEADER, [(r.name, r.dim, r.value) for r in reports]), EXIT_OK


def cmd_spectrum(args) -> tuple[str, int]:
    A = _load_effect(args.operator, args.tol)
    s = A.summary
    quantities = {"dim": A.dim, "m": s.m, "M": s.M, "width": s.width, "midpoint": s.midpoint,
                  "norm": A.norm, "complement_norm": A.complement_norm, "dispersion": dispersion(A)}
    eig = [float(x) for x in A.eigenvalues]
    if args.format == "json":
        return sio.dumps({"schema": sio.SCHEMA, **quantities, "eigenvalues": eig}), EXIT_OK
    rows = list(quantities.items()) + [(f"eigenvalue_{i}", x) for i, x in enumerate(eig)]
    return sio.csv_text(SPECTRUM_HEADER, rows), EXIT_OK


def cmd_coexist(args) -> tuple[str, int]:
    try:
        A, B = sio.load_pair(args.pair)
    except OSError as exc:
        raise UsageError(f"cannot read {args.pair}: {exc.strerror}") from exc
    verdict = are_coexistent(A, B, band=args.band)
    code = {Status.COEXISTENT: EXIT_OK, Status.NOT_COEXISTENT: EXIT_FAIL,
            Status.MARGINAL: EXIT_MARGINAL}[verdict.status]
    result = None
    if args.oracle:
        result = joint_feasible_bruteforce(A, B, args.resolution, args.rounds)
    if args.format == "csv":
        header = ["status", "lhs"] + (["oracle_feasible", "oracle_margin"] if result else [])
        row = [verdict.status.value, verdict.lhs] + ([str(result.feasible).lower(), result.margin] if result else [])
        return sio.csv_text(header, [row]), code
    out = {"schema": sio.SCHEMA, **verdict.to_dict()}
    if result is not None:
        out["oracle"] = result.to_dict()
    return sio.dumps(out), code


def cmd_scan(args) -> tuple[str, int]:
    tie = args.rb.strip() == "ra"
    rows = scan(parse_range(args.a0), parse_range(args.b0), parse_range(args.ra),
                (None,) if tie else parse_range(args.rb), parse_range(args.angle),
                tie_radii=tie, band=args.band)
    if args.format == "json":
        flips = [{"params": f.params, "lhs": f.lhs, "from": f.before.status, "to": f.after.status}
                 for f in locate_flips(rows)]
        return sio.dumps({"schema": sio.SCHEMA, "columns": list(SCAN_HEADER),
                          "rows": [list(r.as_tuple()) for r in rows], "flips": flips}), EXIT_OK
    return sio.csv_text(SCAN_HEADER, [r.as_tuple() for r in rows]), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}, all")
    try:
        dims = tuple(int(d) for d in args.dims.split(","))
    except ValueError:
        raise UsageError(f"bad --dims {args.dims!r}") from None
    if any(d < 1 for d in dims):
        raise UsageError("dimensions must be positive")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    samples = 10_000 if args.samples is None else args.samples
    results = []
    for name in names:
        t0 = time.perf_counter()
        checks = run_suite(name, samples=samples, seed=args.seed, dims=dims)
        # timings go to stderr so stdout stays byte-identical between runs
        print(f"[{name}] {len(checks)} checks in {time.perf_counter() - t0:.1f} s", file=sys.stderr)
        results += [(name, c) for c in checks]
    code = EXIT_OK if all(c.passed for _, c in results) else EXIT_FAIL
    if args.format == "json":
        items = []
        for name, c in results:
            item = {"suite": name, "check": c.name, "passed": c.passed, "detail": c.detail}
            if "verdict" in c.data:
                item["verdict"] = c.data["verdict"].to_dict()
            items.append(item)
        return sio.dumps({"schema": sio.SCHEMA, "seed": args.seed, "samples": samples,
                          "passed": code == EXIT_OK, "checks": items}), code
    rows = [(name, c.name, "pass" if c.passed else "fail", c.detail) for name, c in results]
    return sio.csv_text(VERIFY_HEADER, rows), code


COMMANDS = {"measure": cmd_measure, "spectrum": cmd_spectrum, "coexist": cmd_coexist,
            "scan": cmd_scan, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage already; keep --help at 0
        return int(exc.code or 0)
    if args.format is None:
        args.format = "json" if args.command == "coexist" else "csv"
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, EffectError, MeasureError, ValueError) as exc:
        print(f"sharpbias {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not text.endswith("\n"):
        text += "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
