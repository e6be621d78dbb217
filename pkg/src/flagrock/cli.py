"""Command-line front end.

Exit codes: 0 analysis completed (whatever the verdict), 2 invalid
parameters or flags, 3 failed internal-consistency check.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import ConsistencyError, FlagrockError
from .field import parse_scalar
from .report import ReportSchema, ScanReport, validate, write_atomic
from .rootsys import build_parabolic, valid_parameters
from .selftest import FAULTS, run_selftest
from .spectral import analyze

log = logging.getLogger("flagrock")

EXIT_OK, EXIT_INVALID, EXIT_CONSISTENCY = 0, 2, 3


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="flagrock",
        description="Kernel witnesses for the Dolbeault Laplacian on U(p,q)/U(p1)xU(p2,q).")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="certificate for one (p, q, p1)")
    an.add_argument("params", nargs="*", type=int, metavar="P Q P1")
    an.add_argument("--p", type=int)
    an.add_argument("--q", type=int)
    an.add_argument("--p1", type=int)
    an.add_argument("--weights", help="comma-separated positive weights, e.g. sqrt2,3/2")
    an.add_argument("--output", "-o", help="write the report here instead of stdout")
    an.add_argument("--format", choices=("text", "json"), default="text")
    an.add_argument("--no-crosscheck", action="store_true",
                    help="skip the dense truncated-basis eigenvalue check")

    sc = sub.add_parser("scan", help="verdicts for every (p, q, p1) with p + q <= max-n")
    sc.add_argument("--max-n", type=int, default=4)
    sc.add_argument("--output", "-o")
    sc.add_argument("--format", choices=("text", "json"), default="text")

    st = sub.add_parser("selftest", help="oracle-vs-closed-form invariant suite")
    st.add_argument("--max-n", type=int, default=6)
    st.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return ap


def _params(args) -> tuple[int, int, int]:
    flags = (args.p, args.q, args.p1)
    if args.params and any(f is not None for f in flags):
        raise UsageError("give P Q P1 either positionally or with --p/--q/--p1, not both")
    if args.params:
        if len(args.params) != 3:
            raise UsageError("expected exactly three positional integers P Q P1")
        return tuple(args.params)
    if any(f is None for f in flags):
        raise UsageError("missing --p, --q or --p1")
    return flags


def _weights(text: str | None):
    if text is None:
        return None
    return [parse_scalar(tok) for tok in text.split(",")]


def _emit(text: str, output: str | None) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    p, q, p1 = _params(args)
    pd = build_parabolic(p, q, p1)
    log.debug("analyzing %s", pd.key())
    t0 = time.perf_counter()
    verdict = analyze(pd, weights=_weights(args.weights), crosscheck=not args.no_crosscheck)
    report = ReportSchema.from_verdict(verdict, time.perf_counter() - t0)
    d = report.to_dict()
    validate(d)
    _emit(report.to_json() if args.format == "json" else report.render_text(), args.output)
    return EXIT_OK


def _scan_one(key):
    return ScanReport.row(analyze(build_parabolic(*key), crosscheck=False))


def scan_workers() -> int:
    env = os.environ.get("FLAGROCK_THREADS")
    if env is None:
        return os.cpu_count() or 1
    try:
        n = int(env)
    except ValueError as exc:
        raise UsageError(f"FLAGROCK_THREADS must be an integer, got {env!r}") from exc
    if n < 1:
        raise UsageError("FLAGROCK_THREADS must be >= 1")
    return n


def cmd_scan(args) -> int:
    if args.max_n < 2:
        raise UsageError("--max-n must be >= 2")
    keys = list(valid_parameters(args.max_n))
    workers = min(scan_workers(), len(keys))
    log.debug("scanning %d instances with %d workers", len(keys), workers)
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, keys))
    else:
        rows = [_scan_one(k) for k in keys]
    report = ScanReport(args.max_n, rows, timing={"seconds": round(time.perf_counter() - t0, 3)})
    validate(report.to_dict())
    _emit(report.to_json() if args.format == "json" else report.render_text(), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.max_n < 2:
        raise UsageError("--max-n must be >= 2")
    t0 = time.perf_counter()
    run_selftest(args.max_n, args.inject_fault, log=print)
    print(f"selftest passed in {time.perf_counter() - t0:.1f} s")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "scan": cmd_scan, "selftest": cmd_selftest}


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConsistencyError as exc:
        print(f"error: internal consistency check failed [{exc.invariant}]: {exc.detail}",
              file=sys.stderr)
        return EXIT_CONSISTENCY
    except (UsageError, ValueError, FlagrockError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
