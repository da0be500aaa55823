"""Command-line front end.

Subcommands::

    expand       dominant balance branches and the ratio expansion
    analyze      asymptotic r-log-convexity report
    certify      search for an explicit-N certificate
    verify-cert  independently re-check a certificate file
    scan         exact L^i scan of the first terms

Exit codes: 0 success, 1 verification failed / certificate rejected,
2 unsupported input, 3 parse error, 4 search exhausted.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import catalog
from .asymptotics import dominant_branch, leading_balance, ratio_expansion, ratio_to_s
from .certifier import Certificate, CertifyConfig, certify, check_certificate
from .convexity import Direction, asymptotic_r, describe_tower, s_tower
from .errors import ParseError, RLogConvexError, SearchExhausted, UnsupportedInput
from .puiseux import render
from .recurrence import (Recurrence, SequenceValues, evaluate_terms, first_r_log_convex_index,
                         load_recurrence_file, violations)

EXIT_OK, EXIT_FAILED, EXIT_UNSUPPORTED, EXIT_PARSE, EXIT_EXHAUSTED = 0, 1, 2, 3, 4


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, UnsupportedInput):
        return EXIT_UNSUPPORTED
    if isinstance(exc, SearchExhausted):
        return EXIT_EXHAUSTED
    return EXIT_FAILED


def _load(args, name: str | None) -> tuple[str, Recurrence, SequenceValues | None]:
    if name is not None:
        try:
            e = catalog.get(name)
        except KeyError as exc:
            raise ParseError(exc.args[0]) from None
        return name, e.recurrence, e.initial
    try:
        rec, inits = load_recurrence_file(args.rec)
    except OSError as exc:
        raise ParseError(f"cannot read {args.rec}: {exc.strerror}") from None
    return os.path.basename(args.rec), rec, inits


def _need_inits(inits, what: str) -> SequenceValues:
    if inits is None:
        raise ParseError(f"{what} needs initial values in the recurrence file")
    return inits


def _dec(x: Fraction, digits: int | None) -> str:
    return f"{x}" + (f" [~{float(x):.{digits}g}]" if digits else "")


# -- subcommands ---------------------------------------------------------------------

def cmd_expand(args, name) -> tuple[int, str]:
    label, rec, _ = _load(args, name)
    branches = leading_balance(rec)
    lines = [f"{label}: {rec}", "branches (theta, C):"]
    lines += [f"  {b}" for b in branches]
    dom = dominant_branch(branches)
    rexp = ratio_expansion(rec, dom, K=args.K, rho_max=args.rho_max)
    lines.append(f"dominant: {dom}")
    lines.append(f"rho = {rexp.rho}")
    lines.append(f"a(n+1)/a(n) = {render(rexp.full_series(), args.decimal)}")
    return EXIT_OK, "\n".join(lines)


def cmd_analyze(args, name) -> tuple[int, str]:
    label, rec, _ = _load(args, name)
    rexp = ratio_expansion(rec, K=args.K, rho_max=args.rho_max)
    s = ratio_to_s(rexp)
    report = asymptotic_r(s, extendable=True)
    lines = [f"{label}: a(n+1)/a(n) = {render(rexp.full_series(), args.decimal)}",
             f"s_n = {render(s, args.decimal)}", report.describe(args.decimal)]
    if args.r and report.direction is Direction.LOG_CONVEX:
        lines.append(describe_tower(s_tower(s, args.r)))
    return EXIT_OK, "\n".join(lines)


def cmd_certify(args, name) -> tuple[int, str]:
    label, rec, inits = _load(args, name)
    inits = _need_inits(inits, "certify")
    config = CertifyConfig(K=args.K, k_max=args.k_max, n_cap=args.n_cap, rho_max=args.rho_max)
    cert = certify(rec, inits, args.r, config)
    text = cert.dumps()
    out = args.output
    if out and name is not None and args.multi:
        os.makedirs(out, exist_ok=True)
        out = os.path.join(out, f"{name}.cert")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        return EXIT_OK, f"{label}: certificate written to {out}\n{cert.describe()}"
    return EXIT_OK, text


def cmd_verify(args, name) -> tuple[int, str]:
    label, rec, inits = _load(args, name)
    inits = _need_inits(inits, "verify-cert")
    path = args.cert
    if name is not None and args.multi:
        path = os.path.join(path, f"{name}.cert")
    try:
        with open(path) as fh:
            cert = Certificate.from_json(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    result = check_certificate(rec, inits, cert, n_cap=args.n_cap)
    msg = f"{label}: {result}"
    if result:
        msg += f" ({{a_n}}_{{n >= {cert.N}}} is {cert.r}-log-convex)"
    return (EXIT_OK if result else EXIT_FAILED), msg


def cmd_scan(args, name) -> tuple[int, str]:
    label, rec, inits = _load(args, name)
    inits = _need_inits(inits, "scan")
    values = evaluate_terms(rec, inits, args.upto)
    N = first_r_log_convex_index(values, args.r)
    lines = [f"{label}: first index from which L^1..L^{args.r} are nonnegative "
             f"(n <= {args.upto}): {N}"]
    bad = violations(values, args.r)
    if bad:
        lines.append("violations (level, n, value):")
        for level, n, x in bad[: args.max_rows]:
            lines.append(f"  {level}  {n}  {_dec(x, args.decimal)}")
        if len(bad) > args.max_rows:
            lines.append(f"  ... {len(bad) - args.max_rows} more")
    else:
        lines.append("no violations")
    return EXIT_OK, "\n".join(lines)


COMMANDS = {"expand": cmd_expand, "analyze": cmd_analyze, "certify": cmd_certify,
            "verify-cert": cmd_verify, "scan": cmd_scan}


def _run_one(command: str, args, name) -> tuple[int, str]:
    try:
        return COMMANDS[command](args, name)
    except RLogConvexError as exc:
        return _exit_code(exc), f"error: {type(exc).__name__}: {exc}"


# -- argument parsing ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--rec", metavar="FILE", help="recurrence file (text grammar or JSON)")
    src.add_argument("--seq", metavar="NAME",
                     help=f"catalog sequence(s), comma separated or 'all': {', '.join(catalog.NAMES)}")
    common.add_argument("-K", type=int, default=None, help="truncation index")
    common.add_argument("-r", type=int, default=None, help="target order")
    common.add_argument("--rho-max", type=int, default=6, help="largest ramification tried")
    common.add_argument("--k-max", type=int, default=None, help="largest bound index k")
    common.add_argument("--n-cap", type=int, default=10_000, help="base window scan cap")
    common.add_argument("-o", "--output", metavar="FILE", help="output file (directory for several sequences)")
    common.add_argument("--decimal", type=int, default=None, metavar="k",
                        help="add k-digit decimal renderings")
    common.add_argument("--jobs", type=int, default=1, help="parallel runs over several sequences")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rlogconvex",
                                     description="Asymptotics and r-log-convexity certificates "
                                                 "for P-recursive sequences.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("expand", parents=[common], help="branches and ratio expansion")
    sub.add_parser("analyze", parents=[common], help="asymptotic r-log-convexity report")
    sub.add_parser("certify", parents=[common], help="produce a certificate")
    p = sub.add_parser("verify-cert", parents=[common], help="check a certificate")
    p.add_argument("--cert", required=True, metavar="FILE",
                   help="certificate file (directory for several sequences)")
    p = sub.add_parser("scan", parents=[common], help="exact L^i scan")
    p.add_argument("--upto", type=int, default=300, help="last index scanned")
    p.add_argument("--max-rows", type=int, default=40, help="violation rows shown")
    return parser


def _defaults(args) -> None:
    if args.K is None and args.command in ("expand", "analyze"):
        args.K = 8
    if args.r is None and args.command in ("certify", "scan"):
        args.r = 1


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _defaults(args)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seq is None:
        names = [None]
    elif args.seq == "all":
        names = list(catalog.NAMES)
    else:
        names = [s.strip() for s in args.seq.split(",") if s.strip()]
    args.multi = len(names) > 1
    if args.jobs > 1 and args.multi:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [args.command] * len(names), [args] * len(names), names))
    else:
        results = [_run_one(args.command, args, n) for n in names]
    code = 0
    for rc, text in results:
        stream = sys.stdout if rc == 0 else sys.stderr
        print(text, file=stream)
        code = max(code, rc)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
