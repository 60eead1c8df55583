"""Command-line interface: ``lucaspal {search,bounds,reduce,full,explain}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .bakerbounds import derive_bound_chain
from .exhaustive import search
from .pipeline import Config, explain, parse, render, run_full
from .realfield import DEFAULT_DIGITS
from .reduction import DEFAULT_M, stage1_ell, stage2_m, stage3_n

PRECISION_ENV = "LUCASPAL_PRECISION"


def _precision(args) -> int:
    if args.precision is not None:
        return args.precision
    return int(os.environ.get(PRECISION_ENV, DEFAULT_DIGITS))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_search(args) -> int:
    report = search(args.n_max, args.mode)
    if args.out:
        _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    label = report.mode.replace("_", "-")
    print(f"{label} search, n <= {report.n_max}: {len(report.hits)} hits")
    for h in report.hits:
        print(f"  L_{h.n} = {h.value}  {h.spec.as_tuple()}")
    return 0


def cmd_bounds(args) -> int:
    chain = derive_bound_chain()
    if args.out:
        _emit(json.dumps(chain.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    for s in chain.steps:
        print(f"{s.name:38s} {s.computed.str(8):>16s}  <=  {s.cover.str(4)}")
    print(f"n < {chain.n_abs}\nell < {chain.ell_abs}\nm < {chain.m_abs}")
    return 0


def cmd_reduce(args) -> int:
    digits = _precision(args)
    kw = dict(digits=digits, workers=args.workers, keep_rows=args.detail)
    s1 = stage1_ell(args.M, **kw)
    s2 = stage2_m(s1.bound, args.M, **kw)
    s3 = stage3_n(s1.bound, s2.bound, args.M, **kw)
    stages = [s1, s2, s3]
    if args.out:
        data = {s.name: s.to_dict(args.detail) for s in stages}
        _emit(json.dumps(data, sort_keys=True, indent=2) + "\n", args.out)
    for s in stages:
        print(
            f"{s.name}: {s.variable} < {s.bound}  ({s.combos} combos, "
            f"min eps {s.min_epsilon.str(10)}, max eps {s.max_epsilon.str(10)})"
        )
    return 0


def cmd_full(args) -> int:
    config = Config(
        precision=_precision(args),
        n_max=args.n_max,
        M=args.M,
        workers=args.workers,
        detail=args.detail,
    )
    cert = run_full(config)
    _emit(render(cert), args.out)
    print(f"verdict: {cert.verdict}", file=sys.stderr)
    return 0 if cert.verdict == "no solutions" else 1


def cmd_explain(args) -> int:
    if args.certificate == "-":
        text = sys.stdin.read()
    else:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    _emit(explain(parse(text)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help=f"working precision in decimal digits (default {DEFAULT_DIGITS}, "
                             f"or ${PRECISION_ENV})")
    common.add_argument("--n-max", type=int, default=1000, help="low-range search ceiling")
    common.add_argument("--mode", choices=["palindromic", "two-block"], default="palindromic")
    common.add_argument("--detail", action="store_true", help="keep per-combination rows")
    common.add_argument("--out", default=None, help="write output to this path")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--M", type=int, default=DEFAULT_M, help=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lucaspal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("search", parents=[common], help="exhaustive low-range search").set_defaults(func=cmd_search)
    sub.add_parser("bounds", parents=[common], help="Matveev bound chain").set_defaults(func=cmd_bounds)
    sub.add_parser("reduce", parents=[common], help="three reduction stages").set_defaults(func=cmd_reduce)
    sub.add_parser("full", parents=[common], help="full run, certificate output").set_defaults(func=cmd_full)
    p = sub.add_parser("explain", parents=[common], help="render a certificate as text")
    p.add_argument("certificate", nargs="?", default="-")
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
