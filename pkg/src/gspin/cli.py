"""Command-line front end: ``python -m gspin``."""

from __future__ import annotations

import argparse
import sys

from .suite import SUITES, ConfigError, SuiteConfig, emit_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="python -m gspin",
        description="Exact verification of G-spin model algebras on a finite lattice window.",
    )
    p.add_argument("--group", default="cyclic:2", help="cyclic:N, dihedral:N, symmetric:N or file:PATH")
    p.add_argument("--window", default="0.5:2", help="site interval A:B, halves as 0.5 or 1/2 (default 0.5:2)")
    p.add_argument("--suite", default="all", help="comma separated: " + ",".join(SUITES) + ",all")
    p.add_argument("--scalar", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float, default=1e-8, help="tolerance of the float positivity oracles")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive-limit", type=int, default=1_000_000,
                   help="largest sweep (label tuples) run exhaustively before sampling")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="zero elapsed_ms for byte-stable reports")
    p.add_argument("--eval", metavar="EXPR", default=None,
                   help="evaluate an expression in F(window) or D(G) and print the result")
    return p


def _eval(args) -> int:
    from .expr import ExprContext, ExprError, evaluate, format_element
    from .field import InvalidWindow, Window
    from .groups import GroupError, build_group
    try:
        G = build_group(args.group)
        ctx = ExprContext(G, Window.parse(args.window))
    except (GroupError, InvalidWindow, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        val = evaluate(args.eval, ctx)
    except ExprError as exc:
        print(args.eval, file=sys.stderr)
        if exc.col:
            print(" " * (exc.col - 1) + "^", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = format_element(val, ctx) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.eval is not None:
        return _eval(args)
    cfg = SuiteConfig(group=args.group, window=args.window, suites=[args.suite], scalar=args.scalar,
                      tol=args.tol, samples=args.samples, seed=args.seed,
                      exhaustive_limit=args.exhaustive_limit)
    try:
        rep = run_suite(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        emit_report(rep, args.format, args.out, timing=not args.no_timing)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if rep.ok else EXIT_FAIL
