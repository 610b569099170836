"""Command-line front end.

Exit codes: 0 ok, 1 parse or validation error, 2 geometry error (point not
in the complex, no common star, gap exceeded), 3 precision loss.  Reports
are JSON on stdout with numbers as 17-digit decimal strings.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import analysis, driver, oracle
from .complex import D_DEFAULT, dump_point, format_decimal, parse_decimal, parse_point
from .errors import (
    GeometryError,
    IncompatibleSupport,
    NotApplicable,
    ParseError,
    PrecisionLoss,
    TooLarge,
    TooManyIdeals,
    ValidationError,
)
from .pip import dump_pip, enumerate_ideals, parse_pip, random_pip

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _decimal_arg(text: str) -> float:
    try:
        return parse_decimal(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load(args, *names):
    p = parse_pip(_read(args.pip))
    return (p,) + tuple(parse_point(p, _read(getattr(args, n))) for n in names)


def _check_eps(eps: float):
    if not 0 < eps <= 0.1:
        raise ValidationError("epsilon must lie in (0, 0.1]")


def _check_bits(bits: int):
    # coordinates are IEEE doubles, so more bits cannot be honoured
    if not 1 <= bits <= 53:
        raise ValidationError("precision-bits must lie in [1, 53]")


def cmd_validate(args):
    p = parse_pip(_read(args.pip))
    _emit({"valid": True, "elements": len(p)})


def cmd_ideals(args):
    p = parse_pip(_read(args.pip))
    ideals = enumerate_ideals(p, args.limit)
    _emit({"count": len(ideals), "ideals": [I.names(p) for I in ideals]})


def cmd_distance(args):
    """Exact when both points share a star, otherwise the length of a run."""
    p, x, y = _load(args, "src", "dst")
    try:
        d = driver.distance(p, x, y)
        _emit({"value": format_decimal(d), "exact": True})
        return
    except GeometryError:
        pass
    _check_eps(args.epsilon)
    res = driver.run(p, x, y, args.epsilon, args.D, args.precision_bits)
    _emit({"value": format_decimal(res.length), "exact": False,
           "epsilon": format_decimal(args.epsilon)})


def cmd_geodesic(args):
    p, x, y = _load(args, "src", "dst")
    _check_eps(args.epsilon)
    _check_bits(args.precision_bits)
    res = driver.run(
        p, x, y, args.epsilon, args.D,
        precision_bits=args.precision_bits,
        early_exit=args.early_exit,
        trace=args.trace,
    )
    if args.trace:
        for j, ell in enumerate(res.stats.lengths):
            print(f"sweep {j} length {format_decimal(ell)}", file=sys.stderr)
    print(f"wall time {res.stats.wall_time:.3f} s", file=sys.stderr)
    _emit(res.to_dict(p))


def cmd_midpoint(args):
    p, x, y = _load(args, "src", "dst")
    _check_bits(args.precision_bits)
    if args.delta < 0:
        raise ValidationError("delta must be nonnegative")
    w, d = driver.midpoint_of(p, x, y, args.delta, args.precision_bits)
    _emit({"midpoint": dump_point(p, w), "distance": format_decimal(d),
           "delta": format_decimal(args.delta)})


def cmd_check_lemma(args):
    reports = analysis.check_all(args.n_max, raise_on_fail=False)
    print(analysis.format_table(reports))
    ok = all(r.passed for r in reports)
    print("ALL PASS" if ok else "FAILURES PRESENT")
    return 0 if ok else 1


def cmd_oracle(args):
    p, x, y = _load(args, "src", "dst")
    res = oracle.grid_distance(p, x, y, args.h, args.r)
    doc = res.to_dict()
    try:
        doc["unfold"] = format_decimal(oracle.unfold_two_cells(p, x, y))
    except NotApplicable:
        pass
    _emit(doc)


def cmd_gen(args):
    p = random_pip(
        args.elements, args.density, args.seed,
        cover_density=args.cover_density, max_dim=args.max_dim,
    )
    sys.stdout.write(dump_pip(p) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cat0cube", description="Approximate geodesics in CAT(0) cube complexes")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_points(sp):
        sp.add_argument("pip")
        sp.add_argument("src")
        sp.add_argument("dst")

    sp = sub.add_parser("validate", help="parse and validate a PIP file")
    sp.add_argument("pip")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("ideals", help="list consistent order ideals")
    sp.add_argument("pip")
    sp.add_argument("--limit", type=int, default=10_000)
    sp.set_defaults(func=cmd_ideals)

    sp = sub.add_parser("distance", help="distance between two points")
    with_points(sp)
    sp.add_argument("--epsilon", type=_decimal_arg, default=1e-3)
    sp.add_argument("--precision-bits", type=int, default=53)
    sp.add_argument("--D", type=_decimal_arg, default=D_DEFAULT)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("geodesic", help="eps-approximate geodesic report")
    with_points(sp)
    sp.add_argument("--epsilon", type=_decimal_arg, default=1e-3)
    sp.add_argument("--precision-bits", type=int, default=53)
    sp.add_argument("--D", type=_decimal_arg, default=D_DEFAULT)
    sp.add_argument("--trace", action="store_true", help="per-sweep lengths on stderr")
    sp.add_argument("--early-exit", action="store_true")
    sp.set_defaults(func=cmd_geodesic)

    sp = sub.add_parser("midpoint", help="rounded midpoint of two points in a common star")
    with_points(sp)
    sp.add_argument("--delta", type=_decimal_arg, default=0.0)
    sp.add_argument("--precision-bits", type=int, default=53)
    sp.set_defaults(func=cmd_midpoint)

    sp = sub.add_parser("check-lemma", help="verify the spectral bound for n = 2..N")
    sp.add_argument("--n-max", type=int, default=analysis.N_MAX)
    sp.set_defaults(func=cmd_check_lemma)

    sp = sub.add_parser("oracle", help="grid Dijkstra reference distance")
    with_points(sp)
    sp.add_argument("--h", type=_decimal_arg, default=0.02)
    sp.add_argument("--r", type=int, default=2)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="random PIP instance")
    sp.add_argument("--elements", type=int, required=True)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cover-density", type=float, default=None)
    sp.add_argument("--max-dim", type=int, default=None)
    sp.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        rc = args.func(args)
    except (ParseError, ValidationError, TooManyIdeals, TooLarge, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (GeometryError, IncompatibleSupport) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except PrecisionLoss as exc:
        print(f"error: PrecisionLoss: {exc}", file=sys.stderr)
        return 3
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
