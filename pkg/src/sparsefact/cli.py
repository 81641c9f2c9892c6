"""Command-line front end.

    sparsefact factor [FILE]          factor a polynomial (stdin by default)
    sparsefact expand POLY...         multiply polynomials
    sparsefact verify TARGET POLY...  check that the product equals TARGET
    sparsefact gen --seed N ...       print a random polynomial or product

Polynomial arguments are either literal text or paths to files holding it.
Every option of ``factor`` can also be set through an environment variable
named SPARSEFACT_<OPTION>, e.g. SPARSEFACT_JMAX=8.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import random
import sys
from functools import reduce
from operator import mul

from .errors import PolySyntaxError
from .generate import random_poly, random_product
from .poly import MultiPoly
from .sparselift import Config, factor
from .textio import format_poly, parse

EXIT_OK, EXIT_ERROR, EXIT_FALLBACK = 0, 1, 2


def _env(name, default, kind=str):
    raw = os.environ.get("SPARSEFACT_" + name.upper().replace("-", "_"))
    if raw is None:
        return default
    if kind is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return kind(raw)


def _read_text(arg):
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _read_polys(args):
    """Parse several polynomials over one shared, first-appearance variable list."""
    names = []
    polys = []
    for arg in args:
        p = parse(_read_text(arg), names)
        names = list(p.variables)
        polys.append(p)
    return [p.with_variables(names) for p in polys], names


def _digest(p: MultiPoly):
    return hashlib.sha256(format_poly(p).encode()).hexdigest()


def _probe_summary(stats):
    parts = []
    for name, probes in stats.probes.items():
        parts.append(f"{name}: " + ", ".join(f"{j} {outcome}" for j, outcome in probes))
    return parts


def _print_stats(stats, out):
    print(f"main variable: {stats.main_var}", file=out)
    print(f"bivariate factorizations: {stats.bifactor_calls}", file=out)
    print(f"retries: {dict(stats.retries)}", file=out)
    print(f"dilations: {stats.dilations}", file=out)
    for line in _probe_summary(stats):
        print(f"probes {line}", file=out)
    print(f"time: {stats.ms:.1f} ms", file=out)


def _cmd_factor(args):
    P = parse(_read_text(args.file))
    if P.is_zero():
        print("error: cannot factor zero", file=sys.stderr)
        return EXIT_ERROR
    cfg = Config(jmax=args.jmax, max_dilations=args.max_dilations, seed=args.seed,
                 backend=args.backend, external_cmd=args.external_cmd, timeout=args.timeout,
                 main_var=args.main_var)
    outcome = factor(P, cfg)
    texts = [format_poly(f) for f, m in outcome.factors for _ in range(m)]
    status = "ok" if outcome.ok else "fallback"
    if args.json:
        doc = {
            "status": status,
            "input_digest": _digest(P),
            "variables": list(P.variables),
            "unit": outcome.unit,
            "content": str(outcome.content),
            "factors": texts,
            "fallback_reason": outcome.fallback_reason.value if outcome.fallback_reason else None,
            "stats": outcome.stats.as_dict(),
        }
        json.dump(doc, sys.stdout, indent=2)
        print()
    else:
        scalar = outcome.unit * outcome.content
        if scalar != 1 or not texts:
            print(scalar)
        for t in texts:
            print(t)
        if not outcome.ok:
            print(f"fallback: {outcome.fallback_reason.value}: {outcome.detail}", file=sys.stderr)
        if args.stats:
            _print_stats(outcome.stats, sys.stderr)
    return EXIT_OK if outcome.ok else EXIT_FALLBACK


def _cmd_expand(args):
    polys, _ = _read_polys(args.polys)
    print(format_poly(reduce(mul, polys)))
    return EXIT_OK


def _cmd_verify(args):
    polys, _ = _read_polys([args.target] + args.factors)
    target, factors = polys[0], polys[1:]
    product = reduce(mul, factors, MultiPoly.constant(target.variables, 1))
    if product == target:
        print("ok")
        return EXIT_OK
    print("mismatch")
    return EXIT_ERROR


def _cmd_gen(args):
    rng = random.Random(args.seed)
    names = [f"x{i + 1}" for i in range(args.nvars)]
    if args.factors > 1:
        P, _ = random_product(rng, names, args.factors, args.terms, args.maxdeg, args.coeff,
                              x_distinct=not args.any_support)
    else:
        P = random_poly(rng, names, args.terms, args.maxdeg, args.coeff)
    print(format_poly(P))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="sparsefact",
                                     description="Sparse multivariate factorization over the integers.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", help="factor a polynomial")
    p.add_argument("file", nargs="?", default="-", help="file or literal polynomial (default: stdin)")
    p.add_argument("--main-var", default=_env("main_var", None))
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("--jmax", type=int, default=_env("jmax", 6, int))
    p.add_argument("--max-dilations", type=int, default=_env("max_dilations", 8, int))
    p.add_argument("--backend", choices=("builtin", "external"), default=_env("backend", "builtin"))
    p.add_argument("--external-cmd", default=_env("external_cmd", None))
    p.add_argument("--timeout", type=float, default=_env("timeout", 60.0, float))
    p.add_argument("--json", action="store_true", default=_env("json", False, bool))
    p.add_argument("--stats", action="store_true", default=_env("stats", False, bool))
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("expand", help="multiply polynomials")
    p.add_argument("polys", nargs="+")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("verify", help="check a factor list against a target")
    p.add_argument("target")
    p.add_argument("factors", nargs="+")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="random sparse polynomial or product")
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("--nvars", type=int, default=3)
    p.add_argument("--terms", type=int, default=5)
    p.add_argument("--maxdeg", type=int, default=4)
    p.add_argument("--coeff", type=int, default=100)
    p.add_argument("--factors", type=int, default=1)
    p.add_argument("--any-support", action="store_true",
                   help="do not force pairwise different x-supports")
    p.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PolySyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
    except (ValueError, OverflowError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
