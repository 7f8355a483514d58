"""Command line front end: ``gll norm|sweep|convolve|verify``.

Reports go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 a verification check failed, 2 unparsable input, 3 parameter out of domain.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from .grand_norm import epsilon_profile
from .group_algebra import GroupStructure, convolve, convolve_fft, haar_space, unit
from .measure_space import (INF, DomainError, EpsilonGrid, ExponentParams,
                            MeasureSpace, as_function, load_function, lp_norm)
from .small_norm import small_norm_estimate
from .verify import SUITES, SuiteConfig, all_passed, cosine, run_suite, threads_from_env

log = logging.getLogger("grand_lebesgue")

EXIT_FAILED, EXIT_PARSE, EXIT_DOMAIN = 1, 2, 3


class InputError(Exception):
    pass


def generate(spec: str, group: GroupStructure, seed: int) -> np.ndarray:
    """Named generators: ``constant[:c]``, ``point_mass[:x]``, ``cosine[:k]``, ``random``."""
    name, _, arg = spec.partition(":")
    n = group.order
    try:
        if name == "constant":
            return np.full(n, float(arg) if arg else 1.0)
        if name == "point_mass":
            x = int(arg) if arg else 0
            if not 0 <= x < n:
                raise DomainError(f"point_mass index {x} outside group of order {n}")
            return np.roll(unit(group), x)
        if name == "cosine":
            return cosine(group, int(arg) if arg else 1)
        if name == "random":
            return np.random.default_rng(seed).uniform(-1.0, 1.0, n)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise InputError(f"bad generator argument in {spec!r}") from exc
    raise InputError(f"unknown generator {spec!r}")


def _group(args) -> GroupStructure:
    try:
        return GroupStructure.parse(args.group)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise InputError(str(exc)) from exc


def _params(args, theta: Optional[float] = None) -> ExponentParams:
    grid = EpsilonGrid(count=args.grid_count, min_fraction=args.grid_min_frac)
    return ExponentParams(args.p, args.theta if theta is None else theta, grid)


def _function(args, which: str = "") -> tuple[MeasureSpace, np.ndarray, Optional[GroupStructure]]:
    path = getattr(args, f"input{which}")
    gen = getattr(args, f"gen{which}")
    if path:
        try:
            space, f = load_function(path)
        except (OSError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise InputError(f"cannot read {path}: {exc}") from exc
        group = _group(args) if args.group else None
        if group is not None and group.order != space.size:
            raise InputError(f"input has {space.size} values, group {group} has order {group.order}")
        return space, f, group
    group = _group(args)
    f = generate(gen or "constant", group, args.seed)
    space = haar_space(group)
    return space, as_function(f, space), group


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def cmd_norm(args) -> int:
    space, f, _ = _function(args)
    if args.kind == "lp":
        q = INF if args.q in ("inf", "infinity") else float(args.q)
        out = {"kind": "lp", "q": args.q, "value": lp_norm(f, q, space)}
    elif args.kind == "grand":
        prof = epsilon_profile(f, _params(args), space)
        out = {"kind": "grand", "p": args.p, "theta": args.theta,
               "value": prof.maximum, "argmax_epsilon": prof.refined_argmax[0]}
    else:
        est = small_norm_estimate(f, _params(args), space)
        out = {"kind": "small", "p": args.p, "theta": args.theta, **est.to_dict(),
               "gap_ratio": est.gap_ratio if np.isfinite(est.gap_ratio) else None}
    print(_dump(out))
    return 0


def cmd_sweep(args) -> int:
    space, f, _ = _function(args)
    prof = epsilon_profile(f, _params(args), space)
    if args.format == "json":
        print(_dump({"epsilon": prof.epsilons.tolist(), "phi": prof.values.tolist(),
                     "refined_argmax": list(prof.refined_argmax)}))
    else:
        sys.stdout.write(prof.to_csv())
    return 0


def cmd_convolve(args) -> int:
    group = _group(args)
    space, f, _ = _function(args)
    _, g, _ = _function(args, "2")
    if f.size != group.order or g.size != group.order:
        raise InputError(f"both inputs need {group.order} values")
    h = (convolve_fft if args.method == "fft" else convolve)(f, g, group)
    if args.format == "csv":
        sys.stdout.write("index,value\n" + "".join(f"{i},{v:.17g}\n" for i, v in enumerate(h)))
    else:
        print(_dump({"group": str(group), "values": h.tolist()}))
    return 0


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        raise InputError(f"unknown suite {args.suite!r}")
    cfg = SuiteConfig(_group(args), _params(args), args.trials, args.seed,
                      threads_from_env())
    results = run_suite(args.suite, cfg)
    for r in results:
        print(r.to_json())
        if r.passed is False:
            log.warning("check failed: %s (margin %s)", r.check, r.margin)
    return 0 if all_passed(results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gll", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default="Z8", help="e.g. Z8 or Z2xZ3")
    common.add_argument("--p", type=float, default=2.0)
    common.add_argument("--theta", type=float, default=1.0)
    common.add_argument("--grid-count", type=int, default=256)
    common.add_argument("--grid-min-frac", type=float, default=1e-8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default=None)

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--input", help="JSON list/object or raw float64 file")
    inputs.add_argument("--gen", help="constant[:c], point_mass[:x], cosine[:k] or random")

    p = sub.add_parser("norm", parents=[common, inputs], help="compute a norm or bracket")
    p.add_argument("--kind", choices=("lp", "grand", "small"), default="grand")
    p.add_argument("--q", default="2")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sweep", parents=[common, inputs], help="export the epsilon profile")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("convolve", parents=[common, inputs], help="convolve two functions")
    p.add_argument("--input2")
    p.add_argument("--gen2")
    p.add_argument("--method", choices=("direct", "fft"), default="direct")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", default="all", help=", ".join(SUITES + ("all",)))
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("gll: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"gll: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, ValueError) as exc:
        print(f"gll: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
