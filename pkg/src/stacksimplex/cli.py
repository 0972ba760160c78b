"""Command-line front end: ``stacksimplex <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 query the library cannot answer (see README).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import exactla
from .ehrhart import (
    CLOSED,
    INTERIOR,
    count_lattice,
    counts_csv,
    dilate_counts,
    ehrhart_polynomial,
    gorenstein_certificate,
    hstar_vector,
    is_hollow,
    stack_simplex,
)
from .equivalence import lecture_hall_simplex
from .permutations import Permutation, all_permutations, sort_orbit, tau
from .polytope import UnclassifiedInside, VPolytope, cube, normalized_volume, translate
from .verify import CHECK_IDS, run_verification

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3

DEFAULTS = {"nmax": 5, "tmax": 3, "seed": 0}

EXPLORE_COLUMNS = (
    "perm",
    "orbit_index",
    "orbit_size",
    "affine_dim",
    "simplex",
    "normalized_volume",
    "lattice_points_t1",
    "hollow",
)


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def parse_permutation(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _builtin_size(name: str, arg: str, least: int) -> int:
    try:
        n = int(arg)
    except ValueError:
        raise UsageError(f"{name}: expected an integer size, got {arg!r}") from None
    if n < least:
        raise UsageError(f"{name}: size must be at least {least}")
    return n


def parse_polytope(text: str) -> VPolytope:
    """Resolve a polytope argument.

    Accepted forms: ``tau:n``, ``lecturehall:n``, ``cube:n``, ``point``,
    ``points:x1,x2;y1,y2;...`` (rational coordinates), or a permutation, which
    stands for the hull of its stack-sorting orbit.
    """
    text = text.strip()
    if text == "point":
        return VPolytope([(0,)])
    if ":" in text:
        name, _, arg = text.partition(":")
        if name == "tau":
            return stack_simplex(_builtin_size(name, arg, 2))
        if name == "lecturehall":
            return lecture_hall_simplex(_builtin_size(name, arg, 1))
        if name == "cube":
            return cube(_builtin_size(name, arg, 1))
        if name == "points":
            try:
                pts = [
                    tuple(exactla.parse_rational(c) for c in chunk.split(","))
                    for chunk in arg.split(";")
                    if chunk.strip()
                ]
                return VPolytope(pts)
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(f"bad point list {arg!r}: {exc}") from exc
        raise UsageError(f"unknown polytope kind {name!r}")
    p = parse_permutation(text)
    return VPolytope(q.entries for q in sort_orbit(p).steps)


def parse_lambda(text: str):
    try:
        lam = exactla.parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad dilation factor {text!r}") from exc
    if lam < 0:
        raise UsageError("dilation factor must be nonnegative")
    return lam


def load_config(path: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in data.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise UsageError(f"config key {key} must be an integer")
    return data


def _setting(args, key):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return args.config_values.get(key, DEFAULTS[key])


# ----------------------------------------------------------------- commands


def cmd_sort(args):
    p = parse_permutation(args.perm)
    orbit = sort_orbit(p)
    steps = orbit.steps
    if args.iterations is not None:
        if args.iterations < 0:
            raise UsageError("iterations must be nonnegative")
        steps = steps[: args.iterations + 1]
    if args.json:
        return EXIT_OK, _dump({"perm": p.to_json(), "steps": [q.to_json() for q in steps], "index": orbit.index})
    lines = [str(q) for q in steps]
    lines.append(f"index {orbit.index}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _polytope_summary(poly: VPolytope) -> dict:
    out = poly.to_json()
    if poly.is_simplex and poly.is_lattice:
        out["normalized_volume"] = normalized_volume(poly)
    if poly.is_lattice:
        out["hollow"] = is_hollow(poly)
    return out


def cmd_polytope(args):
    poly = parse_polytope(args.spec)
    return EXIT_OK, _dump(_polytope_summary(poly))


def cmd_count(args):
    poly = parse_polytope(args.spec)
    lams = [parse_lambda(s) for s in args.lam]
    if args.translate == "tau":
        if poly.ambient < 2:
            raise UsageError("--translate tau needs ambient dimension at least 2")
        poly = translate(poly, tuple(-v for v in tau(poly.ambient).entries))
    region = INTERIOR if args.interior else CLOSED
    if len(lams) > 1:
        rows = dilate_counts(poly, lams)
        if args.json:
            return EXIT_OK, _dump(
                [{"lambda": exactla.format_rational(l), "closed": c, "interior": i} for l, c, i in rows]
            )
        return EXIT_OK, counts_csv(rows)
    count = count_lattice(poly, lams[0], region)
    if args.json:
        return EXIT_OK, _dump(
            {"lambda": exactla.format_rational(lams[0]), "region": region.value, "count": count}
        )
    return EXIT_OK, f"{count}\n"


def cmd_ehrhart(args):
    poly = parse_polytope(args.spec)
    if not poly.is_lattice:
        cert = gorenstein_certificate(poly, args.tmax)
        payload = {
            "lattice": False,
            "gorenstein_index": cert.index,
            "gorenstein_method": cert.method,
            "checked_range": list(cert.checked_range),
        }
        sys.stderr.write("symbolic certification needs a lattice polytope; finite-range result only\n")
        return EXIT_UNSUPPORTED, _dump(payload)
    cert = gorenstein_certificate(poly)
    payload = {
        "lattice": True,
        "affine_dim": poly.affine_dim,
        "poly": [exactla.format_rational(c) for c in ehrhart_polynomial(poly)],
        "hstar": list(hstar_vector(poly)),
        "hollow": is_hollow(poly),
        "gorenstein_index": cert.index,
        "gorenstein_method": cert.method,
    }
    return EXIT_OK, _dump(payload)


def cmd_verify(args):
    nmax, tmax, seed = _setting(args, "nmax"), _setting(args, "tmax"), _setting(args, "seed")
    if nmax < 2 or tmax < 1:
        raise UsageError("need nmax >= 2 and tmax >= 1")
    only = None
    if args.only:
        only = set(args.only.split(","))
        unknown = only - set(CHECK_IDS)
        if unknown:
            raise UsageError(f"unknown check ids: {', '.join(sorted(unknown))}")
    report = run_verification(
        nmax, tmax, seed, jobs=args.jobs, only=only, corrupt_certificate=args.corrupt_certificate
    )
    timings = not args.no_timings
    if args.json:
        body = _dump(report.to_json(timings=timings))
    else:
        body = report.table(timings=timings) + "\n"
    return (EXIT_OK if report.passed else EXIT_FAIL), body


def explore_row(p: Permutation) -> dict:
    orbit = sort_orbit(p)
    poly = VPolytope(q.entries for q in orbit.steps)
    simplex = poly.is_simplex
    return {
        "perm": str(p),
        "orbit_index": orbit.index,
        "orbit_size": len(orbit),
        "affine_dim": poly.affine_dim,
        "simplex": simplex,
        "normalized_volume": normalized_volume(poly) if simplex else None,
        "lattice_points_t1": count_lattice(poly, 1),
        "hollow": is_hollow(poly),
    }


def explore(n: int, jobs: int = 1) -> list:
    """Rows for every permutation of ``[n]``, largest normalized volume first."""
    perms = all_permutations(n)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(explore_row, perms, chunksize=64))
    else:
        rows = [explore_row(p) for p in perms]
    order = {str(p): i for i, p in enumerate(perms)}
    rows.sort(key=lambda r: (-(r["normalized_volume"] or 0), order[r["perm"]]))
    return rows


def explore_csv(rows) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    lines = [",".join(EXPLORE_COLUMNS)]
    for r in rows:
        lines.append(",".join(cell(r[c]) for c in EXPLORE_COLUMNS))
    return "\n".join(lines) + "\n"


def cmd_explore(args):
    if not 2 <= args.n <= 7:
        raise UsageError("explore supports 2 <= n <= 7")
    rows = explore(args.n, args.jobs)
    if args.json:
        return EXIT_OK, _dump(rows)
    return EXIT_OK, explore_csv(rows)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------------- parser


def _global_options(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="emit JSON")
    parser.add_argument("--jobs", type=int, default=default(1), metavar="N", help="worker processes")
    parser.add_argument("--output", default=default(None), metavar="FILE", help="write output to FILE")
    parser.add_argument(
        "--config", default=default(None), metavar="FILE", help="TOML file with nmax/tmax/seed defaults"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stacksimplex",
        description="Stack-sorting simplices: orbits, lattice-point counts, Ehrhart data.",
    )
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", parents=[common], help="stack-sorting orbit of a permutation")
    p.add_argument("perm")
    p.add_argument("--iterations", "-k", type=int, default=None, help="show only s^0..s^k")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("polytope", parents=[common], help="describe a polytope")
    p.add_argument("spec", help="permutation, tau:n, lecturehall:n, cube:n, point, points:...")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("count", parents=[common], help="lattice points of rational dilates")
    p.add_argument("spec")
    p.add_argument("lam", nargs="+", help="dilation factor(s) as p/q; several give a CSV table")
    p.add_argument("--interior", action="store_true", help="count the relative interior")
    p.add_argument("--translate", choices=["none", "tau"], default="none", help="shift by -(2 3 ... n 1) first")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("ehrhart", parents=[common], help="Ehrhart polynomial, h*, Gorenstein index")
    p.add_argument("spec")
    p.add_argument("--tmax", type=int, default=None, help="range for the finite check on non-lattice input")
    p.set_defaults(func=cmd_ehrhart)

    p = sub.add_parser("verify", parents=[common], help="run the verification grid")
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--only", default=None, help="comma-separated check ids")
    p.add_argument("--no-timings", action="store_true", help="omit wall times for byte-stable output")
    p.add_argument("--corrupt-certificate", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore", parents=[common], help="statistics over all of S_n as CSV")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_explore)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        args.config_values = load_config(args.config) if args.config else {}
        code, body = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except UnclassifiedInside as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
