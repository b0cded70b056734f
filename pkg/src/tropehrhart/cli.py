"""Batch command line front-end.

Reads fan/matroid/bundle JSON files, dispatches computations and prints one
JSON report (deterministic key and array order) or an aligned text table.
Exit codes: 0 success, 2 input/validation errors (with a structured error
object naming the offending row or cone), 1 internal errors.

Integers are emitted as JSON numbers while |x| < 2^53 and as decimal strings
beyond; rationals are always "p/q" strings.  Ground set elements and ray
indices are 1-indexed in all files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import hrr, taut
from .chains import ConvexChain, lattice_sum
from .errors import (
    BundleValidationError,
    NoCommonApartmentError,
    RowNotInBergmanError,
    TropehrhartError,
    ValidationError,
)
from .lattice import Fan, VPolytope
from .matroid import Matroid
from .tropvb import k_class_identity, split_resolution, validate


# ---------------------------------------------------------------------------
# JSON encoding and decoding
# ---------------------------------------------------------------------------

_SAFE = 2**53


def encode_int(x: int):
    return int(x) if abs(x) < _SAFE else str(int(x))


def encode_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_number(v) -> Fraction:
    if isinstance(v, bool):
        raise ValidationError("booleans are not numbers")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            if "/" in v:
                p, q = v.split("/", 1)
                return Fraction(int(p), int(q))
            return Fraction(int(v))
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"cannot parse number from {v!r}") from None
    raise ValidationError(f"cannot parse number from {v!r}")


def parse_int(v) -> int:
    f = parse_number(v)
    if f.denominator != 1:
        raise ValidationError(f"expected an integer, got {v!r}")
    return int(f)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


# ---------------------------------------------------------------------------
# Schema loading
# ---------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from None


def load_matroid_data(data) -> Matroid:
    try:
        m = parse_int(data["m"])
        bases = [frozenset(parse_int(e) for e in b) for b in data["bases"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"matroid schema error: {exc}") from None
    return Matroid(m, bases)


def load_fan_data(data) -> Fan:
    try:
        rays = [tuple(parse_int(x) for x in r) for r in data["rays"]]
        cones = [[parse_int(i) - 1 for i in c] for c in data["cones"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"fan schema error: {exc}") from None
    return Fan(rays, cones)


def load_bundle(path: str):
    data = _load_json(path)
    try:
        fan = load_fan_data(data["fan"])
        matroid = load_matroid_data(data["matroid"])
        diagram = [tuple(parse_int(x) for x in row) for row in data["diagram"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bundle schema error: {exc}") from None
    return validate(fan, matroid, diagram)


def load_chain(path: str) -> ConvexChain:
    data = _load_json(path)
    try:
        terms = []
        for t in data["terms"]:
            coeff = parse_int(t["coeff"])
            verts = [tuple(parse_number(x) for x in v) for v in t["vertices"]]
            terms.append((coeff, VPolytope(verts)))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"chain schema error: {exc}") from None
    return ConvexChain(terms)


def _parse_vector(text: str):
    return tuple(int(x) for x in text.split(","))


def _parse_box(text: str):
    lo, hi = text.split(":")
    return (_parse_vector(lo), _parse_vector(hi))


def _cone_label(key) -> str:
    return ",".join(str(i + 1) for i in sorted(key))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_validate(args) -> dict:
    bundle = load_bundle(args.bundle)
    return {
        "valid": True,
        "rank": bundle.rank,
        "rays": len(bundle.fan.rays),
        "ground_size": bundle.matroid.m,
        "adapted_bases": {
            _cone_label(k): sorted(v) for k, v in bundle.adapted_bases.items()
        },
    }


def _cmd_h0(args) -> dict:
    from .lattice import bounding_box, box_points, vertex_enumeration

    bundle = load_bundle(args.bundle)
    if args.u is not None:
        u = _parse_vector(args.u)
        return {"u": list(u), "h0_u": bundle.h0_global(u)}
    report = {"h0_total": bundle.h0_total(), "nonzero": []}
    pts = []
    for p in bundle.parliament().values():
        pts.extend(vertex_enumeration(p).vertices)
    lo, hi = bounding_box(pts, 0)
    for u in box_points(lo, hi):
        h = bundle.h0_global(u)
        if h:
            report["nonzero"].append({"u": list(u), "h0": h})
    return report


def _cmd_chi(args) -> dict:
    bundle = load_bundle(args.bundle)
    box = _parse_box(args.box) if args.box else None
    if args.u is not None:
        u = _parse_vector(args.u)
        return {
            "u": list(u),
            "chi_u": bundle.euler_char_u(u),
            "h0_by_codim": bundle.euler_char_by_codim(u),
        }
    return {
        "chi_total": bundle.euler_char_total(box),
        "box": [list(b) for b in (box or bundle.chi_box())],
    }


def _cmd_alpha_eval(args) -> dict:
    if args.chain:
        chain = load_chain(args.chain)
        if args.u is None:
            raise ValidationError("alpha-eval on a chain file needs --u")
        u = _parse_vector(args.u)
        return {"u": list(u), "value": chain.evaluate(u)}
    bundle = load_bundle(args.bundle)
    chain = bundle.chain_alpha(verify=False)
    if args.u is not None:
        u = _parse_vector(args.u)
        alpha = chain.evaluate(u)
        chi = bundle.euler_char_u(u)
        return {"u": list(u), "alpha_u": alpha, "chi_u": chi, "equal": alpha == chi}
    box = _parse_box(args.box) if args.box else bundle.chi_box()
    return {
        "alpha_total": lattice_sum(chain, box),
        "box": [list(b) for b in box],
    }


def _cmd_hrr(args) -> dict:
    bundle = load_bundle(args.bundle)
    result = hrr.hrr_verify(bundle)
    return {
        "lhs": encode_rational(result["lhs"]),
        "rhs": encode_int(result["rhs"]),
        "equal": result["equal"],
    }


def _cmd_resolve(args) -> dict:
    bundle = load_bundle(args.bundle)
    f = _parse_vector(args.f) if args.f else None
    resolution = split_resolution(bundle, f, check_bound=args.check_bound)
    pieces = []
    for piece in resolution:
        pieces.append(
            {
                "codim": piece.codim,
                "rank": piece.rank,
                "characters": {
                    _cone_label(k): [[encode_int(x) for x in u] for u in us]
                    for k, us in piece.characters.items()
                },
            }
        )
    return {
        "f": list(f) if f else [max(row) for row in bundle.diagram],
        "bundles": pieces,
        "k_class_identity": k_class_identity(bundle, resolution),
    }


def _cmd_taut_check(args) -> dict:
    matroid = load_matroid_data(_load_json(args.matroid))
    report = taut.vanishing_check(matroid, args.max_coord)
    return {
        "matroid": {
            "m": matroid.m,
            "bases": sorted(sorted(b) for b in matroid.bases),
        },
        "verified_box": {
            "sum": 1,
            "max_coord": report["max_coord"],
            "points": report["points"],
        },
        "all_equal": report["all_equal"],
        "failures": [list(u) for u in report["failures"]],
    }


def _cmd_flag_sum(args) -> dict:
    return {"m": args.m, "sum": taut.flag_alternating_sum(args.m)}


# ---------------------------------------------------------------------------
# Rendering and entry point
# ---------------------------------------------------------------------------

def _render_table(report: dict) -> str:
    lines = []
    if "h0_by_codim" in report:
        byc = report["h0_by_codim"]
        lines.append(f"{'codim':>6} | {'sum h0':>7}")
        lines.append("-" * 17)
        for k, v in enumerate(byc):
            lines.append(f"{k:>6} | {v:>7}")
        terms = " ".join(
            ("-" if k % 2 else "+") + f" {v}" for k, v in enumerate(byc)
        ).lstrip("+ ")
        lines.append(f"chi = {terms} = {report['chi_u']}")
        return "\n".join(lines)
    width = max((len(k) for k in report), default=4)
    for key in sorted(report):
        lines.append(f"{key:<{width}} : {_dump(report[key])}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--output", choices=["json", "table"], default="json",
        help="report format (default json)",
    )
    shared.add_argument(
        "--table", action="store_true", help="shorthand for --output table"
    )
    parser = argparse.ArgumentParser(
        prog="tropehrhart",
        description="Exact section counts, Euler characteristics and "
        "Riemann-Roch checks for tropical vector bundles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a bundle file", parents=[shared])
    p.add_argument("--bundle", required=True)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("h0", help="global section ranks", parents=[shared])
    p.add_argument("--bundle", required=True)
    p.add_argument("--u", help="character, e.g. 1,0")
    p.set_defaults(fn=_cmd_h0)

    p = sub.add_parser("chi", help="equivariant Euler characteristic", parents=[shared])
    p.add_argument("--bundle", required=True)
    p.add_argument("--u", help="character, e.g. 1,0")
    p.add_argument("--box", help="override box lo1,lo2:hi1,hi2")
    p.set_defaults(fn=_cmd_chi)

    p = sub.add_parser("alpha-eval", help="evaluate the associated convex chain", parents=[shared])
    p.add_argument("--bundle")
    p.add_argument("--chain")
    p.add_argument("--u")
    p.add_argument("--box")
    p.set_defaults(fn=_cmd_alpha_eval)

    p = sub.add_parser("hrr", help="Todd-operator Riemann-Roch check", parents=[shared])
    p.add_argument("--bundle", required=True)
    p.set_defaults(fn=_cmd_hrr)

    p = sub.add_parser("resolve", help="split resolution character multisets", parents=[shared])
    p.add_argument("--bundle", required=True)
    p.add_argument("--f", help="twisting numbers, e.g. 0,0,0")
    p.add_argument("--check-bound", action="store_true")
    p.set_defaults(fn=_cmd_resolve)

    p = sub.add_parser("taut-check", help="tautological bundle vanishing check", parents=[shared])
    p.add_argument("--matroid", required=True)
    p.add_argument("--max-coord", type=int)
    p.set_defaults(fn=_cmd_taut_check)

    p = sub.add_parser("flag-sum", help="alternating sum over flags of subsets", parents=[shared])
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(fn=_cmd_flag_sum)
    return parser


def _error_payload(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, RowNotInBergmanError):
        err["row"] = exc.row_number
        err["entries"] = list(exc.row)
        err["level_set"] = sorted(exc.level_set) if exc.level_set else []
    if isinstance(exc, NoCommonApartmentError):
        err["cone"] = sorted(i + 1 for i in exc.cone_rays)
    return {"error": err}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except (ValidationError, BundleValidationError) as exc:
        print(_dump(_error_payload(exc)))
        return 2
    except TropehrhartError as exc:
        print(_dump(_error_payload(exc)))
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(_dump({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 1
    if args.output == "table" or args.table:
        print(_render_table(report))
    else:
        print(_dump(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
