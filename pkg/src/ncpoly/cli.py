"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 numerical failure, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import cell_complexes as cc
from . import render
from .ll_fiber import fiber_enumerate
from .monodromy import InvariantViolation, RectangleAnalysis
from .nc_core import SetPartition
from .nc_lattice import enumerate_ncpart, maximal_chains
from .poly_numeric import (
    ComplexPoly,
    NumericalFailure,
    NumericMultiset,
    Rectangle,
    bounding_rectangle,
    critical_data,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_INVARIANT = 0, 1, 2, 3

ENUM_RANGES = {
    "ncpart": (1, 12),
    "chains": (1, 7),
    "basketballs": (1, 5),
    "dual-braid": (2, 7),
    "rectangle": (1, 5),
    "annulus": (1, 5),
}


class InputError(ValueError):
    pass


def threads() -> int:
    try:
        return max(1, int(os.environ.get("NCPOLY_THREADS", "1")))
    except ValueError:
        raise InputError("NCPOLY_THREADS must be an integer")


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(obj: Any, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_rect(s: str) -> Rectangle:
    try:
        xl, xr, yb, yt = (float(x) for x in s.split(","))
    except ValueError as exc:
        raise InputError("--rect expects xl,xr,yb,yt") from exc
    return Rectangle(xl, xr, yb, yt)


def load_poly(obj: Any) -> ComplexPoly:
    if isinstance(obj, list):
        obj = {"coeffs": obj}
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise InputError('polynomial JSON needs a "coeffs" list')
    return ComplexPoly.from_json(obj)


def analyze(p: ComplexPoly, rect: Rectangle | None = None, tol: float | None = None,
            seed: int = 0) -> dict:
    cd = critical_data(p, seed=seed)
    if rect is None:
        rect = bounding_rectangle(list(cd.cvl.points) or [0j])
    ra = RectangleAnalysis(p, rect, tol=tol, seed=seed)
    sc = ra.side_chains()
    h, v = ra.side_constellations()
    return {
        "polynomial": p.to_json(),
        "rectangle": rect.to_json(),
        "critical_data": cd.to_json(),
        "subdivision": {"x": list(ra.I_vertices), "y": list(ra.J_vertices)},
        "side_chains": sc.to_json(),
        "geocom": {"left_chain": sc.left.to_json(), "left_weights": list(sc.left_weights),
                   "bottom_chain": sc.bottom.to_json(), "bottom_weights": list(sc.bottom_weights)},
        "constellations": {"horizontal": h.to_json(), "vertical": v.to_json(),
                           "horizontal_stripped": h.stripped().to_json(),
                           "vertical_stripped": v.stripped().to_json()},
        "regularity": rect.side_regularity(cd.cvl.points, ra.tol),
        "tol": ra.tol,
        "seed": seed,
    }


def cmd_analyze(args) -> int:
    p = load_poly(_load_json(args.poly))
    rect = _parse_rect(args.rect) if args.rect else None
    _emit(analyze(p, rect, args.tol, args.seed), args.out)
    return EXIT_OK


def enum_payload(kind: str, d: int, listing: bool = False) -> dict:
    lo, hi = ENUM_RANGES[kind]
    if not lo <= d <= hi:
        raise InputError(f"{kind} supports d in {lo}..{hi}")
    out: dict[str, Any] = {"kind": kind, "d": d}
    if kind == "ncpart":
        ps = enumerate_ncpart(d)
        out["count"] = len(ps)
        if listing:
            out["items"] = [str(x) for x in ps]
    elif kind == "chains":
        chs = maximal_chains(d)
        out["count"] = len(chs)
        if listing:
            out["items"] = [" < ".join(str(e) for e in ch) for ch in chs]
    elif kind == "basketballs":
        pairs = cc.basketball_pairs(d)
        out["count"] = len(pairs)
        if listing:
            out["items"] = [[list(a.image), list(b.image)] for a, b in pairs]
    elif kind == "dual-braid":
        out.update(cc.dual_braid_complex_stats(d).to_json())
    elif kind == "rectangle":
        out.update(cc.rectangle_complex_stats(d, with_bidim=d <= 4).to_json())
    elif kind == "annulus":
        classes = cc.annulus_vertex_classes(d)
        out["vertex_classes"] = len(classes)
        if listing:
            out["items"] = sorted([list(map(list, left)), list(map(list, bottom))]
                                  for left, bottom in classes)
    return out


def cmd_enum(args) -> int:
    _emit(enum_payload(args.kind, args.d, args.list), args.out)
    return EXIT_OK


def cmd_fiber(args) -> int:
    obj = _load_json(args.cvl)
    if isinstance(obj, dict):
        target = NumericMultiset.from_json(obj)
    elif isinstance(obj, list):
        vals = [complex(*v) if isinstance(v, list) else complex(v) for v in obj]
        target = NumericMultiset.from_values(vals)
    else:
        raise InputError("critical values must be a list or a multiset object")
    res = fiber_enumerate(target, args.d, starts=args.starts, seed=args.seed)
    _emit(res.to_json(), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    if args.what == "chords":
        if args.partition:
            part = SetPartition.parse(args.partition)
        else:
            report = _load_json(args.analysis)
            chain = report["side_chains"]["left_chain"]
            part = SetPartition.from_json(chain[min(args.index, len(chain) - 1)])
        svg = render.render_chords(part, args.side)
    else:
        if not args.analysis:
            raise InputError(f"--analysis is required for {args.what}")
        report = _load_json(args.analysis)
        if args.what == "qprime":
            svg = render.render_qprime(report)
        elif args.what == "banyan":
            svg = render.render_banyan(report)
        else:
            svg = render.render_cactus(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncpoly", description="Noncrossing combinatorics of complex polynomials.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", help="side chains and constellations of a polynomial")
    a.add_argument("poly", help='JSON file with {"coeffs": [[re, im], ...]} (descending), or - for stdin')
    a.add_argument("--rect", help="critical value rectangle xl,xr,yb,yt")
    a.add_argument("--tol", type=float)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("enum", help="counts of combinatorial objects")
    e.add_argument("kind", choices=sorted(ENUM_RANGES))
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--list", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enum)

    f = sub.add_parser("fiber", help="polynomials with prescribed critical values")
    f.add_argument("--cvl", required=True, help="JSON multiset or list of [re, im]")
    f.add_argument("--d", type=int, required=True)
    f.add_argument("--starts", type=int)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fiber)

    r = sub.add_parser("render", help="SVG drawings")
    r.add_argument("--what", required=True, choices=["qprime", "chords", "banyan", "cactus"])
    r.add_argument("--analysis", help="report written by analyze")
    r.add_argument("--partition", help="partition such as 137|2|45|6|8|9 (chords only)")
    r.add_argument("--side", choices=["top", "bottom", "left", "right"], default="top")
    r.add_argument("--index", type=int, default=1, help="left chain element for chords")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        threads()
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
