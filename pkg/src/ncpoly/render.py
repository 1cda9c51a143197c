"""Deterministic SVG drawings built from analysis reports.

Everything is emitted as plain strings with fixed numeric precision so the
same input always produces byte-identical output.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from .nc_core import SetPartition
from .nc_lattice import NCMatching, matching_of_partition

W = H = 400
PAD = 30


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Svg:
    def __init__(self, w: int = W, h: int = H):
        self.w, self.h = w, h
        self.items: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="black", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                          f'stroke="{stroke}" stroke-width="{_f(width)}"{extra}/>')

    def circle(self, cx, cy, r, fill="black", stroke="none"):
        self.items.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}" stroke="{stroke}"/>')

    def rect(self, x, y, w, h, stroke="black", fill="none"):
        self.items.append(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
                          f'stroke="{stroke}" fill="{fill}"/>')

    def path(self, d, stroke="black", fill="none", width=1.0):
        self.items.append(f'<path d="{d}" stroke="{stroke}" fill="{fill}" stroke-width="{_f(width)}"/>')

    def polygon(self, pts, stroke="black", fill="none"):
        s = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.items.append(f'<polygon points="{s}" stroke="{stroke}" fill="{fill}"/>')

    def text(self, x, y, s, size=10, anchor="middle"):
        self.items.append(f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" '
                          f'text-anchor="{anchor}" font-family="sans-serif">{escape(str(s))}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" height="{self.h}" '
                f'viewBox="0 0 {self.w} {self.h}">')
        return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head, *self.items, "</svg>"]) + "\n"


def render_qprime(report: dict) -> str:
    """Subdivided rectangle with the critical values marked."""
    r = report["rectangle"]
    xl, xr, yb, yt = r["xl"], r["xr"], r["yb"], r["yt"]
    sx = (W - 2 * PAD) / (xr - xl)
    sy = (H - 2 * PAD) / (yt - yb)

    def X(x):
        return PAD + (x - xl) * sx

    def Y(y):
        return H - PAD - (y - yb) * sy

    svg = _Svg()
    svg.rect(X(xl), Y(yt), X(xr) - X(xl), Y(yb) - Y(yt))
    for x in report["subdivision"]["x"][1:-1]:
        svg.line(X(x), Y(yb), X(x), Y(yt), stroke="gray", dash="4,3")
    for y in report["subdivision"]["y"][1:-1]:
        svg.line(X(xl), Y(y), X(xr), Y(y), stroke="gray", dash="4,3")
    for re_, im_ in report["critical_data"]["cvl"]["points"]:
        svg.circle(X(re_), Y(im_), 4, fill="crimson")
    return svg.render()


def render_chords(partition: SetPartition, side: str = "top") -> str:
    """Matching of ``partition`` against ``side``, drawn as chords of a ``2d``-gon."""
    m: NCMatching = matching_of_partition(partition, side)
    n = 2 * partition.n
    cx, cy, rad = W / 2, H / 2, W / 2 - PAD - 10

    def pt(k: int, r: float = rad):
        # k is 1-based; first point at the top, going clockwise
        a = -math.pi / 2 + 2 * math.pi * (k - 1) / n
        return cx + r * math.cos(a), cy + r * math.sin(a)

    svg = _Svg()
    svg.circle(cx, cy, rad, fill="none", stroke="gray")
    for a, b in m.partition.blocks:
        (x1, y1), (x2, y2) = pt(a), pt(b)
        svg.path(f"M {_f(x1)} {_f(y1)} Q {_f(cx)} {_f(cy)} {_f(x2)} {_f(y2)}", stroke="navy", width=1.5)
    for k in range(1, n + 1):
        x, y = pt(k)
        svg.circle(x, y, 2.5)
        lx, ly = pt(k, rad + 14)
        sym, idx = m.symbol(k)
        svg.text(lx, ly + 3, f"{sym}{idx}")
    return svg.render()


def _chain_from_report(report: dict, side: str) -> list[SetPartition]:
    return [SetPartition.from_json(e) for e in report["side_chains"][f"{side}_chain"]]


def render_banyan(report: dict, side: str = "left") -> str:
    """Blocks of each chain element as nodes; each block joins the block containing it one level up."""
    chain = _chain_from_report(report, side)
    levels = len(chain)
    d = chain[0].n
    svg = _Svg()
    dx = (W - 2 * PAD) / max(levels - 1, 1)
    pos: list[dict] = []
    for i, part in enumerate(chain):
        here = {}
        for blk in part.blocks:
            y = PAD + (H - 2 * PAD) * (sum(blk) / len(blk) - 1) / max(d - 1, 1)
            here[blk] = (PAD + i * dx, y)
        pos.append(here)
    for i in range(levels - 1):
        for blk, (x, y) in pos[i].items():
            up = chain[i + 1]
            parent = up.blocks[up.block_of()[blk[0]]]
            px, py = pos[i + 1][parent]
            svg.line(x, y, px, py, stroke="darkgreen", width=1.5)
    for i, here in enumerate(pos):
        for blk, (x, y) in here.items():
            svg.circle(x, y, 3)
            if i == 0:
                svg.text(x - 8, y + 3, "".join(map(str, blk)), anchor="end")
    return svg.render()


def render_cactus(report: dict) -> str:
    """Each nontrivial cycle of the horizontal constellation as a polygon, left to right."""
    factors: Sequence[Sequence[int]] = report["constellations"]["horizontal"]["factors"]
    cycles = []
    for f in factors:
        seen = set()
        for start in range(1, len(f) + 1):
            if start in seen or f[start - 1] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = f[x - 1]
            cycles.append(cyc)
    svg = _Svg()
    if not cycles:
        return svg.render()
    step = (W - 2 * PAD) / len(cycles)
    r = min(step / 2 - 4, 60)
    for i, cyc in enumerate(cycles):
        cx, cy = PAD + step * (i + 0.5), H / 2
        pts = []
        for j, _ in enumerate(cyc):
            a = -math.pi / 2 + 2 * math.pi * j / len(cyc)
            pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
        if len(cyc) == 2:
            svg.line(*pts[0], *pts[1], stroke="purple", width=1.5)
        else:
            svg.polygon(pts, stroke="purple")
        for (x, y), lab in zip(pts, cyc):
            svg.circle(x, y, 3)
            svg.text(x, y - 6, lab)
    return svg.render()
