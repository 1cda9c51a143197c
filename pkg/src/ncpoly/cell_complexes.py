"""Order complexes, the dual braid complex, basketballs and the bisimplicial
rectangle and annulus complexes built on noncrossing partitions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _perms
from typing import Iterable, Sequence

from .hurwitz import product
from .nc_core import LinearComposition, Permutation, SetPartition, catalan
from .nc_lattice import (
    NCChain,
    absolute_leq,
    absolute_length,
    all_chains,
    is_noncrossing,
    is_noncrossing_perm,
    long_cycle,
    maximal_chains,
    ncperms,
    perm_of,
)


@dataclass(frozen=True)
class ComplexStats:
    d: int
    cells_by_dim: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** i * c for i, c in enumerate(self.cells_by_dim))

    def to_json(self) -> dict:
        return {"d": self.d, "cells_by_dim": list(self.cells_by_dim), "euler": self.euler}


# -- order complex points -------------------------------------------------

@dataclass(frozen=True)
class OrderComplexPoint:
    chain: NCChain
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.chain):
            raise ValueError("one weight per chain element")
        if any(w <= 0 for w in self.weights) or abs(sum(self.weights) - 1) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")


# -- dual braid complex ---------------------------------------------------

def edge_labels(chain: Sequence[Permutation]) -> tuple[Permutation, ...]:
    """``sigma_i = pi_{i-1}^-1 pi_i`` along a chain in ``[1, delta]``."""
    return tuple(a.inverse() * b for a, b in zip(chain, chain[1:]))


@dataclass(frozen=True)
class DualBraidSimplex:
    edge_labels: tuple[Permutation, ...]

    def __post_init__(self):
        if not self.edge_labels:
            return
        d = self.edge_labels[0].n
        if any(s.is_identity() for s in self.edge_labels):
            raise ValueError("edge labels must be nontrivial")
        prod_ = product(self.edge_labels, d)
        if sum(absolute_length(s) for s in self.edge_labels) != absolute_length(prod_):
            raise ValueError("edge label lengths are not additive")
        if not is_noncrossing_perm(prod_):
            raise ValueError("product of labels is outside [1, delta]")

    @property
    def dim(self) -> int:
        return len(self.edge_labels)


def dual_braid_cells_bruteforce(d: int) -> dict[int, set[tuple]]:
    """Group every chain of ``[1, delta]`` by its edge-label sequence."""
    out: dict[int, set[tuple]] = {}
    for ch in all_chains(d):
        key = tuple(s.image for s in edge_labels(ch))
        out.setdefault(len(ch) - 1, set()).add(key)
    return out


def _chains_from_identity(d: int) -> list[int]:
    # a label sequence determines a unique chain starting at the identity
    els = ncperms(d)
    lens = [absolute_length(x) for x in els]
    up = [[j for j, y in enumerate(els) if lens[j] > lens[i] and absolute_leq(x, y)]
          for i, x in enumerate(els)]
    counts = [Counter() for _ in els]
    order = sorted(range(len(els)), key=lambda i: lens[i])
    ident = order[0]
    counts[ident][0] = 1
    for i in order:
        for j in up[i]:
            for k, c in counts[i].items():
                counts[j][k + 1] += c
    total: Counter = Counter()
    for c in counts:
        total.update(c)
    return [total[k] for k in range(max(total) + 1)]


def dual_braid_complex_stats(d: int, bruteforce: bool = False) -> ComplexStats:
    """Cell counts of ``K_d`` by dimension.

    Simplices are identified by their edge-label sequence.  The default path
    counts chains starting at the identity, which are in bijection with label
    sequences; ``bruteforce=True`` groups all chains explicitly instead.
    """
    if not 2 <= d <= 7:
        raise ValueError("d must lie in 2..7")
    if bruteforce:
        cells = dual_braid_cells_bruteforce(d)
        return ComplexStats(d, tuple(len(cells[k]) for k in sorted(cells)))
    return ComplexStats(d, tuple(_chains_from_identity(d)))


def standardize_circle(constellation: Sequence[Permutation]) -> tuple[Permutation, ...]:
    """Move the right factor to the front: ``[pL, s..., pR] -> [delta pR delta^-1 pL, s..., 1]``."""
    fs = list(constellation)
    if len(fs) < 2:
        raise ValueError("need at least left and right entries")
    d = fs[0].n
    delta = long_cycle(d)
    if product(fs, d) != delta:
        raise ValueError("product is not the long cycle")
    pl, pr = fs[0], fs[-1]
    new_left = delta * pr * delta.inverse() * pl
    return (new_left, *fs[1:-1], Permutation.identity(d))


# -- basketballs ----------------------------------------------------------

def side_position(sym: str, m: int) -> int:
    """Position of a side on the counterclockwise ``4d``-gon, 1-based."""
    return 4 * m - 3 + "TLBR".index(sym)


def _tb_chords(pl: Permutation) -> list[tuple[int, int]]:
    d = pl.n
    return [(side_position("B", a), side_position("T", pl(a))) for a in range(1, d + 1)]


def _lr_chords(pb: Permutation) -> list[tuple[int, int]]:
    d = pb.n
    return [(side_position("R", a), side_position("L", pb(a))) for a in range(1, d + 1)]


def _cross(c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    a, b = sorted(c1)
    return (a < c2[0] < b) != (a < c2[1] < b)


def basketball_partition(pl: Permutation, pb: Permutation) -> SetPartition | None:
    """Merge each top-bottom chord with the single left-right chord it crosses.

    Returns the resulting partition of ``[4d]``, or ``None`` when some chord
    crosses zero or several chords of the other matching.
    """
    tb, lr = _tb_chords(pl), _lr_chords(pb)
    blocks = []
    hit = Counter()
    for c in tb:
        xs = [k for k, e in enumerate(lr) if _cross(c, e)]
        if len(xs) != 1:
            return None
        hit[xs[0]] += 1
        blocks.append(c + lr[xs[0]])
    if len(hit) != len(lr):
        return None
    return SetPartition(4 * pl.n, blocks)


def is_basketball(pl: Permutation, pb: Permutation) -> bool:
    """Left and bottom permutations form a basketball: the merged partition
    of the ``4d`` sides is noncrossing with all blocks of size 4."""
    if pl.n != pb.n:
        raise ValueError("degree mismatch")
    for p in (pl, pb):
        if not is_noncrossing_perm(p):
            raise ValueError(f"{p} is not a noncrossing permutation")
    part = basketball_partition(pl, pb)
    return part is not None and all(len(b) == 4 for b in part.blocks) and is_noncrossing(part)


@lru_cache(maxsize=None)
def basketball_table(d: int) -> tuple[tuple[bool, ...], ...]:
    """``table[i][j]`` tells whether ``(ncperms(d)[i], ncperms(d)[j])`` is a basketball."""
    els = ncperms(d)
    return tuple(tuple(is_basketball(a, b) for b in els) for a in els)


def basketball_pairs(d: int) -> list[tuple[Permutation, Permutation]]:
    els = ncperms(d)
    tab = basketball_table(d)
    return [(els[i], els[j]) for i in range(len(els)) for j in range(len(els)) if tab[i][j]]


# -- rectangle complex ----------------------------------------------------

@dataclass(frozen=True)
class RectangleCellLabel:
    left_chain: NCChain
    bottom_chain: NCChain

    def __post_init__(self):
        if self.left_chain.d != self.bottom_chain.d:
            raise ValueError("degree mismatch")
        for a in self.left_chain.perms():
            for b in self.bottom_chain.perms():
                if not is_basketball(a, b):
                    raise ValueError(f"({a}, {b}) is not a basketball")

    @property
    def bidimension(self) -> tuple[int, int]:
        return len(self.left_chain) - 1, len(self.bottom_chain) - 1

    def faces(self) -> list["RectangleCellLabel"]:
        """Codimension-one faces: drop one element from either chain."""
        out = []
        for chain, other, left in ((self.left_chain, self.bottom_chain, True),
                                   (self.bottom_chain, self.left_chain, False)):
            if len(chain) < 2:
                continue
            for k in range(len(chain)):
                sub = NCChain(e for i, e in enumerate(chain) if i != k)
                out.append(RectangleCellLabel(sub, other) if left else RectangleCellLabel(other, sub))
        return out

    def to_json(self) -> dict:
        return {"left_chain": self.left_chain.to_json(), "bottom_chain": self.bottom_chain.to_json()}


@dataclass(frozen=True)
class RectangleStats:
    d: int
    vertices: int
    top_cells: int
    cells_by_bidim: dict

    @property
    def euler(self) -> int:
        return sum((-1) ** (i + j) * c for (i, j), c in self.cells_by_bidim.items())

    def to_json(self) -> dict:
        by_dim: Counter = Counter()
        for (i, j), c in self.cells_by_bidim.items():
            by_dim[i + j] += c
        return {
            "d": self.d,
            "vertices": self.vertices,
            "top_cells": self.top_cells,
            "cells_by_bidim": {f"{i},{j}": c for (i, j), c in sorted(self.cells_by_bidim.items())},
            "cells_by_dim": [by_dim[k] for k in range(max(by_dim) + 1)] if by_dim else [],
            "euler": self.euler,
        }


def _chain_index_lists(d: int) -> list[tuple[int, ...]]:
    els = ncperms(d)
    pos = {p: i for i, p in enumerate(els)}
    return [tuple(pos[p] for p in ch) for ch in all_chains(d)]


def _count_chains_in(subset: Sequence[int], below: Sequence[Sequence[bool]], lens) -> Counter:
    # chains (any length) inside a subset of the poset, by number of elements
    order = sorted(subset, key=lambda i: lens[i])
    ending: dict[int, Counter] = {}
    total: Counter = Counter()
    for b in order:
        c = Counter({1: 1})
        for a in order:
            if lens[a] >= lens[b]:
                break
            if below[a][b]:
                for k, v in ending[a].items():
                    c[k + 1] += v
        ending[b] = c
        total.update(c)
    return total


def rectangle_complex_stats(d: int, with_bidim: bool = True) -> RectangleStats:
    """Vertices, top cells and (optionally) cells per bidimension.

    A cell is a pair (left chain, bottom chain) that is basketball-compatible
    at every pair of elements.
    """
    if not 1 <= d <= 5:
        raise ValueError("d must lie in 1..5")
    els = ncperms(d)
    tab = basketball_table(d)
    vertices = sum(sum(r) for r in tab)
    if d == 1:
        return RectangleStats(d, vertices, vertices, {(0, 0): vertices})
    pos = {p: i for i, p in enumerate(els)}
    mc = [tuple(pos[perm_of(e)] for e in ch) for ch in maximal_chains(d)]
    ok_left = {}
    top = 0
    for a in mc:
        if a not in ok_left:
            ok_left[a] = [j for j in range(len(els)) if all(tab[i][j] for i in a)]
        allowed = set(ok_left[a])
        top += sum(1 for b in mc if allowed.issuperset(b))
    bidim: dict = {}
    if with_bidim:
        lens = [absolute_length(x) for x in els]
        below = [[absolute_leq(x, y) and x != y for y in els] for x in els]
        for ch in _chain_index_lists(d):
            allowed = [j for j in range(len(els)) if all(tab[i][j] for i in ch)]
            for k, v in _count_chains_in(allowed, below, lens).items():
                key = (len(ch) - 1, k - 1)
                bidim[key] = bidim.get(key, 0) + v
    return RectangleStats(d, vertices, top, bidim)


# -- annulus --------------------------------------------------------------

@dataclass(frozen=True)
class AnnulusRepresentative:
    """Standard representative: left chain ending at ``delta`` plus bottom chain."""

    left_perms: tuple[Permutation, ...]
    bottom_perms: tuple[Permutation, ...]

    def key(self) -> tuple:
        return tuple(p.image for p in self.left_perms), tuple(p.image for p in self.bottom_perms)


def horizontal_constellation(left: Sequence[Permutation]) -> tuple[Permutation, ...]:
    """``[pL_1, sigma_1, ..., sigma_{k-1}, pR_k]`` for a left chain."""
    d = left[0].n
    delta = long_cycle(d)
    return (left[0], *edge_labels(left), left[-1].inverse() * delta)


def standardize_annulus(left: Sequence[Permutation],
                        bottom: Sequence[Permutation]) -> AnnulusRepresentative:
    """Apply the circle standardization to the horizontal constellation.

    The new left chain is rebuilt from the standardized constellation, so its
    last element is ``delta`` and the right side becomes regular.  The bottom
    chain is carried along unchanged; no normal form is attempted for it.
    """
    left = tuple(left)
    bottom = tuple(bottom)
    std = standardize_circle(horizontal_constellation(left))
    chain = [std[0]]
    for s in std[1:-1]:
        chain.append(chain[-1] * s)
    return AnnulusRepresentative(tuple(chain), bottom)


def annulus_vertex_classes(d: int) -> set[tuple]:
    """Identified classes of rectangle vertices under standardization."""
    return {standardize_annulus([a], [b]).key() for a, b in basketball_pairs(d)}


# -- orthoschemes ---------------------------------------------------------

@dataclass(frozen=True)
class OrthoschemePoint:
    """A multiset in ``[xl, xr]`` recorded as a linear composition plus the
    strictly increasing interior coordinates."""

    composition: LinearComposition
    interior_points: tuple[float, ...]
    interval: tuple[float, float]

    def __post_init__(self):
        xl, xr = self.interval
        if not xl < xr:
            raise ValueError("interval must have xl < xr")
        if len(self.interior_points) != len(self.composition.interior):
            raise ValueError("one interior point per interior entry")
        pts = self.interior_points
        if any(not xl < x < xr for x in pts) or any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("interior points must increase strictly inside the interval")

    @property
    def n(self) -> int:
        return self.composition.n

    def weights(self) -> tuple[float, ...]:
        """Relative widths of the subintervals cut out by the interior points."""
        xl, xr = self.interval
        cuts = (xl, *self.interior_points, xr)
        return tuple((b - a) / (xr - xl) for a, b in zip(cuts, cuts[1:]))

    def sorted_coordinates(self) -> tuple[float, ...]:
        xl, xr = self.interval
        vals = (xl, *self.interior_points, xr)
        return tuple(v for v, m in zip(vals, self.composition.entries) for _ in range(m))

    def multiset(self) -> list[tuple[float, int]]:
        xl, xr = self.interval
        vals = (xl, *self.interior_points, xr)
        return [(v, m) for v, m in zip(vals, self.composition.entries) if m > 0]


def orthoscheme_point_of_multiset(values: Iterable[float] | Iterable[tuple[float, int]],
                                  interval: tuple[float, float]) -> OrthoschemePoint:
    """Accepts plain values (repeats allowed) or ``(value, multiplicity)`` pairs."""
    xl, xr = interval
    counts: Counter = Counter()
    for v in values:
        if isinstance(v, tuple):
            counts[float(v[0])] += int(v[1])
        else:
            counts[float(v)] += 1
    for v in counts:
        if not xl <= v <= xr:
            raise ValueError(f"value {v} lies outside [{xl}, {xr}]")
    inner = sorted(v for v in counts if xl < v < xr)
    comp = LinearComposition([counts.get(xl, 0), *(counts[v] for v in inner), counts.get(xr, 0)])
    return OrthoschemePoint(comp, tuple(inner), (float(xl), float(xr)))


def orthoscheme_distance(a: OrthoschemePoint, b: OrthoschemePoint) -> float:
    """Euclidean distance between sorted-coordinate representatives in the cube."""
    if a.n != b.n or a.interval != b.interval:
        raise ValueError("points do not lie in a common orthoscheme")
    return math.dist(a.sorted_coordinates(), b.sorted_coordinates())


def orthoscheme_distance_bruteforce(a: OrthoschemePoint, b: OrthoschemePoint) -> float:
    """Minimum cube distance over all relabelings of the second point."""
    xa, xb = a.sorted_coordinates(), b.sorted_coordinates()
    return min(math.dist(xa, p) for p in _perms(xb))


def expected_counts(d: int) -> dict:
    """Closed-form counts used as references."""
    from .nc_core import fuss_catalan
    return {
        "ncpart": catalan(d),
        "maximal_chains": d ** (d - 2) if d >= 2 else 1,
        "basketballs": fuss_catalan(d, 4),
        "rectangle_top": math.factorial(d - 1) * d ** (d - 2) if d >= 2 else 1,
    }


__all__ = [
    "ComplexStats", "DualBraidSimplex", "OrderComplexPoint",
    "OrthoschemePoint", "RectangleCellLabel", "RectangleStats", "AnnulusRepresentative",
    "annulus_vertex_classes", "basketball_pairs", "basketball_partition", "basketball_table",
    "dual_braid_cells_bruteforce", "dual_braid_complex_stats", "edge_labels",
    "horizontal_constellation", "is_basketball", "orthoscheme_distance",
    "orthoscheme_distance_bruteforce", "orthoscheme_point_of_multiset",
    "rectangle_complex_stats", "standardize_annulus", "standardize_circle",
]
