"""Fibers, path continuation, loop monodromy, side chains and multiset path lifting.

Conventions
-----------
* The basepoint is the bottom-left corner ``(xl, yb)`` of a working rectangle
  that contains the chosen critical-value rectangle in its interior.
* Fiber points are labeled ``1..d`` by following a path that runs right along
  the bottom edge, then to the real axis, then out to a large real ``R``; the
  preimage ending near ``R^(1/d) * exp(2 pi i k / d)`` gets label ``k``
  (``k = 0`` is read as ``d``).
* The monodromy permutation of a loop is the inverse of its lift map.  With
  right-to-left composition, a loop traversed before another contributes the
  left factor, and a clockwise loop around everything gives ``(1 2 ... d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hurwitz import Constellation
from .nc_core import Permutation
from .nc_lattice import NCChain, long_cycle, partition_of_perm
from .poly_numeric import (
    chart_system,
    poly_from_critical,
    ComplexPoly,
    NumericalFailure,
    NumericMultiset,
    Rectangle,
    critical_data,
    roots,
)


class ClearanceError(NumericalFailure):
    """A path passes too close to a critical value."""


class ContinuationError(NumericalFailure):
    """Step size fell below the floor while tracking a fiber."""


class InvariantViolation(RuntimeError):
    """A computed object breaks one of its structural identities."""


MIN_STEP = 2.0 ** -20
INITIAL_STEP = 1 / 64
MAX_STEP = 1 / 4


def _hv(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, c[0])
    for a in c[1:]:
        acc = acc * z + a
    return acc


@dataclass(frozen=True)
class PathSpec:
    vertices: tuple[complex, ...]
    closed: bool = False

    def __post_init__(self):
        vs = self.vertices
        if len(vs) < 1:
            raise ValueError("a path needs at least one vertex")
        if any(a == b for a, b in zip(vs, vs[1:])):
            raise ValueError("consecutive vertices must differ")
        if self.closed and vs[0] != vs[-1]:
            raise ValueError("a closed path must end where it starts")

    @classmethod
    def polyline(cls, *pts: complex, closed: bool = False) -> "PathSpec":
        out = [complex(pts[0])]
        for p in pts[1:]:
            if complex(p) != out[-1]:
                out.append(complex(p))
        return cls(tuple(out), closed)

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(reversed(self.vertices)), self.closed)


@dataclass(frozen=True)
class LabeledFiber:
    """``points[k-1]`` is the preimage of the basepoint carrying label ``k``."""

    poly: ComplexPoly
    basepoint: complex
    points: tuple[complex, ...]


def _sep(z: np.ndarray) -> float:
    if z.size < 2:
        return math.inf
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def fiber(p: ComplexPoly, w: complex, tol: float | None = None,
          cvl: Sequence[complex] | None = None) -> np.ndarray:
    """The ``d`` solutions of ``p(z) = w``; ``w`` must be a regular value."""
    if cvl is None:
        cvl = critical_data(p).cvl.points
    scale = 1 + max([abs(w)] + [abs(v) for v in cvl])
    tol = 1e-9 * scale if tol is None else tol
    if cvl and min(abs(w - v) for v in cvl) <= tol:
        raise ClearanceError(f"{w} is within {tol} of a critical value")
    c = np.array(p.coeffs)
    c[-1] -= w
    ms = roots(c, tol=0.0)
    if sum(ms.mult) != p.degree or len(ms.points) != p.degree:
        raise NumericalFailure("fiber over a regular value is not simple")
    pts = np.array(ms.points, dtype=complex)
    dc = np.polyder(c)
    for _ in range(3):
        pts = pts - np.polyval(c, pts) / np.polyval(dc, pts)
    return pts


def _segment_clearance(a: complex, b: complex, pts: Sequence[complex]) -> float:
    if not pts:
        return math.inf
    ab = b - a
    L2 = abs(ab) ** 2
    best = math.inf
    for v in pts:
        t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((v - a) * ab.conjugate()).real / L2))
        best = min(best, abs(a + t * ab - v))
    return best


def _track(c: np.ndarray, dc: np.ndarray, z: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Predictor-corrector continuation of all fiber points over ``[a, b]``."""
    z = np.array(z, dtype=complex)
    t = 0.0
    h = INITIAL_STEP
    delta = b - a
    while t < 1.0:
        h = min(h, 1.0 - t)
        sep = _sep(z)
        w1 = a + (t + h) * delta
        zp = z + h * delta / _hv(dc, z)
        pred = zp.copy()
        ok = False
        for _ in range(8):
            step = (_hv(c, zp) - w1) / _hv(dc, zp)
            zp = zp - step
            if not np.all(np.isfinite(zp)):
                break
            if np.all(np.abs(step) <= 1e-13 * (1 + np.abs(zp))):
                ok = True
                break
        if ok:
            moved = float(np.max(np.abs(zp - z)))
            corr = float(np.max(np.abs(zp - pred)))
            ok = moved < 0.25 * sep and corr < 0.1 * sep and _sep(zp) > 0.5 * sep
        if ok:
            z = zp
            t += h
            h = min(2 * h, MAX_STEP)
        else:
            h /= 2
            if h < MIN_STEP:
                raise ContinuationError(f"step size underflow near w = {a + t * delta}")
    return z


def _pcoeffs(p: ComplexPoly) -> tuple[np.ndarray, np.ndarray]:
    c = np.array(p.coeffs)
    return c, np.polyder(c)


def continue_points(p: ComplexPoly, start: Sequence[complex], path: PathSpec,
                    cvl: Sequence[complex] | None = None,
                    clearance: float | None = None,
                    refine: int = 1) -> np.ndarray:
    """Track the given fiber points along every segment of ``path``.

    ``refine`` splits each segment into that many equal pieces first.
    """
    if cvl is None:
        cvl = critical_data(p).cvl.points
    scale = 1 + max([abs(v) for v in cvl], default=0.0)
    clearance = 1e-7 * scale if clearance is None else clearance
    c, dc = _pcoeffs(p)
    z = np.array(start, dtype=complex)
    vs = path.vertices
    for a, b in zip(vs, vs[1:]):
        if _segment_clearance(a, b, cvl) < clearance:
            raise ClearanceError(f"segment {a} -> {b} passes within {clearance} of a critical value")
        for r in range(refine):
            z = _track(c, dc, z, a + (b - a) * r / refine, a + (b - a) * (r + 1) / refine)
    return z


def continue_fiber(p: ComplexPoly, start: LabeledFiber, path: PathSpec,
                   clearance: float | None = None, refine: int = 1) -> LabeledFiber:
    """Transport labels along ``path``; the result is based at the path's end."""
    if abs(path.vertices[0] - start.basepoint) > 1e-12 * (1 + abs(start.basepoint)):
        raise ValueError("path must start at the fiber's basepoint")
    z = continue_points(p, start.points, path, clearance=clearance, refine=refine)
    return LabeledFiber(p, path.vertices[-1], tuple(complex(x) for x in z))


def _match(end: np.ndarray, target: np.ndarray) -> list[int]:
    """Index in ``target`` of each endpoint; fails unless it is a bijection."""
    sep = _sep(np.asarray(target))
    idx = []
    for x in end:
        dist = np.abs(target - x)
        k = int(np.argmin(dist))
        if dist[k] > 0.25 * sep and dist[k] > 1e-8 * (1 + abs(x)):
            raise NumericalFailure("continued points do not land on the fiber")
        idx.append(k)
    if len(set(idx)) != len(idx):
        raise NumericalFailure("continued points collide")
    return idx


def _default_working(p: ComplexPoly, cvl: Sequence[complex]) -> Rectangle:
    from .poly_numeric import bounding_rectangle
    return bounding_rectangle(list(cvl) or [0j], margin=0.5)


def labeling_path(basepoint: complex, cvl: Sequence[complex], R: float) -> PathSpec:
    """Route from the basepoint below all critical values, then out along the
    positive real axis to ``R``."""
    xs = [v.real for v in cvl] or [basepoint.real]
    ys = [v.imag for v in cvl] or [basepoint.imag]
    spread = 1 + max(xs) - min(xs) + max(ys) - min(ys)
    y_low = min(basepoint.imag, min(ys) - 0.25 * spread)
    x_far = max(basepoint.real, max(xs) + 0.25 * spread, 1.0)
    pts = [basepoint, complex(basepoint.real, y_low), complex(x_far, y_low), complex(x_far, 0)]
    x = x_far
    while x < R:
        x = min(2 * x, R)
        pts.append(complex(x, 0))
    return PathSpec.polyline(*pts)


def _ray_labels(p: ComplexPoly, z: np.ndarray) -> list[int] | None:
    d = p.degree
    shift = p.coeffs[1] / d
    out = []
    for x in z:
        ang = np.angle(x + shift) % (2 * np.pi)
        k = int(round(ang * d / (2 * np.pi))) % d
        dev = abs(((ang - 2 * np.pi * k / d) + np.pi) % (2 * np.pi) - np.pi)
        if dev > np.pi / (3 * d):
            return None
        out.append(d if k == 0 else k)
    return out if len(set(out)) == d else None


def standard_labels(p: ComplexPoly, basepoint: complex, R: float | None = None,
                    cvl: Sequence[complex] | None = None) -> LabeledFiber:
    """Label the fiber over ``basepoint`` by continuation to a large real value."""
    if cvl is None:
        cvl = critical_data(p).cvl.points
    d = p.degree
    pts = fiber(p, basepoint, cvl=cvl)
    if d == 1:
        return LabeledFiber(p, basepoint, (complex(pts[0]),))
    c = np.asarray(p.coeffs)
    B = 2 * max(abs(c[k]) ** (1 / k) for k in range(1, d + 1))
    R0 = max(4.0, (4 * (B + 1)) ** d) if R is None else R
    path = labeling_path(basepoint, cvl, R0)
    z = continue_points(p, pts, path, cvl=cvl)
    for _ in range(20):
        labs = _ray_labels(p, z)
        if labs is not None:
            break
        R1 = path.vertices[-1].real
        ext = PathSpec.polyline(complex(R1), complex(R1 * 2 ** d))
        z = continue_points(p, z, ext, cvl=cvl)
        path = PathSpec.polyline(*path.vertices, complex(R1 * 2 ** d))
    else:
        raise NumericalFailure("could not separate fiber points along the real ray")
    ordered = [0j] * d
    for x, k in zip(pts, labs):
        ordered[k - 1] = complex(x)
    return LabeledFiber(p, basepoint, tuple(ordered))


def lift_map(p: ComplexPoly, fib: LabeledFiber, loop: PathSpec,
             cvl: Sequence[complex] | None = None, refine: int = 1) -> Permutation:
    """``f(i) = j`` when the lift starting at ``z_i`` ends at ``z_j``."""
    if not loop.closed:
        raise ValueError("monodromy needs a closed loop")
    z = continue_points(p, fib.points, loop, cvl=cvl, refine=refine)
    idx = _match(z, np.array(fib.points))
    return Permutation(k + 1 for k in idx)


def loop_monodromy(p: ComplexPoly, fib: LabeledFiber, loop: PathSpec,
                   cvl: Sequence[complex] | None = None, refine: int = 1) -> Permutation:
    """Monodromy permutation: the inverse of the lift map."""
    return lift_map(p, fib, loop, cvl=cvl, refine=refine).inverse()


def rectangle_loop(r: Rectangle) -> PathSpec:
    """Clockwise boundary of ``r`` based at its bottom-left corner."""
    z = complex(r.xl, r.yb)
    return PathSpec.polyline(z, complex(r.xl, r.yt), complex(r.xr, r.yt), complex(r.xr, r.yb), z,
                             closed=True)


# -- grid transport -------------------------------------------------------

class _Grid:
    """Fibers at grid nodes and transport maps along unit grid edges."""

    def __init__(self, p: ComplexPoly, xs: Sequence[float], ys: Sequence[float], cvl):
        self.p = p
        self.xs = list(xs)
        self.ys = list(ys)
        self.cvl = list(cvl)
        self._fib: dict = {}
        self._edge: dict = {}
        self.c, self.dc = _pcoeffs(p)

    def node_fiber(self, i: int, j: int) -> np.ndarray:
        key = (i, j)
        if key not in self._fib:
            self._fib[key] = fiber(self.p, complex(self.xs[i], self.ys[j]), cvl=self.cvl)
        return self._fib[key]

    def edge(self, u: tuple[int, int], v: tuple[int, int]) -> list[int]:
        if (u, v) in self._edge:
            return self._edge[(u, v)]
        a = complex(self.xs[u[0]], self.ys[u[1]])
        b = complex(self.xs[v[0]], self.ys[v[1]])
        z = continue_points(self.p, self.node_fiber(*u), PathSpec.polyline(a, b), cvl=self.cvl)
        m = _match(z, self.node_fiber(*v))
        inv = [0] * len(m)
        for s, t in enumerate(m):
            inv[t] = s
        self._edge[(u, v)] = m
        self._edge[(v, u)] = inv
        return m

    def walk(self, nodes: Sequence[tuple[int, int]]) -> list[int]:
        """Lift map along a closed walk through grid nodes (axis-parallel moves)."""
        start = nodes[0]
        cur = list(range(len(self.node_fiber(*start))))
        for u, v in zip(nodes, nodes[1:]):
            for a, b in _unit_steps(u, v):
                m = self.edge(a, b)
                cur = [m[k] for k in cur]
        return cur


def _unit_steps(u, v):
    (i0, j0), (i1, j1) = u, v
    if i0 != i1 and j0 != j1:
        raise ValueError("grid moves must be axis parallel")
    out = []
    if i0 != i1:
        s = 1 if i1 > i0 else -1
        for i in range(i0, i1, s):
            out.append(((i, j0), (i + s, j0)))
    else:
        s = 1 if j1 > j0 else -1
        for j in range(j0, j1, s):
            out.append(((i0, j), (i0, j + s)))
    return out


def _columns(values: Sequence[float], lo: float, hi: float, tol: float) -> list[float]:
    """Vertices of the subdivided interval: the ends plus distinct interior values."""
    inner = sorted(v for v in values if lo + tol < v < hi - tol)
    out = [lo]
    for v in inner:
        if v - out[-1] > tol:
            out.append(v)
        else:
            out[-1] = (out[-1] + v) / 2 if len(out) > 1 else out[-1]
    if hi - out[-1] <= tol and len(out) > 1:
        out.pop()
    out.append(hi)
    return out


@dataclass
class SideChains:
    left: NCChain
    right: NCChain
    bottom: NCChain
    top: NCChain
    left_weights: tuple[float, ...]
    bottom_weights: tuple[float, ...]
    rectangle: Rectangle
    left_perms: tuple[Permutation, ...] = field(repr=False)
    right_perms: tuple[Permutation, ...] = field(repr=False)
    bottom_perms: tuple[Permutation, ...] = field(repr=False)
    top_perms: tuple[Permutation, ...] = field(repr=False)
    x_arcs: tuple[float, ...] = field(repr=False)
    y_arcs: tuple[float, ...] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "left_chain": self.left.to_json(), "right_chain": self.right.to_json(),
            "bottom_chain": self.bottom.to_json(), "top_chain": self.top.to_json(),
            "left_weights": list(self.left_weights), "bottom_weights": list(self.bottom_weights),
            "rectangle": self.rectangle.to_json(),
        }


@dataclass(frozen=True)
class GeoComPoint:
    left_chain: NCChain
    left_weights: tuple[float, ...]
    bottom_chain: NCChain
    bottom_weights: tuple[float, ...]

    def to_json(self) -> dict:
        return {"left_chain": self.left_chain.to_json(), "left_weights": list(self.left_weights),
                "bottom_chain": self.bottom_chain.to_json(), "bottom_weights": list(self.bottom_weights)}


class RectangleAnalysis:
    """Monodromy data of ``p`` relative to a critical-value rectangle."""

    def __init__(self, p: ComplexPoly, rect: Rectangle, tol: float | None = None,
                 margin: float = 0.2, seed: int = 0):
        cd = critical_data(p, seed=seed)
        self.p = p
        self.rect = rect
        self.cvl = list(cd.cvl.points)
        scale = 1 + max([abs(v) for v in self.cvl] + [abs(rect.xl), abs(rect.xr), abs(rect.yb), abs(rect.yt)])
        self.tol = 1e-7 * scale if tol is None else tol
        for v in self.cvl:
            if not rect.contains(v, self.tol):
                raise ValueError(f"critical value {v} lies outside the rectangle")
        w, h = rect.xr - rect.xl, rect.yt - rect.yb
        gap = margin * max(w, h)
        self.Q = rect.expanded(gap)
        self.I_vertices = _columns([v.real for v in self.cvl], rect.xl, rect.xr, self.tol)
        self.J_vertices = _columns([v.imag for v in self.cvl], rect.yb, rect.yt, self.tol)
        xa = [(a + b) / 2 for a, b in zip(self.I_vertices, self.I_vertices[1:])]
        ya = [(a + b) / 2 for a, b in zip(self.J_vertices, self.J_vertices[1:])]
        self.x_arcs, self.y_arcs = xa, ya
        self.grid = _Grid(p, [self.Q.xl, *xa, self.Q.xr], [self.Q.yb, *ya, self.Q.yt], self.cvl)
        self.basepoint = complex(self.Q.xl, self.Q.yb)
        self.labels = standard_labels(p, self.basepoint, cvl=self.cvl)
        base = self.grid.node_fiber(0, 0)
        # position in the node fiber -> label
        self._label_of = [0] * p.degree
        for k, zk in enumerate(self.labels.points):
            self._label_of[int(np.argmin(np.abs(base - zk)))] = k + 1
        if sorted(self._label_of) != list(range(1, p.degree + 1)):
            raise NumericalFailure("labels do not match the basepoint fiber")

    @property
    def k(self) -> int:
        return len(self.x_arcs)

    @property
    def l(self) -> int:
        return len(self.y_arcs)

    def _monodromy(self, nodes) -> Permutation:
        m = self.grid.walk(nodes)
        lab = self._label_of
        f = [0] * len(m)
        for s, t in enumerate(m):
            f[lab[s] - 1] = lab[t]
        return Permutation(f).inverse()

    # node indices: x in 0..k+1 (0 = Q.xl, k+1 = Q.xr), y in 0..l+1
    def left_perm(self, i: int) -> Permutation:
        """Clockwise loop around the part of the working rectangle left of arc ``i``."""
        T = self.l + 1
        return self._monodromy([(0, 0), (0, T), (i, T), (i, 0), (0, 0)])

    def right_perm(self, i: int) -> Permutation:
        R, T = self.k + 1, self.l + 1
        return self._monodromy([(0, 0), (i, 0), (i, T), (R, T), (R, 0), (0, 0)])

    def bottom_perm(self, j: int) -> Permutation:
        R = self.k + 1
        return self._monodromy([(0, 0), (0, j), (R, j), (R, 0), (0, 0)])

    def top_perm(self, j: int) -> Permutation:
        R, T = self.k + 1, self.l + 1
        return self._monodromy([(0, 0), (0, j), (0, T), (R, T), (R, j), (0, j), (0, 0)])

    def sigma(self, i: int) -> Permutation:
        """Loop around the vertical strip between arcs ``i`` and ``i+1``, via the bottom."""
        T = self.l + 1
        return self._monodromy([(0, 0), (i, 0), (i, T), (i + 1, T), (i + 1, 0), (0, 0)])

    def tau(self, j: int) -> Permutation:
        """Loop around the horizontal strip between arcs ``j`` and ``j+1``, via the left."""
        R = self.k + 1
        return self._monodromy([(0, 0), (0, j), (0, j + 1), (R, j + 1), (R, j), (0, j), (0, 0)])

    def global_perm(self) -> Permutation:
        R, T = self.k + 1, self.l + 1
        return self._monodromy([(0, 0), (0, T), (R, T), (R, 0), (0, 0)])

    def side_chains(self) -> SideChains:
        d = self.p.degree
        delta = long_cycle(d)
        L = [self.left_perm(i) for i in range(1, self.k + 1)]
        R = [self.right_perm(i) for i in range(1, self.k + 1)]
        B = [self.bottom_perm(j) for j in range(1, self.l + 1)]
        T = [self.top_perm(j) for j in range(1, self.l + 1)]
        for a, b in zip(L, R):
            if a * b != delta:
                raise InvariantViolation(f"left {a} times right {b} is not the long cycle")
        for a, b in zip(T, B):
            if a * b != delta:
                raise InvariantViolation(f"top {a} times bottom {b} is not the long cycle")
        try:
            left = NCChain(partition_of_perm(x) for x in L)
            right = NCChain(partition_of_perm(x) for x in reversed(R))
            bottom = NCChain(partition_of_perm(x) for x in B)
            top = NCChain(partition_of_perm(x) for x in reversed(T))
        except ValueError as exc:
            raise InvariantViolation(str(exc)) from exc
        return SideChains(
            left=left, right=right, bottom=bottom, top=top,
            left_weights=_bary(self.I_vertices), bottom_weights=_bary(self.J_vertices),
            rectangle=self.rect,
            left_perms=tuple(L), right_perms=tuple(R), bottom_perms=tuple(B), top_perms=tuple(T),
            x_arcs=tuple(self.x_arcs), y_arcs=tuple(self.y_arcs),
        )

    def side_constellations(self) -> tuple[Constellation, Constellation]:
        d = self.p.degree
        h = [self.left_perm(1)] + [self.sigma(i) for i in range(1, self.k)] + [self.right_perm(self.k)]
        v = [self.top_perm(self.l)] + [self.tau(j) for j in range(self.l - 1, 0, -1)] + [self.bottom_perm(1)]
        try:
            return Constellation(h, d), Constellation(v, d)
        except ValueError as exc:
            raise InvariantViolation(str(exc)) from exc


def _bary(vertices: Sequence[float]) -> tuple[float, ...]:
    total = vertices[-1] - vertices[0]
    ws = [(b - a) / total for a, b in zip(vertices, vertices[1:])]
    s = sum(ws)
    return tuple(w / s for w in ws)


def side_chains(p: ComplexPoly, rect: Rectangle, **kw) -> SideChains:
    return RectangleAnalysis(p, rect, **kw).side_chains()


def geocom(p: ComplexPoly, rect: Rectangle, **kw) -> GeoComPoint:
    sc = side_chains(p, rect, **kw)
    return GeoComPoint(sc.left, sc.left_weights, sc.bottom, sc.bottom_weights)


def side_constellations(p: ComplexPoly, rect: Rectangle, **kw) -> tuple[Constellation, Constellation]:
    return RectangleAnalysis(p, rect, **kw).side_constellations()


# -- lifting multiset paths -------------------------------------------------

def _assign(src: Sequence[complex], src_mass: Sequence[int],
            dst: Sequence[complex], dst_mass: Sequence[int]) -> list[int]:
    """Send each source cluster to one target point, preserving total mass.

    Clusters may merge but never split; raises ``ValueError`` otherwise.
    """
    from scipy.optimize import linear_sum_assignment

    rows = [i for i, w in enumerate(src_mass) for _ in range(w)]
    cols = [j for j, w in enumerate(dst_mass) for _ in range(w)]
    if len(rows) != len(cols):
        raise ValueError("multisets have different sizes")
    cost = np.abs(np.array([src[i] for i in rows])[:, None] - np.array([dst[j] for j in cols])[None, :])
    r, c = linear_sum_assignment(cost)
    out: list[int | None] = [None] * len(src)
    for a, b in zip(r, c):
        i, j = rows[a], cols[b]
        if out[i] is None:
            out[i] = j
        elif out[i] != j:
            raise ValueError("shape decrease detected: a critical value would split")
    return out  # type: ignore[return-value]


def _newton_chart(z, c, m, v, gauge, tol, iters=30):
    x = np.concatenate([z, [c]])
    k = len(z)
    for _ in range(iters):
        F, J = chart_system(x[None, :k], x[None, k], m, v[None, :], gauge)
        try:
            dx = np.linalg.solve(J[0], F[0])
        except np.linalg.LinAlgError:
            return None
        x = x - dx
        if not np.all(np.isfinite(x)):
            return None
        if np.max(np.abs(dx)) <= tol * (1 + np.max(np.abs(x))):
            return x[:k], x[k]
    return None


def _track_chart(z, c, m, v0, v1, gauge, t_end: float, tol: float):
    """Follow ``(z, c)`` while the target values move linearly from ``v0`` to ``v1``."""
    k = len(z)
    t, h = 0.0, INITIAL_STEP
    rhs = np.zeros(k + 1, dtype=complex)
    rhs[:k] = v1 - v0
    while t < t_end - 1e-15:
        h = min(h, t_end - t)
        _, J = chart_system(z[None], np.array([c]), m, (v0 + t * (v1 - v0))[None], gauge)
        try:
            dx = np.linalg.solve(J[0], rhs)
        except np.linalg.LinAlgError:
            raise ContinuationError("singular Jacobian without a merge event")
        sep = _sep(z) if k > 1 else 1.0 + abs(z[0])
        res = _newton_chart(z + h * dx[:k], c + h * dx[k], m, v0 + (t + h) * (v1 - v0), gauge, tol, iters=8)
        ok = res is not None and np.max(np.abs(res[0] - z)) < 0.25 * sep
        if ok:
            z, c = res
            t += h
            h = min(2 * h, INITIAL_STEP)
        else:
            h /= 2
            if h < MIN_STEP:
                raise ContinuationError("Jacobian near-singular without a merge event")
    return z, c


def lift_multiset_path(p0: ComplexPoly, targets: Sequence[NumericMultiset | Sequence[complex]],
                       tol: float = 1e-9, seed: int = 0) -> ComplexPoly:
    """Lift a piecewise-linear path of critical-value multisets starting at ``cvl(p0)``.

    Consecutive targets are joined by straight segments.  Shapes may only
    coarsen along the path; critical points whose values merge and whose
    positions converge are fused into a single point of higher multiplicity.
    """
    tg = [t if isinstance(t, NumericMultiset) else NumericMultiset.from_values(t) for t in targets]
    cd = critical_data(p0, seed=seed)
    d = p0.degree
    if d < 2:
        return p0
    z = np.array(cd.cpt.points, dtype=complex)
    m = list(cd.cpt.mult)
    gauge = complex(np.dot(m, z))
    c = complex(p0.coeffs[-1])
    vals = np.array([p0(x) for x in z], dtype=complex)
    scale = 1 + max(abs(v) for v in vals)
    mtol = 1e-6 * scale
    if not tg or not cd.cvl.matches(tg[0], mtol):
        raise ValueError("first target must equal the critical values of p0")
    for tgt in tg[1:]:
        # current cvl clusters, each a set of critical point indices
        groups: list[list[int]] = []
        for i, v in enumerate(vals):
            for g in groups:
                if abs(vals[g[0]] - v) <= mtol:
                    g.append(i)
                    break
            else:
                groups.append([i])
        f = _assign([vals[g[0]] for g in groups], [sum(m[i] for i in g) for g in groups],
                    list(tgt.points), list(tgt.mult))
        v1 = np.empty(len(z), dtype=complex)
        for g, j in zip(groups, f):
            v1[g] = tgt.points[j]
        # pairs whose values coincide at the end but not now may need fusing
        meeting = [(a, b) for a in range(len(z)) for b in range(a + 1, len(z))
                   if abs(v1[a] - v1[b]) <= mtol and abs(vals[a] - vals[b]) > mtol]
        if not meeting:
            z, c = _track_chart(z, c, m, vals, v1, gauge, 1.0, tol)
            res = _newton_chart(z, c, m, v1, gauge, tol)
            if res is None:
                raise NumericalFailure("Newton polish failed at the end of a segment")
            z, c = res
        else:
            z, c, m = _endgame(z, c, m, vals, v1, gauge, tol, meeting)
        vals = np.array([poly_from_critical(z, m, c)(x) for x in z], dtype=complex)
        gauge = complex(np.dot(m, z))
    out = poly_from_critical(z, m, c)
    if not critical_data(out, seed=seed).cvl.matches(tg[-1], 1e-6 * scale):
        raise NumericalFailure("lifted polynomial misses the final target")
    return out


def _endgame(z, c, m, v0, v1, gauge, tol, meeting):
    """Approach ``t = 1`` geometrically and fuse critical points that collide."""
    t1, t2 = 1 - 1e-4, 1 - 1e-6
    za, ca = _track_chart(z, c, m, v0, v1, gauge, t1, tol)
    # restart from t1 on the sub-segment so the step schedule is relative
    va = v0 + t1 * (v1 - v0)
    zb, cb = _track_chart(za, ca, m, va, v1, gauge, (t2 - t1) / (1 - t1), tol)
    parent = list(range(len(z)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for a, b in meeting:
        da, db = abs(za[a] - za[b]), abs(zb[a] - zb[b])
        if db < da / 1.1:
            parent[find(a)] = find(b)
    clusters: dict[int, list[int]] = {}
    for i in range(len(z)):
        clusters.setdefault(find(i), []).append(i)
    groups = list(clusters.values())
    mz = np.array([sum(m[i] * zb[i] for i in g) / sum(m[i] for i in g) for g in groups])
    mm = [sum(m[i] for i in g) for g in groups]
    mv = np.array([v1[g[0]] for g in groups])
    res = _newton_chart(mz, cb, mm, mv, gauge, tol, iters=60)
    if res is None:
        raise NumericalFailure("Newton failed on the merged critical points")
    return res[0], res[1], mm
