"""Monic complex polynomials: roots, critical data, centering, the LL map and
the Jacobian of the critical-point to critical-value map."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .nc_core import IntegerPartition


class NumericalFailure(RuntimeError):
    """A numerical routine did not converge."""


class ComplexPoly:
    """Monic polynomial; ``coeffs`` are listed from the leading term down."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        c = np.asarray(list(coeffs), dtype=complex)
        if c.size < 2:
            raise ValueError("degree must be at least 1")
        if c[0] != 1:
            raise ValueError("leading coefficient must be 1")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "ComplexPoly":
        return cls(np.poly(np.asarray(roots, dtype=complex)))

    @classmethod
    def monomial(cls, d: int, c: complex = 0) -> "ComplexPoly":
        co = np.zeros(d + 1, dtype=complex)
        co[0], co[-1] = 1, c
        return cls(co)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polyval(self.coeffs, z)

    def derivative_coeffs(self, k: int = 1) -> np.ndarray:
        c = self.coeffs
        for _ in range(k):
            c = np.polyder(c)
        return c

    def shift(self, a: complex) -> "ComplexPoly":
        """The polynomial ``z -> p(z + a)``."""
        c = list(self.coeffs)
        n = len(c)
        # repeated synthetic division (Taylor shift)
        for i in range(n - 1):
            for j in range(1, n - i):
                c[j] += a * c[j - 1]
        return ComplexPoly(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def distance(self, other: "ComplexPoly") -> float:
        """Max coefficient difference."""
        return float(np.max(np.abs(self.coeffs - other.coeffs)))

    def __repr__(self) -> str:
        return f"ComplexPoly({[complex(x) for x in self.coeffs]})"

    def to_json(self) -> dict:
        return {"coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexPoly":
        raw = obj["coeffs"]
        return cls(_to_complex(x) for x in raw)


def _to_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex entries are [re, im] pairs, got {x}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", "").replace("i", "j"))
    return complex(x)


@dataclass(frozen=True)
class NumericMultiset:
    """Clustered complex points with multiplicities."""

    points: tuple[complex, ...]
    mult: tuple[int, ...]
    tol: float = 1e-7

    def __post_init__(self):
        if len(self.points) != len(self.mult):
            raise ValueError("points and multiplicities differ in length")
        if any(m <= 0 for m in self.mult):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_values(cls, values: Iterable[complex], tol: float = 1e-7) -> "NumericMultiset":
        vals = list(values)
        pts, mult = cluster(vals, [1] * len(vals), tol)
        return cls(tuple(pts), tuple(mult), tol)

    @property
    def size(self) -> int:
        return sum(self.mult)

    def expanded(self) -> list[complex]:
        return [p for p, m in zip(self.points, self.mult) for _ in range(m)]

    def shape(self) -> IntegerPartition:
        return IntegerPartition(self.mult)

    def sorted(self) -> "NumericMultiset":
        order = sorted(range(len(self.points)),
                       key=lambda i: (round(self.points[i].real, 9), round(self.points[i].imag, 9)))
        return NumericMultiset(tuple(self.points[i] for i in order),
                               tuple(self.mult[i] for i in order), self.tol)

    def matches(self, other: "NumericMultiset", tol: float) -> bool:
        """Multiset equality up to ``tol`` (greedy matching on expanded points)."""
        a, b = self.expanded(), list(other.expanded())
        if len(a) != len(b):
            return False
        for z in a:
            k = min(range(len(b)), key=lambda i: abs(b[i] - z))
            if abs(b[k] - z) > tol:
                return False
            b.pop(k)
        return True

    def to_json(self) -> dict:
        return {"points": [[float(z.real), float(z.imag)] for z in self.points],
                "mult": list(self.mult), "tol": self.tol}

    @classmethod
    def from_json(cls, obj: dict) -> "NumericMultiset":
        pts = [_to_complex(x) for x in obj["points"]]
        mult = obj.get("mult") or [1] * len(pts)
        tol = float(obj.get("tol", 1e-7))
        merged, mm = cluster(pts, list(mult), tol)
        return cls(tuple(merged), tuple(mm), tol)


def cluster(points: Sequence[complex], weights: Sequence[int], tol: float):
    """Single-linkage clustering at radius ``tol``; centroids are weighted."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    pts, mult = [], []
    for idx in sorted(groups.values(), key=lambda g: g[0]):
        w = sum(weights[i] for i in idx)
        pts.append(complex(sum(points[i] * weights[i] for i in idx) / w))
        mult.append(w)
    return pts, mult


@dataclass(frozen=True)
class Rectangle:
    xl: float
    xr: float
    yb: float
    yt: float

    def __post_init__(self):
        if not (self.xl < self.xr and self.yb < self.yt):
            raise ValueError("rectangle needs xl < xr and yb < yt")

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return (self.xl - tol <= z.real <= self.xr + tol) and (self.yb - tol <= z.imag <= self.yt + tol)

    def expanded(self, margin: float) -> "Rectangle":
        return Rectangle(self.xl - margin, self.xr + margin, self.yb - margin, self.yt + margin)

    def side_regularity(self, cvl: Iterable[complex], tol: float) -> dict[str, bool]:
        """Whether each side avoids the given critical values."""
        pts = list(cvl)

        def on(z, side):
            x, y = z.real, z.imag
            inx = self.xl - tol <= x <= self.xr + tol
            iny = self.yb - tol <= y <= self.yt + tol
            return {"left": abs(x - self.xl) <= tol and iny, "right": abs(x - self.xr) <= tol and iny,
                    "bottom": abs(y - self.yb) <= tol and inx, "top": abs(y - self.yt) <= tol and inx}[side]

        return {s: not any(on(z, s) for z in pts) for s in ("left", "right", "bottom", "top")}

    def to_json(self) -> dict:
        return {"xl": self.xl, "xr": self.xr, "yb": self.yb, "yt": self.yt}

    @classmethod
    def from_json(cls, obj: dict) -> "Rectangle":
        return cls(float(obj["xl"]), float(obj["xr"]), float(obj["yb"]), float(obj["yt"]))


# -- root finding ---------------------------------------------------------

def _aberth(c: np.ndarray, rng: np.random.Generator, maxiter: int = 500) -> tuple[np.ndarray, bool]:
    n = c.size - 1
    dc = np.polyder(c)
    # start on a circle of the Cauchy-bound radius around the root centroid
    # Fujiwara bound on the root moduli
    radius = 2 * max(abs(c[k]) ** (1 / k) for k in range(1, n + 1))
    center = -c[1] / n
    radius = max(radius / 2, 1e-3)
    phase = rng.uniform(0, 2 * np.pi)
    z = center + radius * np.exp(1j * (phase + 2 * np.pi * np.arange(n) / n + 0.4 / max(n, 1)))
    z = z * (1 + 1e-3 * rng.standard_normal(n))
    for _ in range(maxiter):
        pv = np.polyval(c, z)
        dv = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
        if not np.all(np.isfinite(w)):
            return z, False
        z = z - w
        if np.all(np.abs(w) <= 1e-15 * (1 + np.abs(z))):
            return z, True
    return z, True  # slow linear convergence near multiple roots is expected


def _scale(c: np.ndarray) -> float:
    return float(np.max(np.abs(c)))


def _newton_polish(c: np.ndarray, z: complex, iters: int = 8) -> complex:
    dc = np.polyder(c)
    for _ in range(iters):
        dv = np.polyval(dc, z)
        if dv == 0:
            break
        step = np.polyval(c, z) / dv
        if not np.isfinite(step):
            break
        z = z - step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return complex(z)


def _is_multiple_root(c: np.ndarray, z: complex, m: int, slack: float) -> bool:
    # backward-error test: p, p', ..., p^(m-1) all vanish to working precision at z
    eps = np.finfo(float).eps
    n = c.size - 1
    r = max(1.0, abs(z))
    cur = c
    for j in range(m):
        deg = cur.size - 1
        bound = np.sum(np.abs(cur) * r ** np.arange(deg, -1, -1))
        if abs(np.polyval(cur, z)) > slack * eps * (n + 1) * bound:
            return False
        cur = np.polyder(cur)
    return True


def roots(p: ComplexPoly | Sequence[complex], tol: float | None = None, seed: int = 0,
          restarts: int = 8) -> NumericMultiset:
    """Roots with multiplicity, by Aberth-Ehrlich iteration plus cluster analysis.

    Nearby approximations are merged into one multiple root only when the
    merged point passes a backward-error test for that multiplicity.
    """
    c = np.asarray(p.coeffs if isinstance(p, ComplexPoly) else p, dtype=complex)
    c = c / c[0]
    n = c.size - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n == 1:
        z0 = complex(-c[1])
        return NumericMultiset((z0,), (1,), tol if tol is not None else 1e-7 * (1 + abs(z0)))
    rng = np.random.default_rng(seed)
    for attempt in range(restarts + 1):
        z, ok = _aberth(c, rng)
        if ok and np.all(np.isfinite(z)):
            break
    else:
        raise NumericalFailure("Aberth iteration failed after restarts")
    if tol is None:
        tol = 1e-7 * (1 + float(np.max(np.abs(z))))
    pts, mult = _resolve_clusters(c, list(z), tol)
    return NumericMultiset(tuple(pts), tuple(mult), tol)


def _resolve_clusters(c: np.ndarray, z: list[complex], tol: float):
    scale = 1 + max(abs(x) for x in z)
    found: list[tuple[complex, int]] = []
    stack = [(list(range(len(z))), 1e-2 * scale)]
    while stack:
        idx, radius = stack.pop()
        if len(idx) == 1:
            found.append((_newton_polish(c, z[idx[0]]), 1))
            continue
        groups = _groups([z[i] for i in idx], radius)
        if len(groups) > 1:
            stack.extend(([idx[k] for k in g], radius) for g in groups)
            continue
        m = len(idx)
        centroid = sum(z[i] for i in idx) / m
        dm = c
        for _ in range(m - 1):
            dm = np.polyder(dm)
        cand = _newton_polish(dm, centroid)
        if abs(cand - centroid) < radius and _is_multiple_root(c, cand, m, slack=64.0):
            found.append((cand, m))
        elif radius / 16 < tol:
            found.extend((_newton_polish(c, z[i]), 1) for i in idx)
        else:
            stack.append((idx, radius / 16))
    found.sort(key=lambda t: (t[0].real, t[0].imag))
    return cluster([p for p, _ in found], [m for _, m in found], tol)


def _groups(pts: Sequence[complex], radius: float) -> list[list[int]]:
    n = len(pts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= radius:
                parent[find(i)] = find(j)
    out: dict[int, list[int]] = {}
    for i in range(n):
        out.setdefault(find(i), []).append(i)
    return list(out.values())


# -- critical data --------------------------------------------------------

@dataclass(frozen=True)
class CriticalData:
    cpt: NumericMultiset
    cvl: NumericMultiset
    lam: IntegerPartition
    mu: IntegerPartition
    grouping: tuple[tuple[int, ...], ...]
    """For each critical value, the multiplicities of the critical points over it."""

    def to_json(self) -> dict:
        return {"cpt": self.cpt.to_json(), "cvl": self.cvl.to_json(),
                "lambda": list(self.lam.parts), "mu": list(self.mu.parts),
                "grouping": [list(g) for g in self.grouping]}


def critical_data(p: ComplexPoly, tol: float | None = None, seed: int = 0) -> CriticalData:
    """Critical points, critical values and their shapes."""
    d = p.degree
    if d < 2:
        empty = NumericMultiset((), (), tol or 1e-7)
        return CriticalData(empty, empty, IntegerPartition([]), IntegerPartition([]), ())
    dp = p.derivative_coeffs() / d
    cpt = roots(dp, tol=tol, seed=seed)
    vals = [complex(p(z)) for z in cpt.points]
    vtol = tol if tol is not None else 1e-7 * (1 + max(abs(v) for v in vals))
    groups = _groups(vals, vtol)
    pts, mult, grouping = [], [], []
    for g in sorted(groups, key=lambda g: g[0]):
        w = sum(cpt.mult[i] for i in g)
        pts.append(sum(vals[i] * cpt.mult[i] for i in g) / w)
        mult.append(w)
        grouping.append(tuple(sorted((cpt.mult[i] for i in g), reverse=True)))
    cvl = NumericMultiset(tuple(pts), tuple(mult), vtol)
    return CriticalData(cpt, cvl, cpt.shape(), cvl.shape(), tuple(grouping))


def center(p: ComplexPoly) -> ComplexPoly:
    """The translate ``p(z - c1/d)`` with vanishing subleading coefficient."""
    d = p.degree
    out = p.shift(-p.coeffs[1] / d)
    c = np.array(out.coeffs)
    c[1] = 0
    return ComplexPoly(c)


def ll(p: ComplexPoly, tol: float | None = None, seed: int = 0) -> NumericMultiset:
    """Critical value multiset."""
    return critical_data(p, tol, seed).cvl


def bounding_rectangle(cvl: NumericMultiset | Sequence[complex], margin: float = 0.25) -> Rectangle:
    """Smallest box around the points, grown by ``margin * (1 + diameter)``."""
    pts = list(cvl.points) if isinstance(cvl, NumericMultiset) else list(cvl)
    if not pts:
        raise ValueError("need at least one point")
    if margin <= 0:
        raise ValueError("margin must be positive")
    xs = [z.real for z in pts]
    ys = [z.imag for z in pts]
    diam = max(abs(a - b) for a in pts for b in pts)
    m = margin * (1 + diam)
    return Rectangle(min(xs) - m, max(xs) + m, min(ys) - m, max(ys) + m)


# -- the cpt -> cvl map and its Jacobian ---------------------------------

def _integrate(q: np.ndarray) -> np.ndarray:
    return np.polyint(q)


def theta(z: Sequence[complex], m: Sequence[int], b: complex, c: complex) -> np.ndarray:
    """Critical values of ``p(w) = d * int_b^w prod (u - z_l)^{m_l} du + c``."""
    z = np.asarray(z, dtype=complex)
    n = int(sum(m))
    d = n + 1
    q = np.array([1.0 + 0j])
    for zl, ml in zip(z, m):
        for _ in range(int(ml)):
            q = np.polymul(q, [1, -zl])
    P = d * _integrate(q)
    return np.polyval(P, z) - np.polyval(P, b) + c


def theta_jacobian_fd(z: Sequence[complex], m: Sequence[int], b: complex, c: complex,
                      h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian ``J[i, j] = d theta_j / d z_i`` (holomorphic)."""
    z = np.asarray(z, dtype=complex)
    k = z.size
    J = np.zeros((k, k), dtype=complex)
    scale = h * (1 + np.max(np.abs(z)))
    for i in range(k):
        e = np.zeros(k, dtype=complex)
        e[i] = scale
        J[i] = (theta(z + e, m, b, c) - theta(z - e, m, b, c)) / (2 * scale)
    return J


def theta_jacobian_det(z: Sequence[complex], m: Sequence[int], b: complex, c: complex = 0) -> complex:
    """Closed form ``d^k / multinomial(n; m) * prod_j (b - z_j)^{m_j} * prod_{i != j} (z_i - z_j)^{m_j}``."""
    z = [complex(x) for x in z]
    m = [int(x) for x in m]
    k = len(z)
    n = sum(m)
    d = n + 1
    multinom = math.factorial(n)
    for x in m:
        multinom //= math.factorial(x)
    val = complex(d ** k) / multinom
    for j in range(k):
        val *= (b - z[j]) ** m[j]
        for i in range(k):
            if i != j:
                val *= (z[i] - z[j]) ** m[j]
    return val


# -- batched chart (critical points, constant) -> critical values ---------

def _polymul_linear(q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Multiply each row of ``q`` (batch of coefficient vectors) by ``u - r``."""
    out = np.zeros((q.shape[0], q.shape[1] + 1), dtype=complex)
    out[:, :-1] += q
    out[:, 1:] -= r[:, None] * q
    return out


def _horner(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate batch polynomials ``coef`` (S, n) at points ``x`` (S, k)."""
    acc = np.zeros_like(x, dtype=complex)
    for j in range(coef.shape[1]):
        acc = acc * x + coef[:, j:j + 1]
    return acc


def _antideriv(coef: np.ndarray) -> np.ndarray:
    n = coef.shape[1]
    powers = np.arange(n, 0, -1)
    return np.concatenate([coef / powers, np.zeros((coef.shape[0], 1))], axis=1)


def chart_system(Z: np.ndarray, C: np.ndarray, m: Sequence[int], V: np.ndarray,
                 gauge: complex = 0) -> tuple[np.ndarray, np.ndarray]:
    """Residuals and Jacobians for ``P(z_j) + c = v_j`` and ``sum m_j z_j = gauge``.

    ``P(w) = d * int_0^w prod (u - z_l)^{m_l} du``.  Shapes: ``Z`` and ``V`` are
    ``(S, k)``, ``C`` is ``(S,)``; the unknown vector is ``(z_1..z_k, c)``.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    C = np.atleast_1d(np.asarray(C, dtype=complex))
    S, k = Z.shape
    m = [int(x) for x in m]
    d = sum(m) + 1
    q = np.ones((S, 1), dtype=complex)
    for l in range(k):
        for _ in range(m[l]):
            q = _polymul_linear(q, Z[:, l])
    F = np.empty((S, k + 1), dtype=complex)
    F[:, :k] = d * _horner(_antideriv(q), Z) + C[:, None] - V
    F[:, k] = Z @ np.asarray(m, dtype=complex) - gauge
    J = np.zeros((S, k + 1, k + 1), dtype=complex)
    for i in range(k):
        # q divided once by (u - z_i), by synthetic division
        qi = np.empty((S, q.shape[1] - 1), dtype=complex)
        acc = np.zeros(S, dtype=complex)
        for j in range(q.shape[1] - 1):
            acc = acc * Z[:, i] + q[:, j]
            qi[:, j] = acc
        J[:, :k, i] = -m[i] * d * _horner(_antideriv(qi), Z)
    J[:, :k, k] = 1
    J[:, k, :k] = m
    return F, J


def poly_from_critical(z: Sequence[complex], m: Sequence[int], c: complex) -> ComplexPoly:
    """The monic polynomial ``d * int_0^w prod (u - z_l)^{m_l} du + c``."""
    q = np.array([1.0 + 0j])
    for zl, ml in zip(z, m):
        for _ in range(int(ml)):
            q = np.polymul(q, [1, -complex(zl)])
    d = int(sum(m)) + 1
    P = d * np.polyint(q)
    P[-1] += c
    P[0] = 1
    return ComplexPoly(P)
