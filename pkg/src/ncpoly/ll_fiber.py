"""Enumerating the polynomials that share a given multiset of critical values."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .hurwitz import Factorization
from .monodromy import RectangleAnalysis
from .nc_lattice import long_cycle
from .poly_numeric import (
    ComplexPoly,
    NumericalFailure,
    NumericMultiset,
    bounding_rectangle,
    chart_system,
    critical_data,
    poly_from_critical,
)

DEDUP_RADIUS = 1e-6


@dataclass
class FiberResult:
    target: NumericMultiset
    d: int
    polynomials: list[ComplexPoly]
    labels: list[Factorization]
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> int:
        return len(self.polynomials)

    @property
    def expected(self) -> int:
        return expected_count(self.d, self.target)

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "d": self.d,
            "polys": [p.to_json() for p in self.polynomials],
            "constellations": [f.to_json() for f in self.labels],
            "found": self.found,
            "expected": self.expected,
            "diagnostics": self.diagnostics,
        }


def expected_count(d: int, target: NumericMultiset) -> int:
    if len(target.points) == 1:
        return 1
    return d ** (d - 2)


def _rotate(p: ComplexPoly, phi: float) -> ComplexPoly:
    """``q(z) = e^{i phi} p(e^{-i phi / d} z)``: monic, critical values rotated by ``phi``."""
    d = p.degree
    a = cmath.exp(-1j * phi / d)
    w = cmath.exp(1j * phi)
    c = [coef * w * a ** (d - k) for k, coef in enumerate(p.coeffs)]
    c[0] = 1
    return ComplexPoly(c)


def _distinct_real_parts(pts, tol) -> bool:
    xs = sorted(v.real for v in pts)
    return all(b - a > tol for a, b in zip(xs, xs[1:]))


def _solve_batch(V: np.ndarray, starts: np.ndarray, tol: float, iters: int = 60):
    """Damped Newton from each row of ``starts``; returns converged ``(z, c)`` rows."""
    S, k = starts.shape
    Z = starts.copy()
    C = np.array([np.mean(v) for v in np.broadcast_to(V, (S, k))], dtype=complex)
    m = [1] * k
    Vb = np.broadcast_to(V, (S, k))
    alive = np.ones(S, dtype=bool)
    done = np.zeros(S, dtype=bool)
    cap = 1 + np.max(np.abs(V)) ** (1 / (k + 1))
    for _ in range(iters):
        idx = np.flatnonzero(alive & ~done)
        if idx.size == 0:
            break
        F, J = chart_system(Z[idx], C[idx], m, Vb[idx], 0)
        try:
            dx = np.linalg.solve(J, F[..., None])[..., 0]
        except np.linalg.LinAlgError:
            dx = np.full_like(F, np.nan)
            for r in range(idx.size):
                try:
                    dx[r] = np.linalg.solve(J[r], F[r])
                except np.linalg.LinAlgError:
                    pass
        bad = ~np.all(np.isfinite(dx), axis=1)
        alive[idx[bad]] = False
        norm = np.max(np.abs(dx), axis=1)
        factor = np.where(norm > cap, cap / np.maximum(norm, 1e-300), 1.0)
        dx = dx * factor[:, None]
        dx[bad] = 0
        Z[idx] -= dx[:, :k]
        C[idx] -= dx[:, k]
        size = 1 + np.max(np.abs(Z[idx]), axis=1)
        conv = (norm <= tol * size) & ~bad
        done[idx[conv]] = True
        alive[idx[size > 1e6]] = False
    return Z[done], C[done]


def fiber_enumerate(target: NumericMultiset | list, d: int, starts: int | None = None,
                    seed: int = 0) -> FiberResult:
    """Find centered monic degree-``d`` polynomials whose critical values are ``target``."""
    if not isinstance(target, NumericMultiset):
        target = NumericMultiset.from_values([complex(v) for v in target])
    if target.size != d - 1:
        raise ValueError(f"a degree {d} polynomial has {d - 1} critical values")
    if len(target.points) == 1:
        p = ComplexPoly.monomial(d, target.points[0])
        return FiberResult(target, d, [p], [Factorization([long_cycle(d)], d)], {"indiscrete": True})
    if any(w > 1 for w in target.mult):
        raise ValueError("target must be generic (distinct critical values)")
    rng = np.random.default_rng(seed)
    scale = 1 + max(abs(v) for v in target.points)
    phi = 0.0
    work = list(target.points)
    if not _distinct_real_parts(work, 1e-7 * scale):
        for _ in range(100):
            phi = float(rng.uniform(0, 2 * math.pi))
            work = [v * cmath.exp(1j * phi) for v in target.points]
            if _distinct_real_parts(work, 1e-3 * scale):
                break
        else:
            raise NumericalFailure("could not separate real parts by rotation")
    k = d - 1
    V = np.array(work, dtype=complex)
    expected = d ** (d - 2)
    budget = 200 * expected if starts is None else starts
    radius = 2 * (1 + max(abs(v) for v in work))
    found: list[np.ndarray] = []
    tried = 0
    batch = max(64, min(budget, 50 * expected))
    while tried < budget and len(found) < expected:
        n = min(batch, budget - tried)
        r = radius * np.sqrt(rng.uniform(size=(n, k)))
        Z0 = r * np.exp(2j * np.pi * rng.uniform(size=(n, k)))
        Z0 -= Z0.mean(axis=1, keepdims=True)
        tried += n
        Zs, Cs = _solve_batch(V, Z0, 1e-12)
        for z, c in zip(Zs, Cs):
            coeffs = np.array(poly_from_critical(z, [1] * k, c).coeffs)
            if all(np.max(np.abs(coeffs - f)) > DEDUP_RADIUS * scale for f in found):
                found.append(coeffs)
    rect = bounding_rectangle(work, margin=0.25)
    polys, labels = [], []
    for coeffs in sorted(found, key=lambda a: tuple(np.round(np.concatenate([a.real, a.imag]), 9))):
        q = ComplexPoly(coeffs)
        cvl = critical_data(q).cvl
        if not cvl.matches(NumericMultiset.from_values(work), 1e-6 * scale):
            continue
        h, _ = RectangleAnalysis(q, rect).side_constellations()
        polys.append(_rotate(q, -phi) if phi else q)
        labels.append(h.stripped())
    diag = {"starts": tried, "dedup_radius": DEDUP_RADIUS, "rotation": phi,
            "distinct_labels": len(set(labels)), "seed": seed}
    return FiberResult(target, d, polys, labels, diag)
