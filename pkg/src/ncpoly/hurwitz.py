"""Factorizations of permutations and the Hurwitz braid action on them."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .nc_core import Permutation
from .nc_lattice import absolute_length, long_cycle

DEFAULT_ORBIT_CAP = 10**6


class OrbitTooLarge(RuntimeError):
    pass


def product(factors: Sequence[Permutation], d: int) -> Permutation:
    """``f1 * f2 * ... * fk``; the last factor acts first."""
    out = Permutation.identity(d)
    for f in factors:
        out = out * f
    return out


class Factorization:
    """An ordered tuple of permutations together with their product."""

    __slots__ = ("d", "factors", "target")

    def __init__(self, factors: Iterable[Permutation], d: int | None = None):
        fs = tuple(factors)
        if d is None:
            if not fs:
                raise ValueError("degree needed for an empty factorization")
            d = fs[0].n
        if any(f.n != d for f in fs):
            raise ValueError("degree mismatch among factors")
        self.d = d
        self.factors = fs
        self.target = product(fs, d)

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def key(self) -> tuple:
        return tuple(f.image for f in self.factors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Factorization):
            return NotImplemented
        return self.d == other.d and self.factors == other.factors

    def __hash__(self) -> int:
        return hash((self.d, self.factors))

    def __lt__(self, other: "Factorization") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return "[" + ", ".join(str(f) for f in self.factors) + "]"

    def __repr__(self) -> str:
        return f"Factorization({self}, d={self.d})"

    def is_constellation(self) -> bool:
        return self.target == long_cycle(self.d)

    def is_minimal(self) -> bool:
        """Lengths of the factors add up to the length of the product."""
        return sum(absolute_length(f) for f in self.factors) == absolute_length(self.target)

    def stripped(self) -> "Factorization":
        """Drop leading and trailing identity factors."""
        fs = list(self.factors)
        while fs and fs[0].is_identity():
            fs.pop(0)
        while fs and fs[-1].is_identity():
            fs.pop()
        return Factorization(fs, self.d)

    def without_identities(self) -> "Factorization":
        return Factorization([f for f in self.factors if not f.is_identity()], self.d)

    def to_json(self) -> dict:
        return {"d": self.d, "factors": [list(f.image) for f in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> "Factorization":
        d = int(obj["d"])
        return cls([parse_perm(f, d) for f in obj["factors"]], d)


class Constellation(Factorization):
    """A factorization of ``delta = (1 2 ... d)``."""

    __slots__ = ()

    def __init__(self, factors: Iterable[Permutation], d: int | None = None):
        super().__init__(factors, d)
        if self.target != long_cycle(self.d):
            raise ValueError(f"product {self.target} is not the long cycle")

    @classmethod
    def of(cls, f: Factorization) -> "Constellation":
        return cls(f.factors, f.d)


def parse_perm(obj, d: int) -> Permutation:
    """Accept a one-line array ``[2,3,1]`` or cycle notation ``[[1,3,7],[4,5]]``."""
    if isinstance(obj, list) and obj and all(isinstance(c, list) for c in obj):
        return Permutation.from_cycles(d, obj)
    if isinstance(obj, list) and not obj:
        return Permutation.identity(d)
    p = Permutation(obj)
    if p.n != d:
        raise ValueError(f"expected degree {d}, got {p.n}")
    return p


def hurwitz_move(f: Factorization, i: int) -> Factorization:
    """Elementary move at positions ``i, i+1`` (1-based):
    ``(g_i, g_{i+1}) -> (g_{i+1}, g_{i+1}^-1 g_i g_{i+1})``."""
    if not 1 <= i < len(f):
        raise IndexError(f"move index {i} out of range for length {len(f)}")
    fs = list(f.factors)
    a, b = fs[i - 1], fs[i]
    fs[i - 1], fs[i] = b, b.inverse() * a * b
    return _same_type(f, fs)


def hurwitz_move_inverse(f: Factorization, i: int) -> Factorization:
    """Undo :func:`hurwitz_move` at ``i``."""
    if not 1 <= i < len(f):
        raise IndexError(f"move index {i} out of range for length {len(f)}")
    fs = list(f.factors)
    a, b = fs[i - 1], fs[i]
    fs[i - 1], fs[i] = a * b * a.inverse(), a
    return _same_type(f, fs)


def _same_type(f: Factorization, fs) -> Factorization:
    out = object.__new__(type(f))
    out.d = f.d
    out.factors = tuple(fs)
    out.target = f.target
    return out


def hurwitz_orbit(f: Factorization, cap: int = DEFAULT_ORBIT_CAP) -> list[Factorization]:
    """Closure under moves and inverse moves, sorted by one-line images."""
    seen = {f}
    queue = deque([f])
    while queue:
        cur = queue.popleft()
        for i in range(1, len(cur)):
            for nxt in (hurwitz_move(cur, i), hurwitz_move_inverse(cur, i)):
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise OrbitTooLarge(f"orbit exceeds {cap} elements")
                    queue.append(nxt)
    return sorted(seen)


def transpositions(d: int) -> list[Permutation]:
    return [Permutation.from_cycles(d, [(i, j)])
            for i in range(1, d + 1) for j in range(i + 1, d + 1)]


def minimal_transposition_factorizations(pi: Permutation) -> list[Factorization]:
    """Every tuple of ``l(pi)`` transpositions whose product is ``pi``.

    Brute force: the first factor ``t`` must satisfy ``l(t^-1 pi) = l(pi) - 1``.
    """
    d = pi.n
    ts = transpositions(d)
    out: list[Factorization] = []

    def rec(rest: Permutation, prefix: list[Permutation]):
        k = absolute_length(rest)
        if k == 0:
            out.append(Factorization(prefix, d))
            return
        for t in ts:
            r = t * rest  # t is its own inverse
            if absolute_length(r) == k - 1:
                prefix.append(t)
                rec(r, prefix)
                prefix.pop()

    rec(pi, [])
    return sorted(out)
