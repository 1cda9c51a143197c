"""Noncrossing partitions of [d] and the interval [1, delta] in Sym_d.

Side symbols of the branched 4d-gon are written as pairs such as ``("L", 3)``.
Reading counterclockwise from the breakpoint between sides ``d`` and ``1``
the sides come in the order ``T1 L1 B1 R1 T2 L2 B2 R2 ...``.  A left-right
matching lives on ``[2d]`` with ``L_m -> 2m-1`` and ``R_m -> 2m``; a
top-bottom matching uses ``T_m -> 2m-1`` and ``B_m -> 2m``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Literal, Sequence

from .nc_core import Permutation, SetPartition, refinement_leq

Side = Literal["top", "bottom", "left", "right"]


class NonCrossingError(ValueError):
    pass


def _blocks_cross(a: Sequence[int], b: Sequence[int]) -> bool:
    # b avoids crossing a iff every element of b falls in one gap of a
    gaps = set()
    for x in b:
        g = sum(1 for y in a if y < x)
        gaps.add(g % len(a))
    return len(gaps) > 1


def is_noncrossing(p: SetPartition) -> bool:
    """No ``i<j<k<l`` with ``i,k`` in one block and ``j,l`` in another.

    >>> is_noncrossing(SetPartition.parse("13|24"))
    False
    """
    bs = p.blocks
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            if _blocks_cross(bs[i], bs[j]):
                return False
    return True


class NoncrossingPartition(SetPartition):
    """A set partition validated to be noncrossing."""

    __slots__ = ()

    def __init__(self, n: int, blocks: Iterable[Iterable[int]], *, check: bool = True):
        super().__init__(n, blocks)
        if check and not is_noncrossing(self):
            raise NonCrossingError(f"{self} is crossing")

    @classmethod
    def of(cls, p: SetPartition) -> "NoncrossingPartition":
        if isinstance(p, NoncrossingPartition):
            return p
        return cls(p.n, p.blocks)

    @classmethod
    def parse(cls, text: str) -> "NoncrossingPartition":
        return cls.of(SetPartition.parse(text))


def long_cycle(d: int) -> Permutation:
    return Permutation.long_cycle(d)


def perm_of(p: SetPartition) -> Permutation:
    """Each block becomes the cycle listing its elements in increasing order."""
    return Permutation.from_cycles(p.n, p.blocks)


def partition_of_perm(pi: Permutation) -> NoncrossingPartition:
    """Inverse of :func:`perm_of`; rejects permutations outside ``[1, delta]``."""
    blocks = pi.cycles(include_fixed=True)
    for c in blocks:
        if list(c) != sorted(c):
            raise NonCrossingError(f"cycle {c} is not increasing")
    sp = SetPartition(pi.n, blocks)
    if not is_noncrossing(sp):
        raise NonCrossingError(f"{pi} has crossing cycles")
    return NoncrossingPartition(pi.n, sp.blocks, check=False)


def is_noncrossing_perm(pi: Permutation) -> bool:
    try:
        partition_of_perm(pi)
    except NonCrossingError:
        return False
    return True


def absolute_length(pi: Permutation) -> int:
    return pi.n - len(pi.cycles(include_fixed=True))


def absolute_leq(s: Permutation, t: Permutation) -> bool:
    """``s <= t`` iff ``l(s) + l(s^-1 t) == l(t)``."""
    if s.n != t.n:
        raise ValueError("degree mismatch")
    return absolute_length(s) + absolute_length(s.inverse() * t) == absolute_length(t)


def kreweras(p: SetPartition) -> NoncrossingPartition:
    """Right complement: the partition of ``perm(p)^-1 * delta``."""
    pi = perm_of(p)
    return partition_of_perm(pi.inverse() * long_cycle(p.n))


def kreweras_left(p: SetPartition) -> NoncrossingPartition:
    """Left complement: the partition of ``delta * perm(p)^-1``."""
    pi = perm_of(p)
    return partition_of_perm(long_cycle(p.n) * pi.inverse())


def _nc_interval(lo: int, hi: int) -> list[list[tuple[int, ...]]]:
    # all noncrossing partitions of {lo..hi}, as lists of blocks
    if lo > hi:
        return [[]]
    out = []
    rest = list(range(lo + 1, hi + 1))
    # choose the other members of lo's block
    for mask in range(1 << len(rest)):
        block = [lo] + [rest[i] for i in range(len(rest)) if mask >> i & 1]
        pieces = [[]]
        bounds = list(zip(block, block[1:] + [hi + 1]))
        for a, b in bounds:
            sub = _nc_interval(a + 1, b - 1)
            pieces = [x + y for x in pieces for y in sub]
        for pc in pieces:
            out.append([tuple(block)] + pc)
    return out


@lru_cache(maxsize=None)
def _ncpart_cached(d: int) -> tuple[NoncrossingPartition, ...]:
    parts = [NoncrossingPartition(d, bl, check=False) for bl in _nc_interval(1, d)]
    return tuple(sorted(parts))


def enumerate_ncpart(d: int) -> list[NoncrossingPartition]:
    """All noncrossing partitions of ``[d]``, sorted by block tuples."""
    if d < 1:
        raise ValueError("d must be positive")
    return list(_ncpart_cached(d))


@lru_cache(maxsize=None)
def ncperms(d: int) -> tuple[Permutation, ...]:
    """The elements of ``[1, delta]`` in the order of :func:`enumerate_ncpart`."""
    return tuple(perm_of(p) for p in _ncpart_cached(d))


class NCChain:
    """A strictly increasing chain of noncrossing partitions."""

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[SetPartition]):
        els = tuple(NoncrossingPartition.of(e) for e in elements)
        if not els:
            raise ValueError("empty chain")
        n = els[0].n
        for a, b in zip(els, els[1:]):
            if b.n != n:
                raise ValueError("degree mismatch inside chain")
            if a == b or not refinement_leq(a, b):
                raise ValueError(f"{a} < {b} fails")
        self.elements = els

    @property
    def d(self) -> int:
        return self.elements[0].n

    def perms(self) -> list[Permutation]:
        return [perm_of(e) for e in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCChain):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __str__(self) -> str:
        return " < ".join(map(str, self.elements))

    def __repr__(self) -> str:
        return f"NCChain({self})"

    def to_json(self) -> list:
        return [e.to_json() for e in self.elements]

    @classmethod
    def from_json(cls, obj: list) -> "NCChain":
        return cls(SetPartition.from_json(e) for e in obj)


def covers(p: NoncrossingPartition) -> Iterator[NoncrossingPartition]:
    """Partitions obtained by merging two blocks of ``p`` without crossing."""
    bs = p.blocks
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            merged = tuple(sorted(bs[i] + bs[j]))
            rest = [b for k, b in enumerate(bs) if k not in (i, j)]
            if all(not _blocks_cross(merged, b) for b in rest):
                yield NoncrossingPartition(p.n, rest + [merged], check=False)


def maximal_chains(d: int) -> list[NCChain]:
    """All maximal chains from discrete to indiscrete, by descent over covers."""
    if d < 2:
        raise ValueError("d must be at least 2")
    out: list[NCChain] = []
    cover_cache: dict = {}

    def up(p):
        if p not in cover_cache:
            cover_cache[p] = list(covers(p))
        return cover_cache[p]

    def rec(path):
        top = path[-1]
        if len(top) == 1:
            ch = object.__new__(NCChain)
            ch.elements = tuple(path)
            out.append(ch)
            return
        for q in up(top):
            path.append(q)
            rec(path)
            path.pop()

    start = NoncrossingPartition(d, [[i] for i in range(1, d + 1)], check=False)
    rec([start])
    return out


def all_chains(d: int) -> Iterator[tuple[Permutation, ...]]:
    """Every nonempty strictly increasing chain in ``[1, delta]``, as permutations."""
    els = ncperms(d)
    lens = [absolute_length(x) for x in els]
    above = {}
    for i, x in enumerate(els):
        above[i] = [j for j, y in enumerate(els)
                    if lens[j] > lens[i] and absolute_leq(x, y)]

    def rec(path):
        yield tuple(els[i] for i in path)
        for j in above[path[-1]]:
            path.append(j)
            yield from rec(path)
            path.pop()

    for i in range(len(els)):
        yield from rec([i])


# -- side matchings -------------------------------------------------------

_SIDE_CONVENTION = {"top": "LR", "bottom": "LR", "left": "TB", "right": "TB"}


class NCMatching:
    """A noncrossing perfect matching of ``[2d]`` tagged ``LR`` or ``TB``."""

    __slots__ = ("partition", "side_convention")

    def __init__(self, partition: SetPartition, side_convention: str):
        if side_convention not in ("LR", "TB"):
            raise ValueError("side_convention must be 'LR' or 'TB'")
        if partition.n % 2:
            raise ValueError("a matching needs an even ground set")
        for b in partition.blocks:
            if len(b) != 2 or (b[0] - b[1]) % 2 == 0:
                raise ValueError(f"block {b} is not an odd-even pair")
        self.partition = NoncrossingPartition.of(partition)
        self.side_convention = side_convention

    @property
    def d(self) -> int:
        return self.partition.n // 2

    def symbol(self, k: int) -> tuple[str, int]:
        a, b = self.side_convention
        return (a, (k + 1) // 2) if k % 2 else (b, k // 2)

    def arcs(self) -> list[tuple[tuple[str, int], tuple[str, int]]]:
        return [(self.symbol(x), self.symbol(y)) for x, y in self.partition.blocks]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCMatching):
            return NotImplemented
        return (self.partition, self.side_convention) == (other.partition, other.side_convention)

    def __hash__(self) -> int:
        return hash((self.partition, self.side_convention))

    def __str__(self) -> str:
        return ", ".join("{%s%d,%s%d}" % (a[0], a[1], b[0], b[1]) for a, b in self.arcs())

    def __repr__(self) -> str:
        return f"NCMatching({self})"

    def to_json(self) -> dict:
        obj = self.partition.to_json()
        obj["side_convention"] = self.side_convention
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "NCMatching":
        return cls(SetPartition.from_json(obj), obj["side_convention"])


def _wrap(i: int, d: int) -> int:
    return (i - 1) % d + 1


def matching_of_partition(p: SetPartition, side: Side) -> NCMatching:
    """Boundary matching of thin neighborhoods of the block hulls of ``p``
    drawn against ``side`` of the branched rectangle."""
    pi = perm_of(NoncrossingPartition.of(p))
    d = p.n
    pairs = []
    for a in range(1, d + 1):
        if side == "top":        # {L_a, R_{pi(a)-1}}
            pairs.append((2 * a - 1, 2 * _wrap(pi(a) - 1, d)))
        elif side == "bottom":   # {R_a, L_{pi(a)}}
            pairs.append((2 * a, 2 * pi(a) - 1))
        elif side == "left":     # {B_a, T_{pi(a)}}
            pairs.append((2 * a, 2 * pi(a) - 1))
        elif side == "right":    # {T_{a+1}, B_{pi(a)}}
            pairs.append((2 * _wrap(a + 1, d) - 1, 2 * pi(a)))
        else:
            raise ValueError(f"unknown side {side!r}")
    return NCMatching(SetPartition(2 * d, pairs), _SIDE_CONVENTION[side])


def partition_of_matching(m: NCMatching, side: Side) -> NoncrossingPartition:
    """Recover the noncrossing partition on ``side`` from a side matching."""
    if _SIDE_CONVENTION.get(side) != m.side_convention:
        raise ValueError(f"a {m.side_convention} matching has no {side} partition")
    d = m.d
    img = [0] * d
    for x, y in m.partition.blocks:
        odd, even = (x, y) if x % 2 else (y, x)
        o, e = (odd + 1) // 2, even // 2
        if side == "top":
            img[o - 1] = _wrap(e + 1, d)
        elif side in ("bottom", "left"):
            img[e - 1] = o
        else:
            img[_wrap(o - 1, d) - 1] = e
    return partition_of_perm(Permutation(img))
