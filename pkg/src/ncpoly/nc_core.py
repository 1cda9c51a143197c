"""Set partitions, integer partitions, linear compositions and permutations.

Ground sets are ``[n] = {1, ..., n}`` throughout.  Every value type here is
immutable and hashable, and set partitions are always stored in the
canonical order (blocks ascending, blocks sorted by their minimum), so that
structural equality is the same as mathematical equality.
"""

from __future__ import annotations

from collections import Counter
from math import factorial, prod
from typing import Hashable, Iterable, Iterator, Sequence


class SetPartition:
    """A partition of ``[n]`` into nonempty blocks.

    >>> SetPartition.parse("13|2|46|5|7").blocks
    ((1, 3), (2,), (4, 6), (5,), (7,))
    """

    __slots__ = ("n", "blocks", "_hash")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        if n < 0:
            raise ValueError("ground set size must be nonnegative")
        canon = sorted(tuple(sorted(b)) for b in blocks)
        seen: set[int] = set()
        for b in canon:
            if not b:
                raise ValueError("blocks must be nonempty")
            for x in b:
                if not 1 <= x <= n:
                    raise ValueError(f"element {x} outside [1, {n}]")
                if x in seen:
                    raise ValueError(f"element {x} appears twice")
                seen.add(x)
        if len(seen) != n:
            raise ValueError("blocks do not cover the ground set")
        self.n = n
        self.blocks: tuple[tuple[int, ...], ...] = tuple(canon)
        self._hash = hash((n, self.blocks))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse the bar shorthand ``13|2|46``; blocks with multi-digit
        elements may be comma separated, as in ``1,10|2``."""
        parts = text.strip().split("|")
        blocks = []
        for part in parts:
            if "," in part:
                blocks.append([int(x) for x in part.split(",")])
            else:
                blocks.append([int(ch) for ch in part])
        n = sum(len(b) for b in blocks)
        return cls(n, blocks)

    @classmethod
    def discrete(cls, n: int) -> "SetPartition":
        return cls(n, [[i] for i in range(1, n + 1)])

    @classmethod
    def indiscrete(cls, n: int) -> "SetPartition":
        return cls(n, [list(range(1, n + 1))] if n else [])

    def block_of(self) -> list[int]:
        """Index of the block containing each element; position 0 unused."""
        lab = [0] * (self.n + 1)
        for k, b in enumerate(self.blocks):
            for x in b:
                lab[x] = k
        return lab

    def __len__(self) -> int:
        return len(self.blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "SetPartition") -> bool:
        return (self.n, self.blocks) < (other.n, other.blocks)

    def __str__(self) -> str:
        sep = "" if self.n < 10 else ","
        return "|".join(sep.join(str(x) for x in b) for b in self.blocks)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict) -> "SetPartition":
        return cls(int(obj["n"]), obj["blocks"])


class IntegerPartition:
    """A weakly decreasing tuple of positive parts."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        ps = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p <= 0 for p in ps):
            raise ValueError("parts must be positive")
        self.parts = ps

    @property
    def n(self) -> int:
        return sum(self.parts)

    def exponents(self) -> dict[int, int]:
        """Map part size to its multiplicity."""
        return dict(Counter(self.parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerPartition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __str__(self) -> str:
        exps = sorted(self.exponents().items(), reverse=True)
        return " ".join(f"{p}^{a}" if a > 1 else str(p) for p, a in exps)

    def __repr__(self) -> str:
        return f"IntegerPartition({list(self.parts)})"

    def to_json(self) -> dict:
        return {"parts": list(self.parts)}

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerPartition":
        return cls(obj["parts"])


class LinearComposition:
    """Row ``[m_l, m_1, ..., m_k, m_r]`` of multiplicities in a closed interval.

    The two end entries may be zero; interior entries are positive.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[int]):
        es = tuple(int(e) for e in entries)
        if len(es) < 2:
            raise ValueError("a linear composition has at least two entries")
        if es[0] < 0 or es[-1] < 0:
            raise ValueError("endpoint entries must be nonnegative")
        if any(e <= 0 for e in es[1:-1]):
            raise ValueError("interior entries must be positive")
        self.entries = es

    @property
    def n(self) -> int:
        return sum(self.entries)

    @property
    def interior(self) -> tuple[int, ...]:
        return self.entries[1:-1]

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearComposition):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"LinearComposition({list(self.entries)})"

    def to_json(self) -> dict:
        return {"entries": list(self.entries)}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearComposition":
        return cls(obj["entries"])


class Permutation:
    """A bijection of ``[n]`` stored in one-line form.

    Products compose right to left: ``(p * q)(i) == p(q(i))``, so ``q`` is
    applied first.
    """

    __slots__ = ("image", "_hash")

    def __init__(self, image: Iterable[int]):
        img = tuple(int(x) for x in image)
        if sorted(img) != list(range(1, len(img) + 1)):
            raise ValueError(f"{img} is not a permutation of [1, {len(img)}]")
        self.image = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple) -> "Permutation":
        # trusted constructor for internal hot loops
        self = object.__new__(cls)
        self.image = img
        self._hash = hash(img)
        return self

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def long_cycle(cls, n: int) -> "Permutation":
        """The cycle ``(1 2 ... n)``."""
        return cls([i % n + 1 for i in range(1, n + 1)])

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n or x in seen:
                    raise ValueError(f"bad cycle entry {x}")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b
        return cls(img)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        img = self.image
        return Permutation._raw(tuple(img[j - 1] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image, start=1):
            inv[j - 1] = i
        return Permutation._raw(tuple(inv))

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Cycles, each starting at its minimum, ordered by minimum."""
        seen = [False] * (self.n + 1)
        out = []
        for i in range(1, self.n + 1):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.image[j - 1]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image, start=1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image == other.image

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.image < other.image

    def __str__(self) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)

    def __repr__(self) -> str:
        return f"Permutation({str(self)}, n={self.n})"


def set_partition_of_tuple(values: Sequence[Hashable]) -> SetPartition:
    """Group positions of equal entries: ``(a,b,a)`` gives ``13|2``."""
    if len(values) == 0:
        raise ValueError("need a nonempty tuple")
    groups: dict = {}
    try:
        for i, v in enumerate(values, start=1):
            groups.setdefault(v, []).append(i)
        blocks = list(groups.values())
    except TypeError:
        # unhashable entries fall back to pairwise equality
        blocks = []
        reps: list = []
        for i, v in enumerate(values, start=1):
            for k, r in enumerate(reps):
                if r == v:
                    blocks[k].append(i)
                    break
            else:
                reps.append(v)
                blocks.append([i])
    return SetPartition(len(values), blocks)


def shape(part: SetPartition) -> IntegerPartition:
    return IntegerPartition(len(b) for b in part.blocks)


def refinement_leq(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    if p.n != q.n:
        raise ValueError("degree mismatch")
    lab = q.block_of()
    return all(len({lab[x] for x in b}) == 1 for b in p.blocks)


def int_partition_merge(lam: IntegerPartition,
                        grouping: Iterable[Iterable[int]]) -> IntegerPartition:
    """Sum the parts of ``lam`` group by group.

    ``grouping`` lists groups of part values; taken together they must use
    each part of ``lam`` exactly once.
    """
    groups = [list(g) for g in grouping]
    used = Counter(x for g in groups for x in g)
    if used != Counter(lam.parts) or any(not g for g in groups):
        raise ValueError("grouping must use every part exactly once")
    return IntegerPartition(sum(g) for g in groups)


def count_set_partitions_of_shape(lam: IntegerPartition) -> int:
    """Exact number of set partitions of ``[n]`` whose block sizes are ``lam``."""
    num = factorial(lam.n)
    den = prod(factorial(p) for p in lam.parts)
    den *= prod(factorial(a) for a in lam.exponents().values())
    return num // den


def set_partitions(n: int) -> Iterator[SetPartition]:
    """All set partitions of ``[n]`` via restricted growth strings."""
    if n == 0:
        yield SetPartition(0, [])
        return

    def rec(i: int, blocks: list[list[int]]) -> Iterator[SetPartition]:
        if i > n:
            yield SetPartition(n, blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def elementary_merge(c: LinearComposition, i: int) -> LinearComposition:
    """Replace entries ``i`` and ``i+1`` (0-based) by their sum."""
    if len(c) < 3:
        raise ValueError("a two-entry composition has no merges")
    if not 0 <= i < len(c) - 1:
        raise IndexError(f"merge position {i} out of range")
    es = c.entries
    return LinearComposition(es[:i] + (es[i] + es[i + 1],) + es[i + 2:])


def merge_closure(c: LinearComposition) -> set[LinearComposition]:
    """Every composition reachable from ``c`` by elementary merges, ``c`` included."""
    seen = {c}
    stack = [c]
    while stack:
        cur = stack.pop()
        if len(cur) < 3:
            continue
        for i in range(len(cur) - 1):
            nxt = elementary_merge(cur, i)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def catalan(n: int) -> int:
    return fuss_catalan(n, 2)


def fuss_catalan(n: int, m: int) -> int:
    """``(1/((m-1)n+1)) * binom(mn, n)``."""
    from math import comb
    return comb(m * n, n) // ((m - 1) * n + 1)

