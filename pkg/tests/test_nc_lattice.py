import pytest
from hypothesis import given, strategies as st

from ncpoly.nc_core import Permutation, SetPartition, refinement_leq
from ncpoly.nc_lattice import (
    NCChain,
    NCMatching,
    NonCrossingError,
    absolute_leq,
    absolute_length,
    covers,
    enumerate_ncpart,
    is_noncrossing,
    kreweras,
    kreweras_left,
    long_cycle,
    matching_of_partition,
    maximal_chains,
    partition_of_matching,
    partition_of_perm,
    perm_of,
)

from oracles import crossing_by_definition, kreweras_by_interleaving, restricted_growth_partitions, \
    transposition_distance

P = SetPartition.parse
EX_TOP = "137|2|45|6|8|9"
EX_BOTTOM = "12|356|4|789"


def test_noncrossing_examples():
    assert is_noncrossing(P(EX_TOP))
    assert not is_noncrossing(P("13|24"))
    assert len(enumerate_ncpart(4)) == 14


@pytest.mark.parametrize("n", range(1, 7))
def test_noncrossing_matches_definition(n):
    for blocks in restricted_growth_partitions(n):
        assert is_noncrossing(SetPartition(n, blocks)) == (not crossing_by_definition(blocks))


def test_perm_of_examples():
    assert perm_of(P(EX_TOP)) == Permutation.from_cycles(9, [[1, 3, 7], [4, 5]])
    assert perm_of(SetPartition.discrete(5)).is_identity()
    assert perm_of(SetPartition.indiscrete(5)) == long_cycle(5)


def test_partition_of_perm_examples():
    assert str(partition_of_perm(Permutation.from_cycles(9, [[1, 3, 7], [4, 5]]))) == EX_TOP
    assert partition_of_perm(Permutation.identity(4)) == SetPartition.discrete(4)
    with pytest.raises(NonCrossingError):
        partition_of_perm(Permutation.from_cycles(4, [[1, 3], [2, 4]]))
    with pytest.raises(ValueError):
        # decreasing cycle order is not a noncrossing permutation
        partition_of_perm(Permutation.from_cycles(3, [[1, 3, 2]]))


def test_absolute_length_examples():
    assert absolute_length(Permutation.identity(5)) == 0
    assert absolute_length(long_cycle(7)) == 6
    pi = Permutation.from_cycles(9, [[1, 3, 7], [4, 5]])
    assert absolute_length(pi) == 3


@given(st.permutations(range(1, 6)))
def test_absolute_length_matches_bfs(img):
    assert absolute_length(Permutation(img)) == transposition_distance(tuple(img))


def test_absolute_leq_examples():
    t = Permutation.from_cycles(4, [[1, 2]])
    assert absolute_leq(Permutation.identity(4), t)
    assert not absolute_leq(long_cycle(4), t)


@pytest.mark.parametrize("d", range(1, 7))
def test_absolute_order_is_refinement(d):
    els = enumerate_ncpart(d)
    for a in els:
        for b in els:
            assert absolute_leq(perm_of(a), perm_of(b)) == refinement_leq(a, b)


def test_kreweras_example():
    k = kreweras(P(EX_TOP))
    assert perm_of(k) == Permutation.from_cycles(9, [[1, 2], [3, 5, 6], [7, 8, 9]])
    assert str(k) == EX_BOTTOM
    assert kreweras(SetPartition.discrete(6)) == SetPartition.indiscrete(6)


@pytest.mark.parametrize("d", range(1, 6))
def test_kreweras_matches_interleaving_oracle(d):
    for p in enumerate_ncpart(d):
        assert tuple(kreweras(p).blocks) == kreweras_by_interleaving(p.blocks, d)


@pytest.mark.parametrize("d", range(1, 8))
def test_kreweras_square_is_rotation(d):
    delta = long_cycle(d)
    for p in enumerate_ncpart(d):
        pi = perm_of(p)
        assert perm_of(kreweras(kreweras(p))) == pi.conjugate(delta)
        assert pi * perm_of(kreweras(p)) == delta
        assert kreweras_left(kreweras(p)) == p


@pytest.mark.parametrize("d", range(1, 7))
def test_kreweras_order_reversing(d):
    els = enumerate_ncpart(d)
    ks = {p: kreweras(p) for p in els}
    assert len(set(ks.values())) == len(els)
    for a in els:
        for b in els:
            if refinement_leq(a, b):
                assert refinement_leq(ks[b], ks[a])


def test_catalan_sizes():
    assert [len(enumerate_ncpart(d)) for d in range(1, 9)] == [1, 2, 5, 14, 42, 132, 429, 1430]


def test_maximal_chain_counts():
    assert [len(maximal_chains(d)) for d in range(2, 6)] == [1, 3, 16, 125]


def test_chain_validation():
    NCChain([P("1|2|3"), P("12|3"), P("123")])
    with pytest.raises(ValueError):
        NCChain([P("12|3"), P("1|23")])
    with pytest.raises(ValueError):
        NCChain([P("12|3"), P("12|3")])


def test_covers_merge_two_blocks():
    p = P("1|2|3|4")
    cs = list(covers(p))
    assert len(cs) == 6
    assert all(len(c.blocks) == 3 for c in cs)
    assert P("13|2|4") in cs


def test_example_matching():
    m = matching_of_partition(P(EX_TOP), "top")
    expected = [("L", 1, "R", 2), ("L", 2, "R", 1), ("L", 3, "R", 6), ("L", 4, "R", 4), ("L", 5, "R", 3),
                ("L", 6, "R", 5), ("L", 7, "R", 9), ("L", 8, "R", 7), ("L", 9, "R", 8)]
    got = set()
    for a, b in m.arcs():
        (s1, i1), (s2, i2) = sorted([a, b])
        got.add((s1, i1, s2, i2))
    assert got == set(expected)
    assert matching_of_partition(P(EX_BOTTOM), "bottom") == m
    assert str(partition_of_matching(m, "top")) == EX_TOP
    assert str(partition_of_matching(m, "bottom")) == EX_BOTTOM


@pytest.mark.parametrize("d", range(1, 7))
def test_discrete_top_matching(d):
    m = matching_of_partition(SetPartition.discrete(d), "top")
    for a, b in m.arcs():
        (s1, i1), (s2, i2) = sorted([a, b])
        assert (s1, s2) == ("L", "R") and i2 == (i1 - 2) % d + 1


@pytest.mark.parametrize("d", range(1, 7))
@pytest.mark.parametrize("side", ["top", "bottom", "left", "right"])
def test_matching_roundtrip(d, side):
    for p in enumerate_ncpart(d):
        m = matching_of_partition(p, side)
        assert is_noncrossing(m.partition)
        assert partition_of_matching(m, side) == p
        assert NCMatching.from_json(m.to_json()) == m


@pytest.mark.parametrize("d", range(1, 7))
def test_one_matching_carries_kreweras_pair(d):
    for p in enumerate_ncpart(d):
        m = matching_of_partition(p, "top")
        assert partition_of_matching(m, "bottom") == kreweras(p)
        n = matching_of_partition(p, "left")
        assert partition_of_matching(n, "right") == kreweras(p)


def test_matching_wrong_side_rejected():
    m = matching_of_partition(P("12|3"), "top")
    with pytest.raises(ValueError):
        partition_of_matching(m, "left")


ncparts = st.integers(1, 7).flatmap(lambda d: st.sampled_from(enumerate_ncpart(d)))


@given(ncparts)
def test_perm_partition_roundtrip(p):
    assert partition_of_perm(perm_of(p)) == p


@given(st.integers(2, 7).flatmap(lambda d: st.tuples(st.sampled_from(enumerate_ncpart(d)),
                                                     st.sampled_from(enumerate_ncpart(d)))))
def test_perm_of_injective(pair):
    a, b = pair
    assert (perm_of(a) == perm_of(b)) == (a == b)


@given(st.integers(2, 5).flatmap(lambda d: st.sampled_from(maximal_chains(d))))
def test_chain_json_roundtrip(chain):
    assert NCChain.from_json(chain.to_json()).elements == chain.elements
    assert chain[0] == SetPartition.discrete(chain.d)
    assert chain[-1] == SetPartition.indiscrete(chain.d)
