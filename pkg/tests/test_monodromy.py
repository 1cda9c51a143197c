import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from ncpoly.hurwitz import product
from ncpoly.monodromy import (
    ClearanceError,
    PathSpec,
    RectangleAnalysis,
    continue_fiber,
    fiber,
    geocom,
    lift_map,
    lift_multiset_path,
    loop_monodromy,
    rectangle_loop,
    side_chains,
    side_constellations,
    standard_labels,
)
from ncpoly.nc_core import SetPartition
from ncpoly.nc_lattice import long_cycle
from ncpoly.poly_numeric import ComplexPoly, NumericMultiset, Rectangle, bounding_rectangle, critical_data

from conftest import DEG5, DEG5_RECT

LEFT = "1|2|3|4|5 < 1|2|3|45 < 1|245|3 < 1|2345 < 12345"
RIGHT = "1|2|3|4|5 < 15|2|3|4 < 15|23|4 < 1235|4 < 12345"
BOTTOM = "1|2|3|4|5 < 15|2|3|4 < 145|2|3 < 145|23 < 12345"
TOP = "1|2|3|4|5 < 1|24|3|5 < 1|234|5 < 1|2345 < 12345"


def chain_str(ch):
    return " < ".join(str(x) for x in ch)


def random_poly(seed, d):
    rng = np.random.default_rng(seed)
    return ComplexPoly([1, *(rng.normal(size=d) + 1j * rng.normal(size=d))])


def circle(center, r, n=12, start_angle=-math.pi / 2, clockwise=True):
    s = -1 if clockwise else 1
    pts = [center + r * cmath.exp(1j * (start_angle + s * 2 * math.pi * k / n)) for k in range(n)]
    return PathSpec.polyline(*pts, pts[0], closed=True)


def test_fiber_examples():
    pts = fiber(ComplexPoly.monomial(5), 1)
    assert all(abs(z ** 5 - 1) < 1e-12 for z in pts)
    pts = sorted(fiber(ComplexPoly([1, 0, -3, 0]), 0), key=lambda z: z.real)
    assert np.allclose(pts, [-math.sqrt(3), 0, math.sqrt(3)])


def test_fiber_rejects_critical_value():
    with pytest.raises(ClearanceError):
        fiber(ComplexPoly([1, 0, -3, 0]), 2)


@given(st.integers(0, 10**6), st.integers(2, 8))
def test_fiber_size(seed, d):
    p = random_poly(seed, d)
    w = complex(*np.random.default_rng(seed + 1).normal(size=2))
    pts = fiber(p, w)
    assert len(pts) == d
    assert np.max(np.abs(np.array([p(z) for z in pts]) - w)) < 1e-8 * (1 + np.max(np.abs(pts))) ** d


def test_standard_labels_monomial():
    d, R = 5, 3.0
    lab = standard_labels(ComplexPoly.monomial(d), R)
    for k, z in enumerate(lab.points, start=1):
        assert abs(z - R ** (1 / d) * cmath.exp(2j * math.pi * k / d)) < 1e-9


def test_standard_labels_independent_of_R():
    p = random_poly(3, 5)
    r = bounding_rectangle(critical_data(p).cvl.points).expanded(1.0)
    base = complex(r.xl, r.yb)
    a = standard_labels(p, base)
    R0 = 1e6
    b = standard_labels(p, base, R=R0)
    c = standard_labels(p, base, R=4 * R0)
    assert np.allclose(a.points, b.points) and np.allclose(b.points, c.points)


def test_contractible_loop_is_identity():
    p = ComplexPoly([1, 0, -3, 0])
    base = -5 - 5j
    lab = standard_labels(p, base)
    loop = PathSpec.polyline(base, -5 - 3j, -4 - 3j, -4 - 5j, base, closed=True)
    assert loop_monodromy(p, lab, loop).is_identity()


@pytest.mark.parametrize("d", range(2, 8))
def test_clockwise_circle_gives_long_cycle(d):
    p = ComplexPoly.monomial(d)
    lab = standard_labels(p, 1.0)
    loop = circle(0, 1.0, n=16, start_angle=0.0)
    assert loop_monodromy(p, lab, loop) == long_cycle(d)
    assert loop_monodromy(p, lab, circle(0, 1.0, n=16, start_angle=0.0, clockwise=False)) == long_cycle(d).inverse()


@given(st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=10)
def test_global_loop_is_long_cycle(seed, d):
    p = random_poly(seed, d)
    r = bounding_rectangle(critical_data(p).cvl.points)
    lab = standard_labels(p, complex(r.xl, r.yb))
    assert loop_monodromy(p, lab, rectangle_loop(r)) == long_cycle(d)


def test_constant_path_keeps_fiber():
    p = random_poly(1, 4)
    lab = standard_labels(p, -10 - 10j)
    same = continue_fiber(p, lab, PathSpec((lab.basepoint,)))
    assert same.points == lab.points


@given(st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=20)
def test_path_and_reverse_cancel(seed, d):
    p = random_poly(seed, d)
    cvl = critical_data(p).cvl.points
    rng = np.random.default_rng(seed)
    r = bounding_rectangle(cvl).expanded(0.5)
    pts = [complex(r.xl, r.yb)] + [complex(rng.uniform(r.xl, r.xr), rng.uniform(r.yb, r.yt)) for _ in range(3)]
    path = PathSpec.polyline(*pts)
    try:
        lab = standard_labels(p, pts[0], cvl=cvl)
        there = continue_fiber(p, lab, path)
    except ClearanceError:
        assume(False)
    back = continue_fiber(p, there, path.reversed())
    assert np.allclose(back.points, lab.points, atol=1e-8)


@given(st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=20)
def test_refined_discretization_same_labels(seed, d):
    p = random_poly(seed, d)
    cvl = critical_data(p).cvl.points
    rng = np.random.default_rng(seed + 7)
    r = bounding_rectangle(cvl).expanded(0.3)
    base = complex(r.xl, r.yb)
    pts = [base] + [complex(rng.uniform(r.xl, r.xr), rng.uniform(r.yb, r.yt)) for _ in range(4)] + [base]
    loop = PathSpec.polyline(*pts, closed=True)
    lab = standard_labels(p, base, cvl=cvl)
    try:
        coarse = lift_map(p, lab, loop, cvl=cvl)
    except ClearanceError:
        assume(False)
    fine = lift_map(p, lab, loop, cvl=cvl, refine=4)
    assert coarse == fine


@given(st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=10)
def test_homotopic_loops_agree(seed, d):
    p = random_poly(seed, d)
    r = bounding_rectangle(critical_data(p).cvl.points)
    bigger = Rectangle(r.xl, r.xr + 1.5, r.yb, r.yt + 2.0)
    lab = standard_labels(p, complex(r.xl, r.yb))
    assert loop_monodromy(p, lab, rectangle_loop(r)) == loop_monodromy(p, lab, rectangle_loop(bigger))


def test_deg5_side_chains(deg5_analysis):
    sc = deg5_analysis.side_chains()
    assert chain_str(sc.left) == LEFT
    assert chain_str(sc.right) == RIGHT
    assert chain_str(sc.bottom) == BOTTOM
    assert chain_str(sc.top) == TOP


def test_deg5_geocom():
    g = geocom(DEG5, DEG5_RECT)
    assert np.allclose(g.left_weights, (.102, .528, .089, .191, .091), atol=5e-3)
    assert np.allclose(g.bottom_weights, (.190, .241, .334, .098, .136), atol=5e-3)
    assert math.isclose(sum(g.left_weights), 1.0, abs_tol=1e-15)
    assert math.isclose(sum(g.bottom_weights), 1.0, abs_tol=1e-15)


def test_deg5_constellations(deg5_analysis):
    h, v = deg5_analysis.side_constellations()
    assert h.target == long_cycle(5) and v.target == long_cycle(5)
    # the basic side permutations rebuild the left chain
    left = deg5_analysis.side_chains().left_perms
    for i in range(1, len(left)):
        assert left[i] == left[i - 1] * deg5_analysis.sigma(i)


def test_monomial_plus_constant_chains():
    c = 1 - 2j
    p = ComplexPoly.monomial(4, c)
    rect = Rectangle(-1, 3, -4, 0)
    sc = side_chains(p, rect)
    assert [str(x) for x in sc.left] == ["1|2|3|4", "1234"]
    h, v = side_constellations(p, rect)
    assert h.stripped().factors == (long_cycle(4),)
    assert v.stripped().factors == (long_cycle(4),)


def _check_side_identities(sc, d):
    delta = long_cycle(d)
    for a, b in zip(sc.left_perms, sc.right_perms):
        assert a * b == delta
    for a, b in zip(sc.top_perms, sc.bottom_perms):
        assert a * b == delta


@given(st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=10)
def test_side_chain_invariants(seed, d):
    p = random_poly(seed, d)
    rect = bounding_rectangle(critical_data(p).cvl.points)
    ra = RectangleAnalysis(p, rect)
    sc = ra.side_chains()
    _check_side_identities(sc, d)
    # regular sides: chains run from discrete to indiscrete
    for ch in (sc.left, sc.right, sc.bottom, sc.top):
        assert ch[0] == SetPartition.discrete(d)
        assert ch[-1] == SetPartition.indiscrete(d)
    h, v = ra.side_constellations()
    assert product(h.factors, d) == long_cycle(d)
    assert product(v.factors, d) == long_cycle(d)


@given(st.integers(0, 10**6), st.integers(2, 5), st.floats(0.1, 3.0))
@settings(max_examples=10)
def test_enlarging_rectangle_keeps_chains(seed, d, margin):
    p = random_poly(seed, d)
    rect = bounding_rectangle(critical_data(p).cvl.points)
    a = side_chains(p, rect)
    b = side_chains(p, rect.expanded(margin))
    assert a.left.elements == b.left.elements
    assert a.bottom.elements == b.bottom.elements


def test_rectangle_must_contain_cvl():
    with pytest.raises(ValueError):
        side_chains(DEG5, Rectangle(-1, 1, -1, 1))


def test_path_validation():
    with pytest.raises(ValueError):
        PathSpec((0j, 0j))
    with pytest.raises(ValueError):
        PathSpec((0j, 1 + 0j), closed=True)


# -- lifting paths of multisets --------------------------------------------

def test_lift_constant_path():
    p = ComplexPoly([1, 0, -3, 0])
    assert lift_multiset_path(p, [[-2, 2]]).distance(p) < 1e-12
    assert lift_multiset_path(p, [[-2, 2], [-2, 2]]).distance(p) < 1e-10


def test_lift_merge_to_monomial():
    q = lift_multiset_path(ComplexPoly([1, 0, -3, 0]), [[-2, 2], [0, 0]])
    assert q.distance(ComplexPoly.monomial(3)) < 1e-8


def test_lift_vertical_collapse_keeps_constellation():
    cvl = list(critical_data(DEG5).cvl.points)
    y0 = float(np.mean([v.imag for v in cvl]))
    q = lift_multiset_path(DEG5, [cvl, [complex(v.real, y0) for v in cvl]])
    assert np.allclose(sorted(v.real for v in critical_data(q).cvl.points), sorted(v.real for v in cvl))
    h0, _ = side_constellations(DEG5, DEG5_RECT)
    h1, _ = side_constellations(q, DEG5_RECT)
    assert h0.stripped() == h1.stripped()


def test_lift_refinement_stable():
    p = random_poly(11, 4)
    cvl = list(critical_data(p).cvl.points)
    end = [v * 0.5 + 1j for v in cvl]
    direct = lift_multiset_path(p, [cvl, end])
    fine = lift_multiset_path(p, [cvl] + [[a + (b - a) * t for a, b in zip(cvl, end)]
                                          for t in (0.25, 0.5, 0.75, 1.0)])
    assert direct.distance(fine) < 1e-8


def test_lift_rejects_split():
    q = ComplexPoly.monomial(3)
    with pytest.raises(ValueError):
        lift_multiset_path(q, [[0, 0], [-1, 1]])


def test_lift_rejects_wrong_start():
    with pytest.raises(ValueError):
        lift_multiset_path(ComplexPoly([1, 0, -3, 0]), [[-1, 1]])


def test_lift_partial_merge_degree4():
    # two of three critical values merge; the third stays put
    p = random_poly(5, 4)
    cvl = list(critical_data(p).cvl.points)
    mid = (cvl[0] + cvl[1]) / 2
    q = lift_multiset_path(p, [cvl, [mid, mid, cvl[2]]])
    got = critical_data(q).cvl
    assert got.matches(NumericMultiset((mid, cvl[2]), (2, 1)), 1e-6)
