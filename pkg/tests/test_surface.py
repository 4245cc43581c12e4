import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropdisc.lattice import DimensionError, Polytope, affine_dim, certify_cells
from tropdisc.scale import ScaleValue, eps_inner
from tropdisc.surface import (
    Subdivision,
    extend_with_cell,
    marked_paths,
    nu_from_path,
    numeric_subdivision,
    order_support,
    path_edges_present,
    placing_heights,
    point_conditions_hold,
    placing_triangulation,
    subdivision_from_heights,
    verify_regular,
)

from conftest import live, simplex_degree, simplex_support


def test_order_support_examples():
    assert order_support(Polytope.simplex(1)).points == ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))
    s2 = order_support(Polytope.simplex(2))
    assert s2.points[:4] == ((0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0))
    assert s2.N == 8


def test_order_is_the_eps_order():
    pts = order_support(Polytope.simplex(3)).points
    for a, b in zip(pts, pts[1:]):
        assert (eps_inner(b) - eps_inner(a)).sign() == 1


@pytest.mark.parametrize("d,count", [(1, 6), (2, 18), (3, 38)])
def test_marked_path_counts(d, count):
    s = order_support(Polytope.simplex(d))
    paths = marked_paths(s)
    assert len(paths) == count == 2 * s.N + 2
    assert all(len(p.edges) == s.N for p in paths)


def test_nu_satisfies_point_conditions_and_circuit_relations():
    s = simplex_support(3)
    pts = s.points
    # E circuit through the skipped point: midpoint height is the mean of the ends
    k = s.index((1, 0, 1))
    path = marked_paths(s)[k]
    circ = [(1, 0, 0), (1, 0, 1), (1, 0, 2)]
    nu = nu_from_path(s, path, circ, (1, -2, 1)).nu
    a, m, b = (nu[s.index(p)] for p in circ)
    assert a + b == m * 2
    assert nu[0] == ScaleValue()
    for i, (x, y) in enumerate(path.edges, start=1):
        lhs = -nu[x] + ScaleValue.M(i, eps_inner(pts[x]))
        rhs = -nu[y] + ScaleValue.M(i, eps_inner(pts[y]))
        assert lhs == rhs


def test_nu_with_parallelogram_relation():
    s = simplex_support(3)
    k = s.index((1, 1, 0))
    path = marked_paths(s)[k]
    q = [(1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)]
    nu = nu_from_path(s, path, q, (1, -1, -1, 1))
    c = {p: nu.c[s.index(p)] for p in q}
    assert c[(1, 1, 0)] == c[(1, 0, 1)] + c[(1, 1, 1)] - c[(1, 0, 0)] or c[(1, 1, 0)] == c[(1, 0, 0)] + c[(1, 1, 1)] - c[(1, 0, 1)]


def test_placing_triangulation_examples():
    tet = placing_triangulation([(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)])
    assert tet.cells == (((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)),)
    with pytest.raises(DimensionError):
        placing_triangulation([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_placing_matches_lower_hull_and_is_tetrahedral():
    pts = [p for p in order_support(Polytope.simplex(2)).points if p != (0, 1, 1)]
    tri = placing_triangulation(pts)
    assert tri == subdivision_from_heights(pts, placing_heights(len(pts)))
    assert all(len(c) == 4 for c in tri.cells)
    assert {p for c in tri.cells for p in c} == set(pts)


def test_placing_has_the_long_edge():
    pts = [p for p in order_support(Polytope.simplex(3)).points if p != (1, 0, 1)]
    tri = placing_triangulation(pts)
    assert tri.has_edge((1, 0, 0), (1, 0, 2))


def test_placing_is_prefix_stable():
    pts = order_support(Polytope.simplex(2)).points
    start = next(m for m in range(4, len(pts)) if affine_dim(pts[:m]) == 3)
    for m in range(start, len(pts)):
        small, big = placing_triangulation(pts[:m]), placing_triangulation(pts[: m + 1])
        big_cells = set(big.cells)
        region = set(pts[:m])
        kept = {c for c in big_cells if set(c) <= region}
        assert kept == set(small.cells)


def test_extend_with_cell_empty_remaining():
    base = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    prior = placing_triangulation(base)
    h = {p: v for p, v in zip(base, placing_heights(4))}
    out = extend_with_cell(prior, h, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], [])
    assert len(out.cells) == 2
    assert out.volume() == 1 + 2


def test_verify_regular_examples():
    s = order_support(Polytope.simplex(2))
    pts = list(s.points)
    hs = placing_heights(len(pts))
    tri = subdivision_from_heights(pts, hs)
    assert verify_regular(s, tri, hs)
    bad = list(hs)
    bad[-1] = -bad[-1]  # flip the leading scale of the last height
    assert not verify_regular(s, tri, bad)
    one = order_support(Polytope.simplex(1))
    assert verify_regular(one, Subdivision.of([one.points]), [ScaleValue()] * 4)


def test_d3_records_are_certified():
    res = simplex_degree(3)
    s = simplex_support(3)
    for rec, _ in live(res):
        assert verify_regular(s, rec.subdivision, rec.nu.nu)
        assert rec.subdivision.volume() == s.polytope.volume
        assert path_edges_present(s, rec.path, rec.subdivision)


def test_numeric_instantiation_reproduces_d2_records():
    s = simplex_support(2)
    for rec, _ in live(simplex_degree(2)):
        assert numeric_subdivision(list(s.points), rec.nu.nu) == rec.subdivision


@settings(max_examples=25, deadline=None)
@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)))
def test_placing_volume_invariant(f):
    # any order by a linear functional adds each point outside the current hull
    pts = sorted(order_support(Polytope.simplex(2)).points, key=lambda p: (sum(a * b for a, b in zip(f, p)), p))
    tri = placing_triangulation(pts)
    assert tri.volume() == 8
    assert certify_cells(pts, placing_heights(len(pts)), [[pts.index(p) for p in c] for c in tri.cells])


def test_point_conditions_reject_a_raised_midpoint():
    # skipping w_4 = (1,1,2) joins (1,1,1) and (1,1,3); if the pentatope relation
    # lifts (1,1,2) above that edge, the fourth point misses the surface
    s = order_support(Polytope([(0, 1, -1), (0, 2, 0), (1, 0, 0), (1, 1, 1), (1, 1, 3)]))
    path = marked_paths(s)[4]
    pent = [(0, 1, -1), (0, 2, 0), (1, 0, 0), (1, 1, 2), (1, 1, 3)]
    nu = nu_from_path(s, path, pent, (1, -1, -1, 2, -1))
    assert not point_conditions_hold(s, path, nu)
    # the collinear circuit itself keeps the midpoint on the edge
    line = nu_from_path(s, path, [(1, 1, 1), (1, 1, 2), (1, 1, 3)], (1, -2, 1))
    assert point_conditions_hold(s, path, line)
