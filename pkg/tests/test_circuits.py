import pytest

from tropdisc.circuits import (
    a_candidates,
    bce_surface,
    classify_circuit,
    d_candidates,
    distinct_paths,
    enumerate_surfaces,
)
from tropdisc.lattice import Polytope
from tropdisc.surface import marked_paths, order_support, path_edges_present, verify_regular

from conftest import live, simplex_degree, simplex_support


def _gamma(support, w):
    return marked_paths(support)[support.index(w)]


def test_classify_examples():
    assert classify_circuit([(0, 0, 0), (0, 0, 1), (0, 0, 2)]).ctype == "E"
    a = classify_circuit([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    assert a.ctype == "A" and a.pq == (1, 1)
    assert classify_circuit([(1, 0, 0), (2, 1, 0), (0, 2, 0), (1, 1, 0)]).ctype == "C"
    assert classify_circuit([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]).ctype == "D"
    b = classify_circuit([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0)])
    assert b is None or b.ctype != "B"  # interior point on a face: not a tetrahedron + interior point
    assert classify_circuit([(-1, -1, -1), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)]).ctype == "B"


def test_non_circuits():
    assert classify_circuit([(0, 0, 0), (1, 0, 0), (0, 1, 0)]) is None
    assert classify_circuit([(0, 0, 0), (0, 0, 1), (0, 0, 3)]) is None


def test_bce_examples():
    s3 = simplex_support(3)
    rec = bce_surface(s3, _gamma(s3, (1, 0, 1)))
    assert rec.circuit.ctype == "E"
    assert rec.circuit.points == ((1, 0, 0), (1, 0, 1), (1, 0, 2))
    s2 = simplex_support(2)
    rec2 = bce_surface(s2, _gamma(s2, (0, 1, 1)))
    assert rec2.circuit.ctype == "E"
    with pytest.raises(ValueError):
        bce_surface(s3, _gamma(s3, (0, 0, 3)))


def test_d_examples():
    s3 = simplex_support(3)
    recs = d_candidates(s3, _gamma(s3, (1, 1, 0)))
    assert len(recs) == 2
    extra = d_candidates(s3, _gamma(s3, (0, 3, 0)))
    assert [r.circuit.points for r in extra] == [((0, 2, 1), (0, 3, 0), (1, 0, 1), (1, 1, 0))]


def test_d_rule_agrees_with_hull_check():
    # check mode re-verifies every parallelogram through the generic hull route
    s3 = simplex_support(3)
    for path in marked_paths(s3):
        if path.connected:
            fast = [r.circuit.points for r in d_candidates(s3, path)]
            slow = [r.circuit.points for r in d_candidates(s3, path, check=True)]
            assert fast == slow


def test_no_type_a_for_cubics():
    s3 = simplex_support(3)
    assert all(not a_candidates(s3, p) for p in marked_paths(s3))


def test_a_example_quartic():
    s4 = order_support(Polytope.simplex(4))
    recs = a_candidates(s4, _gamma(s4, (0, 4, 0)))
    q = tuple(sorted([(0, 4, 0), (0, 3, 1), (1, 1, 0), (1, 1, 1), (1, 0, 3)]))
    assert q in [r.circuit.points for r in recs]


def test_a_rejects_tuples_after_k():
    # circuits entirely above w_k in the order never attach to a connected path at k = 0
    s3 = simplex_support(3)
    assert a_candidates(s3, marked_paths(s3)[0]) == []


def test_enumeration_examples():
    assert enumerate_surfaces(Polytope.simplex(1)) == []
    # boundary candidates are emitted and later excluded by the location search
    recs = [r for r, _ in live(simplex_degree(2))]
    assert sorted(r.circuit.ctype for r in recs) == ["D", "E"]
    e = next(r for r in recs if r.circuit.ctype == "E")
    d = next(r for r in recs if r.circuit.ctype == "D")
    s2 = simplex_support(2)
    assert s2.points[e.path.k] == (0, 1, 1)
    assert s2.points[d.path.k] == (1, 0, 0)


def test_live_surfaces_d3():
    recs = [r for r, _ in live(simplex_degree(3))]
    assert len(recs) == 12
    assert sorted(r.circuit.ctype for r in recs) == ["D"] * 8 + ["E"] * 4


def test_enumeration_invariants_d3():
    s3 = simplex_support(3)
    res = simplex_degree(3)
    keys = [r.sort_key() for r in res.records]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for rec in res.records:
        assert not (rec.circuit.ctype == "D" and not rec.path.connected)
        assert verify_regular(s3, rec.subdivision, rec.nu.nu)
        assert path_edges_present(s3, rec.path, rec.subdivision)
        assert rec.subdivision.has_face(rec.circuit.points)


def test_check_mode_matches_fast_mode():
    fast = enumerate_surfaces(Polytope.simplex(2))
    slow = enumerate_surfaces(Polytope.simplex(2), check=True)
    assert [r.sort_key() for r in fast] == [r.sort_key() for r in slow]


def test_parallel_enumeration_is_deterministic():
    one = enumerate_surfaces(Polytope.simplex(2), jobs=1)
    two = enumerate_surfaces(Polytope.simplex(2), jobs=2)
    assert [(r.sort_key(), r.subdivision) for r in one] == [(r.sort_key(), r.subdivision) for r in two]


@pytest.mark.parametrize(
    "w,absent,present",
    [
        # w = (i, j, m) on the top facet with j > 0: the parallelogram reaching the
        # top facet at (i, j+1, m-1) is never a cell; the one through (i, j-1, m+1) is
        ((1, 1, 2), ((1, 1, 1), (1, 1, 2), (1, 2, 0), (1, 2, 1)), ((1, 0, 3), (1, 1, 1), (1, 1, 2), (1, 2, 0))),
    ],
)
def test_top_point_parallelogram_choice(w, absent, present):
    from tropdisc.surface import nu_from_path, numeric_subdivision

    s4 = order_support(Polytope.simplex(4))
    path = _gamma(s4, w)
    assert [r.circuit.points for r in d_candidates(s4, path, check=True)] == [present]
    # the rational lower hull of the forced heights agrees
    for quad, is_cell in ((absent, False), (present, True)):
        c = classify_circuit(list(quad))
        sub = numeric_subdivision(list(s4.points), nu_from_path(s4, path, list(c.points), c.relation).nu)
        assert sub.has_face(list(c.points)) is is_cell


def test_last_disconnected_path_is_not_enumerated_twice():
    s = simplex_support(2)
    paths = marked_paths(s)
    keep = distinct_paths(paths)
    dropped = [p for i, p in enumerate(paths) if i not in keep]
    N = s.N
    assert [p.label for p in dropped] == [f"G{N},{N + 1}"]
    assert set(dropped[0].edges) == set(paths[N + 1].edges)
