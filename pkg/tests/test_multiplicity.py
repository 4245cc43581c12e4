import pytest

from tropdisc.circuits import SurfaceRecord, classify_circuit
from tropdisc.lattice import Polytope, mat_vec, normalized_volume
from tropdisc.multiplicity import (
    SingularLocation,
    degree,
    enhancement_count,
    is_special_b,
    lift_count,
    locations_C,
    locations_E,
    mt,
    pentatope_form,
)
from tropdisc.surface import gamma_k, marked_paths, order_support

from conftest import live, simplex_degree, simplex_support


def _record(res, support, w, ctype):
    k = support.index(w)
    return next(
        (r, rep)
        for r, rep in zip(res.records, res.reports)
        if r.path.connected and r.path.k == k and r.circuit.ctype == ctype
    )


def test_pentatope_forms():
    f = pentatope_form(classify_circuit([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]))
    assert f.pq == (1, 1)
    assert sorted(f.d_exponents.values()) == [-1, -1, -1, 1, 2]
    assert f.d((0, 0, 0)) == 2 and f.d((1, 1, 1)) == 1
    g = pentatope_form(classify_circuit([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3)]))
    assert g.pq == (2, 3)
    assert [g.d(w) for w in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3)]] == [5, -1, -2, -3, 1]


def test_pentatope_form_unimodular_invariant():
    M = ((1, 1, 0), (0, 1, 2), (1, 1, 1))
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    img = [tuple(a + t for a, t in zip(mat_vec(M, p), (4, -1, 2))) for p in pts]
    assert pentatope_form(classify_circuit(img)).pq == (1, 1)


def test_pentatope_form_rejects_other_types():
    with pytest.raises(ValueError):
        pentatope_form(classify_circuit([(0, 0, 0), (0, 0, 1), (0, 0, 2)]))


def _fake_b(vertices, interior):
    support = order_support(Polytope(vertices))
    path = gamma_k(len(support.points), support.index(interior))
    circuit = classify_circuit(list(vertices) + [interior])
    return SurfaceRecord(path, circuit, None, None, False, "test"), support


def test_special_b_enhancements_and_lifts():
    tet = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (3, 7, 20)]
    rec, support = _fake_b(tet, (1, 2, 5))
    assert rec.circuit.ctype == "B" and is_special_b(tet)
    assert enhancement_count(rec, support) == 4
    assert lift_count(rec) == 5
    # both branches compose to the circuit volume
    assert enhancement_count(rec, support) * lift_count(rec) == normalized_volume(tet, 3) == 20


def test_plain_b_surface():
    tet = [(-1, -1, -1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    res = degree(Polytope(tet))
    ((rec, rep),) = live(res)
    assert rec.circuit.ctype == "B" and not is_special_b(tet)
    assert rep.enhancements == rep.mt == normalized_volume(tet, 3) == 4


def test_d_enhancements_and_mt():
    res = simplex_degree(3)
    for rec, rep in live(res):
        if rec.circuit.ctype == "D":
            assert rep.enhancements == 1 and rep.mt == 2 and lift_count(rec) == 2


def test_e_enhancement_in_and_off_path():
    res, s3 = simplex_degree(3), simplex_support(3)
    rec, _ = _record(res, s3, (1, 0, 1), "E")
    # the length-two path edge is exactly the circuit
    assert enhancement_count(rec, s3) == 1


def test_e_locations_side_point():
    res, s3 = simplex_degree(3), simplex_support(3)
    rec, rep = _record(res, s3, (1, 0, 1), "E")
    locs = locations_E(rec, s3)
    assert len(locs) == 3
    assert all(l.kind == "E_triangle" and l.lifts == 2 for l in locs)
    assert rep.mt == 6


def test_e_locations_top_point():
    res, s3 = simplex_degree(3), simplex_support(3)
    rec, rep = _record(res, s3, (1, 1, 1), "E")
    locs = locations_E(rec, s3)
    assert len(locs) == 1 and locs[0].kind == "E_triangle"
    rec2, rep2 = _record(res, s3, (0, 1, 2), "E")
    assert rep2.mt == 4


def test_e_locations_interior_point_quartic():
    s4 = order_support(Polytope.simplex(4))
    path = marked_paths(s4)[s4.index((1, 1, 1))]
    from tropdisc.circuits import bce_surface

    rec = bce_surface(s4, path)
    locs = locations_E(rec, s4)
    assert [l.kind for l in locs] == ["E_edgepair"]
    assert mt(rec, s4).mt == 8


def test_e_witnesses_distinct_and_finite():
    res, s3 = simplex_degree(3), simplex_support(3)
    for rec, rep in zip(res.records, res.reports):
        if rec.circuit.ctype == "E":
            ws = [l.witness for l in rep.locations]
            assert len(ws) == len(set(ws))


def test_boundary_e_rejected_with_tag():
    res = simplex_degree(3)
    dead = [(r, rep) for r, rep in zip(res.records, res.reports) if rep.mt == 0]
    assert dead
    for r, rep in dead:
        assert rep.locations == () and rep.tag == "rejected: no-locations"


def test_c_records_without_locations():
    prism = [(1, 0, 0), (2, 1, 0), (0, 2, 0), (1, 0, 1), (2, 1, 1), (0, 2, 1)]
    support = order_support(Polytope(prism))
    res = degree(Polytope(prism))
    cs = [(r, rep) for r, rep in zip(res.records, res.reports) if r.circuit.ctype == "C"]
    assert cs
    for r, rep in cs:
        assert rep.enhancements == 3
        assert locations_C(r, support) == []
        assert rep.mt == 0


def test_lift_counts():
    e = classify_circuit([(0, 0, 0), (0, 0, 1), (0, 0, 2)])
    c = classify_circuit([(1, 0, 0), (2, 1, 0), (0, 2, 0), (1, 1, 0)])
    path = gamma_k(5, 1)
    erec = SurfaceRecord(path, e, None, None, False, "test")
    crec = SurfaceRecord(path, c, None, None, False, "test")
    tri = SingularLocation("E_triangle", (((0, 1), (1, 0), (-1, -1)), "T1"), (0, 0), 2)
    pair = SingularLocation("E_edgepair", (((-1, 0), (1, 0)), ((0, 1), (1, -1))), (1, 1), 8)
    seg = SingularLocation("C_segment", (-1, 3), (0,), 4)
    assert lift_count(erec, tri) == 2
    assert lift_count(erec, pair) == 8
    assert lift_count(crec, seg) == 4
    with pytest.raises(ValueError):
        lift_count(erec, seg)
    with pytest.raises(ValueError):
        lift_count(erec)


def test_c_mt_composition():
    # three enhancements, each lifting (n - m) times per location
    seg = SingularLocation("C_segment", (-3, 1), (0,), 4)
    assert 3 * seg.lifts == 12


# degree of the discriminant for smooth polytopes, via the alternating sum over
# faces  sum (-1)^codim (dim + 1) Vol(face):
#   cube:            4*6  - 3*12 + 2*12 - 8 = 4
#   [0,1]^2x[0,2]:   4*12 - 3*20 + 2*16 - 8 = 12
#   2-simplex x I:   4*12 - 3*20 + 2*15 - 6 = 12
SMOOTH = [
    ([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)], 4),
    ([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 2)], 12),
    ([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 1), (2, 0, 1), (0, 2, 1)], 12),
]


@pytest.mark.parametrize("vertices,expected", SMOOTH)
def test_degree_matches_face_formula_on_smooth_polytopes(vertices, expected):
    assert degree(Polytope(vertices)).total == expected


def test_octahedron_degree():
    # f = a + sum(b_i x_i + c_i / x_i): the discriminant is the product over
    # sign choices of a + sum(+-2 sqrt(b_i c_i)), of degree 2^3
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    assert degree(Polytope(octa)).total == 8


# degrees computed independently as the number of singular members of a generic
# pencil f + t g (Groebner basis of F, xF_x, yF_y, zF_z over GF(32003)), then frozen
PENCIL = [
    # a lone pentatope: the discriminant is a binomial of degree 1 + 1 + 1
    ([(0, 1, -1), (0, 2, 0), (1, 0, 0), (1, 1, 2), (1, 1, 3)], 3),
    ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], 3),
    # the same pentatope with a collinear point added below its top edge
    ([(0, 1, -1), (0, 2, 0), (1, 0, 0), (1, 1, 1), (1, 1, 3)], 3),
    ([(0, 1, -1), (0, 2, 0), (1, 0, 0), (1, 1, 0), (1, 1, 3)], 7),
    # triangle-plus-centroid bipyramid
    ([(0, -1, 1), (1, 0, -1), (1, 2, 1), (2, 0, -1)], 6),
    ([(1, 0, 0), (2, 1, 0), (0, 2, 0), (1, 1, 3), (0, 1, -1)], 25),
    ([(1, 0, 0), (2, 1, 0), (0, 2, 0), (0, 0, 1), (1, 1, -2)], 21),
]


@pytest.mark.parametrize("vertices,expected", PENCIL)
def test_degree_matches_pencil_count(vertices, expected):
    assert degree(Polytope(vertices)).total == expected


def test_degree_invariant_under_unimodular_maps():
    vs = [(1, 0, 0), (2, 1, 0), (0, 2, 0), (0, 0, 1), (1, 1, -2)]
    for M in (((1, 1, 0), (0, 1, 0), (0, 0, 1)), ((0, 0, 1), (1, 0, 0), (0, 1, 1)), ((1, 0, 0), (2, 1, 0), (1, -1, 1))):
        assert degree(Polytope([mat_vec(M, v) for v in vs])).total == 21
