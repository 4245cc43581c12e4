"""Multiplicities of singular tropical surfaces: enhancements, singular-point
locations and lift counts."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circuits import Circuit, SurfaceRecord, _pentatope_labels, enumerate_surfaces
from .lattice import (
    Point,
    Polytope,
    adjugate,
    affine_through,
    cross,
    det,
    dot,
    lower_hull,
    mat_vec,
    normalized_volume,
    primitive,
    sub,
    unimodular_match,
    unimodular_to_last,
)
from .scale import ScaleValue

# B tetrahedron whose interior point yields only a fifth of its volume as enhancements
SPECIAL_B = ((1, 0, 0), (0, 1, 0), (3, 7, 20))

C_SEGMENTS = ((-3, -1), (-3, 1), (-3, 3), (-1, 1), (-1, 3), (1, 3))

E_TRIANGLES = (
    ((0, 1), (1, 0), (-1, -1)),
    ((0, 1), (2, 1), (-1, -1)),
    ((0, 1), (3, 1), (-1, -1)),
    ((0, 1), (3, 1), (-3, -2)),
    ((0, 1), (4, 1), (-2, -1)),
)


def parametric_triangle(i: int) -> tuple[Point, ...]:
    """The family ``conv{(-1,0), (0,1), (i,1)}``, of lattice area ``i``."""
    return ((-1, 0), (0, 1), (i, 1))


@dataclass(frozen=True)
class PentatopeForm:
    pq: tuple[int, int]
    labeling: dict
    d_exponents: dict

    def d(self, w: Point) -> int:
        return self.d_exponents[tuple(w)]


@dataclass(frozen=True)
class SingularLocation:
    """``kind`` is ``C_segment``, ``E_triangle`` or ``E_edgepair``; ``witness`` is the gradient of the shift."""

    kind: str
    data: tuple
    witness: tuple
    lifts: int

    def summary(self) -> str:
        if self.kind == "C_segment":
            return f"C[{self.data[0]},{self.data[1]}]x{self.lifts}"
        if self.kind == "E_triangle":
            return f"T{list(self.data[0])}x{self.lifts}"
        return f"E1{list(self.data[0])}E2{list(self.data[1])}x{self.lifts}"


@dataclass(frozen=True)
class MultiplicityReport:
    enhancements: int
    locations: tuple[SingularLocation, ...]
    mt: int
    tag: str | None = None


# ---------------------------------------------------------------------------
# enhancements


def pentatope_form(circuit: Circuit) -> PentatopeForm:
    if circuit.ctype != "A":
        raise ValueError("pentatope form needs a type A circuit")
    labels = _pentatope_labels(circuit.points, circuit.relation, circuit.pq)
    if labels is None:
        raise AssertionError("type A circuit without a pentatope labelling")
    p, q = circuit.pq
    d = {"000": p + q, "100": -1, "010": -p, "001": -q, "1pq": 1}
    exps = {labels[r]: d[r] for r in d}
    # d is proportional to the relation
    rel = dict(zip(circuit.points, circuit.relation))
    ratio = {Fraction(exps[w], rel[w]) for w in circuit.points}
    if len(ratio) != 1 or abs(ratio.pop()) != 1:
        raise AssertionError("discriminant exponents disagree with the circuit relation")
    return PentatopeForm((p, q), labels, exps)


def is_special_b(points: Sequence[Point]) -> bool:
    """Whether the tetrahedron is unimodularly equivalent to ``conv{0, e1, e2, (3,7,20)}``."""
    verts = [tuple(p) for p in points]
    if normalized_volume(verts, 3) != 20:
        return False
    for o in verts:
        vecs = [sub(v, o) for v in verts if v != o]
        if unimodular_match(vecs, SPECIAL_B) is not None:
            return True
    return False


def _b_tetrahedron(circuit: Circuit, interior: Point) -> list[Point]:
    return [p for p in circuit.points if p != tuple(interior)]


def enhancement_count(rec: SurfaceRecord, support) -> int:
    c = rec.circuit
    path = rec.path
    if c.ctype == "A":
        form = pentatope_form(c)
        w = support.points
        if path.connected:
            return abs(form.d(w[path.k]))
        k = path.k
        top = max(support.index(p) for p in c.points)
        if top == k + 1:
            return abs(form.d(w[k + 1]))
        if top == k + 2:
            return abs(form.d(w[k + 2]) + form.d(w[k + 1]))
        raise AssertionError("disconnected A circuit must end at w_{k+1} or w_{k+2}")
    if c.ctype == "B":
        tet = _b_tetrahedron(c, support.points[path.k])
        vol = normalized_volume(tet, 3)
        return vol // 5 if is_special_b(tet) else vol
    if c.ctype == "C":
        return 3
    if c.ctype == "D":
        return 1
    a, b = support.index(c.points[0]), support.index(c.points[2])
    return 1 if (a, b) in path.edges or (b, a) in path.edges else 2


# ---------------------------------------------------------------------------
# locations


def _fiber_minima(coords: dict, heights: dict) -> dict:
    out: dict = {}
    for w, key in coords.items():
        h = heights[w]
        if key not in out or h < out[key]:
            out[key] = h
    return out


def _projected_hull(fib: dict, origin: tuple) -> tuple[list, list, list]:
    fib = dict(fib)
    fib[origin] = ScaleValue.top()
    pts = sorted(fib)
    cells = lower_hull(pts, [fib[p] for p in pts])
    return pts, [fib[p] for p in pts], cells


def locations_C(rec: SurfaceRecord, support) -> list[SingularLocation]:
    c = rec.circuit
    w0, w1, w2 = _triangle_vertices(c.points)
    n = primitive(cross(sub(w1, w0), sub(w2, w0)))
    U = unimodular_to_last(n)
    u = tuple(U[2])  # n . u = 1
    nu = dict(zip(support.points, rec.nu.nu))
    grad, off = affine_through([w0, w1, w2, tuple(a + b for a, b in zip(w0, u))], [nu[w0], nu[w1], nu[w2], nu[w0]])
    shifted = {w: nu[w] - (off + sum((g * x for g, x in zip(grad, w) if x), ScaleValue())) for w in nu}
    coords = {w: (dot(n, sub(w, w0)),) for w in nu}
    fib = _fiber_minima({w: z for w, z in coords.items() if z != (0,)}, shifted)
    if not fib:
        return []
    pts, _, cells = _projected_hull(fib, (0,))
    out = []
    for cell in cells:
        ends = sorted(pts[i][0] for i in cell.points)
        seg = (ends[0], ends[-1])
        if seg in C_SEGMENTS and cell.value((0,)) > 0:
            witness = tuple(cell.gradient)
            _assert_finite(witness)
            out.append(SingularLocation("C_segment", seg, witness, seg[1] - seg[0]))
    return out


def _triangle_vertices(points: Sequence[Point]) -> list[Point]:
    """The three circuit points other than the centroid."""
    s = [sum(p[i] for p in points) for i in range(3)]
    # centroid m satisfies 4m = sum of all four points
    cen = next(p for p in points if all(4 * p[i] == s[i] for i in range(3)))
    return [p for p in points if p != cen]


def _assert_finite(witness: Sequence) -> None:
    for g in witness:
        if isinstance(g, ScaleValue) and g.has_top():
            raise AssertionError("dominating scale leaked into a location witness")


def _projection_E(rec: SurfaceRecord, support):
    a, _, b = rec.circuit.points
    u = primitive(sub(b, a))
    U = unimodular_to_last(u)
    nu = dict(zip(support.points, rec.nu.nu))
    mid = tuple((x + y) // 2 for x, y in zip(a, b))
    slope = nu[mid] - nu[a]
    coords, shifted = {}, {}
    for w in support.points:
        x, y, z = mat_vec(U, sub(w, a))
        coords[w] = (x, y)
        shifted[w] = nu[w] - nu[a] - slope * z
    return coords, shifted


def _area2(tri: Sequence[Point]) -> int:
    return abs(det([sub(tri[1], tri[0]), sub(tri[2], tri[0])]))


def _triangle_family(tri: Sequence[Point]) -> str | None:
    for i, fam in enumerate(E_TRIANGLES):
        if unimodular_match(tri, fam) is not None:
            return f"T{i + 1}"
    area = _area2(tri)
    if area >= 1 and unimodular_match(tri, parametric_triangle(area)) is not None:
        return f"P{area}"
    return None


def locations_E(rec: SurfaceRecord, support) -> list[SingularLocation]:
    coords, shifted = _projection_E(rec, support)
    fib = _fiber_minima({w: p for w, p in coords.items() if p != (0, 0)}, shifted)
    if len(fib) < 2:
        return []
    origin = (0, 0)
    pts, _, cells = _projected_hull(fib, origin)
    oi = pts.index(origin)
    out: list[SingularLocation] = []
    seen: set = set()

    def add(loc: SingularLocation) -> None:
        _assert_finite(loc.witness)
        if loc.witness in seen:
            raise AssertionError("two singular-point locations share a shift")
        seen.add(loc.witness)
        out.append(loc)

    # (i) triangular cells
    for cell in cells:
        if len(cell.points) != 3 or oi in cell.points:
            continue
        tri = tuple(pts[i] for i in cell.points)
        if _triangle_family(tri) is None or not cell.value(origin) > 0:
            continue
        add(SingularLocation("E_triangle", (tri, _triangle_family(tri)), tuple(cell.gradient), 2 * _area2(tri)))

    # (ii) an edge through the origin and a chord at lattice distance one on both sides
    def hull_value(m):
        return max(cl.value(m) for cl in cells)

    lattice = [p for p in pts if p != origin]
    val = {m: hull_value(m) for m in lattice}
    vertices = sorted({pts[i] for cl in cells for i in cl.points if i != oi})
    vertex_set = set(vertices)
    for p in lattice:
        neg = (-p[0], -p[1])
        if neg not in val or not p > neg or primitive(p) != p:
            continue
        if p not in vertex_set or neg not in vertex_set:
            continue
        for q1 in vertices:
            if det([p, q1]) != 1:
                continue
            for q2 in vertices:
                if det([p, q2]) != -1:
                    continue
                g = _solve_gradient(p, val[p] - val[neg], sub(q1, q2), val[q1] - val[q2])
                F = {m: val[m] - (g[0] * m[0] + g[1] * m[1]) for m in lattice}
                f1, f2 = F[p], F[q1]
                if not f1 > 0:
                    continue
                if any(not f1 < F[m] for m in lattice if m not in (p, neg)):
                    continue
                if any(not f2 < F[m] for m in lattice if det([p, m]) != 0 and m not in (q1, q2)):
                    continue
                add(SingularLocation("E_edgepair", ((neg, p), (q1, q2)), tuple(g), 8))
    return out


def _solve_gradient(p: Point, hp, r: Point, hr) -> tuple:
    """``g`` with ``2 g.p = hp`` and ``g.r = hr``."""
    rows = [[2 * p[0], 2 * p[1]], [r[0], r[1]]]
    D = det(rows)
    adj = adjugate(rows)
    rhs = [hp, hr]
    return tuple(
        (rhs[0] * adj[j][0] + rhs[1] * adj[j][1]) / D for j in range(2)
    )


# ---------------------------------------------------------------------------
# composition


def lift_count(rec: SurfaceRecord, location: SingularLocation | None = None) -> int:
    """Algebraic surfaces per enhancement (C, A, B, D) or per location (E, enhancement-inclusive)."""
    t = rec.circuit.ctype
    if t in "CE":
        if location is None or location.kind[0] != t:
            raise ValueError(f"type {t} lift count needs a matching location")
        return location.lifts
    if location is not None:
        raise ValueError(f"type {t} has a unique singular point location")
    if t == "D":
        return 2
    if t == "B":
        pts = rec.circuit.points
        # the interior point is the one with the largest |relation coefficient|
        big = max(range(5), key=lambda i: abs(rec.circuit.relation[i]))
        return 5 if is_special_b([p for i, p in enumerate(pts) if i != big]) else 1
    return 1


def mt(rec: SurfaceRecord, support) -> MultiplicityReport:
    t = rec.circuit.ctype
    enh = enhancement_count(rec, support)
    locs: tuple[SingularLocation, ...] = ()
    if t == "C":
        locs = tuple(locations_C(rec, support))
        total = enh * sum(lift_count(rec, l) for l in locs)
    elif t == "E":
        locs = tuple(locations_E(rec, support))
        total = sum(lift_count(rec, l) for l in locs)
    else:
        total = enh * lift_count(rec)
    tag = None
    if total == 0:
        tag = "rejected: no-locations" if t in "CE" else "rejected: no-enhancements"
    return MultiplicityReport(enh, locs, total, tag)


@dataclass(frozen=True)
class DegreeResult:
    total: int
    by_type: dict
    records: tuple
    reports: tuple


def degree(polytope: Polytope, jobs: int = 1, check: bool = False) -> DegreeResult:
    from .surface import order_support

    support = order_support(polytope)
    recs = enumerate_surfaces(polytope, jobs=jobs, check=check)
    reports = [mt(r, support) for r in recs]
    by_type: Counter = Counter()
    for r, rep in zip(recs, reports):
        by_type[r.circuit.ctype] += rep.mt
    return DegreeResult(
        sum(rep.mt for rep in reports),
        {t: by_type.get(t, 0) for t in "ABCDE"},
        tuple(recs),
        tuple(reports),
    )
