"""Circuit classification and enumeration of singular tropical surfaces."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import (
    NotMinimalError,
    Point,
    Polytope,
    affine_dim,
    affine_relation,
    det,
    enters,
    in_hull,
    lattice_points_in_hull,
    simplex_volume,
    sub,
)
from .scale import ScaleValue, eps_inner
from .surface import (
    MarkedPath,
    NuAssignment,
    OrderedSupport,
    Subdivision,
    UnsolvableError,
    _Placer,
    marked_paths,
    nu_from_path,
    order_support,
    placing_triangulation,
    point_conditions_hold,
    subdivision_from_heights,
)


@dataclass(frozen=True)
class Circuit:
    points: tuple[Point, ...]
    relation: tuple[int, ...]
    ctype: str
    pq: tuple[int, int] | None = None

    def coefficient(self, p: Point) -> int:
        return self.relation[self.points.index(tuple(p))]


def classify_circuit(points: Sequence[Sequence[int]]) -> Circuit | None:
    pts = tuple(sorted(tuple(p) for p in points))
    if len(set(pts)) != len(pts) or not 3 <= len(pts) <= 5:
        return None
    try:
        rel = affine_relation(pts)
    except NotMinimalError:
        return None
    if rel is None or any(x == 0 for x in rel):
        return None
    lam = rel.coefficients
    pos = sorted(abs(x) for x in lam if x > 0)
    neg = sorted(abs(x) for x in lam if x < 0)
    small, big = sorted((pos, neg), key=len)
    ctype = None
    pq = None
    if len(pts) == 3 and small == [2] and big == [1, 1]:
        ctype = "E"
    elif len(pts) == 4 and small == [1, 1] and big == [1, 1]:
        ctype = "D"
    elif len(pts) == 4 and small == [3] and big == [1, 1, 1]:
        ctype = "C"
    elif len(pts) == 5 and len(small) == 1:
        ctype = "B"
    elif len(pts) == 5 and len(small) == 2 and small[0] == 1 and 1 in big:
        rest = list(big)
        rest.remove(1)
        p, q = rest
        if p + q == small[1] and math.gcd(p, q) == 1:
            ctype = "A"
            pq = (p, q)
    if ctype is None:
        return None
    if lattice_points_in_hull(pts) != sorted(pts):
        return None
    if ctype == "A" and _pentatope_labels(pts, lam, pq) is None:
        return None
    return Circuit(pts, tuple(lam), ctype, pq)


def _pentatope_labels(pts, lam, pq) -> dict[str, Point] | None:
    """Roles 000/100/010/001/1pq consistent with the relation, unimodular base."""
    p, q = pq
    sign_small = 1 if sum(1 for x in lam if x > 0) == 2 else -1
    # orient so that the three-element class is positive
    lam = [x * -sign_small for x in lam]
    by = list(zip(pts, lam))
    o = [w for w, x in by if x == -(p + q)]
    top = [w for w, x in by if x == -1]
    if len(o) != 1 or len(top) != 1:
        return None
    positives = [(w, x) for w, x in by if x > 0]
    options = []
    for a in positives:
        for b in positives:
            for c in positives:
                if len({a[0], b[0], c[0]}) != 3:
                    continue
                if (a[1], b[1], c[1]) == (1, p, q):
                    options.append((a[0], b[0], c[0]))
    for e1, e2, e3 in sorted(options):
        if simplex_volume([o[0], e1, e2, e3]) == 1:
            return {"000": o[0], "100": e1, "010": e2, "001": e3, "1pq": top[0]}
    return None


@dataclass
class SurfaceRecord:
    path: MarkedPath
    circuit: Circuit
    subdivision: Subdivision
    nu: NuAssignment
    on_boundary: bool
    source: str
    rule_verdict: bool | None = None
    notes: dict = field(default_factory=dict)

    def sort_key(self):
        return (0 if self.path.connected else 1, self.path.k, self.circuit.points)


# ---------------------------------------------------------------------------
# generic verification of a candidate (path, circuit)


def _cells_ok(sub_: Subdivision, circuit: Circuit) -> bool:
    cpts = set(circuit.points)
    extra = {"A": 0, "B": 0, "C": 1, "D": 1, "E": 2}[circuit.ctype]
    if not sub_.has_face(circuit.points):
        return False
    for cell in sub_.cells:
        if cpts <= set(cell):
            if len(cell) != len(cpts) + extra:
                return False
        elif len(cell) != 4:
            return False
    return True


def verify_candidate(
    support: OrderedSupport, path: MarkedPath, circuit: Circuit
) -> tuple[NuAssignment, Subdivision] | None:
    """Heights from the path recurrences; accept iff they realise a surface of the expected type."""
    try:
        nu = nu_from_path(support, path, circuit.points, circuit.relation)
    except UnsolvableError:
        return None
    if not point_conditions_hold(support, path, nu):
        return None
    sub_ = subdivision_from_heights(list(support.points), list(nu.nu))
    if not _cells_ok(sub_, circuit):
        return None
    return nu, sub_


# ---------------------------------------------------------------------------
# B, C, E circuits: placing triangulation of the support minus w_k


def _barycentric(tet: Sequence[Point], x: Point) -> list[Fraction]:
    d = det([sub(p, tet[0]) for p in tet[1:]])
    out = []
    for i in range(4):
        rep = list(tet)
        rep[i] = x
        out.append(Fraction(det([sub(p, rep[0]) for p in rep[1:]]), d))
    return out


def bce_surface(support: OrderedSupport, path: MarkedPath, check: bool = False) -> SurfaceRecord | None:
    k = path.k
    N = support.N
    if not path.connected or not 1 <= k <= N:
        raise ValueError("B/C/E surfaces need a connected path with 1 <= k <= N")
    wk = support.points[k]
    if support.polytope.is_vertex(wk):
        raise ValueError("w_k is a vertex of the polytope")
    rest = [p for i, p in enumerate(support.points) if i != k]
    tri = placing_triangulation(rest)
    carrier = None
    for cell in tri.cells:
        bc = _barycentric(cell, wk)
        if all(x >= 0 for x in bc):
            carrier = [p for p, x in zip(cell, bc) if x > 0]
            break
    if carrier is None:
        return None
    circuit = classify_circuit(carrier + [wk])
    if circuit is None or circuit.ctype not in "BCE":
        return None
    nu = nu_from_path(support, path, circuit.points, circuit.relation)
    cells = [c + (wk,) if in_hull(wk, c) else c for c in tri.cells]
    sub_ = Subdivision.of(cells)
    ok = point_conditions_hold(support, path, nu)
    if check:
        hull = subdivision_from_heights(list(support.points), list(nu.nu))
        if hull != sub_:
            raise AssertionError(f"placing construction disagrees with lower hull for {path.label}")
    if not ok:
        return None
    return SurfaceRecord(
        path, circuit, sub_, nu, support.polytope.on_boundary(circuit.points), "placing"
    )


# ---------------------------------------------------------------------------
# D circuits


def unit_parallelograms(support: OrderedSupport, anchor: int) -> list[tuple[int, ...]]:
    """Index 4-tuples of unit parallelograms having ``w_anchor`` as a vertex."""
    pts = support.points
    idx = support._index
    w = pts[anchor]
    out = set()
    n = len(pts)
    for a in range(n):
        if a == anchor:
            continue
        u = sub(pts[a], w)
        for b in range(a + 1, n):
            if b == anchor:
                continue
            v = sub(pts[b], w)
            c = tuple(w[i] + u[i] + v[i] for i in range(3))
            if c not in idx:
                continue
            cr = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if math.gcd(math.gcd(cr[0], cr[1]), cr[2]) != 1:
                continue
            out.add(tuple(sorted((anchor, a, b, idx[c]))))
    return sorted(out)


def _d_rule(support: OrderedSupport, path: MarkedPath, quad: tuple[int, ...]) -> bool:
    """Admissibility per the closed-form parallelogram rule: not on the boundary, i < k < l, edge contact."""
    k = path.k
    others = [s for s in quad if s != k]
    i, j, l = others
    if support.polytope.on_boundary(support.points[s] for s in quad):
        return False
    if not i < k < l:
        return False
    w = support.points
    prefix = [w[s] for s in range(l) if s != k]
    placer = _Placer()
    for p in prefix:
        placer.add(p)
    if not Subdivision.of(placer.cells).has_edge(w[i], w[j]):
        return False
    # conv(C) meets conv(prefix) exactly along [w_i, w_j]
    mid = tuple(Fraction(w[i][t] + w[j][t], 2) for t in range(3))
    inward = tuple(w[k][t] + w[l][t] - w[i][t] - w[j][t] for t in range(3))
    if not any(inward):
        inward = tuple(w[k][t] + w[j][t] - w[i][t] - w[l][t] for t in range(3))
    return not enters(prefix, mid, inward)


def d_candidates(
    support: OrderedSupport, path: MarkedPath, check: bool = False
) -> list[SurfaceRecord]:
    pts = support.points
    out = []
    if path.connected:
        quads = unit_parallelograms(support, path.k)
    else:
        k = path.k
        quads = sorted(
            {q for a in range(len(pts)) for q in unit_parallelograms(support, a) if min(q) <= k < max(q)}
        )
    for quad in quads:
        circuit = classify_circuit([pts[s] for s in quad])
        if circuit is None or circuit.ctype != "D":
            continue
        if support.polytope.on_boundary(circuit.points):
            continue
        rule = _d_rule(support, path, quad) if path.connected else False
        if not check and not rule:
            continue
        res = verify_candidate(support, path, circuit)
        if check and bool(res) != rule:
            raise AssertionError(f"D rule/hull disagreement on {path.label} {circuit.points}")
        if res is None:
            continue
        nu, sub_ = res
        out.append(SurfaceRecord(path, circuit, sub_, nu, False, "parallelogram", rule))
    return out


# ---------------------------------------------------------------------------
# A circuits


def _solved_lambdas(circuit: Circuit, support: OrderedSupport, pivot: int) -> dict[int, Fraction]:
    """``c_pivot = sum_s lambda_s c_s`` from the circuit relation."""
    rel = {support.index(p): x for p, x in zip(circuit.points, circuit.relation)}
    lp = rel[pivot]
    return {s: Fraction(-x, lp) for s, x in rel.items() if s != pivot}


def _a_rule_connected(support: OrderedSupport, path: MarkedPath, circuit: Circuit) -> bool:
    k = path.k
    N = support.N
    idx = sorted(support.index(p) for p in circuit.points)
    i, j, l, m, n = idx
    if k not in idx:
        return False
    if k == n and k <= N:
        return False
    if k == n == N + 1 and n > m + 1:
        return False
    lam = _solved_lambdas(circuit, support, k)
    if k < n:
        return lam[n] > 0
    # k = n = N + 1 and m = N
    w = support.points
    vec = tuple(
        (lam[N] - 1) * (w[N][t] - w[N - 1][t]) - (w[N + 1][t] - w[N][t]) for t in range(3)
    )
    s = eps_inner(vec).sign()
    if s > 0:
        return True
    if s < 0:
        return False
    if l < N - 1:
        return True
    if l == N - 1:
        t = lam[N] - 1 + lam[N - 1]
        if t > 0:
            return True
        if t == 0:
            return lam[j] > 0
    return False


def _a_rule_disconnected(support: OrderedSupport, path: MarkedPath, circuit: Circuit) -> bool:
    k = path.k
    idx = sorted(support.index(p) for p in circuit.points)
    i, j, l, m, n = idx
    w = support.points
    lam = _solved_lambdas(circuit, support, n)
    if (m, n) == (k, k + 1):
        a, b = k, k - 1
    elif (m, n) == (k + 1, k + 2):
        a, b = k + 1, k
    else:
        return False
    if not lam[a] - 1 > 0:
        return False
    vec = tuple(w[a + 1][t] - w[a][t] - (lam[a] - 1) * (w[a][t] - w[a - 1][t]) for t in range(3))
    s = eps_inner(vec).sign()
    if s < 0:
        return True
    if s > 0:
        return False
    if l < b:
        return True
    if l == b:
        t = lam[a] + lam[b] - 1
        if t > 0:
            return True
        if t == 0:
            return lam[j] > 0
    return False


def _attach_faces(placer: _Placer, x: Point) -> list[tuple[Point, ...]]:
    """Triangles of the current triangulation a pentatope through ``x`` may be glued along."""
    if placer.dim == 3:
        return placer.visible(x)
    if placer.dim == 2 and affine_dim(placer.points + [x]) == 3:
        return list(placer.cells)
    return []


def _a_tuples(support: OrderedSupport, path: MarkedPath) -> list[tuple[int, ...]]:
    """Pentatope candidates: a boundary triangle of the placing triangulation of the
    preceding points, together with the next path point and (if connected) ``w_k``."""
    pts = support.points
    n_pts = len(pts)
    k = path.k
    out = set()
    placer = _Placer()
    if path.connected:
        order = [s for s in range(n_pts) if s != k]
        for t in order:
            for face in _attach_faces(placer, pts[t]):
                idx = tuple(sorted([support.index(p) for p in face] + [t, k]))
                if len(set(idx)) == 5:
                    out.add(idx)
            placer.add(pts[t])
    else:
        for m in (k, k + 1):
            nn = m + 1
            if nn >= n_pts:
                continue
            pl = _Placer()
            for s in range(m):
                pl.add(pts[s])
            for face in _attach_faces(pl, pts[m]):
                out.add(tuple(sorted([support.index(p) for p in face] + [m, nn])))
    return sorted(out)


def a_candidates(support: OrderedSupport, path: MarkedPath, check: bool = False) -> list[SurfaceRecord]:
    pts = support.points
    out = []
    for tup in _a_tuples(support, path):
        circuit = classify_circuit([pts[s] for s in tup])
        if circuit is None or circuit.ctype != "A":
            continue
        if path.connected:
            rule = _a_rule_connected(support, path, circuit)
        else:
            rule = _a_rule_disconnected(support, path, circuit)
        if not check and not rule:
            continue
        res = verify_candidate(support, path, circuit)
        if check and bool(res) != rule:
            raise AssertionError(f"A rule/hull disagreement on {path.label} {circuit.points}")
        if res is None:
            continue
        nu, sub_ = res
        out.append(SurfaceRecord(path, circuit, sub_, nu, False, "pentatope", rule))
    return out


# ---------------------------------------------------------------------------
# full enumeration


def surfaces_for_path(support: OrderedSupport, path: MarkedPath, check: bool = False) -> list[SurfaceRecord]:
    out: list[SurfaceRecord] = []
    if path.connected and 1 <= path.k <= support.N and not support.polytope.is_vertex(
        support.points[path.k]
    ):
        rec = bce_surface(support, path, check)
        if rec is not None:
            out.append(rec)
    out.extend(d_candidates(support, path, check))
    out.extend(a_candidates(support, path, check))
    return out


def _work(args):
    vertices, path_index, check = args
    support = order_support(Polytope(vertices))
    path = marked_paths(support)[path_index]
    return surfaces_for_path(support, path, check)


def distinct_paths(paths: Sequence[MarkedPath]) -> list[int]:
    """Indices of paths with pairwise different edge sets.

    Gamma_{N,N+1} has the same edges as Gamma_{N+1} (its second component is a
    single point); it imposes the same point conditions and is dropped.
    """
    seen: set = set()
    keep = []
    for i, p in enumerate(paths):
        key = frozenset(p.edges)
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return keep


def enumerate_surfaces(polytope: Polytope, jobs: int = 1, check: bool = False) -> list[SurfaceRecord]:
    support = order_support(polytope)
    paths = marked_paths(support)
    keep = distinct_paths(paths)
    if jobs <= 1:
        recs = [r for i in keep for r in surfaces_for_path(support, paths[i], check)]
    else:
        work = [(polytope.vertices, i, check) for i in keep]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            recs = [r for chunk in ex.map(_work, work) for r in chunk]
    uniq = {}
    for r in recs:
        uniq.setdefault((r.path, r.circuit.points), r)
    return sorted(uniq.values(), key=lambda r: r.sort_key())


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("TROPDISC_JOBS", "1")))
    except ValueError:
        return 1
