"""Exact lattice geometry in dimensions 1-3.

Points are tuples of Python ints.  Heights used by :func:`lower_hull` may be any
ordered type closed under addition and rational scaling (``Fraction`` or
:class:`~tropdisc.scale.ScaleValue`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

Point = tuple[int, ...]


class DimensionError(ValueError):
    """Raised when a configuration is lower-dimensional than required."""


class NotMinimalError(ValueError):
    """Raised when a point set has more than one independent affine relation."""


# ---------------------------------------------------------------------------
# small integer linear algebra


def sub(a: Sequence[int], b: Sequence[int]) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def cross(a: Sequence[int], b: Sequence[int]) -> Point:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def det(rows: Sequence[Sequence]) -> Any:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        return dot(rows[0], cross(rows[1], rows[2]))
    return sum(
        (-1) ** j * rows[0][j] * det([r[:j] + r[j + 1 :] for r in rows[1:]]) for j in range(n)
    )


def adjugate(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [list(r[:j]) + list(r[j + 1 :]) for k, r in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


def gcd_all(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Point:
    g = gcd_all(v)
    return tuple(x // g for x in v) if g else tuple(v)


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank over the rationals (fraction-free elimination for integer input)."""
    if any(isinstance(x, Fraction) for v in vectors for x in v):
        return _rank_fraction(vectors)
    rows = [list(v) for v in vectors if any(v)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        a = rows[r][c]
        for i in range(r + 1, len(rows)):
            b = rows[i][c]
            if b:
                rows[i] = [a * x - b * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _rank_fraction(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def nullspace(vectors: Sequence[Sequence[int]], n: int) -> list[Point]:
    """Integer basis of ``{f in Q^n : f . v = 0 for all v}`` (primitive vectors)."""
    if n == 3 and len(vectors) >= 2:
        # common case: a plane spanned by two of the vectors
        for a, b in itertools.combinations(vectors, 2):
            c = cross(a, b)
            if any(c):
                if all(dot(c, v) == 0 for v in vectors):
                    return [primitive(c)]
                break
    rows = [[Fraction(x) for x in v] for v in vectors]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        den = 1
        for x in vec:
            den = den * x.denominator // math.gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in vec]))
    return basis


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    return rank([sub(p, points[0]) for p in points[1:]])


def simplex_volume(points: Sequence[Sequence[int]]) -> int:
    """Lattice-normalized volume of a simplex inside its own affine span."""
    r = len(points) - 1
    vecs = [sub(p, points[0]) for p in points[1:]]
    n = len(points[0])
    g = 0
    for cols in itertools.combinations(range(n), r):
        g = math.gcd(g, det([[v[c] for c in cols] for v in vecs]))
    return abs(g)


def lattice_index(vectors: Sequence[Sequence[int]], n: int) -> int:
    """Index of the lattice spanned by ``vectors`` in ``Z^n`` (0 if not full rank)."""
    rows = [list(v) for v in vectors if any(v)]
    out = 1
    for c in range(n):
        live = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                r2 = [a - q * b for a, b in zip(r, p)]
                (nxt if r2[c] != 0 else rest).append(r2)
            live = nxt
        if not live:
            return 0
        out *= abs(live[0][c])
        rows = [r for r in rest if any(r)]
    return out


def unimodular_to_last(u: Sequence[int]) -> list[list[int]]:
    """Matrix ``U`` in ``GL(n, Z)`` with ``U u = e_n`` for a primitive vector ``u``."""
    n = len(u)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    v = list(u)

    def row_op(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        v[i] -= q * v[j]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def swap(i: int, j: int) -> None:
        v[i], v[j] = v[j], v[i]
        U[i], U[j] = U[j], U[i]

    while sum(1 for x in v if x) > 1:
        nz = [i for i in range(n) if v[i]]
        p = min(nz, key=lambda i: abs(v[i]))
        for i in nz:
            if i != p:
                row_op(i, p, v[i] // v[p])
    k = next(i for i in range(n) if v[i])
    if abs(v[k]) != 1:
        raise ValueError("vector is not primitive")
    if k != n - 1:
        swap(k, n - 1)
    if v[n - 1] == -1:
        v[n - 1] = 1
        U[n - 1] = [-a for a in U[n - 1]]
        # keep det = +-1 either way; sign flip of one row is unimodular
    return U


def mat_vec(M: Sequence[Sequence[int]], x: Sequence[int]) -> Point:
    return tuple(dot(row, x) for row in M)


# ---------------------------------------------------------------------------
# convex hulls of small point sets


@dataclass(frozen=True)
class Facet:
    """A facet ``{x : normal . x = offset}`` with the hull on the ``<=`` side."""

    normal: Point
    offset: int
    points: frozenset[int]


def _span_coords(points: Sequence[Point]) -> tuple[list[int], int]:
    """Coordinate indices whose projection is injective on the affine span."""
    dim = affine_dim(points)
    n = len(points[0])
    vecs = [sub(p, points[0]) for p in points[1:]]
    for cols in itertools.combinations(range(n), dim):
        if rank([[v[c] for c in cols] for v in vecs] or [[0] * dim]) == dim:
            return list(cols), dim
    raise AssertionError("unreachable")


def hull_facets(points: Sequence[Point]) -> list[Facet]:
    """Facets of ``conv(points)`` for a full-dimensional set (brute force)."""
    n = len(points[0])
    if affine_dim(points) != n:
        raise DimensionError("point set is not full-dimensional")
    if n == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        return [
            Facet((-1,), -lo, frozenset(i for i, p in enumerate(points) if p[0] == lo)),
            Facet((1,), hi, frozenset(i for i, p in enumerate(points) if p[0] == hi)),
        ]
    seen: dict[frozenset[int], Facet] = {}
    for combo in itertools.combinations(range(len(points)), n):
        base = points[combo[0]]
        vecs = [sub(points[i], base) for i in combo[1:]]
        ns = nullspace(vecs, n)
        if len(ns) != 1:
            continue
        f = ns[0]
        c = dot(f, base)
        vals = [dot(f, p) - c for p in points]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            f = tuple(-x for x in f)
            c = -c
        else:
            continue
        on = frozenset(i for i, p in enumerate(points) if dot(f, p) == c)
        if on not in seen:
            seen[on] = Facet(f, c, on)
    return list(seen.values())


def in_hull(x: Sequence[int], points: Sequence[Point]) -> bool:
    """Exact membership of ``x`` in ``conv(points)`` (any dimension of span)."""
    return _member(halfspaces(points), x)


def _member(hs, x: Sequence) -> bool:
    eqs, ineqs = hs
    return all(dot(f, x) == c for f, c in eqs) and all(dot(f, x) <= c for f, c in ineqs)


def lattice_points_in_hull(points: Sequence[Point]) -> list[Point]:
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    hs = halfspaces(pts)
    return sorted(
        tuple(x)
        for x in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))
        if _member(hs, x)
    )


def triangulate_hull(points: Sequence[Point]) -> list[tuple[Point, ...]]:
    """Simplices of a pulling triangulation of ``conv(points)`` in its own span."""
    pts = sorted(set(tuple(p) for p in points))
    dim = affine_dim(pts)
    if dim == 0:
        return [(pts[0],)]
    cols, _ = _span_coords(pts)
    proj = [tuple(p[c] for c in cols) for p in pts]
    verts = _extreme(proj)
    vpts = [pts[i] for i in verts]
    vproj = [proj[i] for i in verts]
    if dim == 1:
        return [tuple(sorted(vpts))]
    apex = 0
    out = []
    for f in hull_facets(vproj):
        if apex in f.points:
            continue
        for simplex in triangulate_hull([vpts[i] for i in sorted(f.points)]):
            out.append((vpts[apex],) + simplex)
    return out


def _extreme(points: Sequence[Point]) -> list[int]:
    """Indices of the vertices of ``conv(points)`` (full-dimensional input)."""
    n = len(points[0])
    if n == 1:
        xs = [p[0] for p in points]
        return sorted({xs.index(min(xs)), xs.index(max(xs))})
    verts = []
    for i, p in enumerate(points):
        others = [q for j, q in enumerate(points) if j != i and q != p]
        if not others or affine_dim(others) < n or not in_hull(p, others):
            if p not in [points[j] for j in verts]:
                verts.append(i)
    return verts


def normalized_volume(points: Sequence[Sequence[int]], dim: int) -> int:
    pts = [tuple(p) for p in points]
    if affine_dim(pts) < dim:
        raise DimensionError(f"points span fewer than {dim} dimensions")
    if affine_dim(pts) > dim:
        raise DimensionError(f"points span more than {dim} dimensions")
    return sum(simplex_volume(s) for s in triangulate_hull(pts))


def is_unimodular_simplex(points: Sequence[Sequence[int]]) -> bool:
    if len(points) != 4:
        raise ValueError("expected 4 points")
    pts = [tuple(p) for p in points]
    if affine_dim(pts) < 3:
        raise DimensionError("degenerate simplex")
    return simplex_volume(pts) == 1


# ---------------------------------------------------------------------------
# affine relations


@dataclass(frozen=True)
class AffineRelation:
    """Primitive integer relation ``sum l_s w_s = 0`` with ``sum l_s = 0``."""

    coefficients: tuple[int, ...]

    def __iter__(self):
        return iter(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]


def affine_relation(points: Sequence[Sequence[int]]) -> AffineRelation | None:
    pts = [tuple(p) for p in points]
    if not 2 <= len(pts) <= 6:
        raise ValueError("affine_relation expects 3 to 5 points")
    # columns (w_s, 1); relation vectors are the kernel of that matrix
    n = len(pts[0])
    rows = [[p[i] for p in pts] for i in range(n)] + [[1] * len(pts)]
    ns = nullspace(rows, len(pts))
    if not ns:
        return None
    if len(ns) > 1:
        raise NotMinimalError("affine dependence space has dimension >= 2")
    lam = ns[0]
    first = next(x for x in lam if x)
    if first < 0:
        lam = tuple(-x for x in lam)
    return AffineRelation(tuple(lam))


# ---------------------------------------------------------------------------
# unimodular matching of small marked sets


def unimodular_match(
    src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]]
) -> tuple[tuple[int, ...], ...] | None:
    """Integer matrix ``M`` with ``det M = +-1`` and ``M(src) = dst`` as sets."""
    src = [tuple(p) for p in src]
    dst = [tuple(p) for p in dst]
    if len(src) != len(dst) or not src:
        return None
    n = len(src[0])
    if rank(src) != n or rank(dst) != n:
        return None
    base = None
    for combo in itertools.combinations(range(len(src)), n):
        if det([src[i] for i in combo]) != 0:
            base = combo
            break
    S = [src[i] for i in base]
    dS = det(S)
    adjS = adjugate(S)  # S^{-1} = adj / det, rows of S are the vectors
    target = set(dst)
    for images in itertools.permutations(range(len(dst)), n):
        D = [dst[i] for i in images]
        # want M with M s_i = d_i; in row form: M^T = S^{-1} D
        MT = []
        ok = True
        for r in range(n):
            row = []
            for c in range(n):
                num = sum(adjS[r][k] * D[k][c] for k in range(n))
                if num % dS:
                    ok = False
                    break
                row.append(num // dS)
            if not ok:
                break
            MT.append(row)
        if not ok:
            continue
        M = tuple(tuple(MT[c][r] for c in range(n)) for r in range(n))
        if abs(det(M)) != 1:
            continue
        if {mat_vec(M, p) for p in src} == target and len(set(src)) == len(target):
            return M
    return None


# ---------------------------------------------------------------------------
# polytopes


@dataclass
class Polytope:
    """A full-dimensional lattice polytope given by (a superset of) its vertices."""

    vertices: list[Point]
    facets: list[Facet] = field(init=False)

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted(set(tuple(int(x) for x in p) for p in points))
        if not pts or len(pts[0]) != 3 or any(len(p) != 3 for p in pts):
            raise DimensionError("expected nonempty 3D points")
        if affine_dim(pts) != 3:
            raise DimensionError("polytope is not 3-dimensional")
        self.vertices = [pts[i] for i in _extreme(pts)]
        self.facets = hull_facets(self.vertices)

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(f.normal, x) <= f.offset for f in self.facets)

    @cached_property
    def lattice_points(self) -> list[Point]:
        lo = [min(v[i] for v in self.vertices) for i in range(3)]
        hi = [max(v[i] for v in self.vertices) for i in range(3)]
        return [
            x
            for x in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))
            if self.contains(x)
        ]

    @cached_property
    def volume(self) -> int:
        return normalized_volume(self.vertices, 3)

    def generates_lattice(self) -> bool:
        pts = self.lattice_points
        return lattice_index([sub(p, pts[0]) for p in pts[1:]], 3) == 1

    def on_boundary(self, points: Iterable[Sequence[int]]) -> bool:
        """True iff all ``points`` lie in one common facet."""
        pts = list(points)
        return any(all(dot(f.normal, p) == f.offset for p in pts) for f in self.facets)

    def is_vertex(self, x: Sequence[int]) -> bool:
        return tuple(x) in set(self.vertices)

    @classmethod
    def simplex(cls, d: int) -> "Polytope":
        return cls([(0, 0, 0), (d, 0, 0), (0, d, 0), (0, 0, d)])


def lattice_points(polytope: Polytope) -> list[Point]:
    return list(polytope.lattice_points)


# ---------------------------------------------------------------------------
# regular subdivisions from lifted points


def _sgn(x) -> int:
    s = getattr(x, "sign", None)
    if s is not None and callable(s):
        return s()
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Cell:
    """A maximal cell: the indices of all lifted points on its support plane."""

    points: tuple[int, ...]
    gradient: tuple
    offset: Any

    def value(self, x: Sequence[int]):
        out = self.offset
        for g, c in zip(self.gradient, x):
            if c:
                out = out + g * c
        return out


def affine_through(points: Sequence[Point], heights: Sequence) -> tuple[tuple, Any]:
    """Affine function ``g.x + g0`` through ``n+1`` affinely independent lifted points."""
    n = len(points[0])
    x0, h0 = points[0], heights[0]
    D = [sub(p, x0) for p in points[1:]]
    dD = det(D)
    if dD == 0:
        raise DimensionError("support points are affinely dependent")
    adj = adjugate(D)
    dh = [h - h0 for h in heights[1:]]
    grad = []
    for j in range(n):
        acc = 0
        for i in range(n):
            if adj[j][i]:
                acc = acc + dh[i] * adj[j][i]
        grad.append(acc / dD if not isinstance(acc, int) else Fraction(acc, dD))
    off = h0
    for g, c in zip(grad, x0):
        if c:
            off = off - g * c
    return tuple(grad), off


def _independent_subset(points: Sequence[Point], idx: Sequence[int]) -> list[int]:
    chosen = [idx[0]]
    n = len(points[0])
    for i in idx[1:]:
        trial = chosen + [i]
        if affine_dim([points[j] for j in trial]) == len(trial) - 1:
            chosen = trial
            if len(chosen) == n + 1:
                break
    return chosen


def _cell_from(points, heights, members: set[int]) -> Cell:
    idx = sorted(members)
    base = _independent_subset(points, idx)
    grad, off = affine_through([points[i] for i in base], [heights[i] for i in base])
    return Cell(tuple(idx), grad, off)


def lower_hull(points: Sequence[Sequence[int]], heights: Sequence) -> list[Cell]:
    """Maximal cells of the regular subdivision induced by ``heights``.

    Gift wrapping over the lifted configuration: an initial lower facet is found
    by successive rotations of a horizontal plane, then every interior facet is
    pivoted to its neighbour.  Works for base dimension 1, 2 or 3 and any
    ordered height type.
    """
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    if affine_dim(pts) != n:
        raise DimensionError("base points do not span the ambient space")
    m = len(pts)

    # initial facet
    lo = min(range(m), key=lambda i: heights[i])
    contact = {i for i in range(m) if _sgn(heights[i] - heights[lo]) == 0}
    grad: list = [0] * n
    off = heights[lo]
    while True:
        cl = sorted(contact)
        k0 = pts[cl[0]]
        if affine_dim([pts[i] for i in cl]) == n:
            break
        dirs = [sub(pts[i], k0) for i in cl[1:]]
        f = next(v for v in nullspace(dirs, n) if any(dot(v, sub(p, k0)) for p in pts))
        fv = [dot(f, sub(p, k0)) for p in pts]
        if not any(x < 0 for x in fv):
            f = tuple(-x for x in f)
            fv = [-x for x in fv]
        best = None
        arg: list[int] = []
        for i in range(m):
            if fv[i] < 0:
                cur = off + sum((g * c for g, c in zip(grad, pts[i]) if c), 0)
                s = (heights[i] - cur) / (-fv[i])
                if best is None or _sgn(s - best) < 0:
                    best, arg = s, [i]
                elif _sgn(s - best) == 0:
                    arg.append(i)
        # A_s(x) = A(x) - s * f.(x - k0)
        grad = [g - best * fi if fi else g for g, fi in zip(grad, f)]
        off = off + best * dot(f, k0)
        contact |= set(arg)

    first = _cell_from(pts, heights, contact)
    cells = {first.points: first}
    queue = [first]
    done_facets: set[frozenset[int]] = set()
    while queue:
        cell = queue.pop()
        local = [pts[i] for i in cell.points]
        for fac in hull_facets(local):
            key = frozenset(cell.points[i] for i in fac.points)
            if key in done_facets:
                continue
            done_facets.add(key)
            beyond = [i for i in range(m) if dot(fac.normal, pts[i]) > fac.offset]
            if not beyond:
                continue
            best = None
            arg = []
            for i in beyond:
                s = (heights[i] - cell.value(pts[i])) / (dot(fac.normal, pts[i]) - fac.offset)
                if best is None or _sgn(s - best) < 0:
                    best, arg = s, [i]
                elif _sgn(s - best) == 0:
                    arg.append(i)
            members = set(key) | set(arg)
            nb = _cell_from(pts, heights, members)
            if nb.points not in cells:
                cells[nb.points] = nb
                queue.append(nb)
    return sorted(cells.values(), key=lambda c: c.points)


def certify_cells(points: Sequence[Sequence[int]], heights: Sequence, cells: Iterable[Sequence[int]]) -> bool:
    """Certificate: each cell's plane is below all heights, equal exactly on the cell."""
    pts = [tuple(p) for p in points]
    for cell in cells:
        members = set(cell)
        base = _independent_subset(pts, sorted(members))
        if len(base) != len(pts[0]) + 1:
            return False
        grad, off = affine_through([pts[i] for i in base], [heights[i] for i in base])
        c = Cell(tuple(sorted(members)), grad, off)
        for i, p in enumerate(pts):
            s = _sgn(heights[i] - c.value(p))
            if i in members:
                if s != 0:
                    return False
            elif s <= 0:
                return False
    return True


def halfspaces(points: Sequence[Sequence[int]]) -> tuple[list[tuple[Point, int]], list[tuple[Point, int]]]:
    """``(equalities, inequalities)`` describing ``conv(points)`` in its ambient space.

    Each entry is ``(normal, offset)``; inequalities read ``normal . x <= offset``.
    """
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    dim = affine_dim(pts)
    eqs = [(f, dot(f, pts[0])) for f in nullspace([sub(p, pts[0]) for p in pts[1:]], n)]
    if dim == 0:
        return eqs, []
    cols, _ = _span_coords(pts)
    proj = [tuple(p[c] for c in cols) for p in pts]
    ineqs = []
    for f in hull_facets(proj):
        full = [0] * n
        for c, x in zip(cols, f.normal):
            full[c] = x
        ineqs.append((tuple(full), f.offset))
    return eqs, ineqs


def enters(points: Sequence[Sequence[int]], x: Sequence, t: Sequence[int]) -> bool:
    """True iff ``x + s t`` lies in ``conv(points)`` for all small ``s > 0`` (``x`` in the hull)."""
    eqs, ineqs = halfspaces(points)
    if any(dot(f, t) != 0 for f, _ in eqs):
        return False
    return all(dot(f, t) <= 0 for f, c in ineqs if dot(f, x) == c)
