"""Ordered supports, marked lattice paths, heights and subdivisions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import (
    DimensionError,
    Point,
    Polytope,
    _span_coords,
    affine_dim,
    affine_through,
    certify_cells,
    det,
    in_hull,
    lower_hull,
    simplex_volume,
    sub,
    triangulate_hull,
)
from .scale import ScaleValue, eps_inner

EXTENSION_SCALE = 1 << 20
"""First scale index used for auxiliary heights of smooth extensions."""


@dataclass(frozen=True)
class OrderedSupport:
    points: tuple[Point, ...]
    polytope: Polytope = field(compare=False, repr=False)

    @property
    def N(self) -> int:
        return len(self.points) - 2

    def index(self, p: Sequence[int]) -> int:
        return self._index[tuple(p)]

    @property
    def _index(self) -> dict[Point, int]:
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.points)}
            object.__setattr__(self, "_idx", cache)
        return cache


def order_support(polytope: Polytope) -> OrderedSupport:
    # <u - u', v> > 0 with v = (1, e, e^2) is exactly lexicographic order
    pts = sorted(polytope.lattice_points)
    return OrderedSupport(tuple(pts), polytope)


@dataclass(frozen=True)
class MarkedPath:
    """``GammaK`` skips ``w_k``; ``GammaKK1`` has its gap between ``w_k`` and ``w_{k+1}``.

    ``edges[i-1]`` is the edge through which the ``i``-th marked point passes,
    so its height recurrence uses the scale ``M_i``.
    """

    kind: str
    k: int
    edges: tuple[tuple[int, int], ...]

    @property
    def connected(self) -> bool:
        return self.kind == "GammaK"

    @property
    def label(self) -> str:
        return f"G{self.k}" if self.connected else f"G{self.k},{self.k + 1}"


def gamma_k(n_points: int, k: int) -> MarkedPath:
    seq = [s for s in range(n_points) if s != k]
    return MarkedPath("GammaK", k, tuple(zip(seq, seq[1:])))


def gamma_kk1(n_points: int, k: int) -> MarkedPath:
    edges = tuple((s, s + 1) for s in range(n_points - 1) if s != k)
    return MarkedPath("GammaKK1", k, edges)


def marked_paths(support: OrderedSupport) -> list[MarkedPath]:
    n = len(support.points)
    N = n - 2
    if N < 1:
        raise ValueError("need at least three lattice points")
    paths = [gamma_k(n, k) for k in range(N + 2)]
    paths += [gamma_kk1(n, k) for k in range(1, N + 1)]
    for p in paths:
        assert len(p.edges) == N
    return paths


class UnsolvableError(ValueError):
    pass


@dataclass(frozen=True)
class NuAssignment:
    """Coefficients ``c`` of the tropical polynomial; heights are ``nu = -c``."""

    c: tuple[ScaleValue | None, ...]

    @property
    def nu(self) -> tuple[ScaleValue, ...]:
        return tuple(-x for x in self.c)


def _chain(points: Sequence[Point], seq: Sequence[int], first_scale: int, c: list) -> None:
    for step, (a, b) in enumerate(zip(seq, seq[1:])):
        c[b] = c[a] - ScaleValue.M(first_scale + step, eps_inner(sub(points[b], points[a])))


def nu_from_path(
    support: OrderedSupport,
    path: MarkedPath,
    circuit_points: Sequence[Point] | None = None,
    relation: Sequence[int] | None = None,
) -> NuAssignment:
    """Solve the point-condition recurrences, closing them with the circuit relation."""
    pts = support.points
    n = len(pts)
    c: list = [None] * n
    k = path.k
    if path.connected:
        seq = [s for s in range(n) if s != k]
        c[seq[0]] = ScaleValue()
        _chain(pts, seq, 1, c)
        if circuit_points is not None:
            idx = [support.index(p) for p in circuit_points]
            lam = dict(zip(idx, relation))
            if lam.get(k, 0) == 0:
                raise UnsolvableError("circuit does not involve the skipped point")
            acc = ScaleValue()
            for s, l in lam.items():
                if s != k:
                    acc = acc + c[s] * l
            c[k] = acc / (-lam[k])
        return NuAssignment(tuple(c))
    if circuit_points is None:
        raise UnsolvableError("a disconnected path needs a circuit to close the system")
    c[0] = ScaleValue()
    _chain(pts, list(range(k + 1)), 1, c)
    upper = list(range(k + 1, n))
    u: list = [None] * n
    u[k + 1] = ScaleValue()
    _chain(pts, upper, k + 1, u)
    idx = [support.index(p) for p in circuit_points]
    lam = dict(zip(idx, relation))
    coef = sum(l for s, l in lam.items() if s > k)
    if coef == 0:
        raise UnsolvableError("circuit relation does not fix the gap")
    acc = ScaleValue()
    for s, l in lam.items():
        acc = acc + (c[s] if s <= k else u[s]) * l
    y = acc / (-coef)
    for s in upper:
        c[s] = u[s] + y
    return NuAssignment(tuple(c))


def edge_scales(path: MarkedPath) -> list[int]:
    return list(range(1, len(path.edges) + 1))


def _on_segment(x: Point, a: Point, b: Point) -> bool:
    d = sub(b, a)
    e = sub(x, a)
    if any(d[i] * e[j] != d[j] * e[i] for i in range(3) for j in range(3)):
        return False
    t = sum(di * ei for di, ei in zip(d, e))
    return 0 <= t <= sum(di * di for di in d)


def point_conditions_hold(support: OrderedSupport, path: MarkedPath, nu: NuAssignment) -> bool:
    """Each marked point ``M_i v`` lies in the relative interior of the face dual to edge ``i``.

    Equivalently the maximum of ``c_w + M_i <w, v>`` is attained exactly on the
    ``i``-th path edge (its endpoints and, for a length-two edge, its midpoint).
    """
    pts = support.points
    inner = [eps_inner(p) for p in pts]
    for i, (a, b) in enumerate(path.edges, start=1):
        vals = [nu.c[w] + ScaleValue.M(i, inner[w]) for w in range(len(pts))]
        top = vals[a]
        if vals[b] != top:
            return False
        for w, x in enumerate(vals):
            if w == a or w == b:
                continue
            # a midpoint may tie or stay below, but never rise above the edge
            if x > top or (x == top and not _on_segment(pts[w], pts[a], pts[b])):
                return False
    return True


# ---------------------------------------------------------------------------
# subdivisions


@dataclass(frozen=True)
class Subdivision:
    """Maximal cells of a lattice subdivision, each listed by all lattice points it contains."""

    cells: tuple[tuple[Point, ...], ...]

    @classmethod
    def of(cls, cells: Iterable[Iterable[Sequence[int]]]) -> "Subdivision":
        norm = {tuple(sorted(tuple(p) for p in c)) for c in cells}
        return cls(tuple(sorted(norm)))

    def volume(self) -> int:
        return sum(sum(simplex_volume(s) for s in triangulate_hull(c)) for c in self.cells)

    def edges(self) -> set[frozenset[Point]]:
        """All 1-dimensional faces (as endpoint pairs) of all cells."""
        out: set[frozenset[Point]] = set()
        for c in self.cells:
            out |= _faces_of_dim(c, 1)
        return out

    def has_edge(self, a: Point, b: Point) -> bool:
        return frozenset((a, b)) in self.edges()

    def cells_containing(self, pts: Iterable[Point]) -> list[tuple[Point, ...]]:
        s = set(pts)
        return [c for c in self.cells if s <= set(c)]

    def has_face(self, face: Iterable[Point]) -> bool:
        f = frozenset(face)
        dim = affine_dim(sorted(f))
        return any(f in _faces_of_dim(c, dim) for c in self.cells if f <= set(c))


def path_edges_present(support: OrderedSupport, path: MarkedPath, subdivision: Subdivision) -> bool:
    """Every path edge (with any lattice points on it) is a face of ``subdivision``."""
    pts = support.points
    for a, b in path.edges:
        face = [p for p in pts if _on_segment(p, pts[a], pts[b])]
        if not subdivision.has_face(face):
            return False
    return True


def _faces_of_dim(cell: Sequence[Point], dim: int) -> set[frozenset[Point]]:
    """Faces of ``conv(cell)`` of the given dimension, as sets of cell points."""
    pts = list(cell)
    full = affine_dim(pts)
    if dim == full:
        return {frozenset(pts)}
    if dim > full:
        return set()
    cols, _ = _span_coords(pts)
    proj = [tuple(p[c] for c in cols) for p in pts]
    from .lattice import hull_facets

    out: set[frozenset[Point]] = set()
    for f in hull_facets(proj):
        sub_pts = [pts[i] for i in sorted(f.points)]
        out |= _faces_of_dim(sub_pts, dim)
    return out


class _Placer:
    """Incremental placing triangulation (beneath-beyond with strict visibility)."""

    def __init__(self) -> None:
        self.points: list[Point] = []
        self.cells: list[tuple[Point, ...]] = []
        self.dim = -1

    def _orient(self, face: Sequence[Point], x: Point, cols: list[int]) -> int:
        base = face[0]
        rows = [[sub(p, base)[c] for c in cols] for p in list(face[1:]) + [x]]
        d = det(rows)
        return (d > 0) - (d < 0)

    def boundary(self) -> list[tuple[tuple[Point, ...], Point]]:
        count: dict[tuple[Point, ...], list[Point]] = {}
        for cell in self.cells:
            for i in range(len(cell)):
                face = tuple(sorted(cell[:i] + cell[i + 1 :]))
                count.setdefault(face, []).append(cell[i])
        return [(f, opp[0]) for f, opp in count.items() if len(opp) == 1]

    def visible(self, x: Point) -> list[tuple[Point, ...]]:
        cols, _ = _span_coords(self.points)
        out = []
        for face, opp in self.boundary():
            sx = self._orient(face, x, cols)
            if sx != 0 and sx == -self._orient(face, opp, cols):
                out.append(face)
        return out

    def add(self, x: Sequence[int]) -> None:
        x = tuple(x)
        if not self.points:
            self.points.append(x)
            self.cells = [(x,)]
            self.dim = 0
            return
        if affine_dim(self.points + [x]) > self.dim:
            self.cells = [c + (x,) for c in self.cells]
            self.dim += 1
        else:
            new = [f + (x,) for f in self.visible(x)]
            if not new:
                raise ValueError(f"point {x} lies inside the current hull")
            self.cells.extend(new)
        self.points.append(x)


def placing_triangulation(points: Sequence[Sequence[int]]) -> Subdivision:
    """Triangulation obtained by adding ``points`` in order, each far above the previous ones."""
    pl = _Placer()
    for p in points:
        pl.add(p)
    if pl.dim != 3:
        raise DimensionError("points do not span 3-space")
    return Subdivision.of(pl.cells)


def placing_heights(n: int) -> list[ScaleValue]:
    return [ScaleValue.M(i) if i else ScaleValue() for i in range(n)]


def subdivision_from_heights(points: Sequence[Point], heights: Sequence) -> Subdivision:
    cells = lower_hull(points, heights)
    return Subdivision.of([[points[i] for i in c.points] for c in cells])


def extend_with_cell(
    prior: Subdivision,
    prior_heights: dict[Point, ScaleValue],
    cell: Sequence[Point],
    remaining: Sequence[Point],
) -> Subdivision:
    """Attach ``cell`` along a common face of ``prior`` and continue by smooth extensions.

    The new cell is lifted by an affine function agreeing with the prior heights
    on the common face and dominating them elsewhere; each remaining point gets a
    fresh dominating scale.  The result is the lower hull of that lifting.
    """
    old = set(prior_heights)
    cell = [tuple(p) for p in cell]
    shared = [p for p in cell if p in old]
    fresh = [p for p in cell if p not in old]
    if not fresh or not shared:
        raise ValueError("cell must meet the current domain in a proper face")
    dom = sorted(old)
    dshared = affine_dim(shared)
    if dshared != affine_dim(cell) - 1:
        raise ValueError("cell does not meet the domain in a codimension-one face")
    # the common face must be a face of the prior subdivision and of the new cell
    if not prior.has_face(shared):
        raise ValueError("intersection is not a face of the prior subdivision")
    if any(in_hull(p, dom) for p in fresh):
        raise ValueError("cell overlaps the current domain")
    carrier = next(c for c in prior.cells if set(shared) <= set(c))
    base = [p for p in carrier][:]
    from .lattice import _independent_subset

    sel = _independent_subset(base, list(range(len(base))))
    grad, off = affine_through([base[i] for i in sel], [prior_heights[base[i]] for i in sel])

    def carrier_value(x: Point) -> ScaleValue:
        v = off
        for g, c in zip(grad, x):
            if c:
                v = v + g * c
        return v

    # a linear functional vanishing on the shared face, positive on the new points
    heights = dict(prior_heights)
    span_dirs = [sub(p, shared[0]) for p in shared[1:]]
    from .lattice import nullspace, dot

    cell_dirs = [sub(p, shared[0]) for p in cell[1:]]
    # functional on the cell's span: pick f orthogonal to shared directions but not to the cell
    cands = nullspace(span_dirs, 3) if span_dirs else [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    f = None
    for v in cands:
        if any(dot(v, d) for d in cell_dirs):
            f = v
            break
    if f is None:
        raise ValueError("degenerate cell")
    if dot(f, sub(fresh[0], shared[0])) < 0:
        f = tuple(-x for x in f)
    if any(dot(f, sub(p, shared[0])) <= 0 for p in fresh):
        raise ValueError("cell lies on both sides of the common face")
    for p in fresh:
        heights[p] = carrier_value(p) + ScaleValue.M(EXTENSION_SCALE, dot(f, sub(p, shared[0])))
    for i, p in enumerate(remaining, start=1):
        heights[tuple(p)] = ScaleValue.M(EXTENSION_SCALE + i)
    pts = sorted(heights)
    return subdivision_from_heights(pts, [heights[p] for p in pts])


def verify_regular(
    support: OrderedSupport, subdivision: Subdivision, nu: Sequence, check_volume: bool = True
) -> bool:
    """Certificate check of ``subdivision`` against heights ``nu`` (indexed like ``support``)."""
    pts = list(support.points)
    index = {p: i for i, p in enumerate(pts)}
    cells = [[index[p] for p in c] for c in subdivision.cells]
    if not certify_cells(pts, list(nu), cells):
        return False
    if check_volume and subdivision.volume() != support.polytope.volume:
        return False
    return True


def numeric_heights(nu: Sequence[ScaleValue], E: int, B: int) -> list[Fraction]:
    top = max((s for x in nu for s in x.scales() if s < (1 << 30)), default=0) + 1
    return [x.instantiate(E, B, top) for x in nu]


def numeric_subdivision(points: Sequence[Point], nu: Sequence[ScaleValue], E: int = 16, B: int = 1 << 16) -> Subdivision:
    """Lower hull under ``eps = 1/E``, ``M_s = B^s``, doubling until two rounds agree twice."""
    prev = None
    stable = 0
    while True:
        sub_ = subdivision_from_heights(list(points), numeric_heights(nu, E, B))
        if sub_ == prev:
            stable += 1
            if stable >= 2:
                return sub_
        else:
            stable = 0
        prev = sub_
        E *= 2
        B = B * B
