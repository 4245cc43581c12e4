"""Closed-form family counts for the simplex ``conv{0, d e1, d e2, d e3}``.

Written as plain loops over the explicit index sets; nothing here is shared with
the general enumerator, so the two routes check each other.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

Item = tuple[tuple[int, int, int], tuple[tuple[int, int, int], ...], int]
"""``(w_k, sorted circuit points, mt)``."""

E_FAMILIES = ("E_interior", "E_side", "E_top")
D_FAMILIES = ("D_bottom", "D_top", "D_edge", "D_extra")
A_FAMILIES = ("A_prime", "A_double_prime")


def _c(*pts) -> tuple:
    return tuple(sorted(pts))


def e_interior(d: int) -> list[Item]:
    """Interior points; the circuit is the vertical segment through ``w_k``."""
    out = []
    for i in range(1, d):
        for j in range(1, d):
            for l in range(1, d - i - j):
                out.append(((i, j, l), _c((i, j, l - 1), (i, j, l), (i, j, l + 1)), 8))
    return out


def e_side(d: int) -> list[Item]:
    """Points ``(i, 0, l)`` with ``i > 0`` and ``0 < l < d - i``."""
    out = []
    for i in range(1, d):
        for l in range(1, d - i):
            out.append(((i, 0, l), _c((i, 0, l - 1), (i, 0, l), (i, 0, l + 1)), 2 * (d - i + 1)))
    return out


def e_top(d: int) -> list[Item]:
    """Points ``(i, j, d - i - j)`` with ``j > 0`` and ``i + j <= d - 1``."""
    out = []
    for i in range(d):
        for j in range(1, d - i):
            m = d - i - j
            out.append(
                ((i, j, m), _c((i, j - 1, m + 1), (i, j, m), (i, j + 1, m - 1)), 2 * (d - i - 1))
            )
    return out


def d_bottom(d: int) -> list[tuple[tuple[int, int, int], tuple, int, tuple]]:
    out = []
    for i in range(1, d):
        for j in range(1, d - i):
            for l in range(0, d - i - j + 1):
                q = _c((i, j, 0), (i, j, 1), (i, j - 1, l), (i, j - 1, l + 1))
                out.append(((i, j, 0), q, 2, (i, j, l)))
    return out


def d_top(d: int) -> list:
    out = []
    for i in range(1, d):
        for j in range(0, d - i):
            m = d - i - j
            for l in range(0, d - i - j - 1):
                q = _c((i, j, m), (i, j, m - 1), (i, j + 1, l), (i, j + 1, l + 1))
                out.append(((i, j, m), q, 2, (i, j, l)))
    return out


def d_edge(d: int) -> list:
    """``w_k = (i, 0, 0)``; the range of ``l`` is every value keeping the quadruple in the simplex."""
    out = []
    for i in range(1, d):
        for j in range(1, d - i + 1):
            for l in range(0, d - i - j + 1):
                q = _c((i, 0, 0), (i, 0, 1), (i - 1, j, l), (i - 1, j, l + 1))
                out.append(((i, 0, 0), q, 2, (i, j, l)))
    return out


def d_extra(d: int) -> list:
    out = []
    for i in range(d):
        for j in range(1, d - i - 1):
            q = _c((i, d - i, 0), (i, d - i - 1, 1), (i + 1, j, 0), (i + 1, j - 1, 1))
            out.append(((i, d - i, 0), q, 2, (i, j)))
    return out


def a_prime(d: int) -> list[Item]:
    out = []
    for i in range(d):
        for j in range(1, d):
            for l in range(2, d):
                if j + l <= d - i - 1:
                    q = _c(
                        (i, d - i, 0), (i, d - i - 1, 1), (i + 1, j, 0), (i + 1, j - 1, l), (i + 1, j - 1, l + 1)
                    )
                    out.append(((i, d - i, 0), q, 1))
    return out


def a_double_prime(d: int) -> list[Item]:
    out = []
    for i in range(d):
        for j in range(1, d):
            for l in range(0, d):
                if j + l < d - i - 2:
                    q = _c(
                        (i, d - i, 0), (i, d - i - 1, 1), (i + 1, j, l), (i + 1, j, l + 1), (i + 1, j - 1, d - i - j)
                    )
                    out.append(((i, d - i, 0), q, 1))
    return out


@dataclass(frozen=True)
class OracleBreakdown:
    d: int
    E_total: int
    D_families_total: int
    A_total: int
    families: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.E_total + self.D_families_total + self.A_total


def oracle_breakdown(d: int) -> OracleBreakdown:
    if d < 2:
        raise ValueError("the simplex family needs d >= 2")
    fams = {
        "E_interior": e_interior(d),
        "E_side": e_side(d),
        "E_top": e_top(d),
        "D_bottom": [x[:3] for x in d_bottom(d)],
        "D_top": [x[:3] for x in d_top(d)],
        "D_edge": [x[:3] for x in d_edge(d)],
        "D_extra": [x[:3] for x in d_extra(d)],
        "A_prime": a_prime(d),
        "A_double_prime": a_double_prime(d),
    }

    def tot(names):
        return sum(mt for n in names for _, _, mt in fams[n])

    return OracleBreakdown(d, tot(E_FAMILIES), tot(D_FAMILIES), tot(A_FAMILIES), fams)


def expected_degree(d: int) -> int:
    return 4 * (d - 1) ** 3


@dataclass
class CrossCheck:
    d: int
    passed: bool
    oracle: dict
    enumerated: dict
    grand_total: int
    expected_total: int
    diffs: dict

    def lines(self) -> list[str]:
        out = [f"d={self.d}: {'PASS' if self.passed else 'FAIL'} total {self.grand_total} (expected {self.expected_total})"]
        for t in "ADE":
            out.append(f"  {t}: enumerated {self.enumerated.get(t, 0)} oracle {self.oracle.get(t, 0)}")
        for name, diff in sorted(self.diffs.items()):
            if diff:
                out.append(f"  {name}: {diff}")
        return out


def cross_check(d: int, degree_result=None, jobs: int = 1) -> CrossCheck:
    """Compare enumerated surfaces with the family itemization, item by item."""
    from .lattice import Polytope
    from .multiplicity import degree
    from .surface import order_support

    if degree_result is None:
        degree_result = degree(Polytope.simplex(d), jobs=jobs)
    support = order_support(Polytope.simplex(d))
    ob = oracle_breakdown(d)
    got = Counter()
    for rec, rep in zip(degree_result.records, degree_result.reports):
        if rep.mt:
            w = support.points[rec.path.k] if rec.path.connected else None
            got[(rec.circuit.ctype, w, rec.circuit.points, rep.mt)] += 1
    diffs: dict = {}
    claimed = Counter()
    for name, items in ob.families.items():
        missing = []
        for w, q, mt in items:
            key = (name[0], w, q, mt)
            claimed[key] += 1
            if got[key] < claimed[key]:
                missing.append((w, q, mt))
        diffs[name] = missing
    extra = sorted(
        (k[1], k[2], k[3]) for k, n in (got - claimed).items() for _ in range(n)
    )
    diffs["unclaimed"] = extra
    enumerated = dict(degree_result.by_type)
    oracle = {"E": ob.E_total, "D": ob.D_families_total, "A": ob.A_total}
    expected = expected_degree(d)
    passed = (
        enumerated.get("E", 0) == ob.E_total
        and enumerated.get("A", 0) == ob.A_total
        and degree_result.total == expected
        and not any(diffs.values())
    )
    return CrossCheck(d, passed, oracle, enumerated, degree_result.total, expected, diffs)
