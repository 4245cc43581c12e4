"""Lower bounds for the number of real singular surfaces through a real point
configuration, for the simplex family."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import oracle
from .surface import MarkedPath


@dataclass(frozen=True)
class SignPattern:
    """Signs of the leading coefficients ``alpha_{w_r}`` along a connected path."""

    k: int
    signs: dict

    def __getitem__(self, r: int) -> int:
        return self.signs[r]


def sign_pattern(path: MarkedPath | int, d: int | None = None) -> SignPattern:
    """``alpha_{w_0} = 1``, ``(-1)^r`` before the skipped point and ``(-1)^(r+1)`` after it."""
    if isinstance(path, MarkedPath):
        if not path.connected:
            raise ValueError("sign patterns are defined for connected paths only")
        k = path.k
        n = len(path.edges) + 1
    else:
        k = path
        if d is None:
            raise ValueError("d is required when k is given directly")
        n = (d + 1) * (d + 2) * (d + 3) // 6 - 1
    signs = {0: 1} if k != 0 else {}
    for r in range(1, n + 1):
        if r < k:
            signs[r] = (-1) ** r
        elif r > k:
            signs[r] = (-1) ** (r + 1)
    return SignPattern(k, signs)


def _check_case(case: int, d: int, i: int, j: int, l: int | None) -> None:
    if case == 1:
        ok = i > 0 and 0 < j < d - i and l is not None and 0 <= l <= d - i - j
    elif case == 2:
        ok = i > 0 and 0 <= j < d - i and l is not None and 0 <= l <= d - i - j - 2
    elif case == 3:
        ok = 0 < i < d and 1 <= j <= d - i and (l is None or 0 <= l <= d - i - j)
    else:
        ok = False
    if not ok:
        raise ValueError(f"indices {(i, j, l)} outside the range of parallelogram family {case} for d={d}")


def parity_D(case: int, d: int, i: int, j: int, l: int | None = None) -> bool:
    """Whether both lifts of a parallelogram-circuit surface are real."""
    _check_case(case, d, i, j, l)
    if case == 1:
        return ((3 * (d - i) + 2 + 2 * j + 2 * l) * (d - i + 1) // 2) % 2 == 1
    if case == 2:
        return ((d - i + 2 + 2 * l) * (d - i + 1) // 2) % 2 == 1
    return (d - i - j) % 2 == 0


@dataclass(frozen=True)
class RealReport:
    d: int
    A: int
    D: int
    E: int
    proved_real: int
    pair_complex: int
    undecided: int
    d_families: list = field(default_factory=list)
    excluded: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.A + self.D + self.E

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "total": self.total,
            "A": self.A,
            "D": self.D,
            "E": self.E,
            "proved_real": self.proved_real,
            "pair_complex": self.pair_complex,
            "undecided": self.undecided,
            "excluded": list(self.excluded),
        }


def real_lower_bound(d: int) -> RealReport:
    if d < 2:
        raise ValueError("the simplex family needs d >= 2")
    a = len(oracle.a_prime(d)) + len(oracle.a_double_prime(d))
    e = sum(mt for _, _, mt in oracle.e_top(d))
    verdicts = []
    for case, fam in ((1, oracle.d_bottom), (2, oracle.d_top), (3, oracle.d_edge)):
        for _, _, _, (i, j, l) in fam(d):
            verdicts.append((case, (i, j, l), parity_D(case, d, i, j, l)))
    dreal = 2 * sum(1 for *_, r in verdicts if r)
    dcomplex = 2 * sum(1 for *_, r in verdicts if not r)
    undecided = (
        sum(mt for _, _, mt in oracle.e_interior(d))
        + sum(mt for _, _, mt in oracle.e_side(d))
        + sum(mt for _, _, mt, _ in oracle.d_extra(d))
    )
    return RealReport(
        d,
        a,
        dreal,
        e,
        a + dreal + e,
        dcomplex,
        undecided,
        verdicts,
        ["D_extra: no parity rule; counted as undecided", "E_interior, E_side: reality undecided"],
    )
