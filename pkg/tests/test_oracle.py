import pytest

from tropdisc import oracle
from tropdisc.oracle import cross_check, expected_degree, oracle_breakdown

from conftest import simplex_degree


def test_breakdown_small():
    b2 = oracle_breakdown(2)
    assert (b2.E_total, b2.D_families_total, b2.A_total) == (2, 2, 0)
    b3 = oracle_breakdown(3)
    assert (b3.E_total, b3.D_families_total, b3.A_total) == (16, 16, 0)
    assert not b3.families["A_prime"] and not b3.families["A_double_prime"]


def test_breakdown_rejects_small_d():
    with pytest.raises(ValueError):
        oracle_breakdown(1)


@pytest.mark.parametrize("d,total", [(2, 4), (3, 32), (4, 108), (5, 256)])
def test_oracle_totals(d, total):
    b = oracle_breakdown(d)
    assert b.total == total == expected_degree(d)


def test_e_total_closed_form():
    # interior points x 8 + side points x 2(d-i+1) + top points x 2(d-i-1)
    for d in range(2, 12):
        interior = sum(8 for i in range(1, d) for j in range(1, d) for l in range(1, d - i - j))
        side = sum(2 * (d - i + 1) for i in range(1, d) for l in range(1, d - i))
        top = sum(2 * (d - i - 1) for i in range(d) for j in range(1, d - i))
        assert oracle_breakdown(d).E_total == interior + side + top


def test_family_members_are_lattice_points_of_the_simplex():
    d = 6
    b = oracle_breakdown(d)
    for items in b.families.values():
        for w, q, _ in items:
            assert w in q
            assert all(min(p) >= 0 and sum(p) <= d for p in q)


def test_growth_trend():
    # per-type ratios to d^3 increase towards their limits; the d=20 values
    # are still well below (the O(d^2) corrections are large)
    prev = None
    for d in (8, 12, 16, 20):
        b = oracle_breakdown(d)
        r = (b.E_total / d**3, b.A_total / d**3)
        if prev:
            assert r[0] > prev[0] and r[1] > prev[1]
        prev = r
    assert prev[0] < 8 / 3 and prev[1] < 1 / 3


@pytest.mark.parametrize("d", [2, 3])
def test_cross_check_passes(d):
    cc = cross_check(d, degree_result=simplex_degree(d))
    assert cc.passed, cc.lines()
    assert all(not v for v in cc.diffs.values())


def test_cross_check_reports_tampering():
    from dataclasses import replace

    res = simplex_degree(3)
    reports = list(res.reports)
    i = next(i for i, r in enumerate(reports) if r.mt == 6)
    reports[i] = replace(reports[i], mt=4)
    by_type = dict(res.by_type)
    by_type["E"] -= 2
    tampered = replace(res, total=res.total - 2, by_type=by_type, reports=tuple(reports))
    cc = cross_check(3, degree_result=tampered)
    assert not cc.passed
    assert cc.diffs["E_side"] and cc.diffs["unclaimed"]


def test_families_are_independent_of_enumerator():
    import inspect

    src = inspect.getsource(oracle)
    header = src.split("def cross_check")[0]
    assert "circuits" not in header and "multiplicity" not in header
