import functools
import time

import pytest

from tropdisc.lattice import Polytope
from tropdisc.multiplicity import degree
from tropdisc.surface import order_support


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow extended checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="extended check; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


ENUMERATION_SECONDS: dict[int, float] = {}


@functools.lru_cache(maxsize=None)
def simplex_degree(d: int):
    """Enumeration of the degree-d simplex, shared across test modules (first run is timed)."""
    t0 = time.perf_counter()
    res = degree(Polytope.simplex(d))
    ENUMERATION_SECONDS[d] = time.perf_counter() - t0
    return res


@functools.lru_cache(maxsize=None)
def simplex_support(d: int):
    return order_support(Polytope.simplex(d))


def live(result):
    """(record, report) pairs with positive multiplicity."""
    return [(r, rep) for r, rep in zip(result.records, result.reports) if rep.mt]
