import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from knotfactor.census import closed_triangulations  # noqa: E402
from knotfactor.triangulation import from_gluings  # noqa: E402


@functools.lru_cache(maxsize=None)
def census(n):
    return tuple(closed_triangulations(n))


@functools.lru_cache(maxsize=None)
def small_census():
    """Every closed valid connected triangulation with 1, 2 or 3 tetrahedra."""
    return census(1) + census(2) + census(3)


# The two one-tetrahedron triangulations of the 3-sphere.
S3_A = from_gluings([[(0, "1023"), (0, "1023"), (0, "0132"), (0, "0132")]])
S3_B = from_gluings([[(0, "1023"), (0, "1023"), (0, "1230"), (0, "3012")]])


@pytest.fixture(scope="session")
def s3_pair():
    return S3_A, S3_B


# PD codes of small prime knots (Knot Atlas conventions).
PD = {
    "3_1": "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]",
    "4_1": "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
    "5_1": "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]",
    "5_2": "X[1,4,2,5] X[3,8,4,9] X[5,10,6,1] X[9,6,10,7] X[7,2,8,3]",
    "6_1": "X[1,4,2,5] X[7,10,8,11] X[3,9,4,8] X[9,3,10,2] X[5,12,6,1] X[11,6,12,7]",
}


@functools.lru_cache(maxsize=None)
def diagram(name):
    """Named test diagrams: primes from PD, composites and unknot diagrams."""
    from knotfactor.diagram import connected_sum, parse_pd

    if name in PD:
        return parse_pd(PD[name])
    composites = {
        "granny": ("3_1", "3_1"),
        "3_1#4_1": ("3_1", "4_1"),
        "3_1#5_1": ("3_1", "5_1"),
        "granny#3_1": ("granny", "3_1"),
    }
    if name in composites:
        a, b = composites[name]
        return connected_sum(diagram(a), diagram(b))
    if name == "square":
        return connected_sum(diagram("3_1"), diagram("3_1").mirror())
    unknots = {
        "unknot0": "",
        "unknot1": "X[1,1,2,2]",
        "unknot2": "X[1,4,2,1] X[2,4,3,3]",
    }
    if name in unknots:
        return parse_pd(unknots[name])
    if name == "unknot4":
        # figure-eight diagram with one crossing switched
        return diagram("4_1").switch(0)
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def built(name, simplified=True):
    from knotfactor.diagram import build_edge_ideal
    from knotfactor.edge_ideal import simplify

    E = build_edge_ideal(diagram(name))
    return simplify(E) if simplified else E


@functools.lru_cache(maxsize=None)
def wirtinger_signature(name, kmax=5):
    """Rep-count signature of a prime from its Wirtinger presentation (brute force)."""
    import oracles

    n, rels = oracles.wirtinger(diagram(name).crossings)
    return tuple(oracles.transitive_count(n, rels, k) for k in range(2, kmax + 1))


@functools.lru_cache(maxsize=None)
def factored(name):
    """``(result, certificate)`` for a named diagram under the default config."""
    from knotfactor.factorize import factorize

    return factorize(diagram(name))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance")
        for line in mod.LINES:
            terminalreporter.write_line(line)
