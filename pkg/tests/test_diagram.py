import time
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import PD, diagram
from knotfactor.diagram import (
    TETS_PER_CROSSING,
    Diagram,
    build_edge_ideal,
    connected_sum,
    gadget_template,
    parse_dt,
    parse_pd,
    unknot_edge_ideal,
)
from knotfactor.edge_ideal import validate_loop
from knotfactor.errors import ParseError
from knotfactor.homology import h1_unchecked
from knotfactor.perm import Perm4
from knotfactor.triangulation import Builder, validate

ALL = ["3_1", "4_1", "5_1", "5_2", "6_1", "granny", "square", "3_1#4_1", "3_1#5_1",
       "unknot1", "unknot2", "unknot4"]


class TestParsePD:
    def test_trefoil(self):
        d = parse_pd(PD["3_1"])
        assert d.size == 3 and d.arcCount == 6

    def test_whitespace_and_wrapper(self):
        a = parse_pd(PD["4_1"])
        b = parse_pd("PD[" + PD["4_1"].replace(" ", ",\n ").replace("[", "[ ") + "]")
        assert a == b

    def test_empty_is_the_unknot(self):
        assert parse_pd("").size == 0
        assert parse_pd("  ").crossings == ()

    def test_three_component_link(self):
        # going straight through each crossing closes up after one arc pair
        with pytest.raises(ParseError, match="links"):
            parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]")

    def test_two_component_link(self):
        with pytest.raises(ParseError, match="links"):
            parse_pd("X[1,3,2,4] X[3,1,4,2]")

    @pytest.mark.parametrize("text", [
        "X[1,2,3]",
        "X[1,5,2,4] X[3,1,4,6] X[5,3,6,7]",
        "X[1,5,2,4] junk",
        "Y[1,1,2,2]",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_pd(text)

    def test_round_trip_through_text(self):
        for name in ALL:
            d = diagram(name)
            assert parse_pd(d.pd_text()) == d


class TestParseDT:
    def test_trefoil(self):
        d = parse_dt("4 6 2")
        assert d.size == 3 and d.arcCount == 6
        assert parse_dt("[4, 6, 2]") == parse_dt("DT 4,6,2") == d

    def test_empty(self):
        assert parse_dt("[]").size == 0
        assert parse_dt("").size == 0

    @pytest.mark.parametrize("text", ["4 6", "4 4 2", "3 6 2", "4 x 2"])
    def test_bad_codes(self, text):
        with pytest.raises(ParseError):
            parse_dt(text)

    def test_non_realizable(self):
        with pytest.raises(ParseError, match="realizable"):
            parse_dt("4 6 8 10 2")

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_realizability_matches_gauss_word_oracle(self, n):
        for p in permutations(range(2, 2 * n + 1, 2)):
            try:
                parse_dt(" ".join(map(str, p)))
                ok = True
            except ParseError:
                ok = False
            assert ok == oracles.gauss_realizable(p)

    def test_all_negative_signs_still_give_a_trefoil(self):
        a, b = parse_dt("4 6 2"), parse_dt("-4 -6 -2")
        assert a != b and a.size == b.size
        counts = []
        for d in (a, b):
            n, rels = oracles.wirtinger(d.crossings)
            counts.append([oracles.transitive_count(n, rels, k) for k in (2, 3, 4)])
        assert counts[0] == counts[1]


class TestDiagramOps:
    def test_mirror_is_an_involution(self):
        for name in ALL:
            d = diagram(name)
            assert d.mirror().mirror() == d
            assert d.mirror().size == d.size

    def test_switch_one_crossing(self):
        d = diagram("4_1")
        e = d.switch(0)
        assert e.crossings[1:] == d.crossings[1:] and e.crossings[0] != d.crossings[0]

    def test_connected_sum_sizes(self):
        for a, b in [("3_1", "4_1"), ("3_1", "3_1"), ("5_2", "6_1")]:
            s = connected_sum(diagram(a), diagram(b))
            assert s.size == diagram(a).size + diagram(b).size
            assert len(s.regions()) == s.size + 2

    def test_sum_with_empty_diagram(self):
        d = diagram("5_1")
        assert connected_sum(d, Diagram(())) == d == connected_sum(Diagram(()), d)

    def test_traversal_visits_each_crossing_twice(self):
        for name in ALL:
            d = diagram(name)
            counts = [0] * d.size
            for c, _, _ in d.traversal():
                counts[c] += 1
            assert counts == [2] * d.size


def double(tri):
    """Glue a ball to a copy of itself along the boundary."""
    n = tri.size
    b = Builder(2 * n)
    for t in range(n):
        for f in range(4):
            g = tri.gluing(t, f)
            if g is None:
                b.join(t, f, n + t, Perm4(0, 1, 2, 3))
            elif not b.glue[t][f]:
                u, p = g
                b.join(t, f, u, p)
                b.join(n + t, f, n + u, p)
    return b.build()


class TestGadget:
    def test_template_is_a_ball(self):
        tri, over, under = gadget_template()
        assert tri.size == TETS_PER_CROSSING
        assert over != under
        open_faces = [(t, f) for t in range(tri.size) for f in range(4) if tri.gluing(t, f) is None]
        assert len(open_faces) == 8
        d = double(tri)
        rep = validate(d)
        assert rep.isClosed3Manifold
        assert h1_unchecked(d) == []

    def test_fixed_unknot(self):
        E = unknot_edge_ideal()
        assert E.size == 1 and E.loop_length == 1
        assert validate(E.tri).isClosed3Manifold and h1_unchecked(E.tri) == []


class TestBuild:
    @pytest.mark.parametrize("name", ALL)
    def test_sizes(self, name):
        d = diagram(name)
        E = build_edge_ideal(d)
        assert E.size <= 9 * d.size
        assert E.loop_length == 2 * d.size
        assert validate(E.tri).isClosed3Manifold
        assert h1_unchecked(E.tri) == []
        assert validate_loop(E)

    def test_zero_crossings(self):
        E = build_edge_ideal(Diagram(()))
        assert E.size == 1 and E.loop_length == 1

    def test_mirror_keeps_size(self):
        for name in ("3_1", "5_2", "granny"):
            d = diagram(name)
            assert build_edge_ideal(d.mirror()).size == build_edge_ideal(d).size

    def test_fifteen_crossings_build_quickly(self):
        d = connected_sum(connected_sum(diagram("3_1"), diagram("4_1")), connected_sum(diagram("5_1"), diagram("3_1")))
        assert d.size == 15
        t = time.perf_counter()
        E = build_edge_ideal(d)
        assert time.perf_counter() - t < 1
        assert E.size <= 9 * 15 and E.loop_length == 30

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from(sorted(PD)), min_size=1, max_size=3), st.data())
    def test_sums_of_primes(self, names, data):
        d = diagram(names[0])
        for nm in names[1:]:
            e = diagram(nm)
            if data.draw(st.booleans()):
                e = e.mirror()
            d = connected_sum(d, e)
        E = build_edge_ideal(d)
        assert E.size <= 9 * d.size and E.loop_length == 2 * d.size
        assert validate(E.tri).isClosed3Manifold and h1_unchecked(E.tri) == []
        assert validate_loop(E)
