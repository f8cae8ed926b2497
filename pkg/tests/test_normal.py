from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import S3_A, S3_B, built, census
from knotfactor.edge_ideal import make_edge_ideal
from knotfactor.errors import BudgetExceeded, ContractError, ParseError
from knotfactor.normal import (
    NormalSurface,
    enumerate_quad_vertex,
    find_crushable_sphere,
    from_record,
    is_admissible,
    loop_weight,
    quad_matching_matrix,
    quad_to_canonical_standard,
    to_record,
)
from knotfactor.triangulation import disjoint_union, from_gluings

EMPTY = from_gluings([])
SMALL = census(1) + census(2)


def vertex_link(tri, vertex):
    std = [0] * (7 * tri.size)
    for t, v, _ in tri.skeleton().vertices[vertex]:
        std[7 * t + v] += 1
    return NormalSurface(tri, std)


def trefoil_one_tet():
    return make_edge_ideal(S3_B, ((1, 1),))


def unknot_one_tet():
    return make_edge_ideal(S3_A, ((0, 1),))


class TestMatchingMatrix:
    def test_empty(self):
        assert quad_matching_matrix(EMPTY) == []

    def test_one_row_per_edge(self):
        for tri in SMALL:
            rows = quad_matching_matrix(tri)
            assert len(rows) == len(tri.skeleton().edges)
            assert all(len(r) == 3 * tri.size for r in rows)

    def test_disjoint_union_is_block_diagonal(self):
        for tri in (S3_A, S3_B, census(2)[3]):
            m = quad_matching_matrix(tri)
            mm = quad_matching_matrix(disjoint_union(tri, tri))
            w = 3 * tri.size
            expect = [r + [0] * w for r in m] + [[0] * w + r for r in m]
            assert sorted(mm) == sorted(expect)

    def test_rejects_unglued(self):
        with pytest.raises(ContractError):
            quad_matching_matrix(from_gluings([[None, None, None, None]]))


class TestAdmissible:
    def test_zero_vector(self):
        assert is_admissible((0, 0, 0), S3_A)

    def test_two_quads_in_one_tet(self):
        assert not is_admissible((1, 1, 0), S3_A)

    def test_negative_entry(self):
        # a kernel vector of the matching equations with a negative entry
        q = next(q for q in enumerate_quad_vertex(S3_A) if any(q))
        neg = tuple(-x for x in q)
        assert all(sum(a * b for a, b in zip(r, neg)) == 0 for r in quad_matching_matrix(S3_A))
        assert not is_admissible(neg, S3_A)

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            is_admissible((0, 0), S3_A)


class TestEnumeration:
    def test_empty_triangulation(self):
        assert enumerate_quad_vertex(EMPTY) == []

    @pytest.mark.parametrize("tri", [S3_A, S3_B], ids=["S3_A", "S3_B"])
    def test_one_tet_spheres_match_oracle(self, tri):
        assert enumerate_quad_vertex(tri) == oracles.quad_vertex_oracle(oracles.raw_table(tri))

    def test_two_tet_census_matches_oracle(self):
        for tri in SMALL:
            assert enumerate_quad_vertex(tri) == oracles.quad_vertex_oracle(oracles.raw_table(tri))

    def test_emitted_vectors_are_primitive_admissible_vertices(self):
        for tri in SMALL + (built("4_1").tri,):
            table = oracles.raw_table(tri)
            for q in enumerate_quad_vertex(tri):
                assert is_admissible(q, tri)
                for k in range(2, max(q) + 1):
                    if all(x % k == 0 for x in q):
                        assert not is_admissible(tuple(x // k for x in q), tri)
                assert oracles.is_quad_vertex_oracle(table, q)

    def test_emission_is_sorted_and_deterministic(self):
        tri = built("3_1#4_1").tri
        a = enumerate_quad_vertex(tri)
        assert a == sorted(a) == enumerate_quad_vertex(tri)

    def test_visitor_stops_early_with_a_prefix(self):
        tri = built("4_1").tri
        full = enumerate_quad_vertex(tri)
        seen = []
        out = enumerate_quad_vertex(tri, visitor=lambda q: seen.append(q) or len(seen) == 3)
        assert out == seen == full[:3]

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_quad_vertex(built("4_1", simplified=False).tri, budget=10)


class TestCanonicalStandard:
    def test_zero(self):
        assert quad_to_canonical_standard((0, 0, 0), S3_A) == (0,) * 7

    def test_inadmissible(self):
        with pytest.raises(ContractError):
            quad_to_canonical_standard((1, 1, 0), S3_A)

    @staticmethod
    def check(tri, q):
        v = quad_to_canonical_standard(q, tri)
        table = oracles.raw_table(tri)
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in oracles.standard_matching_rows(table))
        assert all(x >= 0 for x in v)
        assert tuple(x for t in range(tri.size) for x in v[7 * t + 4:7 * t + 7]) == tuple(q)
        # no vertex link can be removed: every vertex has a zero corner
        for cls in tri.skeleton().vertices:
            assert min(v[7 * t + c] for t, c, _ in cls) == 0

    def test_enumerated_vectors(self):
        for tri in SMALL:
            for q in enumerate_quad_vertex(tri):
                self.check(tri, q)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_sums_of_vertices(self, data):
        tri = data.draw(st.sampled_from(SMALL + (built("4_1").tri,)))
        qs = enumerate_quad_vertex(tri)
        if not qs:
            return
        picks = data.draw(st.lists(st.sampled_from(qs), min_size=1, max_size=3))
        coef = data.draw(st.lists(st.integers(1, 3), min_size=len(picks), max_size=len(picks)))
        q = tuple(sum(c * p[i] for c, p in zip(coef, picks)) for i in range(3 * tri.size))
        if is_admissible(q, tri):
            self.check(tri, q)


class TestGeometry:
    def test_vertex_link_is_a_sphere(self):
        for tri in SMALL:
            for v in range(len(tri.skeleton().vertices)):
                g = vertex_link(tri, v).geometry()
                assert g.connected and g.chis == (2,)

    def test_components_add_over_disjoint_union(self):
        tri = disjoint_union(S3_A, S3_B)
        std = [0] * 14
        for t, v, _ in tri.skeleton().vertices[0]:
            std[7 * t + v] += 1
        for t, v, _ in tri.skeleton().vertices[-1]:
            std[7 * t + v] += 1
        g = NormalSurface(tri, std).geometry()
        assert sorted(g.chis) == [2, 2]

    @pytest.mark.parametrize("name", ["4_1", "3_1#4_1"])
    def test_chi_matches_disc_graph_oracle(self, name):
        tri = built(name).tri
        table = oracles.raw_table(tri)
        for q in enumerate_quad_vertex(tri):
            s = NormalSurface.from_quad(tri, q)
            assert sorted(s.geometry().chis) == oracles.surface_chi_oracle(table, s.standard)

    def test_census_chi_matches_oracle(self):
        for tri in SMALL:
            table = oracles.raw_table(tri)
            for q in enumerate_quad_vertex(tri):
                s = NormalSurface.from_quad(tri, q)
                assert sorted(s.geometry().chis) == oracles.surface_chi_oracle(table, s.standard)


class TestLoopWeight:
    def test_empty_surface(self):
        E = built("3_1", simplified=False)
        assert loop_weight(NormalSurface(E.tri, [0] * (7 * E.size)), E.loop) == 0

    def test_vertex_links_on_and_off_the_loop(self):
        E = built("3_1", simplified=False)
        sk = E.tri.skeleton()
        on = set()
        for e, _ in E.loop:
            on.update(sk.edge_endpoints(e))
        assert 0 < len(on) < len(sk.vertices)
        for v in range(len(sk.vertices)):
            assert loop_weight(vertex_link(E.tri, v), E.loop) == (2 if v in on else 0)


class TestFindCrushableSphere:
    def test_one_tet_trefoil_has_none(self):
        assert not find_crushable_sphere(trefoil_one_tet())

    def test_one_tet_unknot_has_none(self):
        assert not find_crushable_sphere(unknot_one_tet())

    def test_granny_has_a_sphere(self):
        res = find_crushable_sphere(built("granny"))
        assert res
        s = res.surface
        assert s.geometry().chis == (2,)
        assert loop_weight(s, res.edge_ideal.loop) == 2

    @pytest.mark.parametrize("name", ["square", "3_1#4_1", "3_1#5_1"])
    def test_composites_have_a_sphere(self, name):
        res = find_crushable_sphere(built(name))
        assert res and loop_weight(res.surface, res.edge_ideal.loop) in (0, 2)

    def test_small_budget_retries_on_randomized_copies(self):
        E = built("granny")
        res = find_crushable_sphere(E, budget=1, seed=3)
        assert res and res.rounds > 1
        assert res.surface.host == res.edge_ideal.tri


class TestRecord:
    def test_round_trip(self):
        E = built("granny")
        q = find_crushable_sphere(E).surface.quad
        tri, loop, back = from_record(to_record(E.tri, E.loop, q))
        assert tri == E.tri and tuple(loop) == E.loop and back == q

    def test_without_surface(self):
        assert from_record(to_record(S3_A))[2] is None

    def test_wrong_length(self):
        with pytest.raises(ParseError):
            from_record(to_record(S3_A) + "surf 1 0\n")


def test_no_pair_of_vertices_sums_to_a_vertex():
    # a vertex is never the sum of two other admissible solutions
    for tri in SMALL:
        qs = set(enumerate_quad_vertex(tri))
        for a, b in combinations(qs, 2):
            s = tuple(x + y for x, y in zip(a, b))
            assert s not in qs
