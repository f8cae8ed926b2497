import json
import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import S3_A, S3_B, census, small_census
import oracles
from knotfactor.errors import ContractError, ParseError
from knotfactor.homology import homology_h1, smith_diagonal
from knotfactor.isosig import iso_signature
from knotfactor.perm import ALL_PERMS, EDGE_NUMBER, IDENTITY, Perm4
from knotfactor.triangulation import (
    Builder,
    disjoint_union,
    edge_ring,
    from_gluings,
    from_json,
    from_text,
    relabel,
    to_json,
    to_text,
    validate,
)


def all_one_tet_tables():
    """Every closed one-tetrahedron gluing table (faces paired, any perms)."""
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    for pairing in pairings:
        opts = []
        for a, b in pairing:
            opts.append([p for p in ALL_PERMS if p[a] == b])
        for p, q in product(*opts):
            (a, b), (c, d) = pairing
            row = [None] * 4
            row[a], row[b] = (0, p), (0, p.inverse())
            row[c], row[d] = (0, q), (0, q.inverse())
            yield row


class TestPerm:
    def test_compose_and_inverse(self):
        for p in ALL_PERMS:
            assert p * p.inverse() == IDENTITY
            for q in ALL_PERMS[:5]:
                assert (p * q)[2] == p[q[2]]

    def test_string_round_trip(self):
        for p in ALL_PERMS:
            assert Perm4.from_string(str(p)) is p

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Perm4((0, 0, 1, 2))


class TestFromGluings:
    def test_empty(self):
        assert from_gluings([]).size == 0

    def test_one_tet_sphere(self):
        rep = validate(S3_A)
        assert S3_A.size == 1 and rep.isClosed3Manifold

    def test_face_glued_to_itself(self):
        with pytest.raises(ParseError, match="face glued to itself|glued to itself"):
            from_gluings([[(0, "0123"), None, None, None]])

    def test_non_involutive(self):
        with pytest.raises(ParseError, match="reverse gluing"):
            from_gluings([[(0, "1023"), (0, "0123"), None, None]])

    def test_out_of_range(self):
        with pytest.raises(ParseError, match="out of range"):
            from_gluings([[(3, "1023"), None, None, None]])


class TestSkeleton:
    def test_empty(self):
        sk = from_gluings([]).skeleton()
        assert sk.vertices == [] and sk.edges == [] and sk.triangles == []

    @pytest.mark.parametrize("tri", small_census()[:40])
    def test_counts_match_oracle_and_euler_zero(self, tri):
        sk = tri.skeleton()
        v, e, f, rev = oracles.counts(oracles.raw_table(tri))
        assert (len(sk.vertices), len(sk.edges), len(sk.triangles)) == (v, e, f)
        assert v - e + f - tri.size == 0

    def test_disjoint_union_doubles(self):
        for tri in census(2)[:5]:
            sk, sk2 = tri.skeleton(), disjoint_union(tri, tri).skeleton()
            assert len(sk2.vertices) == 2 * len(sk.vertices)
            assert len(sk2.edges) == 2 * len(sk.edges)
            assert len(sk2.triangles) == 2 * len(sk.triangles)

    def test_every_cell_in_exactly_one_class(self):
        for tri in census(2):
            sk = tri.skeleton()
            slots = sorted((t, e) for emb in sk.edges for t, e, _ in emb)
            assert slots == [(t, e) for t in range(tri.size) for e in range(6)]

    def test_stable_edge_numbering(self):
        sk = S3_A.skeleton()
        assert sk.edge_of[0][0] == 0
        firsts = [emb[0][:2] for emb in sk.edges]
        assert firsts == sorted(firsts)

    def test_edge_ring_degrees(self):
        for tri in census(2):
            sk = tri.skeleton()
            for i, emb in enumerate(sk.edges):
                t, e, _ = emb[0]
                assert len(edge_ring(tri, t, e)) == sk.edge_degree[i]


class TestValidate:
    def test_both_spheres_valid(self):
        assert validate(S3_A).isClosed3Manifold
        assert validate(S3_B).isClosed3Manifold

    def test_reversed_edges_match_exhaustive_oracle(self):
        seen_reversed = 0
        for row in all_one_tet_tables():
            tri = from_gluings([row])
            rep = validate(tri)
            _, _, _, nrev = oracles.counts(oracles.raw_table(tri))
            assert len(rep.reversedEdges) == nrev
            if nrev:
                seen_reversed += 1
                assert not rep.isClosed3Manifold
                # the listed edges are exactly those whose directed orbit meets its reverse
                _, dedges, _ = oracles.cell_classes(oracles.raw_table(tri))
                sk = tri.skeleton()
                expect = set()
                for c in dedges:
                    t, a, b = min(c)
                    if (t, b, a) in c:
                        expect.add(sk.edge_of[t][EDGE_NUMBER[(a, b)]])
                assert set(rep.reversedEdges) == expect
        assert seen_reversed > 0

    def test_manifold_flag_consistent(self):
        for row in all_one_tet_tables():
            rep = validate(from_gluings([row]))
            expect = (
                rep.isClosed
                and not rep.reversedEdges
                and all(c == (2, True) for c in rep.vertexLinkChecks)
            )
            assert rep.isClosed3Manifold == expect

    def test_unglued_face(self):
        b = Builder(2)
        b.join(0, 0, 1, IDENTITY)
        assert not validate(b.build()).isClosed

    def test_pure(self):
        tri = census(2)[3]
        assert validate(tri) == validate(from_gluings(tri.rows()))


class TestHomology:
    def test_spheres_trivial(self):
        assert homology_h1(S3_A) == [] and homology_h1(S3_B) == []

    def test_one_tet_against_oracle(self):
        for tri in census(1):
            assert homology_h1(tri) == oracles.h1_oracle(oracles.raw_table(tri))

    def test_small_census_against_oracle(self):
        for tri in small_census():
            assert homology_h1(tri) == oracles.h1_oracle(oracles.raw_table(tri))

    def test_rejects_invalid(self):
        b = Builder(1)
        b.join(0, 0, 0, "1023")
        with pytest.raises(ContractError):
            homology_h1(b.build())

    def test_free_part_encoded_as_zero(self):
        # S2 x S1 appears in the 2-tetrahedron census
        assert [0] in [homology_h1(t) for t in census(2)]

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_smith_divisibility(self, rows):
        d = smith_diagonal(rows)
        assert all(b % a == 0 for a, b in zip(d, d[1:]))


def random_relabel(tri, rng):
    order = list(range(tri.size))
    rng.shuffle(order)
    perms = [rng.choice(ALL_PERMS) for _ in range(tri.size)]
    return relabel(tri, order, perms), order, perms


class TestIsoSignature:
    def test_relabel_invariance(self):
        rng = random.Random(5)
        for tri in small_census()[::4]:
            new, _, _ = random_relabel(tri, rng)
            assert iso_signature(new) == iso_signature(tri)

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_relabel_invariance_with_marks(self, seed):
        rng = random.Random(seed)
        tri = rng.choice(census(3))
        sk = tri.skeleton()
        marks = {rng.randrange(len(sk.edges))}
        new, order, perms = random_relabel(tri, rng)
        t, e, _ = sk.edges[next(iter(marks))][0]
        from knotfactor.perm import EDGE_VERTICES

        a, b = EDGE_VERTICES[e]
        pt = perms[t]
        newmark = new.skeleton().edge_of[order[t]][EDGE_NUMBER[(pt[a], pt[b])]]
        assert iso_signature(new, {newmark}) == iso_signature(tri, marks)

    def test_two_spheres_distinct(self):
        ta, tb = oracles.raw_table(S3_A), oracles.raw_table(S3_B)
        assert oracles.isomorphisms(ta, tb) == []
        assert iso_signature(S3_A) != iso_signature(S3_B)

    def test_census_signatures_distinct(self):
        sigs = [iso_signature(t) for t in census(2)]
        assert len(set(sigs)) == len(sigs)

    def test_marks_against_automorphism_oracle(self):
        for tri in census(1) + census(2)[:6]:
            table = oracles.raw_table(tri)
            autos = oracles.isomorphisms(table, table)
            sk = tri.skeleton()
            ne = len(sk.edges)
            from knotfactor.perm import EDGE_VERTICES

            def image(e_class, order, perms):
                t, e, _ = sk.edges[e_class][0]
                a, b = EDGE_VERTICES[e]
                return sk.edge_of[order[t]][EDGE_NUMBER[(perms[t][a], perms[t][b])]]

            for i in range(ne):
                for j in range(ne):
                    related = any(image(i, o, p) == j for o, p in autos)
                    same = iso_signature(tri, {i}) == iso_signature(tri, {j})
                    assert related == same


class TestSerialization:
    def test_text_round_trip(self):
        for tri in census(2):
            txt = to_text(tri, [(0, 1)])
            back, loop = from_text(txt)
            assert back == tri and loop == [(0, 1)]
            assert to_text(back, loop) == txt

    def test_json_round_trip(self):
        for tri in census(2):
            doc = to_json(tri, [(1, -1)])
            s = json.dumps(doc, sort_keys=True)
            back, loop = from_json(json.loads(s))
            assert back == tri and json.dumps(to_json(back, loop), sort_keys=True) == s

    def test_unglued_face_serializes(self):
        b = Builder(2)
        b.join(0, 0, 1, IDENTITY)
        tri = b.build()
        back, loop = from_text(to_text(tri))
        assert back == tri and loop is None

    @pytest.mark.parametrize(
        "text",
        ["", "tri x", "tri 1\n0: 0(1023) 0(1023) 0(0132)", "tri 1\n0: 0(1023) 0(1023) 0(0132) 0(0132)\nloop 0*"],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            from_text(text)


def test_census_counts():
    # known counts of closed valid triangulations (all, not just minimal)
    assert [len(census(n)) for n in (1, 2)] == [4, 17]
    assert len(census(3)) == 81
    # the twisted S2 bundle over the circle already has a 2-tetrahedron triangulation
    flags = [validate(t).isOrientable for t in census(2)]
    assert flags.count(False) == 1
