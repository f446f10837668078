"""Tests for graph containers, isomorphism keys, enumeration, planarity."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthograph.errors import SettingMismatch, VertexSetMismatch
from orthograph.graphs import (
    EvenHypergraph,
    Multigraph,
    Setting,
    canonical_form,
    degree_equivalent,
    disjoint_union,
    enumerate_graphs,
    graph_from_json,
    has_k5_minor,
    is_planar,
    pair_iso_key,
    validate_for_setting,
)

K5 = [(a, b) for a in range(1, 6) for b in range(a + 1, 6)]


class TestMultigraph:
    def test_normalization(self):
        g = Multigraph([1, 2, 3], [(2, 1), (3, 2), (1, 2)])
        assert g.edges == ((1, 2), (1, 2), (2, 3))
        assert g.vertices == (1, 2, 3)

    def test_degree_map_counts_loops_twice(self):
        g = Multigraph([1, 2], [(1, 1), (1, 2)])
        assert g.degree_map() == {1: 3, 2: 1}
        assert g.has_loops()

    def test_support_and_connected(self):
        g = Multigraph([1, 2, 3, 4], [(1, 2)])
        assert g.support() == (1, 2)
        assert g.is_connected()
        h = Multigraph([1, 2, 3, 4], [(1, 2), (3, 4)])
        assert not h.is_connected()

    def test_relabel(self):
        g = Multigraph([1, 2, 3], [(1, 2), (2, 3)])
        h = g.relabel({1: 3, 2: 2, 3: 1})
        assert h.edges == ((1, 2), (2, 3))

    def test_eq_hash(self):
        a = Multigraph([1, 2], [(1, 2), (1, 2)])
        b = Multigraph([1, 2], [(2, 1), (1, 2)])
        assert a == b and hash(a) == hash(b)


class TestEvenHypergraph:
    def test_normalization(self):
        g = EvenHypergraph([1, 2, 3, 4], [(4, 3, 2, 1), (2, 1)])
        assert g.edges == ((1, 2), (1, 2, 3, 4))

    def test_odd_edge_rejected(self):
        with pytest.raises(SettingMismatch):
            EvenHypergraph([1, 2, 3], [(1, 2, 3)])

    def test_repeated_vertex_in_edge_rejected(self):
        with pytest.raises(SettingMismatch):
            EvenHypergraph([1, 2], [(1, 1)])

    def test_degree_and_total(self):
        g = EvenHypergraph([1, 2, 3, 4], [(1, 2, 3, 4), (1, 2)])
        assert g.degree_map() == {1: 2, 2: 2, 3: 1, 4: 1}
        assert g.total_degree() == 6


class TestValidation:
    def test_spherical_rejects_loops(self):
        g = Multigraph([1], [(1, 1)])
        validate_for_setting(g, Setting.GAUSSIAN)
        with pytest.raises(SettingMismatch):
            validate_for_setting(g, Setting.SPHERICAL)

    def test_boolean_requires_hypergraph(self):
        with pytest.raises(SettingMismatch):
            validate_for_setting(Multigraph([1, 2], [(1, 2)]), Setting.BOOLEAN)

    def test_json_roundtrip(self):
        g = Multigraph([1, 2, 3], [(1, 2), (2, 3)])
        obj = json.loads(json.dumps(g.to_json(Setting.SPHERICAL)))
        g2, s = graph_from_json(obj)
        assert s is Setting.SPHERICAL
        assert g2 == g

    def test_json_boolean(self):
        g = EvenHypergraph([1, 2, 3, 4], [(1, 2, 3, 4)])
        g2, s = graph_from_json(g.to_json(Setting.BOOLEAN))
        assert s is Setting.BOOLEAN
        assert g2 == g


class TestUnionsAndDegrees:
    def test_degree_equivalent(self):
        g = Multigraph([1, 2, 3], [(1, 2), (1, 2)])
        h = Multigraph([1, 2, 3], [(1, 2), (2, 1)])
        assert degree_equivalent(g, h)
        k = Multigraph([1, 2, 3], [(1, 2), (2, 3)])
        assert not degree_equivalent(g, k)

    def test_vertex_set_mismatch(self):
        with pytest.raises(VertexSetMismatch):
            degree_equivalent(Multigraph([1, 2], [(1, 2)]), Multigraph([1, 3], []))

    def test_disjoint_union(self):
        g = Multigraph([1, 2, 3], [(1, 2)])
        h = Multigraph([1, 2, 3], [(2, 3)])
        assert disjoint_union(g, h).edges == ((1, 2), (2, 3))


class TestIsoKeys:
    def test_iso_key_invariance(self):
        g = Multigraph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (1, 4)])
        rng = random.Random(7)
        for _ in range(20):
            perm = list(g.vertices)
            rng.shuffle(perm)
            h = g.relabel(dict(zip(g.vertices, perm)))
            assert h.iso_key() == g.iso_key()

    def test_iso_key_distinguishes(self):
        path = Multigraph([1, 2, 3], [(1, 2), (2, 3)])
        double = Multigraph([1, 2, 3], [(1, 2), (1, 2)])
        assert path.iso_key() != double.iso_key()

    def test_pair_key_ordered_vs_unordered(self):
        g = Multigraph([1, 2, 3], [(1, 2), (1, 2)])
        h = Multigraph([1, 2, 3], [(1, 3), (3, 2)])
        assert pair_iso_key(g, h) != pair_iso_key(h, g)
        assert pair_iso_key(g, h, unordered=True) == pair_iso_key(
            h, g, unordered=True
        )

    def test_canonical_form_drops_isolated(self):
        g = Multigraph([3, 5, 9], [(5, 9)])
        c = canonical_form(g)
        assert c.vertices == (1, 2)
        assert c.edges == ((1, 2),)

    @given(st.permutations([1, 2, 3, 4, 5]))
    @settings(max_examples=40, deadline=None)
    def test_pair_key_joint_invariance(self, perm):
        g = Multigraph([1, 2, 3, 4, 5], [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
        h = Multigraph([1, 2, 3, 4, 5], [(1, 3), (3, 5), (2, 5), (2, 4), (1, 4)])
        mapping = dict(zip([1, 2, 3, 4, 5], perm))
        assert pair_iso_key(g.relabel(mapping), h.relabel(mapping)) == pair_iso_key(
            g, h
        )


class TestEnumeration:
    def test_counts_small_multigraphs(self):
        # connected multigraph classes on <= 3 vertices: 1 edge -> single edge;
        # 2 edges -> double edge and path
        gs = enumerate_graphs(Setting.SPHERICAL, 3, 2, connected=True)
        by_edges = {}
        for g in gs:
            by_edges.setdefault(g.n_edges, []).append(g)
        assert len(by_edges[1]) == 1
        assert len(by_edges[2]) == 2

    def test_gaussian_includes_loops(self):
        gs = enumerate_graphs(Setting.GAUSSIAN, 2, 1, connected=True)
        assert any(g.has_loops() for g in gs)

    def test_boolean_hyperedges(self):
        gs = enumerate_graphs(Setting.BOOLEAN, 4, 1, connected=True)
        sizes = sorted(len(g.edges[0]) for g in gs if g.n_edges == 1)
        assert sizes == [2, 4]

    def test_deterministic_and_canonical(self):
        a = enumerate_graphs(Setting.SPHERICAL, 4, 3, connected=True)
        b = enumerate_graphs(Setting.SPHERICAL, 4, 3, connected=True)
        assert [g.key() for g in a] == [g.key() for g in b]
        for g in a:
            assert g == canonical_form(g)


class TestPlanarity:
    def test_k5_not_planar(self):
        assert not is_planar(Multigraph(range(1, 6), K5))

    def test_multiplicity_irrelevant(self):
        g = Multigraph([1, 2, 3, 4], [(1, 2), (1, 2), (3, 4), (3, 4)])
        assert is_planar(g)

    def test_k5_minor_plain(self):
        assert has_k5_minor(Multigraph(range(1, 6), K5))

    def test_k5_minor_subdivided(self):
        edges = [e for e in K5 if e != (1, 2)] + [(1, 6), (6, 2)]
        assert has_k5_minor(Multigraph(range(1, 7), edges))

    def test_octahedron_no_k5_minor(self):
        octa = [
            (1, 2), (1, 3), (1, 4), (1, 5),
            (2, 3), (3, 4), (4, 5), (5, 2),
            (6, 2), (6, 3), (6, 4), (6, 5),
        ]
        assert not has_k5_minor(Multigraph(range(1, 7), octa))
        assert is_planar(Multigraph(range(1, 7), octa))

    def test_planar_graphs_lack_k5_minor(self):
        for g in enumerate_graphs(Setting.SPHERICAL, 5, 5, connected=True):
            if is_planar(g):
                assert not has_k5_minor(g)
