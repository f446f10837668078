"""Tests for matching collections, routing, re-matching, and partitions."""

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthograph.graphs import EvenHypergraph, Multigraph, Setting, enumerate_graphs
from orthograph.matchings import (
    MatchingCollection,
    colored_union,
    count_cycles,
    dart_vertices,
    darts_at,
    degree4_vertices,
    discrete_partition,
    double_factorial_odd,
    enumerate_partial,
    enumerate_pm,
    enumerate_pm_cross,
    enumerate_pm_union,
    gloop,
    g_pair_counts,
    in_lambda_c,
    is_closed_block,
    is_dominant,
    is_noncrossing,
    is_simple_partition,
    iter_partitions,
    lambda_c_members,
    mobius_lambda_c,
    pm_bool,
    pm_bool_cross,
    refines,
    rematch,
    route,
    route_partition,
    s_coefficient,
)

K5_OUTER = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
K5_INNER = [(1, 3), (3, 5), (2, 5), (2, 4), (1, 4)]


def mg(*edges):
    verts = sorted({v for e in edges for v in e})
    return Multigraph(verts, edges)


class TestDarts:
    def test_dart_vertices(self):
        g = mg((1, 2), (2, 3))
        assert dart_vertices(g) == [1, 2, 2, 3]

    def test_loop_darts_same_vertex(self):
        g = Multigraph([1], [(1, 1)])
        assert dart_vertices(g) == [1, 1]
        assert darts_at(g) == {1: [0, 1]}


class TestPerfectMatchings:
    def test_star_partials_at_center(self):
        # degree-4 center: (4-1)!! = 3 full pairings, 4C2 = 6 single pairs,
        # 1 empty; leaves contribute nothing
        star = Multigraph([1, 2, 3, 4, 5], [(1, 2), (1, 3), (1, 4), (1, 5)])
        assert list(enumerate_pm(star)) == []
        sizes = sorted(m.size for m in enumerate_partial(star))
        assert sizes == [0] + [1] * 6 + [2] * 3

    def test_counts_on_even_graphs(self):
        # 4-cycle: each vertex degree 2 -> exactly 1 pairing per vertex
        c4 = mg((1, 2), (2, 3), (3, 4), (1, 4))
        assert len(list(enumerate_pm(c4))) == 1
        assert count_cycles(next(enumerate_pm(c4))) == 1

        # doubled edge: one pairing, one 2-cycle
        d = mg((1, 2), (1, 2))
        (m,) = enumerate_pm(d)
        assert count_cycles(m) == 1

        # K5 union (degree 4 everywhere): 3 pairings per vertex -> 3^5
        u = Multigraph(range(1, 6), K5_OUTER + K5_INNER)
        assert len(list(enumerate_pm(u))) == 3**5

    def test_odd_degree_has_no_pm(self):
        path = mg((1, 2), (2, 3))
        assert list(enumerate_pm(path)) == []

    def test_partial_includes_empty_and_pm(self):
        d = mg((1, 2), (1, 2))
        partials = list(enumerate_partial(d))
        sizes = sorted(m.size for m in partials)
        # at each degree-2 vertex: empty or the single pair -> 4 collections
        assert sizes == [0, 1, 1, 2]

    def test_cross_matchings_k5(self):
        g = Multigraph(range(1, 6), K5_OUTER)
        h = Multigraph(range(1, 6), K5_INNER)
        cross = list(enumerate_pm_cross(g, h))
        # 2 cross pairings per degree-4 vertex
        assert len(cross) == 2**5
        for m in cross:
            for a, b in m.pairs():
                assert m.is_g_dart(a) != m.is_g_dart(b)

    def test_union_matchings_count(self):
        g = mg((1, 2), (1, 2))
        h = mg((1, 2), (1, 2))
        union = list(enumerate_pm_union(g, h))
        assert len(list(enumerate_pm_union(g, h))) == 9  # 3 pairings per vertex


class TestRouting:
    def test_route_4cycle(self):
        c4 = mg((1, 2), (2, 3), (3, 4), (1, 4))
        (m,) = enumerate_pm(c4)
        r = route(m)
        assert r.cycles == 1
        assert r.routed.n_edges == 0
        assert len(r.traces) == 1
        assert sorted(r.traces[0].vertices()) == [1, 2, 3, 4]

    def test_route_star_partial(self):
        star = mg((1, 2), (1, 3))
        # match the two center darts
        da = darts_at(star)[1]
        mate = [-1] * 4
        mate[da[0]], mate[da[1]] = da[1], da[0]
        m = MatchingCollection(star, tuple(mate))
        r = route(m)
        assert r.cycles == 0
        assert r.routed.edges == ((2, 3),)

    def test_route_edge_conservation(self):
        # an open walk with k pairs collapses k+1 edges into one routed edge,
        # a closed walk with k pairs consumes k edges, so
        # routed edges = edges - matched pairs
        g = mg((1, 2), (2, 3), (3, 4), (2, 4))
        for m in enumerate_partial(g):
            r = route(m)
            assert r.routed.n_edges == g.n_edges - m.size
            cycle_pairs = sum(len(t.visits) for t in r.traces)
            assert cycle_pairs <= m.size

    def test_loop_routes_to_itself(self):
        g = Multigraph([1, 2], [(1, 1), (1, 2)])
        empty = MatchingCollection(g, (-1, -1, -1, -1))
        r = route(empty)
        assert r.cycles == 0
        assert sorted(r.routed.edges) == [(1, 1), (1, 2)]


class TestRematching:
    def _fig4(self):
        g = mg((1, 2), (1, 2), (3, 4), (3, 4))
        h = mg((2, 3), (2, 3), (4, 1), (4, 1))
        return g, h

    def test_degree4_vertices(self):
        g, h = self._fig4()
        assert degree4_vertices(g, h) == [1, 2, 3, 4]
        with pytest.raises(Exception):
            degree4_vertices(mg((1, 2), (1, 2), (1, 3), (1, 3)), mg((1, 2), (1, 2), (1, 3), (1, 3)))

    def test_rematch_gains_cycles(self):
        g, h = self._fig4()
        for m in enumerate_pm_cross(g, h):
            for v in gloop(m):
                m2 = rematch(m, [v])
                assert count_cycles(m2) == count_cycles(m) + 1

    def test_gloop_fig5_example(self):
        g = mg((1, 2), (1, 2), (2, 3), (3, 4))
        h = Multigraph([1, 2, 3, 4], [(2, 3), (3, 4)])
        # pairs at v1:{e0,e1}, v2:{e0,e2},{e1,e4}, v3:{e2,e5},{e3,e4}, v4:{e3,e5}
        # darts: edge i has darts 2i (first endpoint), 2i+1 (second)
        u = colored_union(g, h)
        dv = dart_vertices(u)
        mate = [-1] * len(dv)

        def pair(da, db):
            mate[da] = db
            mate[db] = da

        # e0=(1,2)g darts 0,1; e1=(1,2)g darts 2,3; e2=(2,3)g darts 4,5;
        # e3=(3,4)g darts 6,7; e4=(2,3)h darts 8,9; e5=(3,4)h darts 10,11
        pair(0, 2)    # v1: e0-e1
        pair(1, 4)    # v2: e0-e2
        pair(3, 8)    # v2: e1-e4
        pair(5, 10)   # v3: e2-e5
        pair(7, 11)   # v4: e3-e5
        pair(6, 9)    # v3: e3-e4
        m = MatchingCollection(u, tuple(mate), n_g_edges=4)
        assert m.is_perfect()
        assert gloop(m) == frozenset({2})

    def test_noncrossing_and_dominance_agree_on_fig4(self):
        g, h = self._fig4()
        for m in enumerate_pm_cross(g, h):
            gl = sorted(gloop(m))
            for r in range(len(gl) + 1):
                for s in itertools.combinations(gl, r):
                    assert is_noncrossing(m, s) == is_dominant(m, s)

    def test_s_coefficient_range(self):
        g, h = self._fig4()
        vals = {s_coefficient(m) for m in enumerate_pm_cross(g, h)}
        assert vals <= {-1, 0, 1}


class TestPartitions:
    def test_iter_partitions_bell(self):
        assert len(list(iter_partitions(4))) == 15
        assert len(list(iter_partitions(0))) == 1

    def test_refines(self):
        d = discrete_partition(3)
        full = ((0, 1, 2),)
        assert refines(d, full)
        assert not refines(full, d)

    def test_closed_block_xor(self):
        edges = [(1, 2), (1, 2), (1, 2, 3, 4), (1, 2, 3, 4)]
        assert is_closed_block(edges, (0, 1))
        assert is_closed_block(edges, (2, 3))
        assert not is_closed_block(edges, (0, 2))
        assert is_closed_block(edges, (0, 1, 2, 3))
        # odd leftover at vertices 3, 4
        assert not is_closed_block([(1, 2), (1, 2, 3, 4)], (0, 1))

    def test_route_partition(self):
        g = EvenHypergraph([1, 2, 3], [(1, 2), (2, 3)])
        routed, cycles = route_partition(g, ((0, 1),))
        assert cycles == 0
        assert routed.edges == ((1, 3),)
        g2 = EvenHypergraph([1, 2], [(1, 2), (1, 2)])
        routed, cycles = route_partition(g2, ((0, 1),))
        assert cycles == 1
        assert routed.edges == ()

    def test_lambda_c_and_mobius_triple_edge(self):
        g = EvenHypergraph([1, 2], [(1, 2), (1, 2), (1, 2)])
        members = lambda_c_members(g)
        # discrete + 3 pairings-with-singleton + full block
        assert len(members) == 5
        mob = mobius_lambda_c(g)
        d = discrete_partition(3)
        assert mob[d] == 1
        # defining identity: mobius sums to zero over the interval above each
        # non-discrete member
        for q in members:
            if q == d:
                continue
            tot = sum(mob[p] for p in members if refines(p, q))
            assert tot == 0

    def test_pm_bool(self):
        g = EvenHypergraph([1, 2], [(1, 2), (1, 2), (1, 2), (1, 2)])
        pms = pm_bool(g)
        # even-size blocks only: the full block plus the 3 pairings
        assert len(pms) == 4
        for p in pms:
            assert all(is_closed_block(g.edges, b) for b in p)

    def test_pm_bool_cross(self):
        g = EvenHypergraph([1, 2], [(1, 2), (1, 2)])
        h = EvenHypergraph([1, 2], [(1, 2), (1, 2)])
        cross = pm_bool_cross(g, h)
        for p in cross:
            for b in p:
                assert any(i < 2 for i in b) and any(i >= 2 for i in b)

    def test_simple_partition(self):
        edges = [(1, 2), (1, 2), (1, 2)]
        assert is_simple_partition(edges, ((0, 1), (2,)))
        assert not is_simple_partition(edges, ((0, 1, 2),))

    def test_double_factorial_odd(self):
        # (k-1)!! pairings of k darts
        assert [double_factorial_odd(k) for k in (0, 2, 4, 6)] == [1, 1, 3, 15]


class TestPropertyRouting:
    @given(st.integers(min_value=0, max_value=200))
    @settings(max_examples=30, deadline=None)
    def test_route_conserves_edges(self, seed):
        import random

        rng = random.Random(seed)
        graphs = enumerate_graphs(Setting.SPHERICAL, 4, 4, connected=True)
        g = graphs[rng.randrange(len(graphs))]
        ms = list(enumerate_partial(g))
        m = ms[rng.randrange(len(ms))]
        r = route(m)
        assert r.routed.n_edges == g.n_edges - m.size

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25, deadline=None)
    def test_gloop_subset_of_degree4(self, seed):
        import random

        rng = random.Random(seed)
        graphs = [
            g.on_vertices(range(1, 5))
            for g in enumerate_graphs(Setting.SPHERICAL, 4, 3, connected=True)
            if g.n_edges and max(g.degree_map().values()) <= 2
        ]
        g = graphs[rng.randrange(len(graphs))]
        h = graphs[rng.randrange(len(graphs))]
        if g.degree_map() != h.degree_map():
            return
        for m in enumerate_pm_cross(g, h):
            assert gloop(m) <= set(degree4_vertices(g, h))
