"""Matching collections, routing, and edge-partition combinatorics.

The primitive objects are darts: edge i of a multigraph owns darts 2i and
2i+1, one per endpoint (both at the same vertex for a self-loop).  A matching
collection pairs up darts vertex by vertex; it is stored as a flat `mate`
tuple with mate[d] = partner dart or -1.

Routing composes the edge involution a(d) = d^1 with the matching: maximal
alternating walks between unmatched darts become single routed edges, and
alternating closed walks are deleted and counted as cycles.  Cycle traces
(the cyclic visit sequence of a closed walk) drive the re-matching analysis
used for degree-4 inner products.

The Boolean setting replaces matchings by set partitions of the hyperedge
multiset: a block whose vertex incidences are all even is closed (a cycle);
any other block routes to the hyperedge of its odd-incidence vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import SettingMismatch, VertexSetMismatch
from .graphs import EvenHypergraph, Multigraph


# -- darts --------------------------------------------------------------------


def dart_vertices(g: Multigraph) -> list[int]:
    """dart_vertex[d] for d = 0..2m-1; edge i owns darts 2i (u) and 2i+1 (v)."""
    out = []
    for u, v in g.edges:
        out.append(u)
        out.append(v)
    return out


def darts_at(g: Multigraph) -> dict[int, list[int]]:
    at: dict[int, list[int]] = {v: [] for v in g.vertices}
    for d, v in enumerate(dart_vertices(g)):
        at[v].append(d)
    return at


@dataclass(frozen=True)
class OrderedUnion:
    """Edge-ordered union of two graphs on a shared vertex set.

    Multigraph sorts its edge multiset on construction, which would scramble
    the dart coloring convention (leading edges belong to the first graph),
    so the cross enumerations carry this thin view instead.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def colored_union(g: Multigraph, h: Multigraph) -> OrderedUnion:
    """Union with g's edges first, so dart d is a g-dart iff d // 2 < g.n_edges."""
    if g.vertices != h.vertices:
        raise VertexSetMismatch("union requires a shared vertex set")
    return OrderedUnion(g.vertices, g.edges + h.edges)


@dataclass(frozen=True)
class MatchingCollection:
    """A per-vertex partial matching of the darts of `graph`.

    For a union of two graphs, `n_g_edges` records how many leading edges
    belong to the first one, which defines the dart coloring.
    """

    graph: Multigraph | OrderedUnion
    mate: tuple[int, ...]
    n_g_edges: int | None = None

    @property
    def size(self) -> int:
        return sum(1 for d, m in enumerate(self.mate) if m > d)

    def pairs(self) -> list[tuple[int, int]]:
        return [(d, m) for d, m in enumerate(self.mate) if m > d]

    def is_perfect(self) -> bool:
        return all(m >= 0 for m in self.mate)

    def is_g_dart(self, d: int) -> bool:
        if self.n_g_edges is None:
            raise ValueError("matching has no two-graph coloring")
        return d // 2 < self.n_g_edges

    def per_vertex(self) -> dict[int, list[tuple[int, int]]]:
        dv = dart_vertices(self.graph)
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.graph.vertices}
        for a, b in self.pairs():
            out[dv[a]].append((a, b))
        return out

    def dump(self) -> str:
        """Human-readable per-vertex pairing listing for debugging."""
        dv = dart_vertices(self.graph)
        lines = []
        for v, prs in sorted(self.per_vertex().items()):
            if not prs:
                continue
            cell = ", ".join(
                f"e{a // 2}@{dv[a]}-e{b // 2}@{dv[b]}" for a, b in prs
            )
            lines.append(f"v{v}: {cell}")
        return "\n".join(lines) if lines else "(empty matching)"


# -- per-vertex pairing generators ---------------------------------------------


def _perfect_pairings(darts: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    if not darts:
        yield []
        return
    first, rest = darts[0], list(darts[1:])
    for i, other in enumerate(rest):
        for sub in _perfect_pairings(rest[:i] + rest[i + 1 :]):
            yield [(first, other)] + sub


def _partial_pairings(darts: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    if not darts:
        yield []
        return
    first, rest = darts[0], list(darts[1:])
    # first stays unmatched
    for sub in _partial_pairings(rest):
        yield sub
    for i, other in enumerate(rest):
        for sub in _partial_pairings(rest[:i] + rest[i + 1 :]):
            yield [(first, other)] + sub


def _cross_pairings(
    g_darts: Sequence[int], h_darts: Sequence[int]
) -> Iterator[list[tuple[int, int]]]:
    if len(g_darts) != len(h_darts):
        return
    for perm in itertools.permutations(h_darts):
        yield list(zip(g_darts, perm))


def _collect(g: Multigraph | OrderedUnion, per_vertex_choices, n_g_edges=None):
    n_darts = 2 * g.n_edges
    for combo in itertools.product(*per_vertex_choices):
        mate = [-1] * n_darts
        for pairs in combo:
            for a, b in pairs:
                mate[a] = b
                mate[b] = a
        yield MatchingCollection(g, tuple(mate), n_g_edges)


def enumerate_pm(g: Multigraph) -> Iterator[MatchingCollection]:
    """Perfect matching collections; empty unless every degree is even.

    There are prod_v (deg(v) - 1)!! of them.
    """
    at = darts_at(g)
    if any(len(ds) % 2 for ds in at.values()):
        return iter(())
    return _collect(g, [list(_perfect_pairings(at[v])) for v in g.vertices])


def enumerate_partial(g: Multigraph) -> Iterator[MatchingCollection]:
    """All partial matching collections (the routing sum's index set)."""
    at = darts_at(g)
    return _collect(g, [list(_partial_pairings(at[v])) for v in g.vertices])


def enumerate_pm_cross(g: Multigraph, h: Multigraph) -> Iterator[MatchingCollection]:
    """Perfect collections of the union pairing g-darts with h-darts only.

    Empty unless g and h are degree-equivalent; otherwise there are
    prod_v d(v)! of them.
    """
    union = colored_union(g, h)
    n_g = g.n_edges
    at = darts_at(union)
    choices = []
    for v in union.vertices:
        gs = [d for d in at[v] if d // 2 < n_g]
        hs = [d for d in at[v] if d // 2 >= n_g]
        choices.append(list(_cross_pairings(gs, hs)))
    return _collect(union, choices, n_g_edges=n_g)


def enumerate_pm_union(g: Multigraph, h: Multigraph) -> Iterator[MatchingCollection]:
    """All perfect collections of the union graph (unrestricted pairing)."""
    union = colored_union(g, h)
    at = darts_at(union)
    if any(len(ds) % 2 for ds in at.values()):
        return iter(())
    return _collect(
        union,
        [list(_perfect_pairings(at[v])) for v in union.vertices],
        n_g_edges=g.n_edges,
    )


# -- routing --------------------------------------------------------------------


@dataclass(frozen=True)
class CycleTrace:
    """Cyclic visit list of one closed walk: (vertex, in_dart, out_dart).

    in_dart/out_dart are the matched pair consumed at that visit.
    """

    visits: tuple[tuple[int, int, int], ...]

    def vertices(self) -> list[int]:
        return [v for v, _, _ in self.visits]


@dataclass(frozen=True)
class RoutingResult:
    routed: Multigraph
    cycles: int
    traces: tuple[CycleTrace, ...]


def route(m: MatchingCollection) -> RoutingResult:
    """Route a matching collection: open walks collapse to single edges,
    closed walks are removed and counted (with their traces kept)."""
    g = m.graph
    dv = dart_vertices(g)
    mate = m.mate
    n_darts = len(mate)
    visited = [False] * n_darts
    routed_edges = []
    # open walks start at unmatched darts
    for d0 in range(n_darts):
        if visited[d0] or mate[d0] >= 0:
            continue
        visited[d0] = True
        cur = d0
        while True:
            partner = cur ^ 1
            visited[partner] = True
            nxt = mate[partner]
            if nxt < 0:
                routed_edges.append((dv[d0], dv[partner]))
                break
            visited[nxt] = True
            cur = nxt
    traces = []
    cycles = 0
    for d0 in range(n_darts):
        if visited[d0]:
            continue
        visits = []
        cur = d0
        while True:
            visited[cur] = True
            partner = cur ^ 1
            visited[partner] = True
            nxt = mate[partner]
            visits.append((dv[partner], partner, nxt))
            cur = nxt
            if cur == d0:
                break
        cycles += 1
        traces.append(CycleTrace(tuple(visits)))
    return RoutingResult(
        Multigraph(g.vertices, routed_edges), cycles, tuple(traces)
    )


def count_cycles(m: MatchingCollection) -> int:
    return route(m).cycles


# -- two-coloring analysis: G-pairs, gloop, re-matching ---------------------------


def g_pair_counts(m: MatchingCollection) -> dict[int, int]:
    """Per-vertex count of matched pairs whose darts both come from g."""
    dv = dart_vertices(m.graph)
    out = {v: 0 for v in m.graph.vertices}
    for a, b in m.pairs():
        if m.is_g_dart(a) and m.is_g_dart(b):
            out[dv[a]] += 1
    return out


def _visits_by_vertex(traces: Sequence[CycleTrace]):
    """vertex -> list of (trace_index, position) over all cycle visits."""
    where: dict[int, list[tuple[int, int]]] = {}
    for t, trace in enumerate(traces):
        for pos, (v, _, _) in enumerate(trace.visits):
            where.setdefault(v, []).append((t, pos))
    return where


def gloop(m: MatchingCollection) -> frozenset[int]:
    """Vertices with both their matched pairs on one cycle whose induced
    matching (the pairing of their darts through the rest of that cycle)
    contains a g-pair."""
    if m.n_g_edges is None:
        raise ValueError("gloop needs a two-graph coloring")
    traces = route(m).traces
    where = _visits_by_vertex(traces)
    out = set()
    for v, spots in where.items():
        if len(spots) != 2 or spots[0][0] != spots[1][0]:
            continue
        trace = traces[spots[0][0]]
        _, a_in, a_out = trace.visits[spots[0][1]]
        _, b_in, b_out = trace.visits[spots[1][1]]
        # following the cycle, a_out reaches b_in and b_out reaches a_in
        first = m.is_g_dart(a_out) and m.is_g_dart(b_in)
        second = m.is_g_dart(b_out) and m.is_g_dart(a_in)
        if first or second:
            out.add(v)
    return frozenset(out)


def degree4_vertices(g: Multigraph, h: Multigraph) -> list[int]:
    """Vertices of shared degree 2 (union degree 4) for a max-degree-2 pair."""
    dg, dh = g.degree_map(), h.degree_map()
    if max(dg.values(), default=0) > 2 or max(dh.values(), default=0) > 2:
        raise SettingMismatch("degree-4 analysis needs max degree 2 in each graph")
    return [v for v in g.vertices if dg[v] == 2 and dh[v] == 2]


def rematch(m: MatchingCollection, s: Sequence[int]) -> MatchingCollection:
    """Replace the two mixed pairs at each vertex of s by the g-pair and the
    h-pair.  Requires a cross matching at those vertices."""
    dv = dart_vertices(m.graph)
    mate = list(m.mate)
    for v in s:
        darts = [d for d in range(len(mate)) if dv[d] == v and mate[d] >= 0]
        gs = [d for d in darts if m.is_g_dart(d)]
        hs = [d for d in darts if not m.is_g_dart(d)]
        if len(gs) != 2 or len(hs) != 2:
            raise ValueError(f"vertex {v} is not a crossed degree-4 vertex")
        for a, b in ((gs[0], gs[1]), (hs[0], hs[1])):
            mate[a] = b
            mate[b] = a
    return MatchingCollection(m.graph, tuple(mate), m.n_g_edges)


def is_dominant(m: MatchingCollection, s: Sequence[int]) -> bool:
    """Whether re-matching s gains one cycle per vertex (the maximum)."""
    return count_cycles(rematch(m, s)) == count_cycles(m) + len(s)


def is_noncrossing(m: MatchingCollection, s: Sequence[int]) -> bool:
    """s is non-crossing if each of its vertices is visited twice by a single
    cycle and no two visit chords of the same cycle interleave."""
    traces = route(m).traces
    where = _visits_by_vertex(traces)
    chords: dict[int, list[tuple[int, int]]] = {}
    for v in s:
        spots = where.get(v, [])
        if len(spots) != 2 or spots[0][0] != spots[1][0]:
            return False
        chords.setdefault(spots[0][0], []).append((spots[0][1], spots[1][1]))
    for pairs in chords.values():
        for (a1, a2), (b1, b2) in itertools.combinations(pairs, 2):
            if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
                return False
    return True


def s_coefficient(m: MatchingCollection) -> int:
    """sum over non-crossing subsets S of gloop(m) of (-1)^|S|."""
    gl = sorted(gloop(m))
    total = 0
    for r in range(len(gl) + 1):
        for s in itertools.combinations(gl, r):
            if is_noncrossing(m, s):
                total += (-1) ** r
    return total


# -- set partitions of hyperedge multisets (Boolean) ------------------------------


Partition = tuple[tuple[int, ...], ...]


def iter_partitions(n_items: int) -> Iterator[Partition]:
    """Set partitions of range(n_items) as sorted tuples of sorted tuples."""

    def rec(i: int, blocks: list[list[int]]) -> Iterator[Partition]:
        if i == n_items:
            yield tuple(sorted(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    return rec(0, [])


def discrete_partition(n_items: int) -> Partition:
    return tuple((i,) for i in range(n_items))


def refines(p: Partition, q: Partition) -> bool:
    """p <= q in the refinement order (every block of p inside one of q)."""
    owner = {}
    for bi, block in enumerate(q):
        for x in block:
            owner[x] = bi
    return all(len({owner[x] for x in block}) == 1 for block in p)


def block_incidences(edges: Sequence[Sequence[int]], block: Sequence[int]) -> dict[int, int]:
    inc: dict[int, int] = {}
    for i in block:
        for v in edges[i]:
            inc[v] = inc.get(v, 0) + 1
    return inc


def is_closed_block(edges: Sequence[Sequence[int]], block: Sequence[int]) -> bool:
    return all(c % 2 == 0 for c in block_incidences(edges, block).values())


def route_partition(
    g: EvenHypergraph, p: Partition
) -> tuple[EvenHypergraph, int]:
    """Route each block to the hyperedge of its odd-incidence vertices; closed
    blocks are deleted and counted as cycles."""
    routed = []
    cycles = 0
    for block in p:
        odd = sorted(
            v for v, c in block_incidences(g.edges, block).items() if c % 2
        )
        if odd:
            routed.append(odd)
        else:
            cycles += 1
    return EvenHypergraph(g.vertices, routed), cycles


def in_lambda_c(g: EvenHypergraph, p: Partition) -> bool:
    """Membership in the truncated partition poset: the discrete partition,
    or any partition with a block and a vertex sharing >= 2 edges."""
    if all(len(b) == 1 for b in p):
        return p == discrete_partition(g.n_edges)
    for block in p:
        if len(block) < 2:
            continue
        if any(c >= 2 for c in block_incidences(g.edges, block).values()):
            return True
    return False


def lambda_c_members(g: EvenHypergraph) -> list[Partition]:
    return [p for p in iter_partitions(g.n_edges) if in_lambda_c(g, p)]


def mobius_lambda_c(g: EvenHypergraph) -> dict[Partition, int]:
    """Moebius function mu(discrete, .) of the subposet Lambda^c ordered by
    refinement, computed by the defining recursion."""
    members = lambda_c_members(g)
    members.sort(key=lambda p: -len(p))  # finer partitions first
    mu: dict[Partition, int] = {}
    for p in members:
        below = [q for q in members if q != p and refines(q, p)]
        mu[p] = 1 if not below else -sum(mu[q] for q in below)
    return mu


def pm_bool(g: EvenHypergraph) -> list[Partition]:
    """Partitions with every block closed (the Boolean expectation's index set)."""
    return [
        p
        for p in iter_partitions(g.n_edges)
        if all(is_closed_block(g.edges, b) for b in p)
    ]


def pm_bool_cross(g: EvenHypergraph, h: EvenHypergraph) -> list[Partition]:
    """Partitions of the union where, inside every block, each vertex lies in
    as many g-edges as h-edges.  Indices 0..|E(g)|-1 are g's edges."""
    if g.vertices != h.vertices:
        raise VertexSetMismatch("cross partitions need a shared vertex set")
    union_edges = list(g.edges) + list(h.edges)
    n_g = g.n_edges
    out = []
    for p in iter_partitions(len(union_edges)):
        ok = True
        for block in p:
            bal: dict[int, int] = {}
            for i in block:
                delta = 1 if i < n_g else -1
                for v in union_edges[i]:
                    bal[v] = bal.get(v, 0) + delta
            if any(bal.values()):
                ok = False
                break
        if ok:
            out.append(p)
    return out


def is_simple_partition(
    edges: Sequence[Sequence[int]], p: Partition
) -> bool:
    """Every vertex appears at most twice inside every block."""
    return all(
        all(c <= 2 for c in block_incidences(edges, b).values()) for b in p
    )


# -- counting helpers --------------------------------------------------------------


@lru_cache(maxsize=None)
def double_factorial_odd(k: int) -> int:
    """(k-1)!! for even k: the number of perfect pairings of k darts."""
    out = 1
    while k > 1:
        out *= k - 1
        k -= 2
    return out
