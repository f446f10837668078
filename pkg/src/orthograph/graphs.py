"""Multigraphs and even hypergraphs that index invariant monomials.

A monomial in pairwise inner products of vectors (d_v) is recorded as a
multigraph: the edge {u, v} stands for <d_u, d_v>, a self-loop at u for
<d_u, d_u>.  The Boolean setting generalizes edges to even-size hyperedges
{v1, ..., v2k} standing for sum_i d_{v1,i} ... d_{v2k,i}.

Graphs are immutable and canonically stored, so the labeled edge multiset is
the identity of a graph on a fixed vertex set.  A separate isomorphism key
(minimum of the labeled key over vertex relabelings) is used only to dedupe
enumerations; the polynomial algebra never quotients by isomorphism.

Settings and their shape rules:

  gaussian   -- i.i.d. standard normal vectors; self-loops allowed
  spherical  -- uniform on the unit sphere; loopless (<d,d> = 1 is trivial)
  boolean    -- uniform on the hypercube {-1,1}^n; even hypergraphs, no
                repeated vertex inside a hyperedge
"""

from __future__ import annotations

import itertools
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import BudgetError, SettingMismatch, VertexSetMismatch


class Setting(str, Enum):
    GAUSSIAN = "gaussian"
    SPHERICAL = "spherical"
    BOOLEAN = "boolean"


def _norm_vertices(vertices: Iterable[int]) -> tuple[int, ...]:
    vs = tuple(sorted(int(v) for v in vertices))
    if len(set(vs)) != len(vs):
        raise ValueError("repeated vertex label")
    return vs


class Multigraph:
    """Undirected multigraph on a fixed labeled vertex set.

    Edges are stored as a sorted tuple of (u, v) pairs with u <= v; parallel
    edges repeat, a self-loop is (u, u).
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]] = ()):
        vs = _norm_vertices(vertices)
        vset = set(vs)
        norm = []
        for e in edges:
            u, v = e
            if u not in vset or v not in vset:
                raise ValueError(f"edge {e!r} leaves the vertex set")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def __setattr__(self, name, value):
        raise AttributeError("Multigraph is immutable")

    # -- structure ----------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def degree_map(self) -> dict[int, int]:
        """Vertex -> degree; a self-loop contributes 2."""
        deg = {v: 0 for v in self.vertices}
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def support(self) -> tuple[int, ...]:
        """Vertices incident to at least one edge."""
        seen = set()
        for u, v in self.edges:
            seen.add(u)
            seen.add(v)
        return tuple(sorted(seen))

    def is_connected(self) -> bool:
        """Connectivity of the edge-support (isolated vertices ignored)."""
        sup = self.support()
        if len(sup) <= 1:
            return True
        adj: dict[int, set[int]] = {v: set() for v in sup}
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        seen = {sup[0]}
        stack = [sup[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(sup)

    def key(self) -> tuple:
        """Labeled canonical key: identity on a fixed vertex set."""
        return (self.vertices, self.edges)

    def relabel(self, mapping: dict[int, int]) -> "Multigraph":
        return Multigraph(
            [mapping[v] for v in self.vertices],
            [(mapping[u], mapping[v]) for u, v in self.edges],
        )

    def on_vertices(self, vertices: Iterable[int]) -> "Multigraph":
        """The same edges viewed on a larger vertex set."""
        return Multigraph(vertices, self.edges)

    def iso_key(self) -> tuple:
        """Minimum labeled key over all relabelings; equal iff isomorphic."""
        return _iso_key_parts(self.vertices, [self.edges])

    def simplified_adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def to_json(self, setting: Setting | None = None) -> dict:
        obj = {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}
        if setting is not None:
            obj["setting"] = Setting(setting).value
        return obj

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multigraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash(("Multigraph", self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Multigraph({list(self.vertices)}, {[list(e) for e in self.edges]})"


class EvenHypergraph:
    """Multiset of even-size hyperedges; no vertex repeats inside an edge."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]] = ()):
        vs = _norm_vertices(vertices)
        vset = set(vs)
        norm = []
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(set(t)) != len(t):
                raise SettingMismatch(f"hyperedge {e!r} repeats a vertex")
            if len(t) % 2 or len(t) < 2:
                raise SettingMismatch(f"hyperedge {e!r} must have even size >= 2")
            if any(v not in vset for v in t):
                raise ValueError(f"hyperedge {e!r} leaves the vertex set")
            norm.append(t)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def __setattr__(self, name, value):
        raise AttributeError("EvenHypergraph is immutable")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree_map(self) -> dict[int, int]:
        """Vertex -> number of hyperedges containing it."""
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def total_degree(self) -> int:
        """Polynomial degree in the vector entries: sum of hyperedge sizes."""
        return sum(len(e) for e in self.edges)

    def support(self) -> tuple[int, ...]:
        seen = set()
        for e in self.edges:
            seen.update(e)
        return tuple(sorted(seen))

    def is_connected(self) -> bool:
        sup = self.support()
        if len(sup) <= 1:
            return True
        parent = {v: v for v in sup}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            r = find(e[0])
            for v in e[1:]:
                parent[find(v)] = r
        return len({find(v) for v in sup}) == 1

    def key(self) -> tuple:
        return (self.vertices, self.edges)

    def relabel(self, mapping: dict[int, int]) -> "EvenHypergraph":
        return EvenHypergraph(
            [mapping[v] for v in self.vertices],
            [[mapping[v] for v in e] for e in self.edges],
        )

    def on_vertices(self, vertices: Iterable[int]) -> "EvenHypergraph":
        return EvenHypergraph(vertices, self.edges)

    def iso_key(self) -> tuple:
        return _iso_key_parts(self.vertices, [self.edges])

    def to_json(self, setting: Setting | None = None) -> dict:
        obj = {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}
        if setting is not None:
            obj["setting"] = Setting(setting).value
        return obj

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EvenHypergraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash(("EvenHypergraph", self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"EvenHypergraph({list(self.vertices)}, {[list(e) for e in self.edges]})"


Graph = Multigraph | EvenHypergraph


def graph_from_json(obj: dict, setting: Setting | None = None) -> tuple[Graph, Setting]:
    """Parse the graph JSON format; returns (graph, setting)."""
    s = Setting(obj.get("setting", setting))
    edges = obj["edges"]
    vertices = obj.get("vertices")
    if vertices is None:
        vertices = sorted({v for e in edges for v in e})
    if s is Setting.BOOLEAN:
        g: Graph = EvenHypergraph(vertices, edges)
    else:
        for e in edges:
            if len(e) != 2:
                raise SettingMismatch(f"edge {e!r}: non-boolean settings use pairs")
        g = Multigraph(vertices, edges)
    validate_for_setting(g, s)
    return g, s


def validate_for_setting(g: Graph, setting: Setting) -> None:
    """Check the shape rules of a setting; raises SettingMismatch."""
    setting = Setting(setting)
    if setting is Setting.BOOLEAN:
        if not isinstance(g, EvenHypergraph):
            raise SettingMismatch("boolean graphs are even hypergraphs")
        return
    if not isinstance(g, Multigraph):
        raise SettingMismatch(f"{setting.value} graphs are pairwise multigraphs")
    if setting is Setting.SPHERICAL and g.has_loops():
        raise SettingMismatch("spherical graphs are loopless (<d,d> = 1)")


def degree_equivalent(g: Graph, h: Graph) -> bool:
    """True when g and h have identical degree maps on the same vertex set."""
    if g.vertices != h.vertices:
        raise VertexSetMismatch(
            f"degree comparison across vertex sets {g.vertices} vs {h.vertices}"
        )
    return g.degree_map() == h.degree_map()


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Edge-multiset union on a shared vertex set."""
    if g.vertices != h.vertices:
        raise VertexSetMismatch("union requires a shared vertex set")
    if isinstance(g, Multigraph) != isinstance(h, Multigraph):
        raise SettingMismatch("cannot union a multigraph with a hypergraph")
    if isinstance(g, Multigraph):
        return Multigraph(g.vertices, g.edges + h.edges)
    return EvenHypergraph(g.vertices, g.edges + h.edges)


# -- isomorphism keys --------------------------------------------------------


def _vertex_invariants(vertices, edge_groups):
    """Stable per-vertex invariant used to cut the relabeling search."""
    inv = {v: [] for v in vertices}
    for gi, edges in enumerate(edge_groups):
        deg = {v: 0 for v in vertices}
        loops = {v: 0 for v in vertices}
        sizes = {v: [] for v in vertices}
        for e in edges:
            if len(e) == 2 and e[0] == e[1]:
                deg[e[0]] += 2
                loops[e[0]] += 1
            else:
                for v in e:
                    deg[v] += 1
                    sizes[v].append(len(e))
        for v in vertices:
            inv[v].append((deg[v], loops[v], tuple(sorted(sizes[v]))))
    return {v: tuple(t) for v, t in inv.items()}


def _iso_key_parts(vertices, edge_groups) -> tuple:
    """Minimum over relabelings of the tuple of sorted relabeled edge groups.

    Vertices are first bucketed by an invariant; only label assignments that
    respect the invariant order are searched.
    """
    vs = list(vertices)
    k = len(vs)
    inv = _vertex_invariants(vs, edge_groups)
    classes: dict[tuple, list[int]] = {}
    for v in vs:
        classes.setdefault(inv[v], []).append(v)
    ordered = [classes[key] for key in sorted(classes)]
    best = None
    for perm_parts in itertools.product(
        *[itertools.permutations(cls) for cls in ordered]
    ):
        mapping = {}
        label = 1
        for part in perm_parts:
            for v in part:
                mapping[v] = label
                label += 1
        cand = tuple(
            tuple(sorted(tuple(sorted(mapping[v] for v in e)) for e in edges))
            for edges in edge_groups
        )
        if best is None or cand < best:
            best = cand
    return (k,) + (best if best is not None else ())


def pair_iso_key(g: Graph, h: Graph, unordered: bool = False) -> tuple:
    """Joint isomorphism key of a colored pair on a shared vertex set.

    With unordered=True the key also quotients by swapping the two colors.
    """
    if g.vertices != h.vertices:
        raise VertexSetMismatch("pair key requires a shared vertex set")
    key_gh = _iso_key_parts(g.vertices, [g.edges, h.edges])
    if not unordered:
        return key_gh
    key_hg = _iso_key_parts(g.vertices, [h.edges, g.edges])
    return min(key_gh, key_hg)


def canonical_form(g: Graph) -> Graph:
    """Representative of g's isomorphism class: support relabeled to 1..k by
    the minimizing relabeling (isolated vertices dropped)."""
    sup = g.support()
    cls = type(g)
    if not sup:
        return cls(())
    trimmed = cls(sup, g.edges)
    key = trimmed.iso_key()
    edges = key[1] if len(key) > 1 else ()
    return cls(range(1, len(sup) + 1), edges)


# -- enumeration --------------------------------------------------------------


def _edge_types(setting: Setting, vertices: Sequence[int]) -> list[tuple]:
    setting = Setting(setting)
    if setting is Setting.BOOLEAN:
        out = []
        for size in range(2, len(vertices) + 1, 2):
            out.extend(itertools.combinations(vertices, size))
        return out
    pairs = [tuple(e) for e in itertools.combinations(vertices, 2)]
    if setting is Setting.GAUSSIAN:
        pairs += [(v, v) for v in vertices]
    return sorted(pairs)


def enumerate_graphs(
    setting: Setting,
    max_vertices: int,
    max_edges: int,
    connected: bool | None = None,
    enumeration_cap: int = 2_000_000,
) -> list[Graph]:
    """All isomorphism classes with at most max_edges edges whose support fits
    in max_vertices vertices, as canonical representatives on 1..k.

    connected=True keeps only connected supports; None keeps everything
    (including the empty graph).  Deterministic order: (edge count, iso key).
    """
    setting = Setting(setting)
    vertices = list(range(1, max_vertices + 1))
    types = _edge_types(setting, vertices)
    cls = EvenHypergraph if setting is Setting.BOOLEAN else Multigraph
    total = sum(
        _multiset_count(len(types), m) for m in range(0, max_edges + 1)
    )
    if total > enumeration_cap:
        raise BudgetError(
            f"enumeration of {total} edge multisets exceeds cap {enumeration_cap}"
        )
    seen = {}
    for m in range(0, max_edges + 1):
        for combo in itertools.combinations_with_replacement(types, m):
            g = cls(vertices, combo)
            if connected and not g.is_connected():
                continue
            rep = canonical_form(g)
            seen.setdefault((rep.n_edges,) + rep.iso_key(), rep)
    return [seen[k] for k in sorted(seen)]


def _multiset_count(kinds: int, size: int) -> int:
    import math

    if size == 0:
        return 1
    return math.comb(kinds + size - 1, size)


# -- planarity and K5 minors ---------------------------------------------------


def is_planar(g: Multigraph, max_vertices: int = 64) -> bool:
    """Planarity of the underlying simple graph (loops and multiplicities are
    irrelevant to planarity)."""
    if len(g.vertices) > max_vertices:
        raise BudgetError(f"planarity test beyond {max_vertices} vertices")
    import networkx as nx

    simple = nx.Graph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from((u, v) for u, v in g.edges if u != v)
    ok, _ = nx.check_planarity(simple)
    return ok


def has_k5_minor(g: Multigraph) -> bool:
    """Whether the underlying simple graph has a K5 minor.

    Delete/contract search with memoization; intended for the small unions
    this package enumerates (a few dozen edges at most).
    """
    adj = {v: set(ns) for v, ns in g.simplified_adjacency().items()}
    return _k5_minor_search(adj, {})


def _k5_minor_search(adj: dict[int, set[int]], memo: dict) -> bool:
    live = {v: ns for v, ns in adj.items() if ns}
    if len(live) < 5:
        return False
    m = sum(len(ns) for ns in live.values()) // 2
    if m < 10:
        return False
    if _has_k5_subgraph(live):
        return True
    key = _adj_key(live)
    if key in memo:
        return memo[key]
    u = min(live, key=lambda v: (len(live[v]), v))
    result = False
    for w in sorted(live[u]):
        contracted = _contract(live, u, w)
        if _k5_minor_search(contracted, memo):
            result = True
            break
    if not result:
        deleted = {v: set(ns) for v, ns in live.items()}
        for w in deleted[u]:
            deleted[w].discard(u)
        del deleted[u]
        result = _k5_minor_search(deleted, memo)
    memo[key] = result
    return result


def _has_k5_subgraph(adj: dict[int, set[int]]) -> bool:
    cands = [v for v, ns in adj.items() if len(ns) >= 4]
    for combo in itertools.combinations(sorted(cands), 5):
        if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def _contract(adj: dict[int, set[int]], u: int, w: int) -> dict[int, set[int]]:
    out = {v: set(ns) for v, ns in adj.items() if v not in (u, w)}
    merged = (adj[u] | adj[w]) - {u, w}
    for v in out:
        out[v].discard(u)
        out[v].discard(w)
        if v in merged:
            out[v].add(u)
    out[u] = merged
    return out


def _adj_key(adj: dict[int, set[int]]) -> tuple:
    vs = sorted(adj)
    edges = tuple(
        sorted((min(u, v), max(u, v)) for u in vs for v in adj[u] if u < v)
    )
    return _iso_key_parts(vs, [edges])
