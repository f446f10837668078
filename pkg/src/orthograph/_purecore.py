"""Pure-Python enumeration kernel.

Same interface as the compiled `_fastcore` extension; `orthograph.kernel`
picks whichever is available (or forced).  All functions take flat arrays:
dart_vertex[d] is the vertex index (0-based) holding dart d, where darts 2i
and 2i+1 belong to edge i, and dart_color[d] is 1 for a dart of the first
graph of a union and 0 otherwise.

Enumeration is organized per vertex: a perfect matching collection chooses a
perfect pairing of the darts at every vertex; the cross variant only pairs
darts of opposite colors.  Results are aggregated into small histograms so
the exact symbolic arithmetic upstream runs once per bucket, not once per
matching.
"""

from __future__ import annotations

IMPLEMENTATION = "pure-python"


def _darts_by_vertex(dart_vertex, nv):
    at = [[] for _ in range(nv)]
    for d, v in enumerate(dart_vertex):
        at[v].append(d)
    return at


def _perfect_pairings(darts):
    if not darts:
        return [[]]
    out = []
    first, rest = darts[0], darts[1:]
    for i, other in enumerate(rest):
        for sub in _perfect_pairings(rest[:i] + rest[i + 1 :]):
            out.append([(first, other)] + sub)
    return out


def _cross_pairings(darts, color):
    gs = [d for d in darts if color[d]]
    hs = [d for d in darts if not color[d]]
    if len(gs) != len(hs):
        return []
    if not gs:
        return [[]]
    out = []
    first, rest_g = gs[0], gs[1:]
    for i, other in enumerate(hs):
        for sub in _cross_pairings(rest_g + hs[:i] + hs[i + 1 :], color):
            out.append([(first, other)] + sub)
    return out


def _count_cycles(mate, dart_vertex):
    n = len(mate)
    visited = [False] * n
    cycles = 0
    simple = True
    for d0 in range(n):
        if visited[d0] or mate[d0] < 0:
            continue
        seen_vertices = set()
        repeats = False
        cur = d0
        while not visited[cur]:
            visited[cur] = True
            partner = cur ^ 1
            visited[partner] = True
            v = dart_vertex[partner]
            if v in seen_vertices:
                repeats = True
            seen_vertices.add(v)
            cur = mate[partner]
        cycles += 1
        if repeats:
            simple = False
    return cycles, simple


def _enumerate_collections(dart_vertex, nv, choice_lists, visit):
    n = len(dart_vertex)
    mate = [-1] * n

    def rec(vi):
        if vi == nv:
            visit(mate)
            return
        for pairing in choice_lists[vi]:
            for a, b in pairing:
                mate[a] = b
                mate[b] = a
            rec(vi + 1)
            for a, b in pairing:
                mate[a] = -1
                mate[b] = -1

    rec(0)


def pm_cycle_histogram(dart_vertex, nv):
    """All perfect matching collections: {cycles: count}.  Empty result when
    some vertex has odd degree."""
    at = _darts_by_vertex(dart_vertex, nv)
    if any(len(ds) % 2 for ds in at):
        return {}
    choices = [_perfect_pairings(ds) for ds in at]
    hist: dict[int, int] = {}

    def visit(mate):
        c, _ = _count_cycles(mate, dart_vertex)
        hist[c] = hist.get(c, 0) + 1

    _enumerate_collections(dart_vertex, nv, choices, visit)
    return hist


def pm_colored_histogram(dart_vertex, dart_color, nv):
    """All perfect matching collections of a colored union:
    {(cycles, g_counts tuple): count} where g_counts[v] is the number of
    pairs at v joining two color-1 darts."""
    at = _darts_by_vertex(dart_vertex, nv)
    if any(len(ds) % 2 for ds in at):
        return {}
    choices = [_perfect_pairings(ds) for ds in at]
    hist: dict[tuple, int] = {}

    def visit(mate):
        c, _ = _count_cycles(mate, dart_vertex)
        counts = [0] * nv
        for d, m in enumerate(mate):
            if m > d and dart_color[d] and dart_color[m]:
                counts[dart_vertex[d]] += 1
        key = (c, tuple(counts))
        hist[key] = hist.get(key, 0) + 1

    _enumerate_collections(dart_vertex, nv, choices, visit)
    return hist


def pm_cross_histogram(dart_vertex, dart_color, nv):
    """Cross-only perfect collections (every pair joins both colors):
    {(cycles, simple): count}, simple = 1 when no cycle revisits a vertex."""
    at = _darts_by_vertex(dart_vertex, nv)
    choices = [_cross_pairings(ds, dart_color) for ds in at]
    hist: dict[tuple, int] = {}

    def visit(mate):
        c, simple = _count_cycles(mate, dart_vertex)
        key = (c, 1 if simple else 0)
        hist[key] = hist.get(key, 0) + 1

    _enumerate_collections(dart_vertex, nv, choices, visit)
    return hist


def cross_rematch_table(dart_vertex, dart_color, nv, v4):
    """For each cross matching: (cycles, tuple over subset masks of v4 of the
    cycle count after re-matching that subset into same-color pairs).

    Mask bit i corresponds to v4[i]; mask 0 reproduces the base cycle count.
    """
    at = _darts_by_vertex(dart_vertex, nv)
    choices = [_cross_pairings(ds, dart_color) for ds in at]
    v4 = list(v4)
    v4_darts = []
    for v in v4:
        gs = [d for d in at[v] if dart_color[d]]
        hs = [d for d in at[v] if not dart_color[d]]
        if len(gs) != 2 or len(hs) != 2:
            raise ValueError(f"vertex index {v} is not a crossed degree-4 vertex")
        v4_darts.append((gs, hs))
    records = []

    def visit(mate):
        base, _ = _count_cycles(mate, dart_vertex)
        per_mask = []
        for mask in range(1 << len(v4)):
            work = list(mate)
            for i in range(len(v4)):
                if mask >> i & 1:
                    (g1, g2), (h1, h2) = v4_darts[i]
                    work[g1], work[g2] = g2, g1
                    work[h1], work[h2] = h2, h1
            c, _ = _count_cycles(work, dart_vertex)
            per_mask.append(c)
        records.append((base, tuple(per_mask)))

    _enumerate_collections(dart_vertex, nv, choices, visit)
    return records
