# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel.

Mirrors the interface and semantics of `orthograph._purecore` (the reference
implementation); see that module for the contract.  Per-vertex pairing
choices are precomputed as flat int arrays and the product recursion, cycle
counting, and histogram keys all run on C ints.
"""

from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython"


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
        for sub in _perfect_pairings(rest[:i] + rest[i + 1:]):
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
        for sub in _cross_pairings(rest_g + hs[:i] + hs[i + 1:], color):
            out.append([(first, other)] + sub)
    return out


cdef struct ChoiceTable:
    int nv
    int n_darts
    int *n_choices      # per vertex
    int *pairs_per      # per vertex: pairs per choice
    int **flat          # per vertex: choices concatenated as a,b,a,b,...


cdef ChoiceTable *_build_table(object choice_lists, int nv, int n_darts) except NULL:
    cdef ChoiceTable *t = <ChoiceTable *> malloc(sizeof(ChoiceTable))
    t.nv = nv
    t.n_darts = n_darts
    t.n_choices = <int *> malloc(nv * sizeof(int))
    t.pairs_per = <int *> malloc(nv * sizeof(int))
    t.flat = <int **> malloc(nv * sizeof(int *))
    cdef int vi, j, k
    for vi in range(nv):
        choices = choice_lists[vi]
        t.n_choices[vi] = len(choices)
        t.pairs_per[vi] = len(choices[0]) if choices else 0
        size = max(1, t.n_choices[vi] * t.pairs_per[vi] * 2)
        t.flat[vi] = <int *> malloc(size * sizeof(int))
        k = 0
        for choice in choices:
            for a, b in choice:
                t.flat[vi][k] = a
                t.flat[vi][k + 1] = b
                k += 2
    return t


cdef void _free_table(ChoiceTable *t):
    cdef int vi
    for vi in range(t.nv):
        free(t.flat[vi])
    free(t.flat)
    free(t.pairs_per)
    free(t.n_choices)
    free(t)


cdef int _count_cycles_c(int *mate, int *dv, char *visited, char *seen, int n,
                         int nv, int *simple_out):
    cdef int cycles = 0, d0, cur, partner, v, i
    cdef int simple = 1, repeats
    for i in range(n):
        visited[i] = 0
    for d0 in range(n):
        if visited[d0] or mate[d0] < 0:
            continue
        for i in range(nv):
            seen[i] = 0
        repeats = 0
        cur = d0
        while not visited[cur]:
            visited[cur] = 1
            partner = cur ^ 1
            visited[partner] = 1
            v = dv[partner]
            if seen[v]:
                repeats = 1
            seen[v] = 1
            cur = mate[partner]
        cycles += 1
        if repeats:
            simple = 0
    simple_out[0] = simple
    return cycles


ctypedef void (*leaf_fn)(void *ctx, int *mate) noexcept

cdef void _recurse(ChoiceTable *t, int *mate, int vi, void *ctx, leaf_fn leaf) noexcept:
    cdef int j, k, a, b, base
    cdef int *row
    if vi == t.nv:
        leaf(ctx, mate)
        return
    row = t.flat[vi]
    for j in range(t.n_choices[vi]):
        base = j * t.pairs_per[vi] * 2
        for k in range(t.pairs_per[vi]):
            a = row[base + 2 * k]
            b = row[base + 2 * k + 1]
            mate[a] = b
            mate[b] = a
        _recurse(t, mate, vi + 1, ctx, leaf)
        for k in range(t.pairs_per[vi]):
            a = row[base + 2 * k]
            b = row[base + 2 * k + 1]
            mate[a] = -1
            mate[b] = -1


cdef struct HistCtx:
    int *dv
    int *color
    char *visited
    char *seen
    int n
    int nv
    int mode              # 0: cycles only, 1: colored, 2: cross simple flag
    void *hist            # borrowed PyObject* (dict)


cdef void _hist_leaf(void *ctxp, int *mate) noexcept:
    cdef HistCtx *ctx = <HistCtx *> ctxp
    cdef int simple = 1
    cdef int cycles = _count_cycles_c(mate, ctx.dv, ctx.visited, ctx.seen,
                                      ctx.n, ctx.nv, &simple)
    cdef int d
    cdef long key
    hist = <dict> ctx.hist
    if ctx.mode == 1:
        counts = [0] * ctx.nv
        for d in range(ctx.n):
            if mate[d] > d and ctx.color[d] and ctx.color[mate[d]]:
                counts[ctx.dv[d]] += 1
        tkey = (cycles, tuple(counts))
        hist[tkey] = hist.get(tkey, 0) + 1
    else:
        key = cycles * 2 + simple if ctx.mode == 2 else cycles
        hist[key] = hist.get(key, 0) + 1


cdef class _Workspace:
    cdef int *dv
    cdef int *color
    cdef int *mate
    cdef char *visited
    cdef char *seen
    cdef int n
    cdef int nv

    def __cinit__(self, dart_vertex, dart_color, int nv):
        cdef int n = len(dart_vertex)
        self.n = n
        self.nv = nv
        self.dv = <int *> malloc(max(1, n) * sizeof(int))
        self.color = <int *> malloc(max(1, n) * sizeof(int))
        self.mate = <int *> malloc(max(1, n) * sizeof(int))
        self.visited = <char *> malloc(max(1, n) * sizeof(char))
        self.seen = <char *> malloc(max(1, nv) * sizeof(char))
        cdef int i
        for i in range(n):
            self.dv[i] = dart_vertex[i]
            self.color[i] = dart_color[i] if dart_color is not None else 0
            self.mate[i] = -1

    def __dealloc__(self):
        free(self.dv)
        free(self.color)
        free(self.mate)
        free(self.visited)
        free(self.seen)


def _run_histogram(dart_vertex, dart_color, int nv, choice_lists, int mode):
    cdef _Workspace ws = _Workspace(dart_vertex, dart_color, nv)
    cdef ChoiceTable *t = _build_table(choice_lists, nv, ws.n)
    hist = {}
    cdef HistCtx ctx
    ctx.dv = ws.dv
    ctx.color = ws.color
    ctx.visited = ws.visited
    ctx.seen = ws.seen
    ctx.n = ws.n
    ctx.nv = ws.nv
    ctx.mode = mode
    ctx.hist = <void *> hist
    try:
        _recurse(t, ws.mate, 0, <void *> &ctx, _hist_leaf)
    finally:
        _free_table(t)
    return hist


def pm_cycle_histogram(dart_vertex, nv):
    """All perfect matching collections: {cycles: count}."""
    at = _darts_by_vertex(dart_vertex, nv)
    if any(len(ds) % 2 for ds in at):
        return {}
    choices = [_perfect_pairings(ds) for ds in at]
    return _run_histogram(dart_vertex, None, nv, choices, 0)


def pm_colored_histogram(dart_vertex, dart_color, nv):
    """All perfect matching collections of a colored union:
    {(cycles, g_counts tuple): count}."""
    at = _darts_by_vertex(dart_vertex, nv)
    if any(len(ds) % 2 for ds in at):
        return {}
    choices = [_perfect_pairings(ds) for ds in at]
    return _run_histogram(dart_vertex, dart_color, nv, choices, 1)


def pm_cross_histogram(dart_vertex, dart_color, nv):
    """Cross-only perfect collections: {(cycles, simple): count}."""
    at = _darts_by_vertex(dart_vertex, nv)
    choices = [_cross_pairings(ds, dart_color) for ds in at]
    packed = _run_histogram(dart_vertex, dart_color, nv, choices, 2)
    return {(k // 2, k % 2): c for k, c in packed.items()}


cdef struct _RematchCtx:
    int *dv
    char *visited
    char *seen
    int n
    int nv
    int nv4
    int v4_darts[64]
    int *work
    void *records


cdef void _rematch_leaf(void *ctxp, int *mate) noexcept:
    cdef _RematchCtx *ctx = <_RematchCtx *> ctxp
    cdef int simple
    cdef int base = _count_cycles_c(mate, ctx.dv, ctx.visited, ctx.seen,
                                    ctx.n, ctx.nv, &simple)
    cdef int mask, i, g1, g2, h1, h2, c
    per_mask = []
    for mask in range(1 << ctx.nv4):
        for i in range(ctx.n):
            ctx.work[i] = mate[i]
        for i in range(ctx.nv4):
            if mask >> i & 1:
                g1 = ctx.v4_darts[4 * i + 0]
                g2 = ctx.v4_darts[4 * i + 1]
                h1 = ctx.v4_darts[4 * i + 2]
                h2 = ctx.v4_darts[4 * i + 3]
                ctx.work[g1] = g2
                ctx.work[g2] = g1
                ctx.work[h1] = h2
                ctx.work[h2] = h1
        c = _count_cycles_c(ctx.work, ctx.dv, ctx.visited, ctx.seen,
                            ctx.n, ctx.nv, &simple)
        per_mask.append(c)
    records = <list> ctx.records
    records.append((base, tuple(per_mask)))


def cross_rematch_table(dart_vertex, dart_color, nv, v4):
    """Per cross matching: (cycles, tuple over v4 subset masks of cycles after
    re-matching the subset)."""
    at = _darts_by_vertex(dart_vertex, nv)
    choices = [_cross_pairings(ds, dart_color) for ds in at]
    v4 = list(v4)
    if len(v4) > 16:
        raise ValueError("at most 16 rematch vertices supported")
    v4_darts = []
    for v in v4:
        gs = [d for d in at[v] if dart_color[d]]
        hs = [d for d in at[v] if not dart_color[d]]
        if len(gs) != 2 or len(hs) != 2:
            raise ValueError(f"vertex index {v} is not a crossed degree-4 vertex")
        v4_darts.append((gs, hs))

    cdef _Workspace ws = _Workspace(dart_vertex, dart_color, nv)
    cdef ChoiceTable *t = _build_table(choices, nv, ws.n)
    cdef int nv4 = len(v4)
    cdef int flat_v4[64]
    cdef int i
    for i in range(nv4):
        flat_v4[4 * i + 0] = v4_darts[i][0][0]
        flat_v4[4 * i + 1] = v4_darts[i][0][1]
        flat_v4[4 * i + 2] = v4_darts[i][1][0]
        flat_v4[4 * i + 3] = v4_darts[i][1][1]

    records = []
    cdef _RematchCtx ctx
    ctx.dv = ws.dv
    ctx.visited = ws.visited
    ctx.seen = ws.seen
    ctx.n = ws.n
    ctx.nv = ws.nv
    ctx.nv4 = nv4
    for i in range(4 * nv4):
        ctx.v4_darts[i] = flat_v4[i]
    ctx.work = <int *> malloc(max(1, ws.n) * sizeof(int))
    ctx.records = <void *> records
    try:
        _recurse(t, ws.mate, 0, <void *> &ctx, _rematch_leaf)
    finally:
        free(ctx.work)
        _free_table(t)
    return records
