"""Graph-indexed invariant polynomials and their expectation calculus.

An InvariantPoly is a linear combination of monomials m_K, where K is a
labeled (multi)graph or even hypergraph on a fixed vertex set and m_K is the
product of inner-product variables x_e over the edges of K.  Coefficients are
exact rational functions of the ambient dimension n.

The module provides the three pillars of the construction:

* expectation: E[m_K] via perfect matching collections (Gaussian), the same
  sum with per-vertex rising-factorial weights (spherical), or closed
  partitions (Boolean);
* orthopoly: the monic degree-orthogonal family p_G, built by routing
  partial matchings (Gaussian, spherical) or by Moebius inversion over a
  truncated partition poset (Boolean);
* inner_product: closed-form E[p_G p_H] per setting, plus the degree-4
  rematching variant and the matching-level coefficient c_M used in the
  cancellation analysis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from . import kernel, matchings
from .errors import BudgetError, SettingMismatch, VertexSetMismatch
from .graphs import (
    EvenHypergraph,
    Graph,
    Multigraph,
    Setting,
    degree_equivalent,
)
from .symnum import (
    N,
    ONE,
    ZERO,
    IntPolyN,
    RatFuncN,
    fall1,
    fall2,
    format_ratfunc,
    rise2,
)

PER_GRAPH_EDGE_BUDGET = 5
UNION_EDGE_BUDGET = 10

EdgesKey = tuple[tuple[int, ...], ...]

CoeffLike = Union[RatFuncN, IntPolyN, Fraction, int]


def _coeff(value: CoeffLike) -> RatFuncN:
    if isinstance(value, RatFuncN):
        return value
    if isinstance(value, Fraction):
        return RatFuncN.from_fraction(value)
    return RatFuncN(value)


def _check_edge_budget(n_edges: int, budget: int | None, what: str) -> None:
    limit = PER_GRAPH_EDGE_BUDGET if budget is None else budget
    if n_edges > limit:
        raise BudgetError(
            f"{what} has {n_edges} edges, over the budget of {limit}; "
            "pass a larger budget explicitly to proceed"
        )


def _check_union_budget(n_edges: int, budget: int | None, what: str) -> None:
    limit = UNION_EDGE_BUDGET if budget is None else budget
    if n_edges > limit:
        raise BudgetError(
            f"{what} has {n_edges} edges, over the budget of {limit}; "
            "pass a larger budget explicitly to proceed"
        )


def _edges_key(edges: Iterable[Sequence[int]]) -> EdgesKey:
    return tuple(sorted(tuple(e) for e in edges))


def _validate_term_edges(setting: Setting, vertices: tuple[int, ...],
                         edges: EdgesKey) -> None:
    vset = set(vertices)
    for e in edges:
        if any(v not in vset for v in e):
            raise VertexSetMismatch(f"edge {e} leaves the vertex set")
        if setting is Setting.BOOLEAN:
            if len(e) % 2 or len(set(e)) != len(e):
                raise SettingMismatch(
                    f"boolean terms need even hyperedges without repeats, got {e}"
                )
        else:
            if len(e) != 2:
                raise SettingMismatch(f"{setting.value} terms need pair edges, got {e}")
            if setting is Setting.SPHERICAL and e[0] == e[1]:
                raise SettingMismatch("spherical terms cannot contain self-loops")


class InvariantPoly:
    """Linear combination of graph monomials with RatFuncN coefficients."""

    __slots__ = ("setting", "vertices", "terms")

    def __init__(self, setting: Setting, vertices: Sequence[int],
                 terms: Mapping[EdgesKey, CoeffLike] | None = None):
        setting = Setting(setting)
        vertices = tuple(sorted(vertices))
        clean: dict[EdgesKey, RatFuncN] = {}
        for key, value in (terms or {}).items():
            key = _edges_key(key)
            c = _coeff(value)
            if c.is_zero():
                continue
            _validate_term_edges(setting, vertices, key)
            acc = clean.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = c
        object.__setattr__(self, "setting", setting)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("InvariantPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, setting: Setting, vertices: Sequence[int]) -> "InvariantPoly":
        return cls(setting, vertices, {})

    @classmethod
    def constant(cls, setting: Setting, vertices: Sequence[int],
                 value: CoeffLike) -> "InvariantPoly":
        return cls(setting, vertices, {(): _coeff(value)})

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, edges: Iterable[Sequence[int]]) -> RatFuncN:
        return self.terms.get(_edges_key(edges), ZERO)

    def term_degree(self, key: EdgesKey) -> int:
        """Polynomial degree of m_key in the underlying vector entries."""
        if self.setting is Setting.BOOLEAN:
            return sum(len(e) for e in key)
        return 2 * len(key)

    @property
    def degree(self) -> int:
        return max((self.term_degree(k) for k in self.terms), default=0)

    def graphs(self) -> list[Graph]:
        out: list[Graph] = []
        for key in sorted(self.terms):
            if self.setting is Setting.BOOLEAN:
                out.append(EvenHypergraph(self.vertices, key))
            else:
                out.append(Multigraph(self.vertices, key))
        return out

    def coeffs_at(self, n0: Union[int, Fraction]) -> dict[EdgesKey, Fraction]:
        """Evaluate every coefficient at a concrete dimension."""
        out = {}
        for key, c in self.terms.items():
            v = c.eval_at(n0)
            if v:
                out[key] = v
        return out

    # -- algebra -------------------------------------------------------------

    def _require_compatible(self, other: "InvariantPoly") -> None:
        if self.setting is not other.setting:
            raise SettingMismatch(
                f"cannot combine {self.setting.value} and {other.setting.value} polynomials"
            )
        if self.vertices != other.vertices:
            raise VertexSetMismatch("polynomials live on different vertex sets")

    def __add__(self, other: "InvariantPoly") -> "InvariantPoly":
        self._require_compatible(other)
        merged = dict(self.terms)
        for key, c in other.terms.items():
            acc = merged.get(key)
            total = c if acc is None else acc + c
            if total.is_zero():
                merged.pop(key, None)
            else:
                merged[key] = total
        return InvariantPoly(self.setting, self.vertices, merged)

    def __neg__(self) -> "InvariantPoly":
        return self.scale(-1)

    def __sub__(self, other: "InvariantPoly") -> "InvariantPoly":
        return self + (-other)

    def scale(self, value: CoeffLike) -> "InvariantPoly":
        c = _coeff(value)
        if c.is_zero():
            return InvariantPoly.zero(self.setting, self.vertices)
        return InvariantPoly(
            self.setting, self.vertices,
            {key: coeff * c for key, coeff in self.terms.items()},
        )

    def __mul__(self, other: "InvariantPoly") -> "InvariantPoly":
        self._require_compatible(other)
        out: dict[EdgesKey, RatFuncN] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = _edges_key(k1 + k2)
                c = c1 * c2
                acc = out.get(key)
                total = c if acc is None else acc + c
                if total.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = total
        return InvariantPoly(self.setting, self.vertices, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvariantPoly):
            return NotImplemented
        return (self.setting is other.setting and self.vertices == other.vertices
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.setting, self.vertices, frozenset(self.terms.items())))

    # -- rendering -----------------------------------------------------------

    @staticmethod
    def _edge_symbol(edge: tuple[int, ...], power: int, latex: bool) -> str:
        if all(0 <= v <= 9 for v in edge):
            inside = "".join(str(v) for v in edge)
        else:
            inside = ",".join(str(v) for v in edge)
        if latex:
            sym = f"x_{{{inside}}}"
            return sym if power == 1 else f"{sym}^{{{power}}}"
        sym = f"x{inside}"
        return sym if power == 1 else f"{sym}^{power}"

    def _term_str(self, key: EdgesKey, latex: bool) -> str:
        groups: list[tuple[tuple[int, ...], int]] = []
        for edge in key:
            if groups and groups[-1][0] == edge:
                groups[-1] = (edge, groups[-1][1] + 1)
            else:
                groups.append((edge, 1))
        sep = " " if latex else "*"
        return sep.join(self._edge_symbol(e, p, latex) for e, p in groups)

    def to_text(self, latex: bool = False) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (-self.term_degree(k), k))
        parts: list[str] = []
        for key in keys:
            c = self.terms[key]
            body = self._term_str(key, latex)
            neg = c.num.leading() < 0
            cs = format_ratfunc(-c if neg else c, latex=latex)
            if not key:
                piece = cs
            elif cs == "1":
                piece = body
            else:
                if " " in cs and not cs.startswith("\\frac"):
                    cs = f"({cs})" if not latex else f"\\left({cs}\\right)"
                piece = f"{cs} {body}" if latex else f"{cs}*{body}"
            if not parts:
                parts.append(piece if not neg else "-" + piece)
            else:
                parts.append(("- " if neg else "+ ") + piece)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"InvariantPoly({self.setting.value}, {self.to_text()})"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        keys = sorted(self.terms, key=lambda k: (-self.term_degree(k), k))
        return {
            "setting": self.setting.value,
            "vertices": list(self.vertices),
            "terms": [
                {"graph": [list(e) for e in key], "coeff": self.terms[key].to_json()}
                for key in keys
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantPoly":
        setting = Setting(obj["setting"])
        vertices = [int(v) for v in obj["vertices"]]
        terms: dict[EdgesKey, RatFuncN] = {}
        for item in obj["terms"]:
            key = _edges_key(tuple(int(v) for v in e) for e in item["graph"])
            c = RatFuncN.from_json(item["coeff"])
            terms[key] = terms.get(key, ZERO) + c
        return cls(setting, vertices, terms)


def monomial(setting: Setting, g: Graph) -> InvariantPoly:
    """The monomial m_g: product of x_e over the edges of g."""
    setting = Setting(setting)
    if setting is Setting.BOOLEAN and not isinstance(g, EvenHypergraph):
        raise SettingMismatch("boolean monomials need an even hypergraph")
    if setting is not Setting.BOOLEAN and isinstance(g, EvenHypergraph):
        raise SettingMismatch(f"{setting.value} monomials need a multigraph")
    return InvariantPoly(setting, g.vertices, {g.edges: ONE})


def multiply(p: InvariantPoly, q: InvariantPoly) -> InvariantPoly:
    return p * q


# -- expectations ------------------------------------------------------------


def _dart_arrays(vertices: Sequence[int], edge_list: Sequence[Sequence[int]]):
    index = {v: i for i, v in enumerate(vertices)}
    dart_vertex: list[int] = []
    for e in edge_list:
        u, v = e
        dart_vertex.append(index[u])
        dart_vertex.append(index[v])
    return dart_vertex, len(vertices)


def _gaussian_monomial_expectation(vertices: Sequence[int],
                                   edges: EdgesKey) -> RatFuncN:
    dart_vertex, nv = _dart_arrays(vertices, edges)
    hist = kernel.pm_cycle_histogram(dart_vertex, nv)
    coeffs = [0] * (max(hist, default=0) + 1)
    for cycles, count in hist.items():
        coeffs[cycles] += count
    return RatFuncN(IntPolyN(coeffs))


def _spherical_monomial_expectation(vertices: Sequence[int],
                                    edges: EdgesKey) -> RatFuncN:
    degree: dict[int, int] = {}
    for u, v in edges:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    if any(d % 2 for d in degree.values()):
        return ZERO
    dart_vertex, nv = _dart_arrays(vertices, edges)
    hist = kernel.pm_cycle_histogram(dart_vertex, nv)
    if not hist:
        return ZERO
    coeffs = [0] * (max(hist) + 1)
    for cycles, count in hist.items():
        coeffs[cycles] += count
    total = RatFuncN(IntPolyN(coeffs))
    for d in degree.values():
        total = total * rise2(N, -(d // 2))
    return total


def _boolean_monomial_expectation(vertices: Sequence[int],
                                  edges: EdgesKey) -> RatFuncN:
    g = EvenHypergraph(vertices, edges)
    total = ZERO
    for p in matchings.pm_bool(g):
        total = total + fall1(N, len(p))
    return total


def expectation_monomial(setting: Setting, vertices: Sequence[int],
                         edges: Iterable[Sequence[int]],
                         budget: int | None = None) -> RatFuncN:
    """E[m_K] for a single graph monomial."""
    setting = Setting(setting)
    key = _edges_key(edges)
    _check_union_budget(len(key), budget, "expectation monomial")
    if setting is Setting.GAUSSIAN:
        return _gaussian_monomial_expectation(vertices, key)
    if setting is Setting.SPHERICAL:
        return _spherical_monomial_expectation(vertices, key)
    return _boolean_monomial_expectation(vertices, key)


def expectation(p: InvariantPoly, budget: int | None = None) -> RatFuncN:
    """E[p], linear over the terms of p."""
    total = ZERO
    for key, c in p.terms.items():
        value = expectation_monomial(p.setting, p.vertices, key, budget=budget)
        if not value.is_zero():
            total = total + c * value
    return total


# -- orthogonal family -------------------------------------------------------


def _erase_loops(edges: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    return tuple(e for e in edges if e[0] != e[1])


def _routing_orthopoly(g: Multigraph, spherical: bool) -> InvariantPoly:
    setting = Setting.SPHERICAL if spherical else Setting.GAUSSIAN
    degree = g.degree_map()
    terms: dict[EdgesKey, RatFuncN] = {}
    for m in matchings.enumerate_partial(g):
        routing = matchings.route(m)
        coeff = RatFuncN(IntPolyN([0] * routing.cycles + [1]))  # n^cycles
        if m.size % 2:
            coeff = -coeff
        key = routing.routed.edges
        if spherical:
            per_vertex = m.per_vertex()
            for v, pairs in per_vertex.items():
                if pairs:
                    coeff = coeff * fall2(N + 2 * degree[v] - 4, -len(pairs))
            key = _erase_loops(key)
        acc = terms.get(key)
        total = coeff if acc is None else acc + coeff
        if total.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = total
    return InvariantPoly(setting, g.vertices, terms)


def _boolean_orthopoly(g: EvenHypergraph) -> InvariantPoly:
    mu = matchings.mobius_lambda_c(g)
    terms: dict[EdgesKey, RatFuncN] = {}
    for partition, mu_value in mu.items():
        if mu_value == 0:
            continue
        routed, cycles = matchings.route_partition(g, partition)
        coeff = RatFuncN(IntPolyN([0] * cycles + [mu_value]))  # mu * n^cycles
        key = routed.edges
        acc = terms.get(key)
        total = coeff if acc is None else acc + coeff
        if total.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = total
    return InvariantPoly(Setting.BOOLEAN, g.vertices, terms)


def orthopoly(setting: Setting, g: Graph, budget: int | None = None) -> InvariantPoly:
    """The monic degree-orthogonal polynomial p_g."""
    setting = Setting(setting)
    _check_edge_budget(g.n_edges, budget, "orthopoly input")
    if setting is Setting.BOOLEAN:
        if not isinstance(g, EvenHypergraph):
            raise SettingMismatch("boolean orthopoly needs an even hypergraph")
        return _boolean_orthopoly(g)
    if isinstance(g, EvenHypergraph):
        raise SettingMismatch(f"{setting.value} orthopoly needs a multigraph")
    if setting is Setting.SPHERICAL and g.has_loops():
        raise SettingMismatch("spherical graphs cannot contain self-loops")
    return _routing_orthopoly(g, spherical=(setting is Setting.SPHERICAL))


# -- inner products ----------------------------------------------------------


def _union_dart_arrays(g: Graph, h: Graph):
    vertices = g.vertices
    edge_list = list(g.edges) + list(h.edges)
    dart_vertex, nv = _dart_arrays(vertices, edge_list)
    dart_color = []
    for i in range(len(edge_list)):
        color = 1 if i < g.n_edges else 0
        dart_color.extend((color, color))
    return dart_vertex, dart_color, nv


def _require_pair(setting: Setting, g: Graph, h: Graph) -> None:
    if g.vertices != h.vertices:
        raise VertexSetMismatch("inner products need a shared vertex set")
    if setting is Setting.BOOLEAN:
        if not (isinstance(g, EvenHypergraph) and isinstance(h, EvenHypergraph)):
            raise SettingMismatch("boolean inner products need even hypergraphs")
    else:
        if isinstance(g, EvenHypergraph) or isinstance(h, EvenHypergraph):
            raise SettingMismatch(f"{setting.value} inner products need multigraphs")
        if setting is Setting.SPHERICAL and (g.has_loops() or h.has_loops()):
            raise SettingMismatch("spherical graphs cannot contain self-loops")


def _gaussian_inner_product(g: Multigraph, h: Multigraph) -> RatFuncN:
    dart_vertex, dart_color, nv = _union_dart_arrays(g, h)
    hist = kernel.pm_cross_histogram(dart_vertex, dart_color, nv)
    coeffs = [0] * (max((c for c, _ in hist), default=0) + 1)
    for (cycles, _simple), count in hist.items():
        coeffs[cycles] += count
    return RatFuncN(IntPolyN(coeffs))


def _spherical_prefactor(degree: Mapping[int, int]) -> RatFuncN:
    out = ONE
    for d in degree.values():
        if d:
            out = out * rise2(N, -d)
    return out


def _spherical_inner_product(g: Multigraph, h: Multigraph) -> RatFuncN:
    degree = g.degree_map()
    dart_vertex, dart_color, nv = _union_dart_arrays(g, h)
    hist = kernel.pm_colored_histogram(dart_vertex, dart_color, nv)
    vertices = g.vertices
    total = ZERO
    for (cycles, g_counts), count in hist.items():
        coeff = RatFuncN(IntPolyN([0] * cycles + [count]))  # count * n^cycles
        for vi, g_pairs in enumerate(g_counts):
            if g_pairs:
                d = degree[vertices[vi]]
                coeff = coeff * fall2(-2, g_pairs) * fall2(N + 2 * d - 4, -g_pairs)
        total = total + coeff
    return _spherical_prefactor(degree) * total


def _boolean_inner_product(g: EvenHypergraph, h: EvenHypergraph) -> RatFuncN:
    union_edges = list(g.edges) + list(h.edges)
    total = ZERO
    for p in matchings.pm_bool_cross(g, h):
        if matchings.is_simple_partition(union_edges, p):
            total = total + fall1(N, len(p))
    return total


def inner_product(setting: Setting, g: Graph, h: Graph,
                  budget: int | None = None) -> RatFuncN:
    """E[p_g p_h] in closed form."""
    setting = Setting(setting)
    _require_pair(setting, g, h)
    if not degree_equivalent(g, h):
        return ZERO
    _check_union_budget(g.n_edges + h.n_edges, budget, "inner product union")
    if setting is Setting.GAUSSIAN:
        return _gaussian_inner_product(g, h)
    if setting is Setting.SPHERICAL:
        return _spherical_inner_product(g, h)
    return _boolean_inner_product(g, h)


def cM(g: Multigraph, h: Multigraph, m: matchings.MatchingCollection) -> RatFuncN:
    """Per-matching coefficient in the spherical inner-product sum."""
    if not degree_equivalent(g, h):
        raise VertexSetMismatch("cM needs degree-equivalent graphs")
    if m.n_g_edges is None or m.n_g_edges != g.n_edges:
        raise ValueError("matching collection does not mark g's edges")
    if not m.is_perfect():
        raise ValueError("cM needs a perfect matching collection")
    degree = g.degree_map()
    routed = matchings.route(m)
    coeff = RatFuncN(IntPolyN([0] * routed.cycles + [1]))
    for v, g_pairs in matchings.g_pair_counts(m).items():
        if g_pairs:
            d = degree[v]
            coeff = coeff * fall2(-2, g_pairs) * fall2(N + 2 * d - 4, -g_pairs)
    return coeff


def inner_product_upper_bound(setting: Setting, g: Multigraph, h: Multigraph,
                              budget: int | None = None) -> RatFuncN:
    """The Gaussian-shaped bound on |E[p_g p_h]| for the spherical setting."""
    setting = Setting(setting)
    if setting is not Setting.SPHERICAL:
        raise SettingMismatch("the inner-product bound is a spherical statement")
    _require_pair(setting, g, h)
    if not degree_equivalent(g, h):
        return ZERO
    _check_union_budget(g.n_edges + h.n_edges, budget, "inner product union")
    dart_vertex, dart_color, nv = _union_dart_arrays(g, h)
    hist = kernel.pm_cross_histogram(dart_vertex, dart_color, nv)
    coeffs = [0] * (max((c for c, _ in hist), default=0) + 1)
    for (cycles, _simple), count in hist.items():
        coeffs[cycles] += count
    return _spherical_prefactor(g.degree_map()) * RatFuncN(IntPolyN(coeffs))


def degree4_inner_product(setting: Setting, g: Multigraph, h: Multigraph,
                          budget: int | None = None) -> RatFuncN:
    """Spherical E[p_g p_h] for max-degree-2 graphs via subset rematching."""
    setting = Setting(setting)
    if setting is not Setting.SPHERICAL:
        raise SettingMismatch("the degree-4 formula is a spherical statement")
    _require_pair(setting, g, h)
    if not degree_equivalent(g, h):
        return ZERO
    degree = g.degree_map()
    if any(d > 2 for d in degree.values()) or any(d > 2 for d in h.degree_map().values()):
        raise ValueError("the degree-4 formula needs max degree 2 in g and in h")
    _check_union_budget(g.n_edges + h.n_edges, budget, "inner product union")
    dart_vertex, dart_color, nv = _union_dart_arrays(g, h)
    index = {v: i for i, v in enumerate(g.vertices)}
    v4 = [index[v] for v in g.vertices if degree.get(v, 0) == 2]
    table = kernel.cross_rematch_table(dart_vertex, dart_color, nv, v4)
    total = ZERO
    for base_cycles, per_mask in table:
        for mask, cycles in enumerate(per_mask):
            size = mask.bit_count()
            term = (N ** cycles) / (N ** size)
            total = total + (term if size % 2 == 0 else -term)
    return _spherical_prefactor(degree) * total


def cancellation_applies(setting: Setting, g: Multigraph, h: Multigraph) -> bool:
    """Cut-vertex test: some component of the union minus a vertex sees
    unequal numbers of g-edges and h-edges at that vertex."""
    setting = Setting(setting)
    if setting is not Setting.SPHERICAL:
        raise SettingMismatch("the cancellation test is a spherical statement")
    _require_pair(setting, g, h)
    union_edges = list(g.edges) + list(h.edges)
    support = sorted({v for e in union_edges for v in e})
    for v in support:
        # components of the union with v removed
        adj: dict[int, set[int]] = {u: set() for u in support if u != v}
        for a, b in union_edges:
            if a != v and b != v and a != b:
                adj[a].add(b)
                adj[b].add(a)
        seen: set[int] = set()
        components: list[set[int]] = []
        for start in adj:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            seen.add(start)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.add(w)
                        stack.append(w)
            components.append(comp)
        for comp in components:
            g_count = sum(1 for a, b in g.edges
                          if (a == v and b in comp) or (b == v and a in comp))
            h_count = sum(1 for a, b in h.edges
                          if (a == v and b in comp) or (b == v and a in comp))
            if g_count != h_count:
                return True
    return False


# -- Isserlis expansions ---------------------------------------------------------


@dataclass(frozen=True)
class IsserlisResult:
    poly: InvariantPoly
    odd_count: bool = False


def _pairings_of(items: Sequence[int]) -> list[list[tuple[int, int]]]:
    if not items:
        return [[]]
    out = []
    first, rest = items[0], list(items[1:])
    for i, other in enumerate(rest):
        for sub in _pairings_of(rest[:i] + rest[i + 1:]):
            out.append([(first, other)] + sub)
    return out


def isserlis_lambda(k: int) -> dict[matchings.Partition, int]:
    """Coefficients on even partitions of [k] in the Boolean moment expansion.

    Defined by lambda(perfect matching) = 1 together with
    sum over even partitions refining M of lambda = 1, for every even M.
    """
    if k % 2:
        raise ValueError("lambda coefficients need an even number of items")
    even = [p for p in matchings.iter_partitions(k)
            if all(len(b) % 2 == 0 for b in p)]
    even.sort(key=lambda p: -len(p))
    lam: dict[matchings.Partition, int] = {}
    for p in even:
        below = sum(lam[q] for q in even if q != p and matchings.refines(q, p))
        lam[p] = 1 - below
    return lam


def isserlis(setting: Setting, symbols: Sequence[int], self_loop_power: int = 0,
             ) -> IsserlisResult:
    """E[<x,x>^p * prod_i <x, d_i>] expanded over the fixed symbols d_i.

    The result is an InvariantPoly on vertex set `symbols`: an edge (i, j)
    stands for <d_i, d_j> and, in the Boolean setting, a hyperedge stands for
    a generalized inner product of its symbols.
    """
    setting = Setting(setting)
    symbols = list(symbols)
    p = int(self_loop_power)
    if p < 0:
        raise ValueError("the norm power cannot be negative")
    k = len(symbols)
    if len(set(symbols)) != k:
        raise ValueError("symbols must be distinct")
    if k % 2:
        return IsserlisResult(
            InvariantPoly.zero(setting, symbols), odd_count=True)

    if setting is Setting.BOOLEAN:
        lam = isserlis_lambda(k)
        terms: dict[EdgesKey, RatFuncN] = {}
        scale = N ** p  # <v, v> = n on the hypercube
        for partition, value in lam.items():
            if value == 0:
                continue
            key = _edges_key(
                tuple(symbols[i] for i in block) for block in partition)
            c = scale * value
            acc = terms.get(key)
            total = c if acc is None else acc + c
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        return IsserlisResult(InvariantPoly(Setting.BOOLEAN, symbols, terms))

    if setting is Setting.GAUSSIAN:
        prefactor = ONE
        for j in range(1, p + 1):
            prefactor = prefactor * (N + (k + 2 * j - 2))
    else:
        # unit vectors: the norm factor is 1, the matching sum is scaled
        prefactor = rise2(N, -(k // 2))

    terms = {}
    for pairing in _pairings_of(list(range(k))):
        key = _edges_key(
            tuple(sorted((symbols[i], symbols[j]))) for i, j in pairing)
        acc = terms.get(key)
        terms[key] = prefactor if acc is None else acc + prefactor
    return IsserlisResult(InvariantPoly(setting, symbols, terms))


# -- Gram-Schmidt property check ----------------------------------------------------


def _lower_degree_monomial_keys(setting: Setting, vertices: tuple[int, ...],
                                degree: int, max_hyperedge: int) -> list[EdgesKey]:
    """Every labeled monomial key on the vertex set with smaller degree."""
    if setting is Setting.BOOLEAN:
        pool: list[tuple[int, ...]] = []
        for size in range(2, max_hyperedge + 1, 2):
            pool.extend(itertools.combinations(vertices, size))
        max_edges = max(0, (degree - 1) // 2)
    else:
        pool = [
            (u, v)
            for u, v in itertools.combinations_with_replacement(vertices, 2)
            if setting is Setting.GAUSSIAN or u != v
        ]
        max_edges = max(0, (degree - 1) // 2)
    keys: list[EdgesKey] = []
    for count in range(max_edges + 1):
        for combo in itertools.combinations_with_replacement(pool, count):
            key = _edges_key(combo)
            if setting is Setting.BOOLEAN:
                if sum(len(e) for e in key) >= degree:
                    continue
            keys.append(key)
    return keys


def gram_schmidt_symbolic_check(setting: Setting, graphs: Sequence[Graph],
                                budget: int | None = None) -> list[dict]:
    """Verify monicity and orthogonality to every lower-degree monomial.

    For each graph g, checks that orthopoly(g) has coefficient exactly 1 on
    m_g and that E[p_g * m_K] = 0 symbolically for every labeled monomial K
    on V(g) of strictly smaller degree.
    """
    setting = Setting(setting)
    report = []
    for g in graphs:
        p = orthopoly(setting, g, budget=budget)
        monic = p.coefficient(g.edges) == ONE
        degree = p.term_degree(g.edges)
        max_hyper = max((len(e) for e in g.edges), default=2)
        failures = []
        lower = _lower_degree_monomial_keys(setting, g.vertices, degree, max_hyper)
        for key in lower:
            m_poly = InvariantPoly(setting, g.vertices, {key: ONE})
            value = expectation(p * m_poly, budget=budget)
            if not value.is_zero():
                failures.append({"monomial": key, "value": str(value)})
        report.append({
            "graph": [list(e) for e in g.edges],
            "monic": monic,
            "lower_monomials_checked": len(lower),
            "orthogonal": not failures,
            "failures": failures,
        })
    return report
