"""Built-in named graph pairs for the CLI and the verification suites.

The K5 pair splits the complete graph on five vertices into its two
edge-disjoint 5-cycles (pentagon and pentagram).  The fig4 pair is the
two-parallel-4-cycles example: two doubled edges each, arranged so the
union is a doubled 4-cycle.

The fig3 pairs are transcribed from drawings rather than edge lists, so
their transcriptions count as correct only because the verification
suites pin each to a known exact inner-product value.
"""

from __future__ import annotations

from .graphs import Graph, Multigraph

V5 = (1, 2, 3, 4, 5)
V4 = (1, 2, 3, 4)

_REGISTRY: dict[str, Graph] = {
    "k5-outer": Multigraph(V5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]),
    "k5-inner": Multigraph(V5, [(1, 3), (3, 5), (2, 5), (2, 4), (1, 4)]),
    "fig4-g": Multigraph(V4, [(1, 2), (1, 2), (3, 4), (3, 4)]),
    "fig4-h": Multigraph(V4, [(2, 3), (2, 3), (1, 4), (1, 4)]),
}


def names() -> list[str]:
    return sorted(_REGISTRY)


def get(name: str) -> Graph:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(names())
        raise KeyError(f"unknown graph name {name!r} (known: {known})") from None
