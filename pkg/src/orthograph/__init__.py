"""Exact orthogonal polynomial families indexed by multigraphs.

Constructs the monic degree-orthogonal basis p_G for invariant polynomials in
the pairwise inner products of i.i.d. Gaussian, spherical, or Boolean random
vectors, together with exact expectation and inner-product calculus over the
matching-collection formulas, a brute-force oracle layer, and basis-change
utilities at concrete dimensions.
"""

from .errors import BudgetError, SettingMismatch, SingularBlockError, VertexSetMismatch
from .graphs import EvenHypergraph, Multigraph, Setting, graph_from_json
from .polyspace import (
    InvariantPoly,
    cancellation_applies,
    degree4_inner_product,
    expectation,
    inner_product,
    inner_product_upper_bound,
    isserlis,
    monomial,
    multiply,
    orthopoly,
)
from .symnum import IntPolyN, RatFuncN, fall1, fall2, format_ratfunc, rise1, rise2

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "EvenHypergraph",
    "IntPolyN",
    "InvariantPoly",
    "Multigraph",
    "RatFuncN",
    "Setting",
    "SettingMismatch",
    "SingularBlockError",
    "VertexSetMismatch",
    "cancellation_applies",
    "degree4_inner_product",
    "expectation",
    "fall1",
    "fall2",
    "format_ratfunc",
    "graph_from_json",
    "inner_product",
    "inner_product_upper_bound",
    "isserlis",
    "monomial",
    "multiply",
    "orthopoly",
    "rise1",
    "rise2",
    "__version__",
]
