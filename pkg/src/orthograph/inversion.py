"""Approximate Fourier inversion over degree-equivalence blocks.

The Gram matrix Q[G,H] = <p_G, p_H> of an orthogonal family is block
diagonal: entries vanish unless G and H have identical degree maps.  This
module groups graphs into those blocks, evaluates Q exactly at a concrete
dimension, and reconstructs the unique f = sum_G c_G p_G hitting prescribed
inner products <f, p_G> = targets[G].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import _linsolve, polyspace
from .errors import SingularBlockError, VertexSetMismatch
from .graphs import Graph, Setting, degree_equivalent
from .polyspace import EdgesKey, InvariantPoly
from .symnum import RatFuncN


@dataclass(frozen=True)
class GramBlock:
    """One degree-equivalence class with its symbolic Gram matrix."""

    setting: Setting
    graphs: tuple[Graph, ...]
    q: tuple[tuple[RatFuncN, ...], ...]

    @property
    def size(self) -> int:
        return len(self.graphs)

    def q_at(self, n: int) -> list[list[Fraction]]:
        return [[entry.eval_at(n) for entry in row] for row in self.q]


@dataclass(frozen=True)
class FourierTarget:
    """Prescribed inner products <f, p_G> at a concrete dimension."""

    targets: Mapping[Graph, Fraction]
    n: int


def build_blocks(
    graphs: Sequence[Graph], setting: Setting, budget: int | None = None
) -> list[GramBlock]:
    """Partition graphs into degree-equivalence classes and fill each Q.

    Entries are computed symbolically with polyspace.inner_product, so the
    symmetry Q[G,H] = Q[H,G] holds by construction (each unordered pair is
    computed once).
    """
    setting = Setting(setting)
    graphs = list(graphs)
    if graphs:
        base = graphs[0].vertices
        for g in graphs[1:]:
            if g.vertices != base:
                raise VertexSetMismatch("all graphs in a block family share V")
    classes: list[list[Graph]] = []
    for g in graphs:
        for cls in classes:
            if degree_equivalent(cls[0], g):
                cls.append(g)
                break
        else:
            classes.append([g])
    blocks = []
    for cls in classes:
        k = len(cls)
        q: list[list[RatFuncN | None]] = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                value = polyspace.inner_product(setting, cls[i], cls[j], budget=budget)
                q[i][j] = value
                q[j][i] = value
        blocks.append(
            GramBlock(setting, tuple(cls), tuple(tuple(row) for row in q))
        )
    return blocks


def invert_and_reconstruct(
    blocks: Sequence[GramBlock], target: FourierTarget, budget: int | None = None
) -> InvariantPoly:
    """Reconstruct f with <f, p_G> = targets[G] for every G in the blocks.

    Solves Q(n) c = targets block by block with exact rationals, verifies the
    residual is exactly zero, and assembles f = sum c_G p_G with concrete
    rational coefficients.  Graphs not mentioned in targets get target 0.
    """
    n = target.n
    remaining = dict(target.targets)
    setting = None
    accum: dict[EdgesKey, Fraction] = {}
    vertices: tuple[int, ...] | None = None
    for block in blocks:
        setting = block.setting
        wanted = [remaining.pop(g, Fraction(0)) for g in block.graphs]
        if not any(wanted):
            continue
        q_n = block.q_at(n)
        coeffs = _linsolve.solve_square(q_n, wanted)
        if coeffs is None:
            raise SingularBlockError(
                f"Gram block of size {block.size} is singular at n={n}",
                block=block,
                n=n,
            )
        for i, row in enumerate(q_n):
            check = sum(c * x for c, x in zip(row, coeffs))
            if check != wanted[i]:
                raise ArithmeticError("reconstruction residual is not zero")
        for g, c in zip(block.graphs, coeffs):
            if not c:
                continue
            p = polyspace.orthopoly(setting, g, budget=budget)
            for key, value in p.coeffs_at(n).items():
                acc = accum.get(key, Fraction(0)) + c * value
                if acc:
                    accum[key] = acc
                else:
                    accum.pop(key, None)
            if vertices is None:
                vertices = g.vertices
    if remaining:
        missing = sorted(str(g) for g in remaining)
        raise KeyError(f"targets name graphs outside the blocks: {missing}")
    if vertices is None:
        some = blocks[0].graphs[0] if blocks else None
        vertices = some.vertices if some is not None else ()
        setting = blocks[0].setting if blocks else Setting.GAUSSIAN
    return InvariantPoly(setting, vertices, accum)


def diagonality_report(block: GramBlock, n_values: Sequence[int]) -> dict:
    """Off-diagonal decay of Q(n): max |off-diag| / min |diag| per sample n."""
    ratios = []
    for n in n_values:
        q_n = block.q_at(n)
        k = len(q_n)
        if k < 2:
            ratios.append((n, Fraction(0)))
            continue
        off = max(abs(q_n[i][j]) for i in range(k) for j in range(k) if i != j)
        diag = min(abs(q_n[i][i]) for i in range(k))
        if diag == 0:
            raise SingularBlockError(
                f"zero diagonal Gram entry at n={n}", block=block, n=n
            )
        ratios.append((n, off / diag))
    values = [r for _, r in ratios]
    return {
        "n_values": list(n_values),
        "ratios": values,
        "ratios_float": [float(r) for r in values],
        "strictly_decreasing": all(a > b for a, b in zip(values, values[1:])),
    }
