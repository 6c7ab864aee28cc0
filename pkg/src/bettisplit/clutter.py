"""The multichain clutter of a poset and the ideals built from it.

Variables of the ring for ``d`` rows over an ``n``-element poset are indexed
row-major: ``x_{ij}`` (1-based) has index ``(i-1)*n + (j-1)``.  For at most
four rows they print as x/y/z/t with the column number, as in ``x1y2z2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .ideal import SquarefreeIdeal, minimal_supports, multiply_monomial
from .poset import (
    Poset,
    bits,
    downsets_containing,
    max_elements,
    multichains,
    order_key,
    popcount,
    poset_multideals,
)

ROW_ALIASES = "xyzt"


def variable_names(n: int, rows: int) -> tuple[str, ...]:
    if rows <= len(ROW_ALIASES):
        return tuple(f"{ROW_ALIASES[i]}{j + 1}" for i in range(rows) for j in range(n))
    return tuple(f"x{i + 1}_{j + 1}" for i in range(rows) for j in range(n))


def var(n: int, row: int, col: int) -> int:
    """Index of x_{row+1, col+1} (both arguments 0-based)."""
    return row * n + col


def row_mask(n: int, row: int, cols: int) -> int:
    """Bitmask of the variables x_{row+1, j+1} for j in ``cols``."""
    return cols << (row * n)


@dataclass(frozen=True)
class Clutter:
    vertices: tuple[str, ...]
    edges: tuple[int, ...]
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        for a in self.edges:
            for b in self.edges:
                if a != b and a & b == a:
                    raise ValueError("clutter edges must form an antichain")

    @cached_property
    def is_uniform(self) -> bool:
        return len({popcount(e) for e in self.edges}) <= 1

    @cached_property
    def is_d_partite(self) -> bool:
        if not self.parts:
            return False
        return self.is_uniform and all(
            all(popcount(e & part) == 1 for part in self.parts) for e in self.edges
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[self.vertices[v] for v in bits(e)] for e in self.edges],
        }


def build_clutter(P: Poset, d: int) -> Clutter:
    """Edges {x_{1 j_1}, ..., x_{d j_d}} for the multichains p_{j_1} <= ... <= p_{j_d}."""
    if d < 2:
        raise ValueError("the multichain clutter needs d >= 2")
    n = P.n
    edges = []
    for mc in multichains(P, d):
        e = 0
        for i, j in enumerate(mc):
            e |= 1 << var(n, i, j)
        edges.append(e)
    parts = tuple(row_mask(n, i, P.full) for i in range(d))
    return Clutter(variable_names(n, d), tuple(edges), parts)


def edge_ideal(C: Clutter) -> SquarefreeIdeal:
    return SquarefreeIdeal(minimal_supports(C.edges), C.vertices)


def multideal_monomial(n: int, parts: tuple[int, ...]) -> int:
    u = 0
    for i, part in enumerate(parts):
        u |= row_mask(n, i, part)
    return u


def h_pd_generators(P: Poset, d: int, within: int | None = None, rows: int | None = None) -> SquarefreeIdeal:
    """The cover ideal H_{within,d}, one generator u_alpha per poset multideal.

    ``within`` (a downset, default all of P) is treated as an induced
    subposet but keeps its ambient labels; ``rows`` (default ``d``) sets how
    many variable rows the ambient ring has.  With ``within`` empty this is
    the unit ideal, generated by the empty product.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    rows = d if rows is None else rows
    if rows < d:
        raise ValueError("ring has fewer rows than the degree")
    gens = [multideal_monomial(P.n, md) for md in poset_multideals(P, d, within)]
    return SquarefreeIdeal(minimal_supports(gens), variable_names(P.n, rows))


def j_alpha(P: Poset, alpha: int, d: int, rows: int | None = None) -> SquarefreeIdeal:
    """J_alpha = (prod of x_{d i} over p_i not in alpha) * H_{alpha, d-1}."""
    if d < 2:
        raise ValueError("J_alpha needs d >= 2")
    top = P.n - 1
    if not alpha >> top & 1:
        raise ValueError("alpha must contain the last element p_n")
    rows = d if rows is None else rows
    H = h_pd_generators(P, d - 1, alpha, rows)
    prefix = row_mask(P.n, d - 1, P.full & ~alpha)
    return multiply_monomial(prefix, H)


@dataclass(frozen=True)
class TheoremDecomposition:
    """H_{P,d} = x_{dn} H_{P - p_n, d} + sum of J_alpha over downsets containing p_n."""

    prefix_var: int
    rest: SquarefreeIdeal
    j_parts: tuple[tuple[int, SquarefreeIdeal], ...]

    @property
    def scaled_rest(self) -> SquarefreeIdeal:
        return multiply_monomial(1 << self.prefix_var, self.rest)

    def all_generators(self) -> list[int]:
        gens = list(self.scaled_rest.gens)
        for _, J in self.j_parts:
            gens.extend(J.gens)
        return gens

    def j_sum(self) -> SquarefreeIdeal:
        gens = []
        for _, J in self.j_parts:
            gens.extend(J.gens)
        return SquarefreeIdeal(minimal_supports(gens), self.rest.variables)


def theorem_decomposition(P: Poset, d: int) -> TheoremDecomposition:
    if P.n < 1 or d < 2:
        raise ValueError("decomposition needs a nonempty poset and d >= 2")
    top = P.n - 1
    rest = h_pd_generators(P, d, P.full & ~(1 << top))
    alphas = sorted(downsets_containing(P, top), key=order_key)
    parts = tuple((a, j_alpha(P, a, d)) for a in alphas)
    return TheoremDecomposition(var(P.n, d - 1, top), rest, parts)


def r_alpha(P: Poset, alpha: int) -> list[int]:
    """Downsets gamma containing p_n with gamma inside alpha and |gamma| = |alpha| - 1."""
    top = P.n - 1
    out = []
    for p in bits(max_elements(P, alpha)):
        if p != top:
            out.append(alpha & ~(1 << p))
    return out
