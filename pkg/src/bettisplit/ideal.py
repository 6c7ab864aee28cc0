"""Squarefree monomial ideals on an indexed variable set.

A squarefree monomial is its support, stored as an ``int`` bitmask over the
variable indices.  The unit ideal is the one generated by the empty support
``0``; the zero ideal has no generators.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .poset import bits, popcount


class VariableMismatch(ValueError):
    pass


class UnitIdealError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    """A bounded search ran out of nodes before reaching a decision."""


def default_names(nvars: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(nvars))


def minimal_supports(gens: Iterable[int]) -> tuple[int, ...]:
    """Divisibility-minimal antichain of the given supports, sorted."""
    uniq = sorted(set(gens), key=lambda m: (popcount(m), m))
    kept: list[int] = []
    for g in uniq:
        if not any(k & g == k for k in kept):
            kept.append(g)
    return tuple(sorted(kept, key=_sort_key))


def _sort_key(m: int):
    return (popcount(m), sorted(bits(m)))


@dataclass(frozen=True)
class SquarefreeIdeal:
    gens: tuple[int, ...]
    variables: tuple[str, ...]

    @classmethod
    def from_gens(cls, gens: Iterable[int], variables: Sequence[str] | int) -> "SquarefreeIdeal":
        if isinstance(variables, int):
            variables = default_names(variables)
        return cls(minimal_supports(gens), tuple(variables))

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], variables: Sequence[str] | int, base: int = 0):
        """Build from support lists of variable indices (``base`` 0 or 1)."""
        masks = []
        for s in supports:
            m = 0
            for v in s:
                m |= 1 << (int(v) - base)
            masks.append(m)
        return cls.from_gens(masks, variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.gens == (0,)

    @property
    def support(self) -> int:
        out = 0
        for g in self.gens:
            out |= g
        return out

    def __len__(self):
        return len(self.gens)

    def contains(self, m: int) -> bool:
        """Whether the squarefree monomial with support ``m`` lies in the ideal."""
        return any(g & m == g for g in self.gens)

    def monomial_str(self, m: int) -> str:
        if m == 0:
            return "1"
        return "".join(self.variables[i] for i in bits(m))

    def __str__(self):
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(self.monomial_str(g) for g in self.gens) + ")"

    def degrees(self) -> list[int]:
        return [popcount(g) for g in self.gens]

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "generators": [list(bits(g)) for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict) -> "SquarefreeIdeal":
        """Generators are lists of 0-based variable indices or variable names."""
        variables = data["variables"]
        if isinstance(variables, int):
            variables = default_names(variables)
        pos = {name: k for k, name in enumerate(variables)}
        supports = []
        for gen in data["generators"]:
            support = []
            for v in gen:
                if isinstance(v, str):
                    if v not in pos:
                        raise ValueError(f"unknown variable {v!r}")
                    v = pos[v]
                if not 0 <= int(v) < len(variables):
                    raise ValueError(f"variable index {v} out of range")
                support.append(int(v))
            supports.append(support)
        return cls.from_supports(supports, variables)

    def variable_index(self, name: str | int) -> int:
        """0-based index of a variable given by name or by 1-based number."""
        if isinstance(name, int) or str(name).isdigit():
            k = int(name) - 1
        else:
            try:
                k = self.variables.index(str(name))
            except ValueError:
                raise ValueError(f"unknown variable {name!r}") from None
        if not 0 <= k < self.nvars:
            raise ValueError(f"variable {name!r} out of range")
        return k

    def restrict(self, sigma: int) -> tuple[int, ...]:
        """Generators dividing the monomial with support ``sigma``."""
        return tuple(g for g in self.gens if g & sigma == g)


def load_ideal(path) -> SquarefreeIdeal:
    with open(path) as fh:
        return SquarefreeIdeal.from_json(json.load(fh))


def minimalize(gens: Iterable[int], variables: Sequence[str] | int) -> SquarefreeIdeal:
    return SquarefreeIdeal.from_gens(gens, variables)


def _check_same(J: SquarefreeIdeal, K: SquarefreeIdeal):
    if J.variables != K.variables:
        raise VariableMismatch("ideals live on different variable sets")


def ideal_sum(J: SquarefreeIdeal, K: SquarefreeIdeal) -> SquarefreeIdeal:
    _check_same(J, K)
    return SquarefreeIdeal.from_gens(J.gens + K.gens, J.variables)


def intersect(J: SquarefreeIdeal, K: SquarefreeIdeal) -> SquarefreeIdeal:
    _check_same(J, K)
    return SquarefreeIdeal(intersect_supports(J.gens, K.gens), J.variables)


def intersect_supports(A: Sequence[int], B: Sequence[int]) -> tuple[int, ...]:
    """Minimal generators of the intersection of two squarefree ideals:
    the minimal pairwise lcms (unions of supports)."""
    return minimal_supports(a | b for a in A for b in B)


def scale_by_variables(N: int | Iterable[int], I: SquarefreeIdeal) -> SquarefreeIdeal:
    """The ideal (y : y in N) * I for variables N absent from every generator."""
    if not isinstance(N, int):
        m = 0
        for v in N:
            m |= 1 << v
        N = m
    if N & I.support:
        raise ValueError("scaling variables must not occur in the ideal's generators")
    return SquarefreeIdeal(
        tuple(sorted(((1 << y) | g for y in bits(N) for g in I.gens), key=_sort_key)), I.variables
    )


def multiply_monomial(m: int, I: SquarefreeIdeal) -> SquarefreeIdeal:
    """m * I for a squarefree monomial m coprime to all generators."""
    if m & I.support:
        raise ValueError("monomial must be coprime to the ideal's generators")
    return SquarefreeIdeal(tuple(sorted((m | g for g in I.gens), key=_sort_key)), I.variables)


def minimal_transversals(edges: Sequence[int]) -> tuple[int, ...]:
    """Minimal hitting sets of a family of supports (Berge's incremental method).

    Edges are processed one at a time.  Transversals already meeting the new
    edge are kept; the others are extended by each vertex of the edge, and
    the union is minimalized.
    """
    trans = [0]
    for e in minimal_supports(edges):
        if e == 0:
            raise UnitIdealError("the unit ideal has no Alexander dual")
        hit = [t for t in trans if t & e]
        miss = [t for t in trans if not t & e]
        cand = set(hit)
        for t in miss:
            for v in bits(e):
                cand.add(t | (1 << v))
        trans = list(minimal_supports(cand))
    return tuple(sorted(trans, key=_sort_key))


def alexander_dual(I: SquarefreeIdeal) -> SquarefreeIdeal:
    """Generators are the minimal vertex covers of the generator supports."""
    if I.is_unit:
        raise UnitIdealError("the unit ideal has no Alexander dual")
    if I.is_zero:
        # nothing to hit: the empty set is a cover
        return SquarefreeIdeal((0,), I.variables)
    return SquarefreeIdeal(minimal_transversals(I.gens), I.variables)


def is_generated_in_single_degree(I: SquarefreeIdeal) -> int | None:
    if I.is_zero:
        return None
    degs = set(I.degrees())
    return degs.pop() if len(degs) == 1 else None


# --- linear quotients -------------------------------------------------------


def has_linear_quotients_order(I: SquarefreeIdeal, order: Sequence[int]) -> bool:
    """Check the squarefree linear-quotients criterion for a generator order.

    For each position i and every earlier j there must be a variable
    x_h in supp(u_j) \\ supp(u_i) and an earlier k with
    supp(u_k) \\ supp(u_i) = {x_h}.
    """
    if sorted(order) != sorted(I.gens) or len(set(order)) != len(order):
        raise ValueError("order must be a permutation of the minimal generators")
    for i in range(1, len(order)):
        if not _position_ok(order[:i], order[i]):
            return False
    return True


def colon_variables(earlier: Sequence[int], u: int) -> int:
    """Variables x_h with supp(u_k) \\ supp(u) = {x_h} for some earlier u_k."""
    lin = 0
    for w in earlier:
        diff = w & ~u
        if diff and diff & (diff - 1) == 0:
            lin |= diff
    return lin


def _position_ok(earlier: Sequence[int], u: int) -> bool:
    lin = colon_variables(earlier, u)
    return all(w & ~u & lin for w in earlier)


def find_linear_quotients_order(I: SquarefreeIdeal, budget: int = 10**6) -> list[int] | None:
    """Some generator order with linear quotients, or ``None`` if there is none.

    Tries descending lex order first (variables in their fixed order), then
    backtracks.  Raises :class:`SearchBudgetExceeded` when ``budget`` search
    nodes are used up without a decision.
    """
    gens = list(I.gens)
    if not gens:
        return []
    lex = sorted(gens, key=lambda g: [-(g >> i & 1) for i in range(I.nvars)])
    if has_linear_quotients_order(I, lex):
        return lex

    nodes = 0
    used = [False] * len(gens)
    order: list[int] = []

    def rec() -> bool:
        nonlocal nodes
        if len(order) == len(gens):
            return True
        for idx in range(len(lex)):
            if used[idx]:
                continue
            u = lex[idx]
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"linear quotients search exceeded {budget} nodes")
            if order and not _position_ok(order, u):
                continue
            used[idx] = True
            order.append(u)
            if rec():
                return True
            order.pop()
            used[idx] = False
        return False

    return list(order) if rec() else None


def linear_quotient_betti(order: Sequence[int]) -> list[int]:
    """Total Betti numbers from a linear-quotients order: sum of C(|set(u)|, i)."""
    from math import comb

    sizes = [popcount(colon_variables(order[:k], order[k])) for k in range(len(order))]
    top = max(sizes, default=-1)
    return [sum(comb(s, i) for s in sizes) for i in range(top + 1)]
