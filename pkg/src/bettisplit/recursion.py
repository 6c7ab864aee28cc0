"""Closed-form and recursive total Betti numbers for the cover ideals H_{P,d}.

All values are total Betti numbers ``[beta_0, beta_1, ...]``.  Because
H_{P,d} is generated in degree |P| with a linear resolution, the graded
table is recovered as beta_{i, |P| + i}.

H of the empty poset is the unit ideal here (its only multideal is the
all-empty tuple, whose monomial is 1), so it contributes [1] in degree 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .oracle import BettiTable
from .poset import Poset, downsets, max_elements, popcount


def trim(values: Sequence[int]) -> list[int]:
    out = list(values)
    while out and out[-1] == 0:
        out.pop()
    return out


def add_into(acc: list[int], values: Sequence[int], shift: int = 0, times: int = 1):
    need = len(values) + shift
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, v in enumerate(values):
        acc[i + shift] += times * v


@dataclass(frozen=True)
class TotalBetti:
    values: tuple[int, ...]
    degree: int

    def graded(self, field: str = "F2") -> BettiTable:
        return BettiTable({(i, self.degree + i): v for i, v in enumerate(self.values)}, field)

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": list(self.values)}


class BettiRecursion:
    """Memoised evaluation of the downset recursion inside one ambient poset.

    Keys are (downset bitmask, d); downsets of a downset are downsets of the
    ambient poset, so every key stays in one lattice.
    """

    def __init__(self, P: Poset):
        self.P = P
        self.memo: dict[tuple[int, int], tuple[int, ...]] = {}
        self._downsets: dict[int, list[int]] = {}

    def downsets_of(self, S: int) -> list[int]:
        got = self._downsets.get(S)
        if got is None:
            got = self._downsets[S] = downsets(self.P, S)
        return got

    def betti(self, S: int, d: int) -> tuple[int, ...]:
        key = (S, d)
        got = self.memo.get(key)
        if got is not None:
            return got
        if d < 1:
            raise ValueError("degree must be >= 1")
        if d == 1 or S == 0:
            # principal (d = 1) or unit (empty poset)
            val: tuple[int, ...] = (1,)
        else:
            acc: list[int] = []
            for alpha in self.downsets_of(S):
                m = popcount(max_elements(self.P, alpha))
                sub = self.betti(alpha, d - 1)
                for h in range(m + 1):
                    add_into(acc, sub, h, comb(m, h))
            val = tuple(trim(acc))
        self.memo[key] = val
        return val


def betti_recursive(P: Poset, d: int) -> TotalBetti:
    return TotalBetti(BettiRecursion(P).betti(P.full, d), P.n)


def betti_unique_max(P: Poset, d: int) -> TotalBetti:
    """Three-term recursion for posets with a unique maximal element."""
    if d < 2:
        raise ValueError("needs d >= 2")
    if popcount(max_elements(P, P.full)) != 1:
        raise ValueError("poset must have a unique maximal element")
    rec = BettiRecursion(P)

    @lru_cache(maxsize=None)
    def go(S: int, dd: int) -> tuple[int, ...]:
        # S is always a principal downset <p> here, or its punctured version
        if dd == 1 or S == 0:
            return (1,)
        if popcount(max_elements(P, S)) != 1:
            return rec.betti(S, dd)
        top = S.bit_length() - 1
        acc: list[int] = []
        add_into(acc, go(S & ~(1 << top), dd))
        lower = go(S, dd - 1)
        add_into(acc, lower)
        add_into(acc, lower, 1)
        return tuple(trim(acc))

    return TotalBetti(go(P.full, d), P.n)


def betti_bipartite_cover(P: Poset) -> TotalBetti:
    """Total Betti numbers of the cover ideal of the bipartite graph C_{P,2}:
    beta_i = sum over downsets alpha of C(|Max(alpha)|, i)."""
    acc: list[int] = []
    for alpha in downsets(P):
        m = popcount(max_elements(P, alpha))
        add_into(acc, [comb(m, i) for i in range(m + 1)])
    return TotalBetti(tuple(trim(acc)), P.n)


def splitinside_formula(k: int, base: Sequence[int]) -> list[int]:
    """Total Betti numbers of (y_1..y_k) * I from those of I (I with a linear resolution)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    acc: list[int] = []
    for s in range(k):
        add_into(acc, base, s, comb(k, s + 1))
    return trim(acc)


def final1_formula(parts: Sequence[Sequence[int]], colon_sizes: Sequence[int]) -> list[int]:
    """beta(I_1 + ... + I_t) = beta(I_1) + sum_k sum_s C(c_k, s) beta_{i-s}(I_k),
    where c_k is the number of variables generating I_k : (I_1 + ... + I_{k-1})."""
    if len(colon_sizes) != max(len(parts) - 1, 0):
        raise ValueError("need one colon size per part after the first")
    if not parts:
        return []
    acc = list(parts[0])
    for part, c in zip(parts[1:], colon_sizes):
        for s in range(c + 1):
            add_into(acc, part, s, comb(c, s))
    return trim(acc)


def prop_final_formula(P: Poset, d: int) -> TotalBetti:
    """Total Betti numbers of the sum of the J_alpha over downsets containing p_n."""
    if d < 2 or P.n < 1:
        raise ValueError("needs d >= 2 and a nonempty poset")
    rec = BettiRecursion(P)
    top = P.n - 1
    acc: list[int] = []
    for alpha in downsets(P):
        if not alpha >> top & 1:
            continue
        m = popcount(max_elements(P, alpha))
        sub = rec.betti(alpha, d - 1)
        for s in range(m):
            add_into(acc, sub, s, comb(m - 1, s))
    return TotalBetti(tuple(trim(acc)), P.n)


def count_multideals(P: Poset, d: int) -> int:
    """Number of chains of d - 1 downsets, i.e. of generators of H_{P,d}."""
    @lru_cache(maxsize=None)
    def chains(S: int, length: int) -> int:
        if length == 0:
            return 1
        return sum(chains(D, length - 1) for D in downsets(P, S))

    return chains(P.full, d - 1)

