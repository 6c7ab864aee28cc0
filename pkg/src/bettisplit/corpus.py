"""Built-in complexes with known Betti tables: a triangulated dunce hat,
Hachimori's shellable complex and Rudin's ball.

Each entry stores the printed generator or facet lists it is rebuilt from,
and the graded Betti tables the rebuilt ideals are expected to have.
Tables are written as {i: {j: beta_ij}}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .ideal import SquarefreeIdeal
from .oracle import BettiTable
from .simplicial import SimplicialComplex

# Stanley-Reisner ideal of the dunce hat, already split into the two parts
# of a known Betti splitting.
DUNCE_J = [(2, 6), (4, 7), (2, 4, 8), (3, 4, 5), (2, 3, 4), (2, 7, 8), (3, 4, 6), (1, 4, 6), (3, 5, 6)]
DUNCE_K = [
    (5, 7), (5, 8), (1, 2, 5), (1, 4, 5), (1, 6, 8), (1, 6, 7),
    (1, 3, 8), (1, 4, 8), (1, 3, 7), (3, 6, 8), (1, 2, 3), (3, 7, 8),
]

# Alexander dual ideal of Hachimori's complex, as an x4-partition x4*J + K.
HACHIMORI_X4J = [
    (3, 4, 5, 7), (2, 3, 4, 5), (3, 4, 5, 6), (1, 2, 3, 4),
    (1, 4, 5, 7), (1, 2, 4, 7), (1, 4, 6, 7), (3, 4, 6, 7),
]
HACHIMORI_K = [(1, 5, 6, 7), (1, 3, 5, 6), (1, 2, 3, 6), (2, 3, 6, 7), (2, 5, 6, 7)]

RUDIN_D1 = [
    (1, 3, 7, 13), (1, 3, 9, 13), (1, 5, 7, 11), (1, 5, 9, 11), (1, 7, 11, 13), (1, 9, 11, 13),
    (3, 4, 7, 11), (3, 4, 7, 12), (3, 7, 11, 14), (3, 7, 12, 13), (3, 9, 12, 13), (4, 7, 11, 12),
    (4, 8, 11, 12), (5, 6, 9, 13), (5, 6, 9, 14), (5, 7, 11, 14), (5, 9, 11, 14), (5, 9, 12, 13),
    (6, 9, 13, 14), (6, 10, 13, 14), (7, 11, 12, 13), (9, 11, 13, 14), (11, 12, 13, 14),
]
RUDIN_D2 = [
    (2, 4, 8, 14), (2, 4, 10, 14), (2, 6, 8, 12), (2, 6, 10, 12), (2, 8, 12, 14), (2, 10, 12, 14),
    (3, 6, 10, 11), (3, 6, 10, 14), (3, 10, 11, 14), (4, 5, 8, 12), (4, 5, 8, 13), (4, 8, 13, 14),
    (4, 10, 13, 14), (5, 8, 12, 13), (6, 8, 11, 12), (6, 10, 11, 12), (8, 12, 13, 14), (10, 11, 12, 14),
]


def _table(rows: dict[int, dict[int, int]]) -> BettiTable:
    return BettiTable.from_rows(rows)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    complex: SimplicialComplex
    # expected tables keyed by a short label ("dual", "sr", "J", ...)
    tables: dict[str, BettiTable] = field(default_factory=dict)
    parts: dict[str, SquarefreeIdeal] = field(default_factory=dict)

    def ideal(self, which: str = "dual") -> SquarefreeIdeal:
        if which == "dual":
            return self.complex.alexander_dual_ideal()
        if which == "sr":
            return self.complex.stanley_reisner_ideal()
        raise ValueError(f"unknown ideal {which!r}; use sr or dual")


def _supports(n: int, lists) -> SquarefreeIdeal:
    return SquarefreeIdeal.from_supports(lists, tuple(f"x{i + 1}" for i in range(n)), base=1)


def dunce_hat() -> CorpusEntry:
    D = SimplicialComplex.from_nonfaces(8, DUNCE_J + DUNCE_K)
    tables = {
        "dual": _table({0: {5: 17}, 1: {6: 27}, 2: {7: 11}}),
        "sr": _table({0: {2: 4, 3: 17}, 1: {3: 2, 4: 65}, 2: {5: 86}, 3: {6: 50}, 4: {7: 11}}),
        "sr_J": _table({0: {2: 2, 3: 7}, 1: {4: 18}, 2: {5: 13}, 3: {6: 3}}),
        "sr_K": _table({0: {2: 2, 3: 10}, 1: {3: 1, 4: 24}, 2: {5: 19}, 3: {6: 5}}),
        "sr_JK": _table({0: {3: 1, 4: 23}, 1: {5: 54}, 2: {6: 42}, 3: {7: 11}}),
    }
    parts = {"sr_J": _supports(8, DUNCE_J), "sr_K": _supports(8, DUNCE_K)}
    return CorpusEntry("dunce_hat", D, tables, parts)


def hachimori() -> CorpusEntry:
    full = set(range(1, 8))
    facets = [sorted(full - set(g)) for g in HACHIMORI_X4J + HACHIMORI_K]
    D = SimplicialComplex.from_facets(7, facets)
    tables = {
        "dual": _table({0: {4: 13}, 1: {5: 20}, 2: {6: 8}}),
        "dual_J": _table({0: {4: 8}, 1: {5: 11}, 2: {6: 4}}),
        "dual_K": _table({0: {4: 5}, 1: {5: 5}, 2: {6: 1}}),
        "dual_JK": _table({0: {5: 4}, 1: {6: 3}}),
    }
    parts = {"dual_J": _supports(7, HACHIMORI_X4J), "dual_K": _supports(7, HACHIMORI_K)}
    return CorpusEntry("hachimori", D, tables, parts)


def rudin_ball() -> CorpusEntry:
    D = SimplicialComplex.from_facets(14, RUDIN_D1 + RUDIN_D2)
    D1 = SimplicialComplex.from_facets(14, RUDIN_D1)
    D2 = SimplicialComplex.from_facets(14, RUDIN_D2)
    tables = {
        "dual": _table({0: {10: 41}, 1: {11: 70}, 2: {12: 30}}),
        "dual_J": _table({0: {10: 23}, 1: {11: 35}, 2: {12: 13}}),
        "dual_K": _table({0: {10: 18}, 1: {11: 27}, 2: {12: 10}}),
        "dual_JK": _table({0: {11: 8}, 1: {12: 7}}),
    }
    parts = {"dual_J": D1.alexander_dual_ideal(), "dual_K": D2.alexander_dual_ideal()}
    return CorpusEntry("rudin_ball", D, tables, parts)


CORPUS: dict[str, Callable[[], CorpusEntry]] = {
    "dunce_hat": dunce_hat,
    "hachimori": hachimori,
    "rudin_ball": rudin_ball,
}


def get_entry(name: str) -> CorpusEntry:
    try:
        return CORPUS[name]()
    except KeyError:
        raise ValueError(f"unknown corpus entry {name!r}; choose from {', '.join(CORPUS)}") from None
