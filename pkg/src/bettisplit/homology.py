"""Exact reduced simplicial homology over Q, GF(2) and GF(3).

Complexes are given by facets (``int`` bitmasks over vertex indices).  Ranks
of boundary maps are computed exactly: XOR elimination on bit rows for
GF(2), modular elimination for GF(3), and fraction-free integer elimination
for Q.  Floating point is never used.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .poset import bits, popcount

FIELDS = ("F2", "F3", "Q")
_ALIASES = {
    "f2": "F2", "gf2": "F2", "gf(2)": "F2", "2": "F2",
    "f3": "F3", "gf3": "F3", "gf(3)": "F3", "3": "F3",
    "q": "Q", "qq": "Q", "0": "Q",
}


def field_tag(field: str) -> str:
    """Normalise a field name (``f2``, ``GF(3)``, ``q``...) to F2, F3 or Q."""
    tag = _ALIASES.get(str(field).strip().lower())
    if tag is None:
        raise ValueError(f"unsupported field {field!r}; use one of f2, f3, q")
    return tag


def maximal_faces(faces: Iterable[int]) -> tuple[int, ...]:
    uniq = sorted(set(faces), key=popcount, reverse=True)
    kept: list[int] = []
    for f in uniq:
        if not any(f & k == f for k in kept):
            kept.append(f)
    return tuple(sorted(kept))


def all_faces(facets: Iterable[int]) -> set[int]:
    faces: set[int] = set()
    for f in facets:
        sub = f
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return faces


@dataclass(frozen=True)
class AbstractComplex:
    """A simplicial complex on vertex bitmasks, generated by its facets.

    The void complex has no facets and no faces at all; the complex whose
    only face is the empty set has the single facet ``0``.
    """

    facets: tuple[int, ...]

    @classmethod
    def from_faces(cls, faces: Iterable[int]) -> "AbstractComplex":
        return cls(maximal_faces(faces))

    @cached_property
    def faces(self) -> frozenset[int]:
        return frozenset(all_faces(self.facets))

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def dim(self) -> int:
        if not self.facets:
            return -2
        return max(popcount(f) for f in self.facets) - 1

    @property
    def vertices(self) -> int:
        out = 0
        for f in self.facets:
            out |= f
        return out


# --- exact ranks --------------------------------------------------------------


def rank_gf2(rows: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    r = 0
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                basis[lead] = row
                r += 1
                break
            row ^= b
    return r


def rank_mod_p(rows: Iterable[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            lead = max(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {c: v * inv % p for c, v in row.items()}
                r += 1
                break
            f = row[lead]
            for c, v in piv.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return r


def rank_rational(rows: Iterable[dict[int, int]]) -> int:
    """Rank over Q by fraction-free elimination on integer rows.

    Each reduction step is ``row <- a*row - b*pivot`` followed by division by
    the content, so entries remain integers and stay small on boundary
    matrices.
    """
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = max(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                r += 1
                break
            a, b = piv[lead], row[lead]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {}
            for c in row.keys() | piv.keys():
                v = a * row.get(c, 0) - b * piv.get(c, 0)
                if v:
                    new[c] = v
            if new:
                content = 0
                for v in new.values():
                    content = gcd(content, v)
                    if content == 1:
                        break
                if content > 1:
                    new = {c: v // content for c, v in new.items()}
            row = new
    return r


def _boundary_rank(upper: Sequence[int], index: dict[int, int], tag: str) -> int:
    if not upper:
        return 0
    if tag == "F2":
        rows = []
        for f in upper:
            row = 0
            for v in bits(f):
                row |= 1 << index[f ^ (1 << v)]
            rows.append(row)
        return rank_gf2(rows)
    drows = []
    for f in upper:
        row = {}
        sign = 1
        for v in bits(f):
            row[index[f ^ (1 << v)]] = sign
            sign = -sign
        drows.append(row)
    if tag == "Q":
        return rank_rational(drows)
    return rank_mod_p(drows, 3)


def reduced_homology_ranks(C: AbstractComplex | Sequence[int], field: str = "F2") -> list[int]:
    """dim H~_r(C; field) for r = -1, 0, ..., dim C (list index r + 1).

    Accepts an :class:`AbstractComplex` or a list of facet bitmasks.  The
    void complex yields an empty list.
    """
    facets = C.facets if isinstance(C, AbstractComplex) else C
    return reduced_betti_of_facets(facets, field_tag(field))


def strong_core(facets: Sequence[int]) -> tuple[int, ...]:
    """Remove dominated vertices until none is left.

    A vertex v is dominated by w when every facet containing v also contains
    w; then link(v) is a cone with apex w and deleting v preserves the
    homotopy type (a strong collapse).  Returns the maximal faces of the core.
    """
    facets = maximal_faces(facets)
    changed = True
    while changed and len(facets) > 1:
        changed = False
        verts = 0
        for f in facets:
            verts |= f
        for v in bits(verts):
            bit = 1 << v
            inter = -1
            for f in facets:
                if f & bit:
                    inter &= f
            if inter & ~bit:
                facets = maximal_faces(f & ~bit for f in facets)
                changed = True
                break
    return facets


def reduced_betti_of_facets(facets: Sequence[int], tag: str) -> list[int]:
    if not facets:
        return []
    facets = maximal_faces(facets)
    top = max(popcount(f) for f in facets)
    if facets == (0,):
        return [1]
    common = -1
    for f in facets:
        common &= f
    # sizes 0..top are dimensions -1..top-1
    out = [0] * (top + 1)
    if common:
        # a cone is acyclic
        return out
    facets = strong_core(facets)
    if len(facets) == 1:
        return out
    core = _homology_by_elimination(facets, tag)
    out[: len(core)] = core
    return out


def _homology_by_elimination(facets: Sequence[int], tag: str) -> list[int]:
    top = max(popcount(f) for f in facets)
    by_size: list[list[int]] = [[] for _ in range(top + 1)]
    for f in all_faces(facets):
        by_size[popcount(f)].append(f)
    for lst in by_size:
        lst.sort()
    index = [{f: i for i, f in enumerate(lst)} for lst in by_size]
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        ranks[k] = _boundary_rank(by_size[k], index[k - 1], tag)
    return [len(by_size[k]) - ranks[k] - ranks[k + 1] for k in range(top + 1)]
