"""Brute-force graded Betti numbers of squarefree monomial ideals.

The multigraded Betti number in squarefree degree sigma is

    beta_{i,sigma}(I) = dim H~_{i-1}(K^sigma(I); k),

where K^sigma(I) = {tau <= sigma : x^(sigma - tau) in I} is the upper Koszul
simplicial complex.  It is generated by the facets sigma - g for the
generators g dividing x^sigma, and it is a cone (hence acyclic) unless sigma
is a union of such generators, so only the lcm lattice is visited.
"""
from __future__ import annotations

import importlib.util
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .homology import FIELDS, AbstractComplex, field_tag, reduced_betti_of_facets
from .ideal import SquarefreeIdeal, UnitIdealError, minimal_transversals
from .poset import bits, popcount


@dataclass
class BettiTable:
    """Graded Betti numbers: (homological index i, internal degree j) -> count."""

    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    field: str = "F2"

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}

    def copy(self) -> "BettiTable":
        return BettiTable(dict(self.entries), self.field)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    @classmethod
    def from_rows(cls, rows: dict[int, dict[int, int]], field: str = "F2") -> "BettiTable":
        """From {i: {j: count}}, matching how resolutions are usually written."""
        return cls({(i, j): c for i, row in rows.items() for j, c in row.items()}, field)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def totals(self) -> list[int]:
        out = [0] * (self.length + 1)
        for (i, _), c in self.entries.items():
            out[i] += c
        return out

    def row(self, i: int) -> dict[int, int]:
        return {j: c for (k, j), c in sorted(self.entries.items()) if k == i}

    def is_linear(self) -> bool:
        shifts = {j - i for i, j in self.entries}
        return len(shifts) <= 1

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "entries": [[i, j, c] for (i, j), c in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        return cls({(int(i), int(j)): int(c) for i, j, c in data["entries"]}, field_tag(data["field"]))

    def render(self) -> str:
        """Macaulay2-style grid: column i, row j - i, zero shown as '.'."""
        if not self.entries:
            return "total: (zero ideal)"
        cols = range(self.length + 1)
        shifts = sorted({j - i for i, j in self.entries})
        lo, hi = shifts[0], shifts[-1]
        totals = self.totals()
        cells = [[""] + [str(i) for i in cols], ["total:"] + [str(t) for t in totals]]
        for s in range(lo, hi + 1):
            cells.append([f"{s}:"] + [str(self[i, i + s]) if self[i, i + s] else "." for i in cols])
        width = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
        return "\n".join(" ".join(r[c].rjust(width[c]) for c in range(len(r))) for r in cells)

    def __str__(self):
        return self.render()


def total_betti(T: BettiTable) -> list[int]:
    return T.totals()


def lcm_lattice(gens: Sequence[int]) -> set[int]:
    """All unions of nonempty subsets of the generator supports."""
    closure = set(gens)
    frontier = list(closure)
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = s | g
                if t != s and t not in closure:
                    closure.add(t)
                    nxt.append(t)
        frontier = nxt
    return closure


def koszul_complex(I: SquarefreeIdeal, sigma: int) -> AbstractComplex:
    """Upper Koszul simplicial complex of I in squarefree degree sigma."""
    return AbstractComplex.from_faces(sigma & ~g for g in I.gens if g & sigma == g)


def koszul_facets(gens: Iterable[int], sigma: int) -> list[int]:
    return [sigma & ~g for g in gens if g & sigma == g]


def multigraded_betti_at(gens: Sequence[int], sigma: int, tag: str) -> list[int]:
    """[beta_{0,sigma}, beta_{1,sigma}, ...] (trailing zeros allowed)."""
    facets = koszul_facets(gens, sigma)
    if not facets:
        return []
    union = 0
    for g in gens:
        if g & sigma == g:
            union |= g
    if union != sigma:
        return []
    return reduced_betti_of_facets(facets, tag)


def multigraded_betti(I: SquarefreeIdeal, field: str = "F2") -> dict[int, list[int]]:
    """Nonzero multigraded Betti numbers: sigma -> [beta_{0,sigma}, beta_{1,sigma}, ...]."""
    tag = field_tag(field)
    _check_not_unit(I)
    out = {}
    for sigma in sorted(lcm_lattice(I.gens)):
        b = multigraded_betti_at(I.gens, sigma, tag)
        if any(b):
            out[sigma] = b
    return out


def _check_not_unit(I: SquarefreeIdeal):
    if I.is_unit:
        raise UnitIdealError("Betti numbers of the unit ideal are not computed by the oracle")


def _chunk_betti(args) -> dict[tuple[int, int], int]:
    gens, sigmas, tag = args
    acc: dict[tuple[int, int], int] = defaultdict(int)
    for sigma in sigmas:
        b = multigraded_betti_at(gens, sigma, tag)
        j = popcount(sigma)
        for i, c in enumerate(b):
            if c:
                acc[i, j] += c
    return dict(acc)


# The compiled engine enumerates the lcm lattice with a table over all
# supports, so it is only used when the ideal involves few enough variables.
KERNEL_TABLE_VARS = 25


def _compress(gens: Sequence[int]) -> list[int]:
    """Renumber the variables occurring in ``gens`` as 0, 1, 2, ..."""
    support = 0
    for g in gens:
        support |= g
    pos = {v: k for k, v in enumerate(bits(support))}
    out = []
    for g in gens:
        m = 0
        for v in bits(g):
            m |= 1 << pos[v]
        out.append(m)
    return out


def _kernel_chunk(args):
    import numpy as np

    from ._kernel import betti_over_sigmas

    gens, dual, sigmas, maxlen = args
    t2, t3, tq, pending = betti_over_sigmas(
        np.asarray(gens, dtype=np.int64),
        np.asarray(dual, dtype=np.int64),
        np.asarray(sigmas, dtype=np.int64),
        maxlen,
    )
    return t2, t3, tq, [int(s) for s in np.asarray(sigmas)[pending]]


def _kernel_sigmas(gens: list[int], nvars: int):
    import numpy as np

    if nvars <= KERNEL_TABLE_VARS:
        from ._kernel import lattice_members

        member = lattice_members(np.asarray(gens, dtype=np.int64), nvars)
        return np.flatnonzero(member).astype(np.int64)
    return np.asarray(sorted(lcm_lattice(gens)), dtype=np.int64)


@lru_cache(maxsize=64)
def _kernel_tables(gens: tuple[int, ...], threads: int = 1) -> dict[str, BettiTable]:
    cgens = _compress(gens)
    nvars = max(cgens).bit_length()
    sigmas = _kernel_sigmas(cgens, nvars)
    dual = list(minimal_transversals(cgens))
    if threads > 1 and len(sigmas) > 4096:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [(cgens, dual, sigmas[k::threads], nvars) for k in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_kernel_chunk, chunks))
    else:
        parts = [_kernel_chunk((cgens, dual, sigmas, nvars))]
    sums = [sum(part[f] for part in parts) for f in range(3)]
    pending = sorted(s for part in parts for s in part[3])
    tables = {}
    for tag, arr in zip(FIELDS, sums):
        entries = {(int(i), int(j)): int(arr[i, j]) for i, j in zip(*arr.nonzero())}
        tables[tag] = entries
    # rational homology where neither prime settled it: exact elimination
    for key, c in _chunk_betti((tuple(cgens), pending, "Q")).items():
        tables["Q"][key] = tables["Q"].get(key, 0) + c
    return {tag: BettiTable(entries, tag) for tag, entries in tables.items()}


def _use_kernel(engine: str) -> bool:
    if engine == "python":
        return False
    if engine not in ("auto", "kernel"):
        raise ValueError(f"unknown engine {engine!r}")
    if importlib.util.find_spec("numba") is None:
        if engine == "kernel":
            raise ImportError("the compiled kernel needs numba")
        return False
    return True


def betti_tables(I: SquarefreeIdeal, threads: int = 1, engine: str = "auto") -> dict[str, BettiTable]:
    """Graded Betti tables of I over F2, F3 and Q, computed in one pass."""
    _check_not_unit(I)
    if I.is_zero:
        return {tag: BettiTable({}, tag) for tag in FIELDS}
    if _use_kernel(engine):
        return {tag: t.copy() for tag, t in _kernel_tables(I.gens, threads).items()}
    return {tag: _python_table(I, tag, threads) for tag in FIELDS}


def graded_betti(I: SquarefreeIdeal, field: str = "F2", threads: int = 1, engine: str = "auto") -> BettiTable:
    """Graded Betti table of I over ``field`` (F2, F3 or Q).

    ``engine`` selects the compiled kernel (``"kernel"``), the pure Python
    reference (``"python"``) or the kernel when numba is importable
    (``"auto"``).  With ``threads > 1`` the multidegrees are split across
    worker processes; the table does not depend on how the work is divided.
    """
    tag = field_tag(field)
    _check_not_unit(I)
    if I.is_zero:
        return BettiTable({}, tag)
    if _use_kernel(engine):
        return _kernel_tables(I.gens, threads)[tag].copy()
    return _python_table(I, tag, threads)


def _python_table(I: SquarefreeIdeal, tag: str, threads: int) -> BettiTable:
    sigmas = sorted(lcm_lattice(I.gens))
    if threads > 1 and len(sigmas) > 256:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [sigmas[k::threads] for k in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_chunk_betti, [(I.gens, c, tag) for c in chunks]))
    else:
        parts = [_chunk_betti((I.gens, sigmas, tag))]
    acc: dict[tuple[int, int], int] = defaultdict(int)
    for part in parts:
        for k, v in part.items():
            acc[k] += v
    return BettiTable(dict(acc), tag)


def has_linear_resolution(I: SquarefreeIdeal, field: str = "F2", table: BettiTable | None = None) -> bool:
    if I.is_unit:
        # the unit ideal is free of rank one
        return True
    degs = set(I.degrees())
    if len(degs) > 1:
        # generators in two degrees already rule out a single linear strand
        return False
    if not degs:
        return True
    d = degs.pop()
    T = table if table is not None else graded_betti(I, field)
    return all(j == i + d for i, j in T.entries)


def load_table(path) -> BettiTable:
    with open(path) as fh:
        return BettiTable.from_json(json.load(fh))
