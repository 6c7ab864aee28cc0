"""Betti splittings I = J + K of squarefree monomial ideals.

A partition of the minimal generators G(I) = G(J) u G(K) is a Betti
splitting when

    beta_{i,j}(I) = beta_{i,j}(J) + beta_{i,j}(K) + beta_{i-1,j}(J cap K)

for all i and j.  The short exact sequence 0 -> J cap K -> J + K -> I -> 0
gives a (usually non-minimal) resolution of I by a mapping cone, which
holds multidegree by multidegree, so the left side never exceeds the right.
The exhaustive search uses this to reject a partition at the first
squarefree degree sigma where the two sides differ; a partition that
survives every sigma is then checked again on full graded tables.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Sequence

from .homology import field_tag
from .ideal import SquarefreeIdeal, intersect, intersect_supports
from .oracle import BettiTable, graded_betti, lcm_lattice, multigraded_betti_at
from .poset import bits, popcount

MAX_SEARCH_GENERATORS = 24


class PartitionError(ValueError):
    """J and K do not split the minimal generators of I disjointly."""


class SearchCapExceeded(ValueError):
    pass


@dataclass
class SplitReport:
    is_splitting: bool
    field: str
    I: BettiTable
    J: BettiTable
    K: BettiTable
    JK: BettiTable
    first_violation: tuple[int, int] | None = None
    degenerate: bool = False
    variable: int | None = None

    def to_json(self) -> dict:
        out = {
            "is_splitting": self.is_splitting,
            "field": self.field,
            "first_violation": list(self.first_violation) if self.first_violation else None,
            "degenerate": self.degenerate,
            "tables": {
                "I": self.I.to_json(),
                "J": self.J.to_json(),
                "K": self.K.to_json(),
                "J_cap_K": self.JK.to_json(),
            },
        }
        if self.variable is not None:
            out["variable"] = self.variable
        return out

    def render(self, names: Sequence[str] | None = None) -> str:
        head = "Betti splitting" if self.is_splitting else "not a Betti splitting"
        if self.degenerate:
            head = "degenerate partition (one part is zero): not a splitting candidate"
        if self.variable is not None and names is not None:
            head += f"  [variable {names[self.variable]}]"
        if self.first_violation:
            head += f"  first violation at (i, j) = {self.first_violation}"
        blocks = [head, f"field: {self.field}"]
        for label, T in (("I", self.I), ("J", self.J), ("K", self.K), ("J cap K", self.JK)):
            blocks.append(f"-- {label}\n{T.render()}")
        return "\n".join(blocks)


@dataclass(frozen=True)
class SplitCandidate:
    """A partition of G(I); for an x_i-partition ``J`` is the scaled part x_i J
    and ``quotient`` is J itself, the generators with x_i removed."""

    J: SquarefreeIdeal
    K: SquarefreeIdeal
    provenance: str = "explicit"
    variable: int | None = None
    quotient: SquarefreeIdeal | None = None


def check_partition(I: SquarefreeIdeal, J: SquarefreeIdeal, K: SquarefreeIdeal):
    if not (I.variables == J.variables == K.variables):
        raise PartitionError("I, J and K must share one variable set")
    gj, gk = set(J.gens), set(K.gens)
    if gj & gk:
        raise PartitionError("J and K share a generator")
    if gj | gk != set(I.gens):
        raise PartitionError("G(J) and G(K) do not cover exactly the minimal generators of I")


def splitting_identity_violation(
    TI: BettiTable, TJ: BettiTable, TK: BettiTable, TJK: BettiTable
) -> tuple[int, int] | None:
    """First (i, j) in lexicographic order where the splitting identity fails."""
    keys = set(TI.entries) | set(TJ.entries) | set(TK.entries) | {(i + 1, j) for i, j in TJK.entries}
    for i, j in sorted(keys):
        if TI[i, j] != TJ[i, j] + TK[i, j] + TJK[i - 1, j]:
            return (i, j)
    return None


def _table(I: SquarefreeIdeal, tag: str, threads: int) -> BettiTable:
    if I.is_zero:
        return BettiTable({}, tag)
    return graded_betti(I, tag, threads=threads)


def is_betti_splitting(
    I: SquarefreeIdeal, J: SquarefreeIdeal, K: SquarefreeIdeal, field: str = "F2", threads: int = 1
) -> SplitReport:
    tag = field_tag(field)
    check_partition(I, J, K)
    TI, TJ, TK = (_table(X, tag, threads) for X in (I, J, K))
    TJK = _table(intersect(J, K), tag, threads)
    bad = splitting_identity_violation(TI, TJ, TK, TJK)
    return SplitReport(bad is None, tag, TI, TJ, TK, TJK, bad)


def xi_partition(I: SquarefreeIdeal, v: int) -> SplitCandidate:
    """I = x_v J + K: generators divisible by x_v against the rest."""
    if not 0 <= v < I.nvars:
        raise ValueError(f"variable index {v} out of range")
    bit = 1 << v
    scaled = tuple(g for g in I.gens if g & bit)
    rest = tuple(g for g in I.gens if not g & bit)
    quotient = SquarefreeIdeal.from_gens((g & ~bit for g in scaled), I.variables)
    return SplitCandidate(
        SquarefreeIdeal(scaled, I.variables),
        SquarefreeIdeal(rest, I.variables),
        "xi-partition",
        v,
        quotient,
    )


def admits_xi_splitting(I: SquarefreeIdeal, v: int, field: str = "F2", threads: int = 1) -> SplitReport:
    cand = xi_partition(I, v)
    if cand.J.is_zero or cand.K.is_zero:
        tag = field_tag(field)
        empty = BettiTable({}, tag)
        TI = _table(I, tag, threads)
        TJ = _table(cand.J, tag, threads)
        TK = _table(cand.K, tag, threads)
        return SplitReport(False, tag, TI, TJ, TK, empty, None, degenerate=True, variable=v)
    report = is_betti_splitting(I, cand.J, cand.K, field, threads)
    report.variable = v
    return report


def xi_splitting_vertices(I: SquarefreeIdeal, field: str = "F2", threads: int = 1) -> list[int]:
    return [v for v in range(I.nvars) if admits_xi_splitting(I, v, field, threads).is_splitting]


# --- sufficient conditions ----------------------------------------------------


class Sufficiency(str, Enum):
    BOTH_LINEAR = "both_linear"
    XI_WITH_LINEAR_J = "xi_with_linear_J"
    NONE = "none"


def separating_variable(J: SquarefreeIdeal, K: SquarefreeIdeal) -> int | None:
    """A variable dividing every generator of J and no generator of K."""
    if J.is_zero:
        return None
    common = -1
    for g in J.gens:
        common &= g
    for g in K.gens:
        common &= ~g
    for v in bits(common & ((1 << J.nvars) - 1)):
        return v
    return None


def _linear(I: SquarefreeIdeal, tag: str) -> bool:
    if I.is_zero or len(set(I.degrees())) != 1:
        return False
    return graded_betti(I, tag).is_linear()


def splitting_sufficiency(
    I: SquarefreeIdeal, J: SquarefreeIdeal, K: SquarefreeIdeal, field: str = "F2"
) -> Sufficiency:
    """Which classical sufficient condition for a Betti splitting applies.

    ``xi_with_linear_J``: J is an x_i-part (x_i divides all of G(J) and none
    of G(K)) with a linear resolution.  ``both_linear``: J and K both have
    linear resolutions.  The x_i form is reported first when both hold.
    """
    tag = field_tag(field)
    check_partition(I, J, K)
    if separating_variable(J, K) is not None and _linear(J, tag):
        return Sufficiency.XI_WITH_LINEAR_J
    if _linear(J, tag) and _linear(K, tag):
        return Sufficiency.BOTH_LINEAR
    return Sufficiency.NONE


# --- exhaustive search -------------------------------------------------------


@dataclass
class SearchResult:
    candidate: SplitCandidate | None
    exhaustive: bool
    checked: int
    total: int
    verified_field: str | None = None
    stopped_by: str | None = None
    witness_report: SplitReport | None = field(default=None, repr=False)

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        out = {
            "found": self.candidate is not None,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "total": self.total,
            "stopped_by": self.stopped_by,
        }
        if self.candidate is not None:
            out["J"] = self.candidate.J.to_json()["generators"]
            out["K"] = self.candidate.K.to_json()["generators"]
            out["verified_over"] = self.verified_field
        return out


def gray_masks(width: int) -> Iterator[int]:
    """All nonzero masks on ``width`` bits, successive ones differing in one bit."""
    for k in range(1, 1 << width):
        yield k ^ (k >> 1)


class _MultigradedChecker:
    """Per-sigma comparison of the splitting identity with a bounded memo.

    The multigraded Betti numbers of J, K and J cap K at sigma depend only on
    which generators of I dividing x^sigma went to J, so that restricted
    mask (together with sigma) is the memo key.
    """

    def __init__(self, I: SquarefreeIdeal, tag: str, cache_size: int = 10**5):
        self.gens = I.gens
        self.tag = tag
        self.sigmas = sorted(lcm_lattice(I.gens), key=lambda s: (popcount(s), s))
        self.divides = [sum(1 << k for k, g in enumerate(I.gens) if g & s == g) for s in self.sigmas]
        self.beta_I = [_trim(multigraded_betti_at(I.gens, s, tag)) for s in self.sigmas]
        self.local = lru_cache(maxsize=cache_size)(self._local)

    def _local(self, idx: int, jmask: int) -> tuple[int, ...]:
        s = self.sigmas[idx]
        div = self.divides[idx]
        gj = [g for k, g in enumerate(self.gens) if div >> k & 1 and jmask >> k & 1]
        gk = [g for k, g in enumerate(self.gens) if div >> k & 1 and not jmask >> k & 1]
        bj = multigraded_betti_at(gj, s, self.tag) if gj else []
        bk = multigraded_betti_at(gk, s, self.tag) if gk else []
        bjk: list[int] = []
        if gj and gk:
            meet = [m for m in intersect_supports(gj, gk) if m & s == m]
            bjk = multigraded_betti_at(meet, s, self.tag)
        size = max(len(bj), len(bk), len(bjk) + 1)
        out = [0] * size
        for i, c in enumerate(bj):
            out[i] += c
        for i, c in enumerate(bk):
            out[i] += c
        for i, c in enumerate(bjk):
            out[i + 1] += c
        return _trim(out)

    def passes(self, jmask: int) -> bool:
        for idx in range(len(self.sigmas)):
            if self.local(idx, jmask & self.divides[idx]) != self.beta_I[idx]:
                return False
        return True


def _trim(values) -> tuple[int, ...]:
    out = list(values)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _candidate(I: SquarefreeIdeal, jmask: int) -> SplitCandidate:
    gj = tuple(g for k, g in enumerate(I.gens) if jmask >> k & 1)
    gk = tuple(g for k, g in enumerate(I.gens) if not jmask >> k & 1)
    return SplitCandidate(SquarefreeIdeal(gj, I.variables), SquarefreeIdeal(gk, I.variables))


def exhaustive_splitting_search(
    I: SquarefreeIdeal,
    field: str = "F2",
    budget: int | None = None,
    budget_secs: float | None = None,
    sample: int | None = None,
    seed: int = 0,
    verify_field: str = "Q",
    cache_size: int = 10**5,
) -> SearchResult:
    """Look for a Betti splitting among the unordered partitions of G(I).

    The last generator always stays in K, so each unordered pair {J, K} is
    met once; with N generators there are 2^(N-1) - 1 of them, visited in
    Gray-code order.  ``budget`` caps the number of partitions examined and
    ``budget_secs`` the wall time; ``sample`` examines that many random
    partitions instead.  A partition passing every multidegree is confirmed
    on full tables over ``verify_field`` before it is returned.
    """
    tag = field_tag(field)
    n = len(I.gens)
    if n > MAX_SEARCH_GENERATORS:
        raise SearchCapExceeded(f"{n} generators exceed the search cap of {MAX_SEARCH_GENERATORS}")
    total = (1 << (n - 1)) - 1 if n >= 1 else 0
    if total <= 0:
        return SearchResult(None, True, 0, 0)
    checker = _MultigradedChecker(I, tag, cache_size)
    if sample is not None:
        rng = random.Random(seed)
        masks: Iterator[int] = (rng.randrange(1, total + 1) for _ in range(sample))
    else:
        masks = gray_masks(n - 1)
    start = time.monotonic()
    checked = 0
    for jmask in masks:
        if budget is not None and checked >= budget:
            return SearchResult(None, False, checked, total, stopped_by="budget")
        if budget_secs is not None and time.monotonic() - start > budget_secs:
            return SearchResult(None, False, checked, total, stopped_by="time")
        checked += 1
        if not checker.passes(jmask):
            continue
        cand = _candidate(I, jmask)
        report = is_betti_splitting(I, cand.J, cand.K, field_tag(verify_field))
        if report.is_splitting:
            return SearchResult(cand, False, checked, total, field_tag(verify_field), None, report)
    exhaustive = sample is None
    return SearchResult(None, exhaustive, checked, total, stopped_by=None if exhaustive else "sample")
