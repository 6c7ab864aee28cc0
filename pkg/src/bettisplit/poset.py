"""Finite posets, downsets, multichains and poset multideals.

Elements are stored 0-based internally; element ``i`` is ``p_{i+1}`` in the
usual 1-based notation.  Subsets of a poset are Python ``int`` bitmasks with
bit ``i`` standing for element ``i``.  Every :class:`Poset` is labelled by a
linear extension (``p_i < p_j`` implies ``i < j``), so the last element is
always maximal.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class CycleError(ValueError):
    """Raised when the cover relation handed to :func:`ingest_poset` has a cycle."""

    def __init__(self, cycle: Sequence[int]):
        self.cycle = list(cycle)
        super().__init__("cover relation has a cycle: " + " < ".join(f"p{c}" for c in self.cycle))


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True, eq=False)
class Poset:
    """A finite poset labelled by a linear extension.

    ``below[i]`` is the bitmask of all ``q`` with ``q <= p_i`` (reflexive).
    ``original`` maps internal index -> the 1-based label used on ingest, so
    output can be shown in the caller's labels.
    """

    n: int
    below: tuple[int, ...]
    original: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.below) != self.n:
            raise ValueError("below must have one row per element")
        if not self.original:
            object.__setattr__(self, "original", tuple(range(1, self.n + 1)))
        for i, row in enumerate(self.below):
            if not row >> i & 1:
                raise ValueError("order relation must be reflexive")
            if row >> (i + 1):
                raise ValueError("labelling is not a linear extension")
            for j in bits(row):
                if self.below[j] & ~row:
                    raise ValueError("order relation is not transitive")

    def __eq__(self, other):
        return isinstance(other, Poset) and self.below == other.below

    def __hash__(self):
        return hash(self.below)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def above(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for i, row in enumerate(self.below):
            for j in bits(row):
                rows[j] |= 1 << i
        return tuple(rows)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)

    def name(self, i: int) -> str:
        if self.labels:
            return self.labels[i]
        return f"p{i + 1}"

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(a, b)`` (0-based) of the Hasse diagram."""
        out = []
        for b in range(self.n):
            strict = self.below[b] & ~(1 << b)
            for a in bits(strict):
                # a is covered by b iff nothing strictly between them
                if not any(self.below[c] >> a & 1 for c in bits(strict & ~(1 << a))):
                    out.append((a, b))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "covers": [[a + 1, b + 1] for a, b in self.covers()]}


def poset_from_below(below: Sequence[int]) -> Poset:
    return Poset(len(below), tuple(below))


def ingest_poset(n: int, covers: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> Poset:
    """Build a poset from 1-based cover pairs ``(a, b)`` meaning ``p_a < p_b``.

    The transitive closure is taken and elements are relabelled by a
    topological sort (stable on the given labels) so that the result is
    labelled by a linear extension.  ``Poset.original`` records the
    relabelling.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for pair in covers:
        a, b = int(pair[0]), int(pair[1])
        if not (1 <= a <= n and 1 <= b <= n):
            raise ValueError(f"cover ({a}, {b}) out of range 1..{n}")
        if a == b:
            raise CycleError([a, a])
        succ[a - 1].append(b - 1)
        indeg[b - 1] += 1

    # Kahn's algorithm, always taking the smallest available label
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    topo: list[int] = []
    remaining = indeg[:]
    while heap:
        v = heapq.heappop(heap)
        topo.append(v)
        for w in succ[v]:
            remaining[w] -= 1
            if remaining[w] == 0:
                heapq.heappush(heap, w)
    if len(topo) < n:
        raise CycleError(_find_cycle(n, succ, set(topo)))

    new_index = {old: new for new, old in enumerate(topo)}
    below = [1 << i for i in range(n)]
    for old in topo:
        v = new_index[old]
        for w_old in succ[old]:
            w = new_index[w_old]
            # predecessors of v all come earlier in topo, so below[v] is final
            below[w] |= below[v]
    lab = tuple(labels[o] for o in topo) if labels else ()
    return Poset(n, tuple(below), tuple(o + 1 for o in topo), lab)


def _find_cycle(n: int, succ: list[list[int]], done: set[int]) -> list[int]:
    state = {}
    stack_path: list[int] = []

    def dfs(v):
        state[v] = 1
        stack_path.append(v)
        for w in succ[v]:
            if w in done:
                continue
            if state.get(w) == 1:
                k = stack_path.index(w)
                return stack_path[k:] + [w]
            if w not in state:
                found = dfs(w)
                if found:
                    return found
        stack_path.pop()
        state[v] = 2
        return None

    for v in range(n):
        if v not in done and v not in state:
            found = dfs(v)
            if found:
                return [c + 1 for c in found]
    return []


def load_poset(path) -> Poset:
    with open(path) as fh:
        data = json.load(fh)
    return ingest_poset(int(data["n"]), data.get("covers", []), data.get("labels"))


def chain(n: int) -> Poset:
    return ingest_poset(n, [(i, i + 1) for i in range(1, n)])


def antichain(n: int) -> Poset:
    return ingest_poset(n, [])


def six_element_poset() -> Poset:
    """The six-element poset p1<p2, p1<p3, p1<p4, p3<p5, p4<p6."""
    return ingest_poset(6, [(1, 2), (1, 3), (1, 4), (3, 5), (4, 6)])


# --- downsets ---------------------------------------------------------------


def is_downset(P: Poset, mask: int) -> bool:
    return all(P.below[i] & ~mask == 0 for i in bits(mask))


def downsets(P: Poset, within: int | None = None) -> list[int]:
    """All downsets of ``P`` contained in ``within`` (default: all of P).

    ``within`` must itself be a downset; the downsets of that induced subposet
    are then exactly the downsets of ``P`` inside it.  Enumeration is a DFS in
    label order: element ``i`` may be added only if every element strictly
    below it was already added, which the linear-extension labelling makes a
    local check.
    """
    if within is None:
        within = P.full
    elems = list(bits(within))
    below = P.below
    out: list[int] = []

    def rec(k: int, cur: int):
        if k == len(elems):
            out.append(cur)
            return
        i = elems[k]
        rec(k + 1, cur)
        if below[i] & ~(1 << i) & ~cur == 0:
            rec(k + 1, cur | (1 << i))

    rec(0, 0)
    out.sort(key=lambda m: (popcount(m), sorted(bits(m))))
    return out


def downsets_containing(P: Poset, p: int, within: int | None = None) -> list[int]:
    """Downsets containing element ``p`` (0-based)."""
    if not 0 <= p < P.n:
        raise IndexError(f"element index {p} out of range")
    if within is None:
        within = P.full
    if not within >> p & 1:
        return []
    return [D for D in downsets(P, within) if D >> p & 1]


def max_elements(P: Poset, D: int) -> int:
    """Maximal elements of the induced subposet on ``D``."""
    out = 0
    for i in bits(D):
        if not (P.above[i] & D & ~(1 << i)):
            out |= 1 << i
    return out


def principal_downset(P: Poset, gens: int | Iterable[int]) -> int:
    if not isinstance(gens, int):
        gens = mask_of(gens)
    out = 0
    for i in bits(gens):
        out |= P.below[i]
    return out


def order_lt(alpha: int, beta: int) -> bool:
    """The total order used to sequence the J ideals of a recursion step.

    Smaller sets come first; equal sizes are compared by the largest label in
    each side of the symmetric difference.
    """
    if alpha == beta:
        return False
    a, b = popcount(alpha), popcount(beta)
    if a != b:
        return a < b
    return (alpha & ~beta).bit_length() < (beta & ~alpha).bit_length()


def order_key(D: int) -> tuple[int, int]:
    # Equal-size sets: comparing the largest element of each side of the
    # symmetric difference is the same as comparing the masks as integers.
    return (popcount(D), D)


# --- multichains and multideals ---------------------------------------------


def multichains(P: Poset, d: int) -> list[tuple[int, ...]]:
    """All weakly increasing sequences ``(j_1, ..., j_d)`` (0-based)."""
    if d < 1:
        raise ValueError("multichain length must be >= 1")
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]):
        if len(prefix) == d:
            out.append(tuple(prefix))
            return
        last = prefix[-1]
        for j in bits(P.above[last]):
            prefix.append(j)
            rec(prefix)
            prefix.pop()

    for j in range(P.n):
        rec([j])
    return out


def downset_chains(P: Poset, length: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """Chains ``b_1 <= b_2 <= ... <= b_length`` of downsets inside ``within``."""
    if within is None:
        within = P.full
    if length == 0:
        yield ()
        return
    for top in downsets(P, within):
        for rest in downset_chains(P, length - 1, top):
            yield rest + (top,)


def poset_multideals(P: Poset, d: int, within: int | None = None) -> list[tuple[int, ...]]:
    """Poset multideals of degree ``d`` of the induced subposet ``within``.

    Returned as d-tuples of disjoint bitmasks.  They correspond to chains of
    downsets ``b_1 <= ... <= b_{d-1}`` via ``alpha_i = b_i - b_{i-1}``.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if within is None:
        within = P.full
    out = []
    for ch in downset_chains(P, d - 1, within):
        parts = []
        prev = 0
        for b in ch:
            parts.append(b & ~prev)
            prev = b
        parts.append(within & ~prev)
        out.append(tuple(parts))
    return out


def downsets_json(P: Poset, masks: Iterable[int]) -> list[list[int]]:
    return [sorted(P.original[i] for i in bits(m)) for m in masks]


def iter_posets(n: int) -> Iterator[Poset]:
    """Every naturally labelled poset on ``n`` elements (with repetitions up to
    isomorphism).  Row ``i`` of the order is any downset-closed subset of the
    first ``i`` elements, so this is a product of small searches."""

    def rec(rows: list[int]):
        i = len(rows)
        if i == n:
            yield Poset(n, tuple(rows))
            return
        P_sub = Poset(i, tuple(rows)) if i else None
        candidates = downsets(P_sub) if P_sub is not None else [0]
        for D in candidates:
            yield from rec(rows + [D | (1 << i)])

    yield from rec([])


def canonical_form(P: Poset) -> tuple:
    """Isomorphism-invariant key, by brute force over relabellings (small n only)."""
    from itertools import permutations

    best = None
    pairs = [(a, b) for b in range(P.n) for a in bits(P.below[b]) if a != b]
    for perm in permutations(range(P.n)):
        key = tuple(sorted((perm[a], perm[b]) for a, b in pairs))
        if best is None or key < best:
            best = key
    return (P.n, best or ())


def posets_up_to_iso(n: int) -> list[Poset]:
    seen = {}
    for P in iter_posets(n):
        key = canonical_form(P)
        if key not in seen:
            seen[key] = P
    return list(seen.values())


def random_poset(n: int, rng, p: float = 0.5) -> Poset:
    """Random naturally labelled poset: each pair ``i < j`` is a relation
    generator with probability ``p``, then the transitive closure is taken."""
    covers = [(i, j) for j in range(2, n + 1) for i in range(1, j) if rng.random() < p]
    return ingest_poset(n, covers)
