"""Finite simplicial complexes and their squarefree ideals.

Vertices are 1..n in the public interface and bits 0..n-1 internally; a face
is a bitmask.  The complex {emptyset} (one facet, the empty face) is kept
apart from the void complex (no faces at all).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from .homology import all_faces, field_tag, maximal_faces, reduced_betti_of_facets
from .ideal import SquarefreeIdeal, minimal_transversals
from .poset import bits, popcount


class NotPureError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    pass


def _mask(face: Iterable[int]) -> int:
    m = 0
    for v in face:
        v = int(v)
        if v < 1:
            raise ValueError(f"vertices are numbered from 1, got {v}")
        m |= 1 << (v - 1)
    return m


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    facets: tuple[int, ...]

    def __post_init__(self):
        if any(f >> self.n for f in self.facets):
            raise ValueError("facet uses a vertex beyond n")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, maximal_faces(_mask(f) for f in facets))

    @classmethod
    def from_masks(cls, n: int, facets: Iterable[int]) -> "SimplicialComplex":
        return cls(n, maximal_faces(facets))

    @classmethod
    def from_nonfaces(cls, n: int, nonfaces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """The complex whose minimal nonfaces are the given sets: a set is a
        face exactly when its complement meets every nonface."""
        masks = [_mask(f) for f in nonfaces]
        full = (1 << n) - 1
        if not masks:
            return cls(n, (full,))
        return cls(n, maximal_faces(full & ~t for t in minimal_transversals(masks)))

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        return cls.from_facets(int(data["vertices"]), data["facets"])

    def to_json(self) -> dict:
        return {"vertices": self.n, "facets": self.facet_lists()}

    def facet_lists(self) -> list[list[int]]:
        return [[v + 1 for v in bits(f)] for f in self.facets]

    # -- basic data ----------------------------------------------------------

    @cached_property
    def faces(self) -> frozenset[int]:
        return frozenset(all_faces(self.facets))

    @property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.facets:
            out |= f
        return out

    @property
    def vertices(self) -> list[int]:
        return [v + 1 for v in bits(self.vertex_mask)]

    @property
    def dim(self) -> int:
        if not self.facets:
            return -2
        return max(popcount(f) for f in self.facets) - 1

    @property
    def is_void(self) -> bool:
        return not self.facets

    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) <= 1

    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def cone_apexes(self) -> list[int]:
        common = -1
        for f in self.facets:
            common &= f
        if not self.facets:
            return []
        return [v + 1 for v in bits(common)]

    def is_cone(self) -> bool:
        return bool(self.cone_apexes())

    def __contains__(self, face) -> bool:
        m = face if isinstance(face, int) else _mask(face)
        return any(m & f == m for f in self.facets)

    # -- operations ---------------------------------------------------------

    def link(self, v: int) -> "SimplicialComplex":
        return self.link_of_face(1 << (v - 1))

    def link_of_face(self, sigma: int) -> "SimplicialComplex":
        return SimplicialComplex(self.n, maximal_faces(f & ~sigma for f in self.facets if f & sigma == sigma))

    def deletion(self, v: int) -> "SimplicialComplex":
        bit = 1 << (v - 1)
        return SimplicialComplex(self.n, maximal_faces(f & ~bit for f in self.facets))

    def reduced_homology(self, field: str = "F2") -> list[int]:
        """dim H~_r for r = -1, 0, ..., dim (list index r + 1)."""
        return reduced_betti_of_facets(self.facets, field_tag(field))

    # -- ideals ---------------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))

    def stanley_reisner_ideal(self) -> SquarefreeIdeal:
        """Generated by the minimal nonfaces: the minimal sets meeting every
        facet complement."""
        full = (1 << self.n) - 1
        if not self.facets:
            return SquarefreeIdeal((0,), self.variables)
        comps = [full & ~f for f in self.facets]
        if 0 in comps:
            return SquarefreeIdeal((), self.variables)
        return SquarefreeIdeal(minimal_transversals(comps), self.variables)

    def alexander_dual_ideal(self) -> SquarefreeIdeal:
        """Generated by the facet complements x_{[n] - F}."""
        full = (1 << self.n) - 1
        return SquarefreeIdeal.from_gens((full & ~f for f in self.facets), self.variables)

    def dual_ideal_without(self, v: int) -> SquarefreeIdeal:
        """Facet complements taken inside the vertex set [n] - {v}."""
        full = ((1 << self.n) - 1) & ~(1 << (v - 1))
        return SquarefreeIdeal.from_gens((full & ~f for f in self.facets), self.variables)


def load_complex(path) -> SimplicialComplex:
    with open(path) as fh:
        return SimplicialComplex.from_json(json.load(fh))


def simplex(vertices: Sequence[int], n: int | None = None) -> SimplicialComplex:
    n = max(vertices, default=0) if n is None else n
    return SimplicialComplex.from_facets(n, [vertices])


# --- recursive properties ------------------------------------------------------


def canonical_key(facets: Sequence[int]) -> tuple[int, ...]:
    """Relabel the vertices in use by (degree, facet-size profile, label) and
    return the sorted relabelled facets.

    The relabelling is a bijection, so equal keys always mean isomorphic
    complexes and every cached answer is valid; the refinement only has to
    be cheap, not canonical.
    """
    verts = 0
    for f in facets:
        verts |= f
    profile = {}
    for v in bits(verts):
        sizes = sorted(popcount(f) for f in facets if f >> v & 1)
        profile[v] = (len(sizes), tuple(sizes), v)
    order = sorted(profile, key=profile.get)
    pos = {v: k for k, v in enumerate(order)}
    out = []
    for f in facets:
        m = 0
        for v in bits(f):
            m |= 1 << pos[v]
        out.append(m)
    return tuple(sorted(out))


@dataclass
class ComplexAnalyzer:
    """Memoised Cohen-Macaulay, weak vertex decomposability, vertex
    decomposability and non-evasiveness tests, keyed by relabelled facets."""

    field: str = "F2"
    budget: int | None = None
    calls: int = 0
    _cm: dict = dc_field(default_factory=dict)
    _wvd: dict = dc_field(default_factory=dict)
    _vd: dict = dc_field(default_factory=dict)
    _ne: dict = dc_field(default_factory=dict)
    _hom: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.field = field_tag(self.field)

    def _tick(self):
        self.calls += 1
        if self.budget is not None and self.calls > self.budget:
            raise BudgetExhausted(f"more than {self.budget} recursive calls")

    def homology(self, facets: tuple[int, ...]) -> list[int]:
        key = canonical_key(facets)
        got = self._hom.get(key)
        if got is None:
            got = self._hom[key] = reduced_betti_of_facets(key, self.field)
        return got

    # Reisner: every link (including the whole complex) has homology only in
    # its top dimension.
    def cohen_macaulay(self, D: SimplicialComplex) -> bool:
        return self._cm_facets(D.facets)

    def _cm_facets(self, facets: tuple[int, ...]) -> bool:
        key = canonical_key(facets)
        got = self._cm.get(key)
        if got is not None:
            return got
        self._tick()
        ok = True
        for sigma in sorted(all_faces(key), key=popcount):
            link = maximal_faces(f & ~sigma for f in key if f & sigma == sigma)
            top = max(popcount(f) for f in link) - 1
            h = self.homology(link)
            # index r + 1 holds H~_r; only r = top may be nonzero
            if any(h[r + 1] for r in range(-1, top) if r + 1 < len(h)):
                ok = False
                break
        self._cm[key] = ok
        return ok

    def weakly_vertex_decomposable(self, D: SimplicialComplex) -> tuple[bool, list]:
        """(verdict, witness).  The witness lists one successful branch as
        (vertex, clause) steps, clause "cone" (Delta is a cone over the
        deletion) or "link" (the deletion is Cohen-Macaulay of full dimension
        and the link continues the branch)."""
        if not D.facets:
            raise ValueError("weak vertex decomposability needs a nonempty complex")
        if not D.is_pure():
            raise NotPureError("weak vertex decomposability is defined for pure complexes")
        if not self._wvd_ok(D.facets):
            return False, []
        witness = []
        facets = D.facets
        while len(facets) > 1:
            v, clause, facets = self._wvd_step(facets)
            witness.append((v + 1, clause))
        return True, witness

    def _wvd_moves(self, facets: tuple[int, ...]):
        """Candidate (vertex, clause, next complex) moves, cheapest first."""
        dim = max(popcount(f) for f in facets) - 1
        verts = 0
        common = -1
        for f in facets:
            verts |= f
            common &= f
        for v in bits(verts):
            bit = 1 << v
            dele = maximal_faces(f & ~bit for f in facets)
            if common & bit:
                yield v, "cone", dele
                continue
            if max(popcount(f) for f in dele) - 1 != dim or not self._cm_facets(dele):
                continue
            yield v, "link", maximal_faces(f & ~bit for f in facets if f & bit)

    def _wvd_step(self, facets: tuple[int, ...]):
        for v, clause, nxt in self._wvd_moves(facets):
            if self._wvd_ok(nxt):
                return v, clause, nxt
        raise AssertionError("no move from a weakly vertex decomposable complex")

    def _wvd_ok(self, facets: tuple[int, ...]) -> bool:
        if len(facets) == 1:
            return True
        key = canonical_key(facets)
        got = self._wvd.get(key)
        if got is not None:
            return got
        self._tick()
        ok = any(self._wvd_ok(nxt) for _, _, nxt in self._wvd_moves(key))
        self._wvd[key] = ok
        return ok

    def vertex_decomposable(self, D: SimplicialComplex) -> bool:
        return self._vd_facets(D.facets)

    def _vd_facets(self, facets: tuple[int, ...]) -> bool:
        if len(facets) <= 1:
            return True
        key = canonical_key(facets)
        got = self._vd.get(key)
        if got is not None:
            return got
        self._tick()
        verts = 0
        for f in facets:
            verts |= f
        ok = False
        for v in bits(verts):
            bit = 1 << v
            dele = maximal_faces(f & ~bit for f in facets)
            link = maximal_faces(f & ~bit for f in facets if f & bit)
            # shedding: no face of the link is a facet of the deletion
            link_faces = all_faces(link)
            if any(f in link_faces for f in dele):
                continue
            if self._vd_facets(link) and self._vd_facets(dele):
                ok = True
                break
        self._vd[key] = ok
        return ok

    def non_evasive(self, D: SimplicialComplex) -> bool:
        return self._ne_facets(D.facets)

    def _ne_facets(self, facets: tuple[int, ...]) -> bool:
        if len(facets) == 1:
            return True
        key = canonical_key(facets)
        got = self._ne.get(key)
        if got is not None:
            return got
        self._tick()
        ok = False
        if max(popcount(f) for f in facets) - 1 >= 1:
            verts = 0
            for f in facets:
                verts |= f
            for v in bits(verts):
                bit = 1 << v
                link = maximal_faces(f & ~bit for f in facets if f & bit)
                if not self._ne_facets(link):
                    continue
                if self._ne_facets(maximal_faces(f & ~bit for f in facets)):
                    ok = True
                    break
        self._ne[key] = ok
        return ok


def is_cohen_macaulay(D: SimplicialComplex, field: str = "F2") -> bool:
    if not D.facets:
        return True
    return ComplexAnalyzer(field).cohen_macaulay(D)


def is_weakly_vertex_decomposable(D: SimplicialComplex, field: str = "F2") -> tuple[bool, list]:
    return ComplexAnalyzer(field).weakly_vertex_decomposable(D)


def is_vertex_decomposable(D: SimplicialComplex, budget: int | None = None) -> bool | None:
    try:
        return ComplexAnalyzer(budget=budget).vertex_decomposable(D)
    except BudgetExhausted:
        return None


def is_non_evasive(D: SimplicialComplex, budget: int | None = 10**5) -> bool | None:
    """True, False, or None when the budget of recursive calls runs out."""
    if not D.facets:
        return False
    try:
        return ComplexAnalyzer(budget=budget).non_evasive(D)
    except BudgetExhausted:
        return None


@dataclass
class BridgeResult:
    vertex: int
    report: object
    decomposition_holds: bool


def weakvd_splitting_bridge(D: SimplicialComplex, field: str = "F2"):
    """For a weakly vertex decomposable complex that is not a cone, return
    the shedding vertex i together with the splitting report for the
    x_i-partition of the dual ideal, after checking that this partition is
    I* = x_i I*(del) + I*(link) with both duals taken on [n] - {i}."""
    from .ideal import ideal_sum, multiply_monomial
    from .splitting import admits_xi_splitting

    if D.is_cone():
        raise ValueError("complex is a cone; delete the apex first (same graded Betti numbers)")
    ok, witness = is_weakly_vertex_decomposable(D, field)
    if not ok:
        raise ValueError("complex is not weakly vertex decomposable")
    v = witness[0][0]
    dele = D.deletion(v)
    I = D.alexander_dual_ideal()
    parts = ideal_sum(
        multiply_monomial(1 << (v - 1), dele.dual_ideal_without(v)), D.link(v).dual_ideal_without(v)
    )
    report = admits_xi_splitting(I, v - 1, field)
    return BridgeResult(v, report, parts == I)
