"""Acceptance checks: each criterion is a function returning a
:class:`CriterionResult`, shared by ``bettisplit verify paper`` and the test
suite.  Oracle tables for the poset corpus are computed once per run and
reused by the criteria that need them.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from .clutter import h_pd_generators, j_alpha, r_alpha, row_mask, theorem_decomposition, var
from .corpus import dunce_hat, hachimori, rudin_ball
from .ideal import (
    SquarefreeIdeal,
    find_linear_quotients_order,
    ideal_sum,
    intersect,
    multiply_monomial,
    scale_by_variables,
)
from .oracle import BettiTable, betti_tables, graded_betti, has_linear_resolution
from .poset import (
    Poset,
    chain,
    downsets,
    downsets_containing,
    max_elements,
    order_key,
    popcount,
    posets_up_to_iso,
    random_poset,
)
from .recursion import (
    betti_bipartite_cover,
    betti_recursive,
    betti_unique_max,
    prop_final_formula,
    splitinside_formula,
)
from .simplicial import SimplicialComplex, is_cohen_macaulay
from .splitting import admits_xi_splitting, exhaustive_splitting_search, is_betti_splitting, xi_partition

RANDOM_SEED = 2024
RANDOM_COUNT = 100


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def within_time(self) -> bool:
        return self.limit is None or self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        limit = f" (limit {self.limit:.0f}s)" if self.limit is not None else ""
        extra = ""
        if not self.passed:
            extra = f"  first failure: {self.failures[0]}" if self.failures else ""
        elif not self.within_time:
            extra = "  over the time limit"
        return f"[{status}] criterion {self.number}: {self.title}  {self.seconds:.1f}s{limit}{extra}"


class _Check:
    """Collects failure messages for one criterion."""

    def __init__(self):
        self.failures: list[str] = []
        self.notes: list[str] = []

    def expect(self, cond: bool, message: str):
        if not cond:
            self.failures.append(message)

    def note(self, message: str):
        self.notes.append(message)


def _run(number: int, title: str, limit: float | None, body: Callable[[_Check], None]) -> CriterionResult:
    chk = _Check()
    start = time.monotonic()
    try:
        body(chk)
    except Exception as exc:  # report, do not crash the whole matrix
        chk.failures.append(f"{type(exc).__name__}: {exc}")
    seconds = time.monotonic() - start
    return CriterionResult(number, title, not chk.failures, seconds, limit, chk.failures, chk.notes)


# --- poset corpus -------------------------------------------------------------


def small_posets(max_n: int = 4) -> list[Poset]:
    return [P for n in range(1, max_n + 1) for P in posets_up_to_iso(n)]


def random_posets(count: int = RANDOM_COUNT, seed: int = RANDOM_SEED) -> list[Poset]:
    rng = random.Random(seed)
    return [random_poset(rng.choice((5, 6)), rng) for _ in range(count)]


def poset_corpus(count: int = RANDOM_COUNT, seed: int = RANDOM_SEED) -> list[Poset]:
    return small_posets(4) + random_posets(count, seed)


class OracleCache:
    """Oracle tables over F2, F3 and Q for (poset, d), computed once."""

    def __init__(self, threads: int = 1):
        self.threads = threads
        self.tables: dict[tuple[Poset, int], dict[str, BettiTable]] = {}

    def get(self, P: Poset, d: int) -> dict[str, BettiTable]:
        key = (P, d)
        got = self.tables.get(key)
        if got is None:
            got = self.tables[key] = betti_tables(h_pd_generators(P, d), threads=self.threads)
        return got


def _describe(P: Poset) -> str:
    return f"poset n={P.n} covers={P.to_json()['covers']}"


# --- criteria -----------------------------------------------------------------


def criterion_1() -> CriterionResult:
    def body(chk: _Check):
        E = dunce_hat()
        dual = betti_tables(E.ideal("dual"))
        sr = betti_tables(E.ideal("sr"))
        for tag in ("F2", "F3", "Q"):
            chk.expect(dual[tag] == E.tables["dual"], f"dual table over {tag}: {dual[tag].entries}")
            chk.expect(sr[tag] == E.tables["sr"], f"Stanley-Reisner table over {tag}: {sr[tag].entries}")

    return _run(1, "dunce hat Betti tables of I and I*", 30, body)


def criterion_2(sample: int | None = None) -> CriterionResult:
    def body(chk: _Check):
        E = dunce_hat()
        I = E.ideal("dual")
        chk.expect(len(I.gens) == 17, f"dual ideal has {len(I.gens)} generators")
        res = exhaustive_splitting_search(I, "F2", sample=sample)
        chk.expect(res.candidate is None, "found a splitting of the dual ideal")
        if sample is None:
            chk.expect(res.exhaustive and res.checked == 65535, f"checked {res.checked} partitions")
        chk.note(f"partitions checked: {res.checked}")
        rep = is_betti_splitting(E.ideal("sr"), E.parts["sr_J"], E.parts["sr_K"], "F2")
        chk.expect(rep.is_splitting, f"printed partition fails at {rep.first_violation}")
        chk.expect(rep.J == E.tables["sr_J"], f"J table {rep.J.entries}")
        chk.expect(rep.K == E.tables["sr_K"], f"K table {rep.K.entries}")
        chk.expect(rep.JK == E.tables["sr_JK"], f"J cap K table {rep.JK.entries}")

    return _run(2, "dunce hat: no splitting of I*, printed splitting of I", 900, body)


def criterion_3() -> CriterionResult:
    def body(chk: _Check):
        E = hachimori()
        D = E.complex
        I = E.ideal("dual")
        chk.expect(graded_betti(I) == E.tables["dual"], f"dual table {graded_betti(I).entries}")
        cand = xi_partition(I, 3)
        chk.expect(cand.J == E.parts["dual_J"] and cand.K == E.parts["dual_K"], "x4-partition differs from the printed one")
        rep = admits_xi_splitting(I, 3)
        chk.expect(rep.is_splitting, f"x4-partition fails at {rep.first_violation}")
        chk.expect(rep.J == E.tables["dual_J"], f"x4J table {rep.J.entries}")
        chk.expect(rep.K == E.tables["dual_K"], f"K table {rep.K.entries}")
        chk.expect(rep.JK == E.tables["dual_JK"], f"intersection table {rep.JK.entries}")
        chk.expect(is_cohen_macaulay(D), "complex is not Cohen-Macaulay")
        chk.expect(not D.is_cone(), "complex is a cone")
        for v in range(1, 8):
            chk.expect(not is_cohen_macaulay(D.deletion(v)), f"deletion of {v} is Cohen-Macaulay")
        from .simplicial import is_weakly_vertex_decomposable

        chk.expect(not is_weakly_vertex_decomposable(D)[0], "complex reported weakly vertex decomposable")

    return _run(3, "Hachimori: table, x4-splitting, CM but not WVD", 60, body)


def criterion_4() -> CriterionResult:
    def body(chk: _Check):
        E = rudin_ball()
        D = E.complex
        chk.expect(len(D.facets) == 41 and D.n == 14 and D.is_pure() and D.dim == 3, "facet data")
        I = E.ideal("dual")
        T = graded_betti(I, "F2")
        chk.expect(T == E.tables["dual"], f"dual table {T.entries}")
        for v in range(14):
            rep = admits_xi_splitting(I, v, "F2")
            chk.expect(not rep.is_splitting, f"x{v + 1}-partition is a splitting")
        rep = is_betti_splitting(I, E.parts["dual_J"], E.parts["dual_K"], "F2")
        chk.expect(rep.is_splitting, f"printed decomposition fails at {rep.first_violation}")
        chk.expect(rep.J == E.tables["dual_J"], f"first part table {rep.J.entries}")
        chk.expect(rep.K == E.tables["dual_K"], f"second part table {rep.K.entries}")
        chk.expect(rep.JK == E.tables["dual_JK"], f"intersection table {rep.JK.entries}")

    return _run(4, "Rudin's ball: table, no x_i-splitting, printed splitting", 600, body)


def criterion_5(cache: OracleCache, corpus: list[Poset]) -> CriterionResult:
    def body(chk: _Check):
        for P in corpus:
            for d in (2, 3, 4):
                rec = list(betti_recursive(P, d).values)
                tables = cache.get(P, d)
                for tag in ("F2", "Q"):
                    got = tables[tag].totals()
                    chk.expect(got == rec, f"{_describe(P)} d={d} {tag}: oracle {got} vs recursion {rec}")
        chk.note(f"{len(corpus)} posets x d in (2, 3, 4)")

    return _run(5, "recursion equals oracle totals (F2 and Q)", 600, body)


def criterion_6(cache: OracleCache, corpus: list[Poset]) -> CriterionResult:
    def body(chk: _Check):
        point = chain(1)
        for d in range(1, 7):
            want = [comb(d, i + 1) for i in range(d)]
            got = list(betti_recursive(point, d).values)
            chk.expect(got == want, f"single point d={d}: {got}")
            if d >= 2:
                oracle = graded_betti(h_pd_generators(point, d)).totals()
                chk.expect(oracle == want, f"single point d={d} oracle: {oracle}")
        for P in corpus:
            if popcount(max_elements(P, P.full)) == 1:
                for d in (2, 3, 4):
                    a, b = betti_unique_max(P, d).values, betti_recursive(P, d).values
                    chk.expect(a == b, f"{_describe(P)} d={d}: unique-max {a} vs {b}")
            bip = betti_bipartite_cover(P).values
            chk.expect(bip == betti_recursive(P, 2).values, f"{_describe(P)}: bipartite {bip}")
            n_down = len(downsets(P))
            chk.expect(bip[0] == n_down, f"{_describe(P)}: beta_0 {bip[0]} vs {n_down} downsets")
            chk.expect(cache.get(P, 2)["F2"].totals()[0] == n_down, f"{_describe(P)}: oracle beta_0")

    return _run(6, "base case and closed-form totals", 60, body)


def _ideal_eq(A: SquarefreeIdeal, B: SquarefreeIdeal) -> bool:
    return A.gens == B.gens


def structural_checks(P: Poset, d: int, chk: _Check):
    """Inclusion lemma, decomposition, intersection identity, partial sums,
    and the convolution formula for n*H, for one poset and d >= 2."""
    n = P.n
    top = n - 1
    rows = d
    last_row_var = lambda cols: row_mask(n, d - 1, cols)  # noqa: E731
    alphas = sorted(downsets_containing(P, top), key=order_key)
    rest = h_pd_generators(P, d, P.full & ~(1 << top))
    J = {a: j_alpha(P, a, d) for a in alphas}
    H = {}

    def h(S: int, dd: int) -> SquarefreeIdeal:
        key = (S, dd)
        if key not in H:
            H[key] = h_pd_generators(P, dd, S, rows)
        return H[key]

    tag = f"{_describe(P)} d={d}"
    # (i) J_alpha inside H_{P - p_n, d}
    for a in alphas:
        chk.expect(all(rest.contains(g) for g in J[a].gens), f"{tag}: J_alpha not inside H_(P-p_n)")
    for a in alphas:
        for c in alphas:
            # (ii) H_alpha cap H_gamma = H_(alpha cup gamma)
            chk.expect(_ideal_eq(intersect(h(a, d), h(c, d)), h(a | c, d)), f"{tag}: H intersection {a:b} {c:b}")
            # (iii) J_alpha cap J_gamma = x_d(P - alpha cap gamma) H_(alpha cup gamma, d-1)
            want = multiply_monomial(last_row_var(P.full & ~(a & c)), h(a | c, d - 1))
            chk.expect(_ideal_eq(intersect(J[a], J[c]), want), f"{tag}: J intersection {a:b} {c:b}")

    # disjoint cover by x_{dn} H_{P - p_n, d} and the J_alpha
    dec = theorem_decomposition(P, d)
    gens = dec.all_generators()
    full = h_pd_generators(P, d)
    chk.expect(len(gens) == len(set(gens)) and set(gens) == set(full.gens), f"{tag}: decomposition is not a disjoint cover")

    # intersection identity: J_alpha cap (earlier J's) = J_alpha cap (R_alpha J's)
    # = (x_dj : p_j in Max(alpha), j != n) J_alpha, with |R_alpha| = |Max(alpha)| - 1
    for k, a in enumerate(alphas):
        if k == 0:
            continue
        earlier = J[alphas[0]]
        for b in alphas[1:k]:
            earlier = ideal_sum(earlier, J[b])
        R = r_alpha(P, a)
        m = popcount(max_elements(P, a))
        chk.expect(len(R) == m - 1, f"{tag}: |R_alpha| = {len(R)} for |Max| = {m}")
        lhs = intersect(J[a], earlier)
        if R:
            rsum = J[R[0]]
            for g in R[1:]:
                rsum = ideal_sum(rsum, J[g])
            chk.expect(_ideal_eq(lhs, intersect(J[a], rsum)), f"{tag}: R_alpha identity at {a:b}")
            colon = [var(n, d - 1, p) for p in range(n) if (max_elements(P, a) & ~(1 << top)) >> p & 1]
            chk.expect(_ideal_eq(lhs, scale_by_variables(colon, J[a])), f"{tag}: colon-variable form at {a:b}")
        else:
            chk.expect(lhs.is_zero, f"{tag}: empty R_alpha but nonzero intersection")

    # partial sums in the order on I(P, p_n) have linear quotients
    acc = None
    for a in alphas:
        acc = J[a] if acc is None else ideal_sum(acc, J[a])
        chk.expect(find_linear_quotients_order(acc) is not None, f"{tag}: partial sum up to {a:b} lacks linear quotients")
    # ... and the sum has the predicted Betti numbers
    got = graded_betti(acc).totals()
    chk.expect(got == list(prop_final_formula(P, d).values), f"{tag}: sum of J_alpha has {got}")


def splitinside_check(P: Poset, d: int, k: int, chk: _Check):
    """(y_1..y_k) * H_{P,d} in a ring with k extra variables."""
    base = h_pd_generators(P, d)
    names = base.variables + tuple(f"w{s + 1}" for s in range(k))
    I = SquarefreeIdeal(base.gens, names)
    ys = [base.nvars + s for s in range(k)]
    scaled = scale_by_variables(ys, I)
    got = graded_betti(scaled).totals()
    want = splitinside_formula(k, list(betti_recursive(P, d).values))
    chk.expect(got == want, f"{_describe(P)} d={d} k={k}: oracle {got} vs convolution {want}")


def random_complexes(count: int, n: int = 5, seed: int = RANDOM_SEED) -> list[SimplicialComplex]:
    rng = random.Random(seed)
    out = []
    full = (1 << n) - 1
    while len(out) < count:
        size = rng.randint(1, n)
        facets = []
        for _ in range(rng.randint(1, 6)):
            face = 0
            while popcount(face) < size:
                face |= 1 << rng.randrange(n)
            facets.append(face)
        D = SimplicialComplex.from_masks(n, facets)
        if D.facets and D.vertex_mask == full:
            out.append(D)
    return out


def eagon_reiner_check(D: SimplicialComplex, chk: _Check, fields=("F2", "Q"), label: str = ""):
    I = D.alexander_dual_ideal()
    for tag in fields:
        cm = is_cohen_macaulay(D, tag)
        lin = has_linear_resolution(I, tag)
        chk.expect(cm == lin, f"{label or D.facet_lists()} over {tag}: CM {cm} but linear {lin}")


def criterion_7(max_n: int = 5) -> CriterionResult:
    def body(chk: _Check):
        posets = small_posets(max_n)
        for P in posets:
            for d in (2, 3):
                structural_checks(P, d, chk)
        for P in small_posets(4):
            for d in (2, 3):
                for k in (1, 2, 3):
                    splitinside_check(P, d, k, chk)
        for name, make in (("dunce_hat", dunce_hat), ("hachimori", hachimori), ("rudin_ball", rudin_ball)):
            eagon_reiner_check(make().complex, chk, label=name)
        for D in random_complexes(60):
            eagon_reiner_check(D, chk)
        chk.note(f"{len(posets)} posets with n <= {max_n}, d in (2, 3)")

    return _run(7, "structural identities", 600, body)


def criterion_8(cache: OracleCache, corpus: list[Poset]) -> CriterionResult:
    def body(chk: _Check):
        for P in corpus:
            for d in (2, 3, 4):
                t = cache.get(P, d)
                chk.expect(t["F2"] == t["F3"] == t["Q"], f"{_describe(P)} d={d}: tables differ by field")

    return _run(8, "H_{P,d} tables agree over F2, F3 and Q", None, body)


def run_all(sample: int | None = None, threads: int = 1, log: Callable[[str], None] | None = None) -> list[CriterionResult]:
    cache = OracleCache(threads)
    corpus = poset_corpus()
    steps = [
        criterion_1,
        lambda: criterion_2(sample),
        criterion_3,
        criterion_4,
        lambda: criterion_5(cache, corpus),
        lambda: criterion_6(cache, corpus),
        criterion_7,
        lambda: criterion_8(cache, corpus),
    ]
    results = []
    for step in steps:
        res = step()
        results.append(res)
        if log is not None:
            log(res.line())
    return results

