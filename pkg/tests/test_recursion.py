from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettisplit.clutter import build_clutter, edge_ideal, h_pd_generators, theorem_decomposition
from bettisplit.ideal import SquarefreeIdeal, alexander_dual, scale_by_variables
from bettisplit.oracle import betti_tables, graded_betti, total_betti
from bettisplit.poset import (
    antichain,
    chain,
    ingest_poset,
    max_elements,
    popcount,
    posets_up_to_iso,
    random_poset,
    six_element_poset,
)
from bettisplit.recursion import (
    TotalBetti,
    betti_bipartite_cover,
    betti_recursive,
    betti_unique_max,
    count_multideals,
    final1_formula,
    prop_final_formula,
    splitinside_formula,
)

from brute import brute_betti, brute_totals


def oracle_totals(P, d, field="F2"):
    return total_betti(graded_betti(h_pd_generators(P, d), field))


def test_one_point_is_koszul_on_rows():
    P = ingest_poset(1, [])
    for d in range(1, 7):
        assert list(betti_recursive(P, d).values) == [comb(d, i + 1) for i in range(d)]


@pytest.mark.parametrize("d", [2, 3])
def test_six_element_poset_matches_oracle(d):
    P = six_element_poset()
    assert list(betti_recursive(P, d).values) == oracle_totals(P, d)


def test_six_element_poset_degree_three_on_clutter_dual():
    P = six_element_poset()
    cover = alexander_dual(edge_ideal(build_clutter(P, 3)))
    assert list(betti_recursive(P, 3).values) == total_betti(graded_betti(cover))


@pytest.mark.parametrize("P", [chain(2), antichain(2), chain(3), ingest_poset(3, [(1, 3), (2, 3)])])
@pytest.mark.parametrize("d", [2, 3])
def test_small_posets_against_naive_oracle(P, d):
    if P.n * d > 10:
        pytest.skip("naive oracle too slow")
    C = build_clutter(P, d)
    I = alexander_dual(edge_ideal(C))
    want = brute_totals(brute_betti(I.gens, I.nvars, "Q"))
    assert list(betti_recursive(P, d).values) == want


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [2, 3])
def test_all_small_posets_against_oracle(n, d):
    for P in posets_up_to_iso(n):
        assert list(betti_recursive(P, d).values) == oracle_totals(P, d, "Q")


@settings(max_examples=15, deadline=None)
@given(st.integers(5, 6), st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_random_posets_against_oracle(n, seed, d):
    P = random_poset(n, random.Random(seed))
    assert list(betti_recursive(P, d).values) == oracle_totals(P, d)


def test_graded_table_is_linear():
    P = six_element_poset()
    T = graded_betti(h_pd_generators(P, 3))
    assert all(j == P.n + i for i, j in T.entries)
    assert betti_recursive(P, 3).graded() == T


def test_zeroth_betti_counts_multideals():
    for P in posets_up_to_iso(4):
        for d in (2, 3, 4):
            assert betti_recursive(P, d).values[0] == count_multideals(P, d)


# --- unique maximum and bipartite forms ---------------------------------------------------


def test_unique_max_on_chains():
    for n in (1, 2, 3, 4):
        for d in (2, 3, 4):
            assert betti_unique_max(chain(n), d) == betti_recursive(chain(n), d)


def test_unique_max_two_chain():
    assert list(betti_unique_max(chain(2), 2).values) == oracle_totals(chain(2), 2)


def test_unique_max_rejects_two_maxima():
    with pytest.raises(ValueError):
        betti_unique_max(ingest_poset(3, [(1, 2), (1, 3)]), 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unique_max_agrees_on_all_small_posets(n):
    for P in posets_up_to_iso(n):
        if popcount(max_elements(P, P.full)) == 1:
            for d in (2, 3, 4):
                assert betti_unique_max(P, d) == betti_recursive(P, d)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_antichain_closed_form(n):
    want = [comb(n, i) * 2 ** (n - i) for i in range(n + 1)]
    assert list(betti_bipartite_cover(antichain(n)).values) == want
    assert oracle_totals(antichain(n), 2) == want


def test_single_point_bipartite():
    assert list(betti_bipartite_cover(ingest_poset(1, [])).values) == [2, 1]


def test_bipartite_agrees_with_recursion():
    for n in range(1, 5):
        for P in posets_up_to_iso(n):
            assert betti_bipartite_cover(P) == betti_recursive(P, 2)
    assert betti_bipartite_cover(six_element_poset()) == betti_recursive(six_element_poset(), 2)


# --- combination formulas --------------------------------------------------------------------


def test_splitinside_identity_for_one_variable():
    assert splitinside_formula(1, [4, 5, 1]) == [4, 5, 1]


def test_splitinside_of_principal():
    assert splitinside_formula(3, [1]) == [3, 3, 1]


def test_splitinside_against_oracle():
    P = ingest_poset(3, [(1, 3), (2, 3)])
    base = total_betti(graded_betti(h_pd_generators(P, 2)))
    # two fresh variables appended after the 6 ring variables
    H = h_pd_generators(P, 2)
    ring = SquarefreeIdeal(H.gens, H.variables + ("w1", "w2"))
    scaled = scale_by_variables([6, 7], ring)
    assert total_betti(graded_betti(scaled)) == splitinside_formula(2, base)


def test_final1_single_part_and_two_variables():
    assert final1_formula([[3, 2]], []) == [3, 2]
    assert final1_formula([[1], [1]], [1]) == [2, 1]
    assert total_betti(graded_betti(SquarefreeIdeal.from_gens([1, 2], 2))) == [2, 1]
    with pytest.raises(ValueError):
        final1_formula([[1], [1]], [])


def _j_sum(P, d):
    return theorem_decomposition(P, d).j_sum()


def test_final1_reproduces_the_j_sum_of_six_element_poset():
    P = six_element_poset()
    dec = theorem_decomposition(P, 3)
    parts, colons = [], []
    for k, (alpha, J) in enumerate(dec.j_parts):
        parts.append(total_betti(graded_betti(J)))
        if k:
            colons.append(popcount(max_elements(P, alpha)) - 1)
    assert final1_formula(parts, colons) == total_betti(graded_betti(dec.j_sum()))


@pytest.mark.parametrize("P,d", [(ingest_poset(1, []), 2), (six_element_poset(), 2), (chain(3), 3), (six_element_poset(), 3)])
def test_prop_final_formula_against_oracle(P, d):
    assert list(prop_final_formula(P, d).values) == total_betti(graded_betti(_j_sum(P, d)))


def test_one_point_j_sum_is_a_variable():
    assert list(prop_final_formula(ingest_poset(1, []), 2).values) == [1]


@pytest.mark.parametrize("d", [2, 3])
def test_recursion_step_identity_with_oracle(d):
    # beta_i(H) = beta_i(H without top) + beta_i(sum J) + beta_{i-1}(sum J)
    for P in posets_up_to_iso(4)[:8] + [six_element_poset()]:
        dec = theorem_decomposition(P, d)
        lhs = total_betti(graded_betti(h_pd_generators(P, d)))
        rest = [1] if dec.rest.is_unit else total_betti(graded_betti(dec.rest))
        js = total_betti(graded_betti(dec.j_sum()))
        rhs = [0] * max(len(lhs), len(rest), len(js) + 1)
        for i, v in enumerate(rest):
            rhs[i] += v
        for i, v in enumerate(js):
            rhs[i] += v
            rhs[i + 1] += v
        while rhs and rhs[-1] == 0:
            rhs.pop()
        assert lhs == rhs


def test_total_betti_json_and_graded():
    T = TotalBetti((3, 2), 2)
    assert T.to_json() == {"degree": 2, "betti": [3, 2]}
    assert T.graded().entries == {(0, 2): 3, (1, 3): 2}


def test_fields_agree_on_small_cover_ideals():
    for P in posets_up_to_iso(3):
        tabs = betti_tables(h_pd_generators(P, 3))
        assert tabs["F2"] == tabs["F3"] == tabs["Q"]
