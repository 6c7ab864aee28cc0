from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettisplit.clutter import h_pd_generators, theorem_decomposition
from bettisplit.corpus import HACHIMORI_K, HACHIMORI_X4J, get_entry
from bettisplit.ideal import SquarefreeIdeal, ideal_sum
from bettisplit.oracle import BettiTable
from bettisplit.poset import six_element_poset
from bettisplit.splitting import (
    MAX_SEARCH_GENERATORS,
    PartitionError,
    SearchCapExceeded,
    Sufficiency,
    admits_xi_splitting,
    exhaustive_splitting_search,
    gray_masks,
    is_betti_splitting,
    separating_variable,
    splitting_sufficiency,
    xi_partition,
)


def ideal(nvars, *supports):
    return SquarefreeIdeal.from_supports(supports, nvars, base=1)


def part(I, gens):
    return SquarefreeIdeal(tuple(gens), I.variables)


@st.composite
def ideals(draw, max_vars=6, max_gens=7):
    n = draw(st.integers(2, max_vars))
    gens = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=2, max_size=max_gens))
    I = SquarefreeIdeal.from_gens(gens, n)
    return I


# --- is_betti_splitting ---------------------------------------------------------------------


def test_two_variables_split():
    I = ideal(2, (1,), (2,))
    rep = is_betti_splitting(I, ideal(2, (1,)), ideal(2, (2,)))
    assert rep.is_splitting
    assert rep.JK == BettiTable({(0, 2): 1})


def test_partition_must_cover_generators():
    I = ideal(3, (1,), (2,), (3,))
    with pytest.raises(PartitionError):
        is_betti_splitting(I, ideal(3, (1,)), ideal(3, (2,)))
    with pytest.raises(PartitionError):
        is_betti_splitting(I, ideal(3, (1,), (2,)), ideal(3, (2,), (3,)))


def test_dunce_hat_printed_partition():
    entry = get_entry("dunce_hat")
    I = entry.ideal("sr")
    rep = is_betti_splitting(I, entry.parts["sr_J"], entry.parts["sr_K"])
    assert rep.is_splitting
    assert rep.J == entry.tables["sr_J"]
    assert rep.K == entry.tables["sr_K"]
    assert rep.JK == entry.tables["sr_JK"]


def test_rudin_printed_decomposition():
    entry = get_entry("rudin_ball")
    I = entry.ideal("dual")
    rep = is_betti_splitting(I, entry.parts["dual_J"], entry.parts["dual_K"])
    assert rep.is_splitting
    assert rep.J.totals() == [23, 35, 13]
    assert rep.K.totals() == [18, 27, 10]
    assert rep.JK == BettiTable({(0, 11): 8, (1, 12): 7})


@settings(max_examples=40, deadline=None)
@given(ideals(), st.integers(0, 2**7))
def test_splitting_implies_total_identity(I, mask):
    if len(I.gens) < 2:
        return
    mask = mask % ((1 << (len(I.gens) - 1)) - 1) + 1
    J = part(I, [g for k, g in enumerate(I.gens) if mask >> k & 1])
    K = part(I, [g for k, g in enumerate(I.gens) if not mask >> k & 1])
    rep = is_betti_splitting(I, J, K)
    if rep.is_splitting:
        ti, tj, tk, tjk = (T.totals() for T in (rep.I, rep.J, rep.K, rep.JK))
        n = max(len(ti), len(tj), len(tk), len(tjk) + 1)
        get = lambda xs, i: xs[i] if 0 <= i < len(xs) else 0
        assert all(get(ti, i) == get(tj, i) + get(tk, i) + get(tjk, i - 1) for i in range(n))
    else:
        assert rep.first_violation is not None


# --- x_i partitions ---------------------------------------------------------------------------------


def test_hachimori_x4_partition_is_the_printed_one():
    I = get_entry("hachimori").ideal("dual")
    cand = xi_partition(I, 3)
    assert sorted(cand.J.gens) == sorted(ideal(7, *HACHIMORI_X4J).gens)
    assert sorted(cand.K.gens) == sorted(ideal(7, *HACHIMORI_K).gens)


def test_xi_partition_degenerate_sides():
    I = ideal(3, (1, 2), (1, 3))
    assert xi_partition(I, 1).J.gens == (0b011,)
    assert xi_partition(I, 0).K.is_zero
    none = ideal(4, (1, 2))
    assert xi_partition(none, 3).J.is_zero
    assert xi_partition(none, 3).K == none
    rep = admits_xi_splitting(I, 0)
    assert rep.degenerate and not rep.is_splitting


def test_hachimori_admits_x4_splitting():
    entry = get_entry("hachimori")
    rep = admits_xi_splitting(entry.ideal("dual"), 3)
    assert rep.is_splitting
    assert rep.J == entry.tables["dual_J"]
    assert rep.K == entry.tables["dual_K"]
    assert rep.JK == entry.tables["dual_JK"]


@pytest.mark.parametrize("name", ["rudin_ball", "dunce_hat"])
def test_no_xi_splitting(name):
    I = get_entry(name).ideal("dual")
    assert not any(admits_xi_splitting(I, v).is_splitting for v in range(I.nvars))


@settings(max_examples=30, deadline=None)
@given(ideals(max_vars=5), st.randoms(use_true_random=False))
def test_xi_splitting_is_permutation_equivariant(I, rnd):
    perm = list(range(I.nvars))
    rnd.shuffle(perm)

    def move(g):
        return sum(1 << perm[v] for v in range(I.nvars) if g >> v & 1)

    P = SquarefreeIdeal.from_gens([move(g) for g in I.gens], I.nvars)
    for v in range(I.nvars):
        assert admits_xi_splitting(I, v).is_splitting == admits_xi_splitting(P, perm[v]).is_splitting


# --- sufficient conditions -------------------------------------------------------------------


def test_decomposition_step_is_an_xi_splitting_with_linear_part():
    P = six_element_poset()
    dec = theorem_decomposition(P, 3)
    I = h_pd_generators(P, 3)
    J, K = dec.scaled_rest, dec.j_sum()
    assert splitting_sufficiency(I, J, K) == Sufficiency.XI_WITH_LINEAR_J
    assert is_betti_splitting(I, J, K).is_splitting


def test_two_linear_parts():
    # a step of the ordered J chain where no variable separates the earlier
    # partial sum from the next part, so only the both-linear form applies
    P = six_element_poset()
    dec = theorem_decomposition(P, 3)
    found = 0
    for k in range(1, len(dec.j_parts)):
        earlier = SquarefreeIdeal(
            tuple(g for _, J in dec.j_parts[:k] for g in J.gens), dec.rest.variables
        )
        J_k = dec.j_parts[k][1]
        if separating_variable(earlier, J_k) is not None:
            continue
        I = ideal_sum(earlier, J_k)
        assert splitting_sufficiency(I, earlier, J_k) == Sufficiency.BOTH_LINEAR
        assert is_betti_splitting(I, earlier, J_k).is_splitting
        found += 1
    assert found


def test_dunce_hat_parts_satisfy_neither_condition():
    entry = get_entry("dunce_hat")
    I = entry.ideal("sr")
    assert splitting_sufficiency(I, entry.parts["sr_J"], entry.parts["sr_K"]) == Sufficiency.NONE


@settings(max_examples=60, deadline=None)
@given(ideals(), st.integers(1, 2**7))
def test_sufficient_conditions_are_sound(I, mask):
    mask = mask % ((1 << (len(I.gens) - 1)) - 1) + 1 if len(I.gens) > 1 else 0
    if not mask:
        return
    J = part(I, [g for k, g in enumerate(I.gens) if mask >> k & 1])
    K = part(I, [g for k, g in enumerate(I.gens) if not mask >> k & 1])
    if splitting_sufficiency(I, J, K) != Sufficiency.NONE:
        assert is_betti_splitting(I, J, K).is_splitting


# --- exhaustive search --------------------------------------------------------------------------


def test_gray_masks_visit_everything_once():
    seq = list(gray_masks(5))
    assert sorted(seq) == list(range(1, 32))
    prev = 0
    for x in seq:
        assert bin(x ^ prev).count("1") == 1
        prev = x


def test_search_two_variables():
    I = ideal(2, (1,), (2,))
    res = exhaustive_splitting_search(I)
    assert res.candidate is not None
    assert {res.candidate.J.gens, res.candidate.K.gens} == {(0b01,), (0b10,)}
    assert res.verified_field == "Q"


def test_search_single_generator_has_nothing_to_check():
    res = exhaustive_splitting_search(ideal(3, (1, 2)))
    assert res.candidate is None and res.exhaustive and res.total == 0


def _partition_masks(I):
    n = len(I.gens)
    return list(gray_masks(n - 1))


def _splits_on_full_tables(I, mask, field):
    J = part(I, [g for k, g in enumerate(I.gens) if mask >> k & 1])
    K = part(I, [g for k, g in enumerate(I.gens) if not mask >> k & 1])
    return is_betti_splitting(I, J, K, field).is_splitting


@settings(max_examples=60, deadline=None)
@given(ideals(max_vars=6, max_gens=6), st.sampled_from(["F2", "Q"]))
def test_search_agrees_with_full_tables(I, field):
    res = exhaustive_splitting_search(I, field, verify_field=field)
    first = next((mk for mk in _partition_masks(I) if _splits_on_full_tables(I, mk, field)), None)
    if first is None:
        assert res.candidate is None and res.exhaustive
        assert res.checked == res.total
    else:
        want_j = tuple(g for k, g in enumerate(I.gens) if first >> k & 1)
        assert res.candidate is not None
        assert res.candidate.J.gens == want_j


def test_search_on_sampled_dunce_partitions_agrees_with_full_tables():
    I = get_entry("dunce_hat").ideal("dual")
    rng = random.Random(3)
    total = (1 << (len(I.gens) - 1)) - 1
    for _ in range(12):
        mask = rng.randrange(1, total + 1)
        assert not _splits_on_full_tables(I, mask, "F2")
    res = exhaustive_splitting_search(I, sample=200, seed=3)
    assert res.candidate is None and not res.exhaustive and res.stopped_by == "sample"


def test_dunce_hat_dual_has_no_splitting():
    res = exhaustive_splitting_search(get_entry("dunce_hat").ideal("dual"))
    assert res.candidate is None
    assert res.exhaustive and res.checked == res.total == 65535


def test_dunce_hat_stanley_reisner_ideal_has_a_splitting():
    I = get_entry("dunce_hat").ideal("sr")
    res = exhaustive_splitting_search(I)
    assert res.candidate is not None
    assert res.witness_report.is_splitting and res.witness_report.field == "Q"
    assert is_betti_splitting(I, res.candidate.J, res.candidate.K, "F2").is_splitting


def test_search_budget_and_cap():
    I = get_entry("dunce_hat").ideal("dual")
    res = exhaustive_splitting_search(I, budget=10)
    assert res.stopped_by == "budget" and res.checked == 10 and not res.exhaustive
    big = SquarefreeIdeal.from_gens([1 << k for k in range(MAX_SEARCH_GENERATORS + 1)], MAX_SEARCH_GENERATORS + 1)
    with pytest.raises(SearchCapExceeded):
        exhaustive_splitting_search(big)


def test_search_result_json():
    res = exhaustive_splitting_search(ideal(2, (1,), (2,)))
    data = res.to_json(("x1", "x2"))
    assert data["exhaustive"] is False and data["checked"] == 1
