from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettisplit.clutter import h_pd_generators
from bettisplit.corpus import get_entry
from bettisplit.homology import AbstractComplex, reduced_homology_ranks, strong_core
from bettisplit.ideal import SquarefreeIdeal, UnitIdealError, minimalize
from bettisplit.oracle import (
    BettiTable,
    betti_tables,
    graded_betti,
    has_linear_resolution,
    koszul_complex,
    lcm_lattice,
    multigraded_betti,
    total_betti,
)
from bettisplit.poset import chain, six_element_poset

from brute import all_faces_of, brute_betti, reduced_homology

# the six-vertex triangulation of the real projective plane
RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6), (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]
RP2_MASKS = [sum(1 << (v - 1) for v in f) for f in RP2]


def ideal(nvars, *supports):
    return SquarefreeIdeal.from_supports(supports, nvars, base=1)


@st.composite
def ideals(draw, max_vars=6):
    n = draw(st.integers(1, max_vars))
    gens = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=7))
    return SquarefreeIdeal.from_gens(gens, n)


# --- simplicial homology ---------------------------------------------------------------


def test_triangle_boundary_has_a_loop():
    assert reduced_homology_ranks([0b011, 0b110, 0b101]) == [0, 0, 1]


def test_full_simplex_is_acyclic():
    assert reduced_homology_ranks([0b1111], "Q") == [0, 0, 0, 0, 0]


def test_projective_plane_depends_on_field():
    # frozen from the naive oracle: H1 = H2 = 1 over GF(2), nothing over Q or GF(3)
    assert reduced_homology_ranks(RP2_MASKS, "F2") == [0, 0, 1, 1]
    assert reduced_homology_ranks(RP2_MASKS, "F3") == [0, 0, 0, 0]
    assert reduced_homology_ranks(RP2_MASKS, "Q") == [0, 0, 0, 0]


def test_void_and_empty_complex():
    assert reduced_homology_ranks([]) == []
    assert reduced_homology_ranks([0]) == [1]


@st.composite
def complexes(draw, n=6):
    return draw(st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=6))


@settings(max_examples=120, deadline=None)
@given(complexes(), st.sampled_from(["F2", "F3", "Q"]))
def test_homology_matches_naive_chain_complex(facets, field):
    want = reduced_homology(all_faces_of(facets), field)
    got = reduced_homology_ranks(facets, field)
    assert got + [0] * (len(want) - len(got)) == want


@settings(max_examples=80, deadline=None)
@given(complexes())
def test_strong_core_preserves_homology(facets):
    core = strong_core(facets)
    for field in ("F2", "Q"):
        a = reduced_homology(all_faces_of(facets), field)
        b = reduced_homology(all_faces_of(core), field)
        pad = max(len(a), len(b))
        assert a + [0] * (pad - len(a)) == b + [0] * (pad - len(b))


# --- upper Koszul complex -----------------------------------------------------------------


def test_koszul_complex_of_a_variable_is_the_empty_face():
    K = koszul_complex(ideal(1, (1,)), 0b1)
    assert K.facets == (0,)
    assert reduced_homology_ranks(K) == [1]


def test_koszul_complex_outside_the_ideal_is_void():
    K = koszul_complex(ideal(3, (1, 2)), 0b100)
    assert K.is_void


def test_koszul_complex_of_triangle_edges():
    I = ideal(3, (1, 2), (2, 3), (1, 3))
    K = koszul_complex(I, 0b111)
    assert sorted(K.facets) == [0b001, 0b010, 0b100]
    assert multigraded_betti(I)[0b111][1] == 2


# --- graded Betti numbers -------------------------------------------------------------------


def test_triangle_edges_table():
    # frozen from the naive oracle
    assert graded_betti(ideal(3, (1, 2), (2, 3), (1, 3))) == BettiTable({(0, 2): 3, (1, 3): 2})


def test_disjoint_edges_table_and_not_linear():
    I = ideal(4, (1, 2), (3, 4))
    T = graded_betti(I)
    assert T == BettiTable({(0, 2): 2, (1, 4): 1})
    assert not has_linear_resolution(I)


def test_principal_ideal_is_linear():
    assert has_linear_resolution(ideal(3, (1, 2, 3)))


def test_row_variables_follow_binomials():
    assert total_betti(graded_betti(ideal(3, (1,), (2,), (3,)))) == [3, 3, 1]


def test_zero_and_unit_ideal():
    assert graded_betti(minimalize([], 3)) == BettiTable({})
    with pytest.raises(UnitIdealError):
        graded_betti(minimalize([0], 3))


def test_projective_plane_stanley_reisner_torsion():
    # frozen from the naive oracle
    faces = all_faces_of(RP2_MASKS)
    nonfaces = [m for m in range(64) if m not in faces]
    I = SquarefreeIdeal.from_gens(nonfaces, 6)
    tables = betti_tables(I)
    assert tables["F2"] == BettiTable({(0, 3): 10, (1, 4): 15, (2, 5): 6, (2, 6): 1, (3, 6): 1})
    assert tables["Q"] == BettiTable({(0, 3): 10, (1, 4): 15, (2, 5): 6})
    assert tables["F3"] == tables["Q"]


def test_six_element_poset_degree_two_table():
    # frozen from the naive oracle (cover ideal found by subset filtering)
    T = graded_betti(h_pd_generators(six_element_poset(), 2))
    assert T == BettiTable({(0, 6): 19, (1, 7): 34, (2, 8): 20, (3, 9): 4})


@pytest.mark.parametrize("engine", ["kernel", "python"])
@settings(max_examples=60, deadline=None)
@given(I=ideals())
def test_graded_betti_matches_naive_oracle(engine, I):
    for field in ("F2", "F3", "Q"):
        want = brute_betti(I.gens, I.nvars, field)
        assert graded_betti(I, field, engine=engine).entries == want


@settings(max_examples=100, deadline=None)
@given(ideals(max_vars=8))
def test_kernel_agrees_with_python_engine(I):
    fast = betti_tables(I, engine="kernel")
    slow = betti_tables(I, engine="python")
    assert fast == slow


@settings(max_examples=60, deadline=None)
@given(ideals(max_vars=7))
def test_zeroth_betti_counts_generators_by_degree(I):
    T = graded_betti(I)
    assert T.row(0) == dict(Counter(I.degrees()))


def test_lcm_lattice_of_two_generators():
    assert lcm_lattice([0b011, 0b110]) == {0b011, 0b110, 0b111}


def test_threads_do_not_change_the_table():
    I = get_entry("hachimori").ideal("dual")
    assert graded_betti(I, "Q", threads=2, engine="python") == graded_betti(I, "Q", threads=1, engine="python")


def test_cached_tables_are_not_shared():
    I = h_pd_generators(chain(2), 2)
    T = graded_betti(I)
    T.entries.clear()
    assert graded_betti(I) != T


def test_table_json_round_trip_and_render():
    T = BettiTable({(0, 2): 4, (0, 3): 17, (1, 3): 2}, "Q")
    assert BettiTable.from_json(T.to_json()) == T
    assert T.render().splitlines()[1].split() == ["total:", "21", "2"]


# --- corpus tables --------------------------------------------------------------------------


@pytest.mark.parametrize("field", ["F2", "F3", "Q"])
def test_dunce_hat_dual_table(field):
    T = graded_betti(get_entry("dunce_hat").ideal("dual"), field)
    assert T == BettiTable.from_rows({0: {5: 17}, 1: {6: 27}, 2: {7: 11}})


def test_hachimori_dual_table():
    T = graded_betti(get_entry("hachimori").ideal("dual"))
    assert T == BettiTable.from_rows({0: {4: 13}, 1: {5: 20}, 2: {6: 8}})


def test_rudin_dual_table():
    T = graded_betti(get_entry("rudin_ball").ideal("dual"))
    assert T == BettiTable.from_rows({0: {10: 41}, 1: {11: 70}, 2: {12: 30}})
    assert has_linear_resolution(get_entry("rudin_ball").ideal("dual"))


def test_abstract_complex_dimension():
    C = AbstractComplex.from_faces([0b1, 0b11, 0b100])
    assert C.dim == 1
