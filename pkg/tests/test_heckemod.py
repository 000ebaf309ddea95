from collections import Counter

import pytest
import sympy
from hypothesis import given, strategies as st

from minrep import heckemod as hk
from minrep.rootsys import HeisenbergFrame, RootSystem

GROUPS = ["D4", "D5", "D6", "D7", "E6", "E7", "E8"]
# frozen from the trace and characteristic polynomial of T^{beta0}
EXPONENTS = {
    "D4": {8: 5},
    "D5": {11: 2, 12: 4},
    "D6": {14: 2, 16: 5},
    "D7": {17: 2, 20: 6},
    "E6": {18: 1, 19: 6},
    "E7": {28: 1, 30: 7},
    "E8": {48: 1, 52: 8},
}


def test_laurent_ring_laws():
    A = hk.LaurentMatrix.from_entries(2, {(0, 0): {1: 1}, (0, 1): {-1: 2}, (1, 1): {0: -1}})
    B = hk.LaurentMatrix.from_entries(2, {(0, 1): {2: 1}, (1, 0): {0: 3}})
    C = hk.LaurentMatrix.from_entries(2, {(0, 0): {-2: 1}, (1, 1): {3: 1}})
    one = hk.LaurentMatrix.identity(2)
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C
    assert A @ one == A == one @ A
    assert (A - A).is_zero()


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(-4, 4))
def test_shift_commutes_with_products(coeffs, e):
    A = hk.LaurentMatrix.from_entries(2, {(i // 2, i % 2): {i - 1: c} for i, c in enumerate(coeffs)})
    assert A.shift(e) @ A == (A @ A).shift(e) == A @ A.shift(e)


@pytest.mark.parametrize("g", GROUPS)
def test_relations(g):
    res = hk.check_relations(g)
    assert all(res["quadratic"].values()) and all(res["braid"].values())


def test_e6_braid_pair_count():
    # every pair of the 7 affine vertices
    assert len(hk.check_relations("E6")["braid"]) == 21


@pytest.mark.parametrize("g", GROUPS)
def test_translation_word_length(g):
    rs = RootSystem.of(g)
    aw = hk.translation_word(g, rs.inverse_cartan[rs.beta0 - 1])
    assert aw.length == 2 * (HeisenbergFrame.of(g).n + 2) == 2 * rs.rho_of_coweight(rs.beta0)
    assert aw.automorphism == tuple(range(rs.rank + 1))


def test_zero_coweight_word():
    aw = hk.translation_word("E6", [0] * 6)
    assert aw.length == 0 and aw.automorphism == tuple(range(7))


def test_e6_coweight_lattice_membership():
    rs = RootSystem.of("E6")
    assert hk.coweight_in_coroot_lattice("E6", rs.inverse_cartan[rs.beta0 - 1])
    assert not hk.coweight_in_coroot_lattice("E6", rs.inverse_cartan[0])


def test_extended_word_for_minuscule_coweight():
    rs = RootSystem.of("E6")
    aw = hk.translation_word("E6", rs.inverse_cartan[0])
    assert aw.length == 16 and aw.automorphism == (1, 6, 3, 5, 4, 2, 0)
    assert hk.eigen_multiplicities("E6", 1) == {12: 1, 14: 6}


@pytest.mark.parametrize("g", ["D4", "E6", "E7"])
def test_two_constructions_agree(g):
    word = hk.reduced_word_s0_stheta(g)
    assert hk.product_along(g, word) == hk.bernstein_matrix(g)


@pytest.mark.parametrize("g", GROUPS)
def test_commutation(g):
    assert all(hk.commutes_with_levi(g).values())


@pytest.mark.parametrize("g", GROUPS)
def test_eigen_multiplicities(g):
    mult = hk.eigen_multiplicities(g)
    assert mult == EXPONENTS[g]
    assert mult == dict(Counter(hk.lambda_exponents(g)))


@pytest.mark.parametrize("g", GROUPS)
def test_q_form_is_polynomial(g):
    assert hk.q_form(g).is_polynomial_in_q()


@pytest.mark.parametrize("g", ["D5", "D6", "D7", "E6", "E7", "E8"])
def test_squarefree_annihilator(g):
    res = hk.annihilator_check(g)
    assert res["squarefree_annihilates"]
    assert not any(res["proper_factor_annihilates"].values())


def test_d4_is_not_semisimple():
    res = hk.annihilator_check("D4")
    assert res["exponents"] == {8: 5}
    assert not res["squarefree_annihilates"] and res["nilpotency"] == 2


def test_closed_form_exponents_for_d_match():
    for g in ["D4", "D5", "D6", "D7"]:
        assert Counter(hk.closed_form_exponents(g)) == Counter(EXPONENTS[g])


def test_closed_form_exponents_for_e_differ_in_multiplicity():
    # the eigenvalues agree, the multiplicities are swapped
    for g in ["E6", "E7", "E8"]:
        stated = Counter(hk.closed_form_exponents(g))
        assert set(stated) == set(EXPONENTS[g]) and stated != Counter(EXPONENTS[g])


def test_fbar_scaling_exponents():
    assert hk.fbar_scaling_exponent("E6", 1) == 19
    assert hk.fbar_scaling_exponent("E6", 0) == 18
    assert set(hk.fbar_shapes("E8").values()) == {48, 52}


def test_both_factor_orders():
    rep = hk.convention_report("E6")
    assert all(rep["left"].values()) and all(rep["right"].values())


def test_charpoly_identity_e6():
    q, X = sympy.symbols("q X")
    cp = hk.q_form("E6").to_sympy_q(q).charpoly(X).as_expr()
    assert sympy.expand(cp - (X - q**18) * (X - q**19) ** 6) == 0
