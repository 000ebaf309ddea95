from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minrep import fourierfinite as ff
from minrep.padic import SphericalValue


def test_e6_table_entries():
    T = ff.residue_table("E6", 2, 1)
    assert ff.entry_as_value(T, 2, 1, (0,) * 10) == 12
    assert ff.entry_as_value(T, 2, 1, (1,) + (0,) * 9) == 1


def test_d5_table_entry():
    T = ff.residue_table("D5", 3, 1)
    assert ff.entry_as_value(T, 3, 1, (0, 1, 0, 0, 0, 0)) == 9


@pytest.mark.parametrize("g,p,l", [("D4", 3, 1), ("E6", 2, 1), ("D4", 2, 2)])
def test_table_matches_scalar_path(g, p, l):
    T = ff.residue_table(g, p, l)
    rng = np.random.default_rng(0)
    N = p**l
    for _ in range(60):
        idx = tuple(int(a) for a in rng.integers(0, N, size=T.ndim - 1))
        assert ff.entry_as_value(T, p, l, idx) == ff.table_value(g, p, l, idx[0], idx[1:])


def test_unit_x0_entry_is_a_character():
    T = ff.residue_table("E6", 3, 1)
    from minrep.cone import cubic_form
    from minrep.padic import psi

    form = cubic_form("E6")
    rng = np.random.default_rng(2)
    for _ in range(40):
        x0 = int(rng.integers(1, 3))
        x = [int(a) for a in rng.integers(0, 3, size=9)]
        want = SphericalValue(1, psi(Fraction(-form(x), 3 * x0), 3))
        assert ff.entry_as_value(T, 3, 1, (x0, *x)) == want


def _table(p, l, d, cells):
    N = p**l
    T = np.zeros((N,) * d + (N,), dtype=np.int64)
    for idx, k, c in cells:
        T[idx + (k,)] += c
    return T


@pytest.mark.parametrize("p,l,d", [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2)])
def test_dft_of_delta_is_constant(p, l, d):
    T = _table(p, l, d, [((0,) * d, 0, 1)])
    F = ff.reduce_group_ring(ff.dft_unnormalised(T, p, l), p, l)
    want = np.zeros_like(F)
    want[..., 0] = 1
    assert (F == want).all()


@pytest.mark.parametrize("p,l,d", [(2, 1, 3), (3, 1, 2), (2, 2, 2)])
def test_dft_of_constant_is_delta(p, l, d):
    N = p**l
    T = np.zeros((N,) * d + (N,), dtype=np.int64)
    T[..., 0] = 1
    F = ff.reduce_group_ring(ff.dft_unnormalised(T, p, l), p, l)
    want = np.zeros_like(F)
    want[(0,) * d + (0,)] = N**d
    assert (F == want).all()


@given(st.sampled_from([(2, 1, 2), (3, 1, 2), (2, 2, 1), (5, 1, 1)]), st.data())
def test_dft_squared_is_parity(case, data):
    p, l, d = case
    N = p**l
    T = data.draw(
        st.lists(st.integers(-3, 3), min_size=N ** (d + 1), max_size=N ** (d + 1)).map(
            lambda v: np.array(v, dtype=np.int64).reshape((N,) * d + (N,))
        )
    )
    FF = ff.reduce_group_ring(ff.dft_unnormalised(ff.dft_unnormalised(T, p, l), p, l), p, l)
    flipped = T
    for axis in range(d):
        flipped = np.roll(np.flip(flipped, axis=axis), 1, axis=axis)
    assert (FF == ff.reduce_group_ring(flipped, p, l) * N**d).all()


@pytest.mark.parametrize("g,p,l", [("D4", 2, 1), ("D4", 3, 1), ("D5", 2, 1), ("E6", 2, 1), ("E6", 3, 1), ("D4", 2, 2)])
def test_self_duality(g, p, l):
    res = ff.self_duality(g, p, l)
    assert res["pass"] and res["mismatches"] == 0


def test_perturbed_table_is_not_self_dual():
    p, l = 3, 1
    T = ff.residue_table("D4", p, l)
    T[(0,) * 4 + (0,)] += 1
    lhs = ff.reduce_group_ring(ff.dft_unnormalised(T, p, l), p, l)
    rhs = ff.reduce_group_ring(T, p, l) * p ** 2
    assert (lhs != rhs).any()


@pytest.mark.parametrize("g", ["D4", "D5", "E6", "E7"])
def test_packed_kernel(g):
    assert ff.self_duality_p2(g)["pass"]
    if g != "E7":
        R = ff.residue_table(g, 2, 1)
        assert (ff.real_table_p2(g) == (R[..., 0] - R[..., 1]).ravel()).all()


def test_hadamard_is_involutive_up_to_scale():
    rng = np.random.default_rng(0)
    A = rng.integers(-5, 5, size=64)
    B = ff.hadamard_inplace(ff.hadamard_inplace(A.copy()))
    assert (B == 64 * A).all()


def test_e6_character_sums():
    res = ff.solve_a("E6", 2)
    assert res["S2"] == res["S2_closed"] == -176
    assert res["S1"] == res["S1_closed"] == 176
    assert res["card2"] == 49


@pytest.mark.parametrize("g,q", [("E6", 2), ("E6", 3), ("E6", 4), ("E7", 2)])
def test_solved_a_for_e(g, q):
    res = ff.solve_a(g, q)
    assert res["a"] == res["a_expected"]
    assert res["eq0"]


@pytest.mark.parametrize("g,q", [("D4", 2), ("D5", 2), ("D5", 3), ("D6", 2), ("D6", 3)])
def test_solved_a_for_d(g, q):
    res = ff.solve_a(g, q)
    assert res["a"] == res["a_expected"]
    assert res["S"] == res["S_closed"]


@pytest.mark.parametrize("g,p,l", [("D4", 2, 2), ("D4", 3, 2), ("E6", 2, 2)])
def test_level_characterisation(g, p, l):
    assert ff.level_characterisation(g, p, l, samples=80)


def test_lift_independence():
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 3, size=(30, 10))
    assert ff.lift_independent("E6", 3, 1, rows)


def test_table_cache_round_trip(tmp_path):
    T = ff.residue_table("D4", 3, 1)
    path = tmp_path / "d4.bin"
    ff.save_table(path, "D4", 3, 1, T)
    g, p, l, back = ff.load_table(path)
    assert (g, p, l) == ("D4", 3, 1) and (back == T).all()
    raw = bytearray(path.read_bytes())
    raw[-1] ^= 1
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError):
        ff.load_table(path)
