import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from minrep import spherical
from minrep.padic import InvalidPoint, SphericalValue
from minrep.rootsys import HeisenbergFrame

GROUPS = ["D4", "D5", "D6", "D7", "E6", "E7", "E8"]


def origin(g):
    return [1, 0] + [0] * HeisenbergFrame.of(g).n


@pytest.mark.parametrize("g", GROUPS)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_normalisation(g, p):
    assert spherical.spherical_eval(g, p, origin(g)) == 1
    assert spherical.fbar_closed(g, p, 1, [0] * HeisenbergFrame.of(g).n) == 1


def test_e6_plugin_value():
    assert spherical.spherical_eval("E6", 2, [4, 2] + [0] * 9) == 12
    assert spherical.fbar_closed("E6", 2, 2, [0] * 9) == 12


def test_d4_plugin_value():
    # psi(-1/3) = exp(2 pi i * 2/3)
    assert spherical.spherical_eval("D4", 3, [3, 1, 1, 1, 1]) == SphericalValue(1, Fraction(2, 3))


def test_non_integral_lift_vanishes():
    assert spherical.fbar_closed("E6", 2, 1, [Fraction(1, 2)] + [0] * 8) == 0


def test_y_must_be_nonzero():
    with pytest.raises(InvalidPoint):
        spherical.spherical_eval("E6", 2, [0, 1] + [0] * 9)


@pytest.mark.parametrize("g,p", [("E6", 3), ("D5", 2), ("E7", 2), ("D4", 5)])
def test_a_invariance_seeded(g, p):
    rng = random.Random(f"{g}{p}")
    done = 0
    while done < 150:
        pt = spherical.sample_point(g, p, rng)
        if pt[1] == 0:
            continue
        lhs, rhs = spherical.check_a_invariance(g, p, pt)
        assert lhs == rhs, pt
        done += 1


@given(st.sampled_from(["D4", "E6"]), st.sampled_from([2, 3]), st.integers(-2, 3), st.data())
def test_a_invariance_on_diagonal(g, p, v, data):
    n = HeisenbergFrame.of(g).n
    y = Fraction(p) ** v * data.draw(st.sampled_from([1, -1, 5, 7]))
    x = data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n))
    lhs, rhs = spherical.check_a_invariance(g, p, [y, y, *x])
    assert lhs == rhs


@pytest.mark.parametrize("g,p,c", [("E7", 2, 2), ("D4", 5, Fraction(1, 5)), ("E6", 3, 3)])
def test_torus_covariance(g, p, c):
    rng = random.Random(0)
    checked = 0
    for _ in range(400):
        pt = spherical.sample_point(g, p, rng)
        try:
            want = spherical.predicted_center_scaled(g, p, c, pt)
        except InvalidPoint:
            continue
        assert spherical.center_scaled(g, p, c, pt) == want
        checked += 1
    assert checked > 50


def test_torus_covariance_identity():
    pt = [Fraction(2), Fraction(1)] + [Fraction(1)] * 9
    assert spherical.center_scaled("E6", 2, 1, pt) == spherical.spherical_eval("E6", 2, pt)


@pytest.mark.parametrize("g", ["D5", "E6", "E7"])
def test_far_region_closed_form(g):
    rng = random.Random(1)
    for _ in range(100):
        pt = spherical.sample_point(g, 2, rng)
        if spherical.norm(pt[0], 2) > spherical.norm(pt[1], 2):
            assert spherical.spherical_eval(g, 2, pt) == spherical.spherical_eval_far(g, 2, pt)


@pytest.mark.parametrize("p", [2, 3])
def test_fbar_limit_stabilises(p):
    rng = random.Random(p)
    for _ in range(60):
        pt = spherical.sample_point("E6", p, rng)
        x0, x = pt[1], pt[2:]
        if x0 == 0:
            continue
        v = spherical.valuation(x0, p)
        target = spherical.fbar_closed("E6", p, x0, x)
        assert all(val == target for val in spherical.fbar_limit("E6", p, x0, x, [v, v + 2, v + 5]))


def test_d4_phi0_examples():
    p = 3
    assert spherical.d4_phi0_eval(p, [1, 0, 3, 0, 0, 9]) == 1
    assert spherical.d4_phi0_eval(p, [Fraction(1, 3), 1, 0, 0, 0, 0]) == 0
    q = Fraction(p)
    assert spherical.d4_phi0_eval(p, [3, 0, 9, 0, 0, 3]) == (q - 1 / q) / (1 - 1 / q)


@pytest.mark.parametrize(
    "p,pt", [(2, [1, 0, 0, 0, 0]), (2, [1, 1, 1, 1, 1]), (3, [3, 1, 1, 1, 0]), (5, [5, 1, 2, 0, 3])]
)
def test_d4_intertwiner_examples(p, pt):
    sign = spherical.d4_cubic_sign()
    assert spherical.d4_intertwiner_eval(p, pt, cubic_sign=sign) == spherical.spherical_eval("D4", p, pt)


@pytest.mark.parametrize("p", [2, 3])
def test_d4_intertwiner_seeded(p):
    rng = random.Random(p)
    sign = spherical.d4_cubic_sign()
    for _ in range(40):
        pt = spherical.sample_point("D4", p, rng)
        assert spherical.d4_intertwiner_eval(p, pt, cubic_sign=sign) == spherical.spherical_eval("D4", p, pt)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_d4_truncation_is_stable(p):
    rng = random.Random(10 + p)
    sign = spherical.d4_cubic_sign()
    for _ in range(25):
        pt = spherical.sample_point("D4", p, rng)
        m = spherical.d4_truncation(p, pt)
        base = spherical.d4_intertwiner_eval(p, pt, m, cubic_sign=sign)
        assert spherical.d4_intertwiner_eval(p, pt, m + 1, cubic_sign=sign) == base
