from fractions import Fraction

from hypothesis import given, strategies as st

from minrep.padic import INF, CycNumber, SphericalValue, norm, parse_point, psi, valuation, vector_norm

PRIMES = st.sampled_from([2, 3, 5, 7])
NONZERO = st.fractions(min_value=-200, max_value=200, max_denominator=200).filter(bool)


def test_psi_examples():
    assert psi(7, 3) == 0
    assert psi(Fraction(1, 2), 2) == Fraction(1, 2)
    assert psi(Fraction(1, 9), 3) == Fraction(1, 9)


def test_norm_examples():
    p = 3
    assert vector_norm([1, Fraction(1, p), p], p) == p
    assert vector_norm([0, 0], p) == 0
    assert vector_norm([p**2, p**3], p) == Fraction(1, p**2)
    assert valuation(0, p) == INF


@given(PRIMES, NONZERO, NONZERO)
def test_valuation_is_a_valuation(p, x, y):
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)
    if x + y:
        assert valuation(x + y, p) >= min(valuation(x, p), valuation(y, p))
        if valuation(x, p) != valuation(y, p):
            assert valuation(x + y, p) == min(valuation(x, p), valuation(y, p))
    assert norm(x, p) * norm(y, p) == norm(x * y, p)


@given(PRIMES, NONZERO, NONZERO)
def test_psi_is_a_character(p, x, y):
    assert psi(x + y, p) == (psi(x, p) + psi(y, p)) % 1
    assert (psi(x, p) + psi(-x, p)) % 1 == 0


@given(PRIMES, st.integers(0, 3), st.data())
def test_zeta_power_is_one(p, m, data):
    N = p**m
    z = CycNumber.from_terms(p, m, [(1, 1)])
    acc = CycNumber.rational(p, 1)
    for _ in range(N):
        acc = acc * z
    assert acc == 1


def _cyc(p, data):
    m = data.draw(st.integers(0, 2))
    terms = data.draw(st.lists(st.tuples(st.integers(0, p**m), st.fractions(-5, 5, max_denominator=4)), max_size=5))
    return CycNumber.from_terms(p, m, terms)


@given(st.sampled_from([2, 3, 5]), st.data())
def test_cyclotomic_ring_laws(p, data):
    a, b, c = _cyc(p, data), _cyc(p, data), _cyc(p, data)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a) == 0


def test_sum_of_all_roots_vanishes():
    p = 5
    assert CycNumber.from_terms(p, 1, [(k, 1) for k in range(p)]) == 0


@given(st.sampled_from([2, 3, 5]), st.data())
def test_spherical_values_embed(p, data):
    ph = [Fraction(data.draw(st.integers(0, p**2 - 1)), p**2) for _ in range(2)]
    mags = [data.draw(st.fractions(-4, 4, max_denominator=3)) for _ in range(2)]
    u, v = SphericalValue(mags[0], ph[0]), SphericalValue(mags[1], ph[1])
    assert (u * v).to_cyc(p) == u.to_cyc(p) * v.to_cyc(p)


def test_parse_point():
    assert parse_point("1, 1/2,-3") == [1, Fraction(1, 2), -3]
