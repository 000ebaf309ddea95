"""Closed-form spherical vector of the minimal representation over Q_p in the
Schroedinger model, and the operators used to cross-check it.

A point is (y, x0, x1, ..., xn) with rational coordinates; y != 0.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .cone import cubic_form
from .padic import (
    INF,
    InvalidPoint,
    CycNumber,
    SphericalValue,
    norm,
    psi,
    valuation,
    vector_valuation,
)
from .rootsys import HeisenbergFrame, parse_group


def family(group: str) -> tuple[str, int]:
    """('E', s) or ('D', k)."""
    g = parse_group(group)
    if g.startswith("E"):
        return "E", HeisenbergFrame.of(g).s
    return "D", int(g[1:])


def radial_factor(group: str, p: int, v: int | float) -> Fraction:
    """The factor depending on the valuation v of the lift; zero when v < 0."""
    if v < 0:
        return Fraction(0)
    kind, par = family(group)
    if kind == "D" and par == 4:
        return Fraction(1 + int(v))
    u = par if kind == "E" else par - 4
    qu = Fraction(p) ** u
    return (qu ** (int(v) + 1) - 1) / (qu - 1)


def _prefactor(group: str, p: int, x0, x1) -> Fraction:
    kind, par = family(group)
    if kind == "E":
        return norm(x0, p) ** (-(par + 1))
    base = norm(x0, p) ** -1
    if par > 4:
        base *= max(Fraction(1), norm(Fraction(x1) / x0, p)) ** (par - 4)
    return base


def lift_valuation(group: str, p: int, x0, x: Sequence) -> int | float:
    form = cubic_form(parse_group(group))
    x0 = Fraction(x0)
    x = [Fraction(a) for a in x]
    cub = form(x)
    grad = form.gradient(x)
    parts = [valuation(x0, p), vector_valuation(x, p)]
    parts.append(valuation(cub, p) - 2 * valuation(x0, p))
    parts.append(vector_valuation(grad, p) - valuation(x0, p))
    return min(parts)


def fbar_closed(group: str, p: int, x0, x: Sequence) -> SphericalValue:
    """The limit fbar_0(x0, x); no phase."""
    x0 = Fraction(x0)
    if x0 == 0:
        raise InvalidPoint("fbar is evaluated on x0 != 0")
    v = lift_valuation(group, p, x0, x)
    if v < 0:
        return SphericalValue(0)
    return SphericalValue(_prefactor(group, p, x0, x[0]) * radial_factor(group, p, v))


def _check(group: str, pt: Sequence) -> tuple[Fraction, Fraction, list[Fraction]]:
    fr = HeisenbergFrame.of(group)
    if len(pt) != fr.n + 2:
        raise InvalidPoint(f"{group} points have {fr.n + 2} coordinates, got {len(pt)}")
    y, x0, *x = (Fraction(a) for a in pt)
    if y == 0:
        raise InvalidPoint("y must be nonzero")
    return y, x0, x


def spherical_eval(group: str, p: int, pt: Sequence) -> SphericalValue:
    """f_0(y, x0, x) exactly."""
    group = parse_group(group)
    y, x0, x = _check(group, pt)
    if x0 == 0:
        return fbar_closed(group, p, y, x)
    form = cubic_form(group)
    if norm(y, p) > norm(x0, p):
        # A-reduction: f(y, x0, x) = psi(-I/(x0 y)) f(-x0, y, x)
        inner = spherical_eval(group, p, [-x0, y, *x])
        return inner.twist(psi(-form(x) / (x0 * y), p)) if inner.magnitude else inner
    base = fbar_closed(group, p, x0, x)
    if not base.magnitude:
        return base
    return base.twist(psi(-form(x) / (y * x0), p))


def spherical_eval_far(group: str, p: int, pt: Sequence) -> SphericalValue:
    """Independent closed form on |y| > |x0|: fbar with y in the x0 slot, no phase."""
    y, x0, x = _check(parse_group(group), pt)
    if norm(y, p) <= norm(x0, p):
        raise InvalidPoint("needs |y| > |x0|")
    return fbar_closed(group, p, y, x)


def a_operator(group: str, p: int, pt: Sequence) -> SphericalValue:
    """(A f_0)(y, x0, x) = psi(-I/(x0 y)) f_0(-x0, y, x)."""
    y, x0, x = _check(parse_group(group), pt)
    if x0 == 0:
        raise InvalidPoint("A is evaluated on x0 != 0")
    inner = spherical_eval(group, p, [-x0, y, *x])
    if not inner.magnitude:
        return inner
    return inner.twist(psi(-cubic_form(parse_group(group))(x) / (x0 * y), p))


def check_a_invariance(group: str, p: int, pt: Sequence) -> tuple[SphericalValue, SphericalValue]:
    return spherical_eval(group, p, pt), a_operator(group, p, pt)


def beta0_coroot(group: str, p: int, c, pt: Sequence) -> SphericalValue:
    y, x0, x = _check(parse_group(group), pt)
    c = Fraction(c)
    return spherical_eval(group, p, [c * y, x0 / c, *x])


def fbar_limit(group: str, p: int, x0, x: Sequence, depths: Sequence[int]) -> list[SphericalValue]:
    """psi(I/(x0 y)) f_0(y, x0, x) for y = p^d, d in depths."""
    form = cubic_form(parse_group(group))
    x0 = Fraction(x0)
    out = []
    for d in depths:
        y = Fraction(p) ** d
        val = spherical_eval(group, p, [y, x0, *x])
        out.append(val.twist(psi(form(x) / (x0 * y), p)) if val.magnitude else val)
    return out


def center_scaled(group: str, p: int, c, pt: Sequence) -> SphericalValue:
    """omega^vee_{beta0}(c) f_0 at pt: |c|^{(n+3)/2} f_0(c^2 y, c x0, c x)."""
    fr = HeisenbergFrame.of(group)
    y, x0, x = _check(fr.label, pt)
    c = Fraction(c)
    val = spherical_eval(fr.label, p, [c * c * y, c * x0, *[c * a for a in x]])
    return val * norm(c, p) ** Fraction(fr.n + 3, 2)


def predicted_center_scaled(group: str, p: int, c, pt: Sequence) -> SphericalValue:
    """Prediction of center_scaled from the homogeneity of the closed form.

    Valid when |c^2 y| <= |c x0|: the phase is unchanged, the prefactor picks
    up |c|^{-s-1} (E) or |c|^{-1} (D) and the lift valuation shifts by v(c).
    """
    fr = HeisenbergFrame.of(group)
    y, x0, x = _check(fr.label, pt)
    c = Fraction(c)
    if x0 == 0 or norm(c * y, p) > norm(x0, p):
        raise InvalidPoint("prediction needs |c y| <= |x0| and x0 != 0")
    kind, par = family(fr.label)
    vc = valuation(c, p)
    v = lift_valuation(fr.label, p, x0, x)
    if v + vc < 0:
        return SphericalValue(0)
    weight = norm(c, p) ** Fraction(fr.n + 3, 2)
    pref = _prefactor(fr.label, p, x0, x[0]) * norm(c, p) ** (-(par + 1) if kind == "E" else -1)
    phase = psi(-cubic_form(fr.label)(x) / (y * x0), p)
    return SphericalValue(weight * pref * radial_factor(fr.label, p, v + vc), phase)


# D4 oracle -----------------------------------------------------------------


def d4_phi0_eval(p: int, vec: Sequence) -> Fraction:
    """Spherical vector of the degenerate principal series on the quadric cone."""
    vec = [Fraction(a) for a in vec]
    v = vector_valuation(vec, p)
    if v < 0 or v == INF:
        return Fraction(0)
    q = Fraction(p)
    return (q**v - 1 / q) / (1 - 1 / q)


def d4_truncation(p: int, pt: Sequence) -> int:
    """Depth m making the integrand of the intertwiner constant on x0' + p^m Z_p."""
    y, x0, x1, x2, x3 = (Fraction(a) for a in pt)
    vy = valuation(y, p)
    bounds = [0, vy, vy - valuation(x3, p), 2 * vy - valuation(x0, p)]
    return int(max(b for b in bounds if b != -INF))


def d4_intertwiner_eval(p: int, pt: Sequence, m: int | None = None, cubic_sign: int = 1) -> CycNumber:
    """Integral over yy' + x0 x0' + x1 x2 = 0 of psi(x3 x0'/y) phi_0 dx0'/|y|,
    as an exact finite sum over x0' in Z_p / p^m.  The cubic form on this
    side is cubic_sign * x1 x2 x3."""
    y, x0, x1, x2, x3 = (Fraction(a) for a in pt)
    if y == 0:
        raise InvalidPoint("y must be nonzero")
    if m is None:
        m = d4_truncation(p, pt)
    if valuation(y, p) < 0 or min(valuation(a, p) for a in (x0, x1, x2)) < 0:
        return CycNumber.rational(p, 0)
    weight = Fraction(1, p**m) / norm(y, p)
    terms = []
    for r in range(p**m):
        yp = -(x0 * r + x1 * x2) / y
        if valuation(yp, p) < 0:
            continue
        phi = d4_phi0_eval(p, (y, yp, x0, r, x1, x2))
        if phi:
            terms.append((psi(cubic_sign * x3 * r / y, p), phi * weight))
    return CycNumber.from_phases(p, terms) if terms else CycNumber.rational(p, 0)


def d4_cubic_sign() -> int:
    form = cubic_form("D4")
    (_, _, _, c), = form.monomials
    return c


# sampling --------------------------------------------------------------------


def _rand_padic(rng: random.Random, p: int, vmin: int, vmax: int, zero_rate=0.1) -> Fraction:
    if rng.random() < zero_rate:
        return Fraction(0)
    v = rng.randint(vmin, vmax)
    u = rng.randrange(1, 4 * p)
    while u % p == 0:
        u = rng.randrange(1, 4 * p)
    return Fraction(u * rng.choice((1, -1))) * Fraction(p) ** v


def sample_point(group: str, p: int, rng: random.Random, structured: bool | None = None) -> list[Fraction]:
    """Random point; structured points x = x0 z + small noise have nonzero values."""
    n = HeisenbergFrame.of(group).n
    if structured is None:
        structured = rng.random() < 0.7
    y = _rand_padic(rng, p, -1, 3, 0)
    x0 = _rand_padic(rng, p, -1, 3, 0.05)
    if structured and x0:
        base = x0 if rng.random() < 0.5 else y
        x = [base * _rand_padic(rng, p, 0, 2, 0.3) + _rand_padic(rng, p, 2, 4, 0.6) for _ in range(n)]
    else:
        x = [_rand_padic(rng, p, -1, 3, 0.2) for _ in range(n)]
    return [y, x0, *x]
