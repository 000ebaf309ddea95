"""Exact p-adic bookkeeping for rational inputs.

Roots of unity are stored as their phase in Q/Z (a Fraction in [0, 1)), so
products of values of different local characters stay exact.  Sums of roots
of unity live in CycNumber, an element of Q(zeta_{p^m}) in reduced power
basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

INF = math.inf
PSI_CONDUCTOR_CAP = 8


class ConductorOverflow(ValueError):
    """The additive character would need a root of unity of order > p^cap."""


class InvalidPoint(ValueError):
    pass


def valuation(x, p: int) -> int | float:
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def vector_valuation(xs: Iterable, p: int) -> int | float:
    return min((valuation(x, p) for x in xs), default=INF)


def norm(x, p: int) -> Fraction:
    v = valuation(x, p)
    if v == INF:
        return Fraction(0)
    return Fraction(p) ** (-v)


def vector_norm(xs: Iterable, p: int) -> Fraction:
    v = vector_valuation(xs, p)
    return Fraction(0) if v == INF else Fraction(p) ** (-v)


def prime_part(x, p: int) -> Fraction:
    """The fractional part {x}_p in [0, 1), so psi_p(x) = exp(2 pi i {x}_p)."""
    x = Fraction(x)
    den = x.denominator
    m = 0
    while den % p == 0:
        den //= p
        m += 1
    if m == 0:
        return Fraction(0)
    pm = p**m
    u = (x.numerator * pow(den, -1, pm)) % pm
    return Fraction(u, pm)


def psi(x, p: int, cap: int = PSI_CONDUCTOR_CAP) -> Fraction:
    """Phase of the order-zero additive character of Q_p at x."""
    ph = prime_part(x, p)
    m = valuation(ph.denominator, p) if ph else 0
    if m > cap:
        raise ConductorOverflow(f"psi needs zeta_{{{p}^{m}}}, cap is {p}^{cap}")
    return ph


def phase_conductor(phase: Fraction) -> int:
    return Fraction(phase).denominator


# cyclotomic numbers ---------------------------------------------------------


@dataclass(frozen=True)
class CycNumber:
    """sum_k coeffs[k] zeta_N^k with N = p^m and k < phi(N)."""

    p: int
    m: int
    coeffs: tuple[Fraction, ...]

    @property
    def conductor(self) -> int:
        return self.p**self.m

    @classmethod
    def from_terms(cls, p: int, m: int, terms: Iterable[tuple[int, object]]) -> "CycNumber":
        """Reduce a formal sum of (exponent mod p^m, rational coefficient)."""
        big = p**m
        vec = [Fraction(0)] * big
        for k, c in terms:
            vec[k % big] += Fraction(c)
        return cls(p, m, _reduce(vec, p, m))

    @classmethod
    def from_phases(cls, p: int, terms: Iterable[tuple[Fraction, object]]) -> "CycNumber":
        signed = []
        for ph, c in terms:
            ph = Fraction(ph) % 1
            if p != 2 and ph.denominator % 2 == 0:
                # -1 = exp(pi i) is not a p-power root of unity for odd p
                ph, c = (ph - Fraction(1, 2)) % 1, -Fraction(c)
            d = ph.denominator
            while d % p == 0:
                d //= p
            if d != 1:
                raise ValueError(f"phase {ph} is not a {p}-power root of unity")
            signed.append((ph, c))
        terms = signed
        m = 0
        for ph, _ in terms:
            m = max(m, int(valuation(ph.denominator, p)) if ph else 0)
        big = p**m
        return cls.from_terms(p, m, ((int(ph * big), c) for ph, c in terms))

    @classmethod
    def rational(cls, p: int, value) -> "CycNumber":
        return cls(p, 0, (Fraction(value),))

    def lift(self, m: int) -> "CycNumber":
        if m < self.m:
            raise ValueError("cannot lower the conductor by lifting")
        if m == self.m:
            return self
        step = self.p ** (m - self.m)
        return CycNumber.from_terms(
            self.p, m, ((k * step, c) for k, c in enumerate(self.coeffs))
        )

    def _align(self, other: "CycNumber") -> tuple["CycNumber", "CycNumber"]:
        if self.m and other.m and self.p != other.p:
            raise ValueError("cyclotomic numbers over different primes")
        p = self.p if self.m else other.p
        m = max(self.m, other.m)
        return CycNumber(p, self.m, self.coeffs).lift(m), CycNumber(p, other.m, other.coeffs).lift(m)

    def __add__(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(self.p, other)
        a, b = self._align(other)
        return CycNumber(a.p, a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.p, self.m, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CycNumber):
            c = Fraction(other)
            return CycNumber(self.p, self.m, tuple(c * x for x in self.coeffs))
        a, b = self._align(other)
        terms = [
            (i + j, x * y)
            for i, x in enumerate(a.coeffs)
            if x
            for j, y in enumerate(b.coeffs)
            if y
        ]
        return CycNumber.from_terms(a.p, a.m, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CycNumber):
            try:
                other = CycNumber.rational(self.p, other)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized().coeffs)

    def normalized(self) -> "CycNumber":
        """Lowest conductor carrying the same element."""
        cur = self
        while cur.m > 1 and all(c == 0 for k, c in enumerate(cur.coeffs) if k % cur.p):
            cur = CycNumber(cur.p, cur.m - 1, cur.coeffs[:: cur.p])
        if cur.m == 1 and not any(cur.coeffs[1:]):
            cur = CycNumber(cur.p, 0, cur.coeffs[:1])
        return cur

    def is_rational(self) -> bool:
        return self.normalized().m == 0

    def to_rational(self) -> Fraction:
        nm = self.normalized()
        if nm.m:
            raise ValueError(f"{self} is not rational")
        return nm.coeffs[0]

    def __str__(self):
        nm = self.normalized()
        if nm.m == 0:
            return str(nm.coeffs[0])
        parts = [f"{c}*z{nm.conductor}^{k}" for k, c in enumerate(nm.coeffs) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"CycNumber({self})"


def _reduce(vec: list, p: int, m: int) -> tuple[Fraction, ...]:
    if m == 0:
        return (vec[0],)
    big = p**m
    step = big // p
    phi = big - step
    vec = list(vec)
    for k in range(big - 1, phi - 1, -1):
        c = vec[k]
        if c:
            vec[k] = Fraction(0)
            for j in range(1, p):
                vec[k - j * step] -= c
    return tuple(vec[:phi])


# spherical values ---------------------------------------------------------


@dataclass(frozen=True)
class SphericalValue:
    """magnitude * exp(2 pi i phase), both exact rationals."""

    magnitude: Fraction
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        mag, ph = Fraction(self.magnitude), Fraction(self.phase)
        if mag < 0:
            mag, ph = -mag, ph + Fraction(1, 2)
        object.__setattr__(self, "magnitude", mag)
        ph = ph % 1 if mag else Fraction(0)
        object.__setattr__(self, "phase", ph)

    def __mul__(self, other):
        if isinstance(other, SphericalValue):
            return SphericalValue(self.magnitude * other.magnitude, self.phase + other.phase)
        return SphericalValue(self.magnitude * Fraction(other), self.phase)

    __rmul__ = __mul__

    def twist(self, phase) -> "SphericalValue":
        return SphericalValue(self.magnitude, self.phase + Fraction(phase))

    def __eq__(self, other):
        if isinstance(other, SphericalValue):
            return self.magnitude == other.magnitude and self.phase == other.phase
        if isinstance(other, CycNumber):
            return self.to_cyc(other.p) == other
        try:
            return self.phase == 0 and self.magnitude == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.magnitude, self.phase))

    def to_cyc(self, p: int) -> CycNumber:
        return CycNumber.from_phases(p, [(self.phase, self.magnitude)])

    def __str__(self):
        if self.phase == 0:
            return str(self.magnitude)
        return f"{self.magnitude}*e({self.phase})"


def parse_point(text: str | Sequence) -> list[Fraction]:
    if isinstance(text, str):
        items = [t for t in text.replace(" ", "").split(",") if t]
    else:
        items = list(text)
    try:
        return [Fraction(t) for t in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidPoint(str(exc)) from exc
