"""Finite fields F_{p^f} with elements encoded as integers 0..q-1 (base-p
digits of the polynomial coefficients).  Multiplication goes through
log/antilog tables of a primitive element, so numpy arrays of codes can be
combined with fancy indexing."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1 or not is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, f
    raise ValueError(f"{q} is not a prime power")


def _order_mod(g: int, p: int) -> int:
    k, cur = 1, g % p
    while cur != 1:
        cur = cur * g % p
        k += 1
    return k


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Product of coefficient lists (low degree first) reduced by a monic modulus."""
    f = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for d in range(len(out) - 1, f - 1, -1):
        c = out[d]
        if c:
            for k in range(f + 1):
                out[d - f + k] = (out[d - f + k] - c * mod[k]) % p
    return (out + [0] * f)[:f]


def _is_primitive(mod: list[int], p: int) -> bool:
    f = len(mod) - 1
    q = p**f
    x = [0, 1] + [0] * (f - 2) if f > 1 else [(-mod[0]) % p]
    cur = [1] + [0] * (f - 1)
    seen = set()
    for k in range(1, q):
        cur = _poly_mulmod(cur, x, mod, p)
        t = tuple(cur)
        if t == tuple([1] + [0] * (f - 1)):
            return k == q - 1
        if t in seen:
            return False
        seen.add(t)
    return False


@lru_cache(maxsize=None)
def primitive_modulus(p: int, f: int) -> tuple[int, ...]:
    """First monic primitive polynomial of degree f in lexicographic order of
    (c_{f-1}, ..., c_0); coefficients are returned low degree first."""
    if f == 1:
        g = next(g for g in range(1, p) if _order_mod(g, p) == p - 1)
        return ((-g) % p, 1)
    for high in itertools.product(range(p), repeat=f):
        mod = list(reversed(high)) + [1]
        if mod[0] == 0:
            continue
        if _is_primitive(mod, p):
            return tuple(mod)
    raise ValueError("no primitive polynomial found")


class FiniteField:
    def __init__(self, q: int):
        self.p, self.f = prime_power(q)
        self.q = q
        self.modulus = primitive_modulus(self.p, self.f)

    def __repr__(self):
        return f"FiniteField({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.f)]

    def from_digits(self, d) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(d))

    @cached_property
    def _tables(self):
        p, f, q = self.p, self.f, self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        gen = [0, 1] + [0] * (f - 2) if f > 1 else [(-self.modulus[0]) % p]
        cur = [1] + [0] * (f - 1)
        for k in range(q - 1):
            code = self.from_digits(cur)
            exp[k] = exp[k + q - 1] = code
            log[code] = k
            cur = _poly_mulmod(cur, gen, list(self.modulus), p)
        return exp, log

    @cached_property
    def add_table(self) -> np.ndarray:
        q = self.q
        codes = np.arange(q)
        dig = np.stack([(codes // self.p**i) % self.p for i in range(self.f)], axis=1)
        s = (dig[:, None, :] + dig[None, :, :]) % self.p
        return (s * (self.p ** np.arange(self.f))).sum(axis=2)

    @cached_property
    def neg_table(self) -> np.ndarray:
        codes = np.arange(self.q)
        dig = np.stack([(codes // self.p**i) % self.p for i in range(self.f)], axis=1)
        return (((-dig) % self.p) * (self.p ** np.arange(self.f))).sum(axis=1)

    TABLE_LIMIT = 1 << 12

    def _digitwise(self, a, b, sign: int):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            out = a ^ b
        else:
            out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
            for i in range(self.f):
                w = self.p**i
                out += (((a // w) % self.p + sign * ((b // w) % self.p)) % self.p) * w
        return out if out.ndim else int(out)

    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        if self.q > self.TABLE_LIMIT:
            return self._digitwise(a, b, 1)
        return self.add_table[a, b]

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.p
        if self.q > self.TABLE_LIMIT:
            return self._digitwise(0, a, -1)
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.f == 1:
            return (a * b) % self.p
        exp, log = self._tables
        a = np.asarray(a)
        b = np.asarray(b)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        exp, log = self._tables
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of 0")
        out = exp[(-log[a]) % (self.q - 1)]
        return out if np.ndim(out) else int(out)

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        exp, log = self._tables
        return int(exp[(log[a] * e) % (self.q - 1)])

    def elements(self) -> range:
        return range(self.q)

    def generator(self) -> int:
        return int(self._tables[0][1])

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, as an integer in [0, p)."""
        total = 0
        cur = a
        for _ in range(self.f):
            total = self.add(total, cur)
            cur = self.power(cur, self.p)
        total = int(total)
        if total >= self.p:
            raise ArithmeticError("trace left the prime field")
        return total

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Trace is F_p-linear, so it is determined by the digit basis."""
        basis = [self.trace(self.p**i) for i in range(self.f)]
        codes = np.arange(self.q, dtype=np.int64)
        acc = np.zeros(self.q, dtype=np.int64)
        for i, t in enumerate(basis):
            acc += ((codes // self.p**i) % self.p) * t
        return acc % self.p

    def additive_character(self, a: int) -> Fraction:
        """Phase of psi(a) = zeta_p^{Tr a}."""
        return Fraction(self.trace(a), self.p)

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime field."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return int(self._tables[1][a]) % 2 == 0 or self.p == 2


@lru_cache(maxsize=None)
def field(q: int) -> FiniteField:
    return FiniteField(q)


class GF:
    """Lightweight scalar wrapper so the generic cubic-form code runs over F_q."""

    __slots__ = ("F", "v")

    def __init__(self, F: FiniteField, v: int):
        self.F = F
        self.v = int(v)

    def _c(self, other):
        if isinstance(other, GF):
            return other.v
        return self.F.from_int(int(other))

    def __add__(self, o):
        return GF(self.F, self.F.add(self.v, self._c(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return GF(self.F, self.F.sub(self.v, self._c(o)))

    def __rsub__(self, o):
        return GF(self.F, self.F.sub(self._c(o), self.v))

    def __neg__(self):
        return GF(self.F, self.F.neg(self.v))

    def __mul__(self, o):
        return GF(self.F, self.F.mul(self.v, self._c(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return GF(self.F, self.F.mul(self.v, self.F.inv(self._c(o))))

    def __eq__(self, o):
        return self.v == self._c(o)

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"GF{self.F.q}({self.v})"
