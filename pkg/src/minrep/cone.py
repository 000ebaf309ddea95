"""The cubic form on Lambda / (e_beta0), its gradient map, and the cone of
lifts inside V.  Functions accept any exact ring elements (int, Fraction,
finite-field elements) and, separately, numpy arrays for vectorised work."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .rootsys import HeisenbergFrame, Root, parse_group


@dataclass(frozen=True)
class CubicForm:
    """I(x) = sum coef * x_i x_j x_k over 0-based indices into (x_1..x_n)."""

    n: int
    monomials: tuple[tuple[int, int, int, int], ...]

    def __call__(self, x: Sequence):
        return sum(c * x[i] * x[j] * x[k] for i, j, k, c in self.monomials)

    def gradient(self, x: Sequence) -> list:
        g = [0 * x[0]] * self.n
        for i, j, k, c in self.monomials:
            g[i] = g[i] + c * x[j] * x[k]
            g[j] = g[j] + c * x[i] * x[k]
            g[k] = g[k] + c * x[i] * x[j]
        return g

    def polar_gradient(self, a: Sequence, b: Sequence) -> list:
        """Bilinear part of grad I(a u + b v): coefficient of u v."""
        g = [0 * a[0]] * self.n
        for i, j, k, c in self.monomials:
            g[i] = g[i] + c * (a[j] * b[k] + a[k] * b[j])
            g[j] = g[j] + c * (a[i] * b[k] + a[k] * b[i])
            g[k] = g[k] + c * (a[i] * b[j] + a[j] * b[i])
        return g

    # numpy kernels; the caller reduces modulo p when needed ---------------

    def value_np(self, x: np.ndarray, mod: int | None = None) -> np.ndarray:
        out = np.zeros(x.shape[:-1], dtype=np.int64)
        for i, j, k, c in self.monomials:
            t = x[..., i] * x[..., j]
            if mod is not None:
                t %= mod
            out += c * t * x[..., k]
            if mod is not None:
                out %= mod
        return out

    def gradient_np(self, x: np.ndarray, mod: int | None = None) -> np.ndarray:
        out = np.zeros(x.shape, dtype=np.int64)
        for i, j, k, c in self.monomials:
            out[..., i] += c * x[..., j] * x[..., k]
            out[..., j] += c * x[..., i] * x[..., k]
            out[..., k] += c * x[..., i] * x[..., j]
            if mod is not None:
                out %= mod
        return out

    def gradient_terms(self) -> list[list[tuple[int, int, int]]]:
        """For each i, the quadratic monomials (coef, j, k) of dI/dx_i."""
        terms: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for i, j, k, c in self.monomials:
            terms[i].append((c, j, k))
            terms[j].append((c, i, k))
            terms[k].append((c, i, j))
        return terms


@lru_cache(maxsize=None)
def cubic_form(group: str) -> CubicForm:
    fr = HeisenbergFrame.of(group)
    rs = fr.rs
    b = fr.betas
    target = tuple(x + y for x, y in zip(b[0], fr.omega))
    c0 = rs.sign(b[0], fr.omega)
    mons = []
    for i, j, k in itertools.combinations(range(1, fr.n + 1), 3):
        if tuple(x + y + z for x, y, z in zip(b[i], b[j], b[k])) == target:
            c = rs.sign(b[i], b[j]) * rs.sign(b[i], b[k]) * rs.sign(b[j], b[k]) * c0
            mons.append((i - 1, j - 1, k - 1, c))
    return CubicForm(fr.n, tuple(mons))


def repeated_index_triples(group: str) -> list[tuple[int, int]]:
    """Pairs (i, j) with 2 beta_i + beta_j = beta_0 + omega (expected empty)."""
    fr = HeisenbergFrame.of(group)
    b = fr.betas
    target = tuple(x + y for x, y in zip(b[0], fr.omega))
    return [
        (i, j)
        for i in range(1, fr.n + 1)
        for j in range(1, fr.n + 1)
        if tuple(2 * x + y for x, y in zip(b[i], b[j])) == target
    ]


# prehomogeneous identities ------------------------------------------------


def prehomogeneous_holds(form: CubicForm, x: Sequence, mod: int | None = None) -> tuple[bool, bool]:
    """(grad I(grad I x) == I(x) x, I(grad I x) == I(x)^2)."""
    red = (lambda v: v % mod) if mod else (lambda v: v)
    g = [red(v) for v in form.gradient(x)]
    gg = [red(v) for v in form.gradient(g)]
    ix = red(form(x))
    first = all(red(a - ix * b) == 0 for a, b in zip(gg, x))
    second = red(form(g) - ix * ix) == 0
    return first, second


def random_points(n: int, count: int, seed: int, field: str | int = "Q") -> list[list]:
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        if field == "Q":
            pts.append([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)])
        else:
            pts.append([rng.randrange(int(field)) for _ in range(n)])
    return pts


def check_prehomogeneous(group: str, count: int = 200, seed: int = 0, field="Q") -> dict:
    form = cubic_form(group)
    mod = None if field == "Q" else int(field)
    ok1 = ok2 = True
    for x in random_points(form.n, count, seed, field):
        a, b = prehomogeneous_holds(form, x, mod)
        ok1 &= a
        ok2 &= b
    return {"gradgrad": ok1, "I(grad)": ok2}


# V, the Levi action and the lift -----------------------------------------


@lru_cache(maxsize=None)
def _levi_table(group: str, alpha: Root) -> tuple[tuple[int, int, int], ...]:
    fr = HeisenbergFrame.of(group)
    if fr.rs.pair(fr.omega, alpha) != 0:
        raise ValueError(f"{alpha} is not a Levi root")
    out = []
    for src, g in enumerate(fr.basis):
        dst = fr.basis_index.get(tuple(a + b for a, b in zip(g, alpha)))
        if dst is not None:
            out.append((src, dst, fr.rs.sign(alpha, g)))
    return tuple(out)


def levi_action(group: str, alpha: Root, t, v: Sequence, mod: int | None = None) -> list:
    """e_alpha(t) acting on V: e_gamma -> e_gamma + c(alpha, gamma) t e_{gamma+alpha}."""
    out = list(v)
    for src, dst, c in _levi_table(parse_group(group), tuple(alpha)):
        out[dst] = out[dst] + c * t * v[src]
    if mod:
        out = [a % mod for a in out]
    return out


def levi_matrix(group: str, alpha: Root, t: int, mod: int) -> np.ndarray:
    fr = HeisenbergFrame.of(group)
    d = 2 * fr.n + 2
    m = np.eye(d, dtype=np.int64)
    for src, dst, c in _levi_table(parse_group(group), tuple(alpha)):
        m[dst, src] = (m[dst, src] + c * t) % mod
    return m


def torus_action(group: str, values: Sequence, v: Sequence) -> list:
    """Torus element with alpha_i(t) = values[i] acting on V."""
    fr = HeisenbergFrame.of(group)
    return [root_character(r, values) * a for r, a in zip(fr.basis, v)]


def root_character(root: Root, values: Sequence):
    out = 1
    for e, val in zip(root, values):
        out = out * (val**e if e >= 0 else Fraction(1) / val ** (-e))
    return out


def cone_lift(group: str, x0, x: Sequence) -> list:
    """The point (x, eps * grad(I/x0)(x)) of the cone over the chart x0 != 0."""
    fr = HeisenbergFrame.of(group)
    form = cubic_form(fr.label)
    x0 = Fraction(x0)
    x = [Fraction(a) for a in x]
    grad = form.gradient(x)
    dual = [-form(x) / x0**2] + [g / x0 for g in grad]
    return [x0, *x] + [e * d for e, d in zip(fr.eps, dual)]


def lift_norm_vector(group: str, x0, x: Sequence) -> list:
    """(x0, x, -I/x0^2, grad I/x0) without the sign twist, used for norms."""
    form = cubic_form(parse_group(group))
    return [x0, *x, -form(x) / x0**2, *[g / x0 for g in form.gradient(x)]]


def is_lift(group: str, v: Sequence) -> bool:
    fr = HeisenbergFrame.of(group)
    m = fr.n + 1
    if v[0] == 0:
        return False
    expected = cone_lift(group, v[0], v[1:m])
    return all(Fraction(a) == b for a, b in zip(v, expected))


def star(group: str, v: Sequence) -> list:
    """Swap of the beta and gamma blocks carrying lifts to lifts; star^2 = -1."""
    fr = HeisenbergFrame.of(group)
    m = fr.n + 1
    lam, lamp = v[:m], v[m:]
    return [e * a for e, a in zip(fr.eps, lamp)] + [-e * a for e, a in zip(fr.eps, lam)]


def check_cubic_scaling(group: str, alpha: Root, t, lam: Sequence) -> tuple:
    """Both sides of E(l, B_g l)/2 = (I(A_g l) - I(l)) / x0 for g = e_alpha(t)."""
    fr = HeisenbergFrame.of(group)
    form = cubic_form(fr.label)
    m = fr.n + 1
    v = list(lam) + [0] * m
    gv = levi_action(group, alpha, t, v)
    if gv[0] != v[0]:
        raise ValueError("element does not fix x0")
    a_part = gv[:m] + [0] * m
    b_part = [0] * m + gv[m:]
    lhs = Fraction(fr.symplectic(a_part, b_part), 2)
    rhs = Fraction(form(gv[1:m]) - form(v[1:m])) / v[0]
    return lhs, rhs


def check_torus_scaling(group: str, values: Sequence, x: Sequence) -> tuple:
    """Both sides of I(gamma_i(t) x_i) = gamma_0(t) omega(t) I(x)."""
    fr = HeisenbergFrame.of(group)
    form = cubic_form(fr.label)
    scaled = [root_character(g, values) * a for g, a in zip(fr.gammas[1:], x)]
    lhs = form(scaled)
    rhs = root_character(fr.gammas[0], values) * root_character(fr.omega, values) * form(x)
    return lhs, rhs


def positive_levi_roots(group: str) -> list[Root]:
    fr = HeisenbergFrame.of(group)
    return [r for r in fr.levi_roots if sum(r) > 0]


def simple_levi_roots(group: str) -> list[Root]:
    fr = HeisenbergFrame.of(group)
    rs = fr.rs
    return [rs.simple(i) for i in range(1, rs.rank + 1) if i != rs.beta0]
