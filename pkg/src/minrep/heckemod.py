"""Lusztig's module for the affine Hecke algebra on E~ and the Bernstein
element attached to omega^vee_{beta0}.

Matrices have entries in Z[v, v^-1] with v^2 = q.  The basis of E~ is indexed
by affine vertices: 0 is -omega (the affine node), i in 1..k is alpha_i.
Coweights are written in the simple-coroot basis, so with simply-laced
roots in the simple-root basis the pairing is r^T C c.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy

from .rootsys import HeisenbergFrame, RootSystem, parse_group


# Laurent matrices -------------------------------------------------------------


@dataclass(frozen=True)
class LaurentMatrix:
    """sum_e coeffs[:, :, e] v^(lo + e), integer coefficients."""

    lo: int
    coeffs: np.ndarray  # object dtype, shape (d, d, K)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def zeros(cls, d: int) -> "LaurentMatrix":
        return cls(0, np.zeros((d, d, 1), dtype=object))

    @classmethod
    def identity(cls, d: int) -> "LaurentMatrix":
        c = np.zeros((d, d, 1), dtype=object)
        for i in range(d):
            c[i, i, 0] = 1
        return cls(0, c)

    @classmethod
    def from_entries(cls, d: int, entries: dict[tuple[int, int], dict[int, int]]) -> "LaurentMatrix":
        exps = [e for poly in entries.values() for e in poly] or [0]
        lo, hi = min(exps), max(exps)
        c = np.zeros((d, d, hi - lo + 1), dtype=object)
        for (i, j), poly in entries.items():
            for e, a in poly.items():
                c[i, j, e - lo] += a
        return cls(lo, c).trimmed()

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "LaurentMatrix":
        """Matrix sending e_i to e_{perm[i]}."""
        return cls.from_entries(len(perm), {(perm[i], i): {0: 1} for i in range(len(perm))})

    def trimmed(self) -> "LaurentMatrix":
        nz = [e for e in range(self.coeffs.shape[2]) if any(self.coeffs[:, :, e].ravel())]
        if not nz:
            return LaurentMatrix(0, np.zeros((self.dim, self.dim, 1), dtype=object))
        return LaurentMatrix(self.lo + nz[0], self.coeffs[:, :, nz[0] : nz[-1] + 1].copy())

    def _aligned(self, other: "LaurentMatrix") -> tuple[int, np.ndarray, np.ndarray]:
        lo = min(self.lo, other.lo)
        hi = max(self.lo + self.coeffs.shape[2], other.lo + other.coeffs.shape[2])
        out = []
        for m in (self, other):
            c = np.zeros((m.dim, m.dim, hi - lo), dtype=object)
            c[:, :, m.lo - lo : m.lo - lo + m.coeffs.shape[2]] = m.coeffs
            out.append(c)
        return lo, out[0], out[1]

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        lo, a, b = self._aligned(other)
        return LaurentMatrix(lo, a + b).trimmed()

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix(self.lo, -self.coeffs)

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + (-other)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        ka, kb = self.coeffs.shape[2], other.coeffs.shape[2]
        out = np.zeros((self.dim, other.dim, ka + kb - 1), dtype=object)
        for a in range(ka):
            A = self.coeffs[:, :, a]
            if not A.any():
                continue
            for b in range(kb):
                B = other.coeffs[:, :, b]
                if B.any():
                    out[:, :, a + b] += A.dot(B)
        return LaurentMatrix(self.lo + other.lo, out).trimmed()

    def shift(self, e: int) -> "LaurentMatrix":
        """Multiply by v^e."""
        return LaurentMatrix(self.lo + e, self.coeffs)

    def scalar_q(self, e: int) -> "LaurentMatrix":
        """q^e times the identity, same size."""
        return LaurentMatrix.identity(self.dim).shift(2 * e)

    def is_zero(self) -> bool:
        return not any(self.coeffs.ravel())

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMatrix) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.lo, self.coeffs.shape))

    def is_polynomial_in_q(self) -> bool:
        t = self.trimmed()
        if t.is_zero():
            return True
        if t.lo < 0:
            return False
        return all(not t.coeffs[:, :, e].any() for e in range(t.coeffs.shape[2]) if (t.lo + e) % 2)

    def to_sympy_q(self, q: sympy.Symbol) -> sympy.Matrix:
        if not self.is_polynomial_in_q():
            raise ValueError("matrix is not a polynomial in q")
        d = self.dim
        M = sympy.zeros(d, d)
        for i in range(d):
            for j in range(d):
                M[i, j] = sum(
                    int(self.coeffs[i, j, e]) * q ** ((self.lo + e) // 2)
                    for e in range(self.coeffs.shape[2])
                    if self.coeffs[i, j, e]
                )
        return M

    def conjugate_diag(self, powers: Sequence[int]) -> "LaurentMatrix":
        """D^-1 M D with D = diag(v^powers)."""
        d = self.dim
        lo = min(powers) - max(powers)
        K = self.coeffs.shape[2] + 2 * (max(powers) - min(powers))
        c = np.zeros((d, d, K), dtype=object)
        for i in range(d):
            for j in range(d):
                off = powers[j] - powers[i] - lo
                c[i, j, off : off + self.coeffs.shape[2]] = self.coeffs[i, j]
        return LaurentMatrix(self.lo + lo, c).trimmed()

    def trace_q(self) -> dict[int, int]:
        """Trace as {q-exponent: coefficient}."""
        if any((self.lo + e) % 2 for e in range(self.coeffs.shape[2]) if any(self.coeffs[i, i, e] for i in range(self.dim))):
            raise ValueError("trace is not a polynomial in q")
        out: dict[int, int] = {}
        for e in range(self.coeffs.shape[2]):
            t = sum(int(self.coeffs[i, i, e]) for i in range(self.dim))
            if t:
                out[(self.lo + e) // 2] = t
        return out


# affine diagram and Lusztig's generators -------------------------------------------


@lru_cache(maxsize=None)
def affine_roots(group: str) -> tuple[tuple[int, ...], ...]:
    """Affine vertices as roots: index 0 is -omega, i is alpha_i."""
    rs = RootSystem.of(parse_group(group))
    hr = tuple(-a for a in rs.highest_root)
    return (hr,) + tuple(rs.simple(i) for i in range(1, rs.rank + 1))


def bipartite_colour(group: str) -> tuple[int, ...]:
    """Two-colouring of the affine Dynkin tree, vertex 0 coloured 0."""
    d = len(affine_roots(group))
    colour = [-1] * d
    colour[0] = 0
    stack = [0]
    while stack:
        a = stack.pop()
        for b in range(d):
            if colour[b] < 0 and affine_pairing(group, a, b) == -1:
                colour[b] = 1 - colour[a]
                stack.append(b)
    return tuple(colour)


def affine_pairing(group: str, i: int, j: int) -> int:
    rs = RootSystem.of(parse_group(group))
    roots = affine_roots(group)
    return rs.pair(roots[i], roots[j])


@lru_cache(maxsize=None)
def lusztig_generators(group: str) -> tuple[LaurentMatrix, ...]:
    """T_a e_b = -e_b if a = b; q e_b + q^(1/2) e_a if <a,b> = -1; q e_b otherwise."""
    d = len(affine_roots(group))
    gens = []
    for a in range(d):
        entries: dict[tuple[int, int], dict[int, int]] = {}
        for b in range(d):
            if a == b:
                entries[(b, b)] = {0: -1}
            else:
                entries[(b, b)] = {2: 1}
                if affine_pairing(group, a, b) == -1:
                    entries[(a, b)] = {1: 1}
        gens.append(LaurentMatrix.from_entries(d, entries))
    return tuple(gens)


def check_relations(group: str) -> dict:
    """Quadratic relation per vertex and braid relation per pair."""
    T = lusztig_generators(group)
    d = len(T)
    one = LaurentMatrix.identity(d)
    quad = {a: ((T[a] - one.shift(2)) @ (T[a] + one)).is_zero() for a in range(d)}
    braid = {}
    for a in range(d):
        for b in range(a + 1, d):
            if affine_pairing(group, a, b) == -1:
                braid[(a, b)] = T[a] @ T[b] @ T[a] == T[b] @ T[a] @ T[b]
            else:
                braid[(a, b)] = T[a] @ T[b] == T[b] @ T[a]
    return {"quadratic": quad, "braid": braid, "pass": all(quad.values()) and all(braid.values())}


# alcove walk ------------------------------------------------------------------------


class WalkError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlcoveWord:
    word: tuple[int, ...]
    automorphism: tuple[int, ...]  # tau permutes affine vertices: i -> automorphism[i]

    @property
    def length(self) -> int:
        return len(self.word)


Affine = tuple[tuple[tuple[Fraction, ...], ...], tuple[Fraction, ...]]


def _pair(C, r, c) -> Fraction:
    return sum(r[i] * C[i][j] * c[j] for i in range(len(r)) for j in range(len(c)) if r[i] and c[j])


def _apply(aff: Affine, x):
    M, b = aff
    return tuple(sum(M[i][j] * x[j] for j in range(len(x))) + b[i] for i in range(len(x)))


def _compose(f: Affine, g: Affine) -> Affine:
    """f after g."""
    Mf, bf = f
    Mg, bg = g
    d = len(bf)
    M = tuple(tuple(sum(Mf[i][k] * Mg[k][j] for k in range(d)) for j in range(d)) for i in range(d))
    return M, tuple(a + c for a, c in zip(_apply((Mf, (Fraction(0),) * d), bg), bf))


def _reflection(C, alpha, j) -> Affine:
    """x -> x - (<alpha,x> - j) alpha^vee."""
    d = len(alpha)
    row = [sum(alpha[i] * C[i][k] for i in range(d)) for k in range(d)]
    M = tuple(
        tuple(Fraction(int(i == k)) - alpha[i] * row[k] for k in range(d)) for i in range(d)
    )
    return M, tuple(Fraction(j * alpha[i]) for i in range(d))


def _affine_reflections(group: str) -> list[Affine]:
    rs = RootSystem.of(parse_group(group))
    C = rs.cartan.tolist()
    out = [_reflection(C, rs.highest_root, 1)]
    out += [_reflection(C, rs.simple(i), 0) for i in range(1, rs.rank + 1)]
    return out


def _alcove_vertices(group: str) -> list[tuple[Fraction, ...]]:
    """Vertex i of the fundamental alcove is opposite to wall i."""
    rs = RootSystem.of(parse_group(group))
    d = rs.rank
    verts = [tuple(Fraction(0) for _ in range(d))]
    for i in range(1, d + 1):
        m = rs.highest_root[i - 1]
        verts.append(tuple(c / m for c in rs.inverse_cartan[i - 1]))
    return verts


def _wall_values(group: str, x) -> list[Fraction]:
    """Affine functions of the walls of the fundamental alcove at x."""
    rs = RootSystem.of(parse_group(group))
    C = rs.cartan.tolist()
    vals = [1 - _pair(C, rs.highest_root, x)]
    vals += [_pair(C, rs.simple(i), x) for i in range(1, rs.rank + 1)]
    return vals


def translation_word(group: str, coweight: Sequence, max_tries: int = 6) -> AlcoveWord:
    """Reduced word of t_lambda = s_{i1} ... s_{iL} tau for dominant lambda."""
    rs = RootSystem.of(parse_group(group))
    C = rs.cartan.tolist()
    d = rs.rank
    lam = tuple(Fraction(c) for c in coweight)
    if any(_pair(C, rs.simple(i), lam) < 0 for i in range(1, d + 1)):
        raise ValueError("coweight must be dominant")
    h = rs.height(rs.highest_root) + 1
    rho = [sum(r) for r in zip(*rs.inverse_cartan)]
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    denom = 2 * 3 * 5 * 7 * 11 * 13
    for attempt in range(max_tries):
        eps = Fraction(1, denom * primes[attempt] * 1000)
        base = tuple(Fraction(rho[i]) / h + eps * Fraction(1, (i + 2) ** 2) for i in range(d))
        crossings = []
        for alpha in rs.positive_roots:
            a0 = _pair(C, alpha, base)
            da = _pair(C, alpha, lam)
            j = int(np.floor(a0)) + 1
            while j < a0 + da:
                crossings.append(((j - a0) / da, alpha, j))
                j += 1
        crossings.sort(key=lambda c: c[0])
        times = [c[0] for c in crossings]
        if len(set(times)) != len(times):
            continue
        refl = _affine_reflections(group)
        ident = (tuple(tuple(Fraction(int(i == k)) for k in range(d)) for i in range(d)), (Fraction(0),) * d)
        winv = ident
        word = []
        for t, alpha, j in crossings:
            pt = tuple(base[i] + t * lam[i] for i in range(d))
            pulled = _wall_values(group, _apply(winv, pt))
            hits = [i for i, v in enumerate(pulled) if v == 0]
            if len(hits) != 1:
                raise WalkError("crossing is not through a single alcove wall")
            i = hits[0]
            word.append(i)
            winv = _compose(refl[i], winv)
        # tau = w_end^{-1} t_lambda fixes the fundamental alcove
        tlam = (ident[0], lam)
        tau = _compose(winv, tlam)
        verts = _alcove_vertices(group)
        perm = []
        for v in verts:
            img = _apply(tau, v)
            if img not in verts:
                raise WalkError("residual element does not preserve the alcove")
            perm.append(verts.index(img))
        return AlcoveWord(tuple(word), tuple(perm))
    raise WalkError("perturbation retry limit exceeded")


def reduced_word_s0_stheta(group: str) -> tuple[int, ...]:
    """t_{theta^vee} = s_0 s_theta, with s_theta reduced via descent by heights."""
    rs = RootSystem.of(parse_group(group))
    # s_theta = s_{i1} ... s_{im} s_{j} s_{im} ... s_{i1} along a chain theta -> simple root
    chain = []
    cur = list(rs.highest_root)
    while sum(cur) > 1:
        for i in range(1, rs.rank + 1):
            if rs.pair(cur, rs.simple(i)) > 0:
                cur[i - 1] -= rs.pair(cur, rs.simple(i))
                chain.append(i)
                break
    last = cur.index(1) + 1
    word = tuple(chain) + (last,) + tuple(reversed(chain))
    return (0,) + word


def coweight_in_coroot_lattice(group: str, coweight: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in coweight)


# Bernstein element ----------------------------------------------------------------------


def product_along(group: str, word: Sequence[int], order: str = "left") -> LaurentMatrix:
    T = lusztig_generators(group)
    d = len(T)
    out = LaurentMatrix.identity(d)
    seq = list(word) if order == "left" else list(reversed(word))
    for i in seq:
        out = out @ T[i]
    return out


def bernstein_element(group: str, node: int | None = None, order: str = "left") -> tuple[LaurentMatrix, AlcoveWord]:
    """Matrix of T^{beta} = T_{s_i1} ... T_{s_iL} T_tau on E~; beta defaults to beta0.

    order="right" uses the reversed word, i.e. the element for -w0 lambda's
    inverse convention."""
    rs = RootSystem.of(parse_group(group))
    node = rs.beta0 if node is None else node
    aw = translation_word(group, rs.inverse_cartan[node - 1])
    P = LaurentMatrix.permutation(aw.automorphism)
    prod = product_along(group, aw.word, order)
    M = prod @ P if order == "left" else P @ prod
    return M, aw


@lru_cache(maxsize=None)
def bernstein_matrix(group: str, node: int | None = None) -> LaurentMatrix:
    return bernstein_element(group, node)[0]


def q_form(group: str, node: int | None = None) -> LaurentMatrix:
    """T^beta in the basis v^colour(i) e_i, where its entries lie in Z[q]."""
    return bernstein_matrix(group, node).conjugate_diag(bipartite_colour(group))


def commutes_with_levi(group: str, node: int | None = None) -> dict[int, bool]:
    """[T^beta, T_alpha] = 0 for every alpha with alpha(omega^vee_beta) = 0."""
    rs = RootSystem.of(parse_group(group))
    node = rs.beta0 if node is None else node
    M = bernstein_matrix(group, node)
    T = lusztig_generators(group)
    return {i: M @ T[i] == T[i] @ M for i in range(1, rs.rank + 1) if i != node}


# lambda combinatorics ---------------------------------------------------------------------


def lambda_exponents(group: str, node: int | None = None) -> list[int]:
    """rho(omega^vee_beta) + lambda(alpha, beta) over alpha, the branch node doubled,
    read literally from the combinatorial rule."""
    rs = RootSystem.of(parse_group(group))
    beta = rs.beta0 if node is None else node
    b = rs.branch_node
    om = rs.inverse_cartan[beta - 1]
    lam_b = sum(c for i, c in enumerate(om, start=1) if i != b)
    dist = len(rs.geodesic(b, beta)) - 1
    rho = rs.rho_of_coweight(beta)
    out = []
    for a in range(1, rs.rank + 1):
        if a == b:
            val = lam_b
        elif beta in rs.geodesic(b, a):
            val = lam_b - dist
        else:
            val = lam_b
        out.append(val + rho)
    out.append(lam_b + rho)
    return sorted(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in out)


def closed_form_exponents(group: str) -> list[int]:
    """Closed-form exponent pattern: the s-shifted exponent twice, the 2s-shifted one k - 1 times."""
    fr = HeisenbergFrame.of(group)
    n = fr.n
    if fr.label.startswith("E"):
        s, k = fr.s, int(fr.label[1:])
        return sorted([2 * (n + 1) - s] * 2 + [2 * (n + 1) - 2 * s] * (k - 1))
    k = int(fr.label[1:])
    return sorted([2 * (n + 1)] * (k - 1) + [2 * (n + 1) + 4 - k] * 2)


def fbar_scaling_exponent(group: str, u: int) -> int:
    """T^{beta0}-exponent of a shape c(x) |v|^{-u}: q^{2(n+2)-(n+3)/2} f(pi v) scaling."""
    fr = HeisenbergFrame.of(group)
    n = fr.n
    base = 2 * (n + 2) - (n + 3) // 2
    if fr.label.startswith("E"):
        return base + fr.s + 1 + u
    return base + 1 + u


def fbar_shapes(group: str) -> dict[str, int]:
    """Computed pairing of the two shapes with eigen-exponents."""
    fr = HeisenbergFrame.of(group)
    u = fr.s if fr.label.startswith("E") else int(fr.label[1:]) - 4
    return {"constant": fbar_scaling_exponent(group, 0), "|v|^-u": fbar_scaling_exponent(group, u)}


# spectral checks ----------------------------------------------------------------------------


def eigen_multiplicities(group: str, node: int | None = None) -> dict[int, int]:
    """Exponents e with multiplicity, from the trace of T^beta, confirmed
    by the characteristic polynomial prod (X - q^e)^m."""
    M = bernstein_matrix(group, node)
    tr = M.trace_q()
    if any(c < 0 for c in tr.values()) or sum(tr.values()) != M.dim:
        raise ArithmeticError(f"trace {tr} is not a sum of {M.dim} powers of q")
    q, X = sympy.symbols("q X")
    A = q_form(group, node).to_sympy_q(q)
    cp = A.charpoly(X).as_expr()
    target = sympy.prod([(X - q**e) ** m for e, m in tr.items()])
    if sympy.expand(cp - target) != 0:
        raise ArithmeticError("characteristic polynomial is not prod (X - q^e)^m")
    return dict(sorted(tr.items()))


def annihilator_check(group: str, node: int | None = None) -> dict:
    """Minimal polynomial of T^beta in terms of the distinct exponents."""
    M = bernstein_matrix(group, node)
    mult = eigen_multiplicities(group, node)
    exps = sorted(mult)
    one = LaurentMatrix.identity(M.dim)

    def factor(e):
        return M - one.shift(2 * e)

    prod = one
    for e in exps:
        prod = prod @ factor(e)
    squarefree = prod.is_zero()
    proper = {}
    for e in exps:
        rest = one
        for f in exps:
            if f != e:
                rest = rest @ factor(f)
        proper[e] = rest.is_zero()
    out = {"exponents": mult, "squarefree_annihilates": squarefree, "proper_factor_annihilates": proper}
    if not squarefree:
        # smallest power of the product that vanishes
        k, cur = 1, prod
        while not cur.is_zero() and k < M.dim:
            cur = cur @ prod
            k += 1
        out["nilpotency"] = k if cur.is_zero() else None
    return out


def convention_report(group: str, node: int | None = None) -> dict[str, dict]:
    """Which factor order passes the commutation relation and the annihilator test."""
    rs = RootSystem.of(parse_group(group))
    node = rs.beta0 if node is None else node
    T = lusztig_generators(group)
    allowed = [e for e in set(lambda_exponents(group, node))]
    out = {}
    for order in ("left", "right"):
        M, _ = bernstein_element(group, node, order)
        one = LaurentMatrix.identity(M.dim)
        comm = all(M @ T[i] == T[i] @ M for i in range(1, rs.rank + 1) if i != node)
        prod = one
        for e in allowed:
            prod = prod @ (M - one.shift(2 * e))
        ok = prod.is_zero() or (prod @ prod).is_zero()
        out[order] = {"commutes": comm, "annihilated": ok}
    return out
