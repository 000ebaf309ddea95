"""Brute-force point counts over finite fields and their closed forms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .cone import cubic_form, levi_matrix, simple_levi_roots, _levi_table
from .finitefield import FiniteField, field
from .rootsys import HeisenbergFrame, parse_group

CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    pass


# vectorised field arithmetic ----------------------------------------------


class _Arith:
    """Elementwise F_q operations on int64 arrays of element codes."""

    def __init__(self, q: int):
        self.F = field(q)
        self.q = q
        self.prime = self.F.f == 1

    def add(self, a, b):
        if self.q == 2:
            return a ^ b
        return (a + b) % self.q if self.prime else self.F.add_table[a, b]

    def neg(self, a):
        if self.q == 2:
            return a
        return (-a) % self.q if self.prime else self.F.neg_table[a]

    def mul(self, a, b):
        if self.q == 2:
            return a & b
        return (a * b) % self.q if self.prime else self.F.mul(a, b)

    def signed(self, c: int, a):
        return a if c == 1 else self.neg(a)


def cubic_values(group: str, X: np.ndarray, ar: _Arith) -> np.ndarray:
    form = cubic_form(group)
    out = np.zeros(X.shape[:-1], dtype=np.int64)
    for i, j, k, c in form.monomials:
        out = ar.add(out, ar.signed(c, ar.mul(ar.mul(X[..., i], X[..., j]), X[..., k])))
    return out


def gradient_values(group: str, X: np.ndarray, ar: _Arith) -> np.ndarray:
    form = cubic_form(group)
    out = np.zeros(X.shape, dtype=np.int64)
    for i, terms in enumerate(form.gradient_terms()):
        acc = np.zeros(X.shape[:-1], dtype=np.int64)
        for c, j, k in terms:
            acc = ar.add(acc, ar.signed(c, ar.mul(X[..., j], X[..., k])))
        out[..., i] = acc
    return out


def all_vectors(q: int, n: int) -> np.ndarray:
    """Every vector of F_q^n, row r holding the base-q digits of r."""
    r = np.arange(q**n, dtype=np.int64)
    return np.stack([(r // q**i) % q for i in range(n)], axis=1)


def iter_space(q: int, n: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    tail = 0
    while tail < n and q ** (tail + 1) <= chunk:
        tail += 1
    block = all_vectors(q, tail)
    for prefix in itertools.product(range(q), repeat=n - tail):
        X = np.empty((block.shape[0], n), dtype=np.int64)
        X[:, :tail] = block
        X[:, tail:] = prefix
        yield X


def _tick(budget: float | None, start: float):
    import time

    if budget is not None and time.monotonic() - start > budget:
        raise BudgetExceeded(f"budget of {budget}s exceeded")


def brute_card1(group: str, q: int, budget: float | None = None) -> int:
    """#{x in F_q^n : I(x) != 0}."""
    import time

    group = parse_group(group)
    ar = _Arith(q)
    n = HeisenbergFrame.of(group).n
    start = time.monotonic()
    total = 0
    for X in iter_space(q, n):
        total += int(np.count_nonzero(cubic_values(group, X, ar)))
        _tick(budget, start)
    return total


def singular_vectors(group: str, q: int, budget: float | None = None) -> np.ndarray:
    """All x in F_q^n (zero included) with grad I(x) = 0."""
    import time

    group = parse_group(group)
    ar = _Arith(q)
    n = HeisenbergFrame.of(group).n
    start = time.monotonic()
    found = []
    for X in iter_space(q, n):
        g = gradient_values(group, X, ar)
        found.append(X[~g.any(axis=1)])
        _tick(budget, start)
    return np.concatenate(found)


def brute_card2(group: str, q: int, budget: float | None = None) -> int:
    """#{x != 0 : grad I(x) = 0}."""
    return len(singular_vectors(group, q, budget)) - 1


def card1_closed(s: int, q: int) -> int:
    return q ** (3 * s) * (q ** (2 * s + 1) - 1) * (q ** (s + 1) - 1) * (q - 1)


def card2_closed(s: int, q: int) -> int:
    return (q ** (2 * s + 1) - 1) * (q ** (2 * s) + q**s + 1)


def cone_closed(s: int, q: int) -> int:
    return (q ** (3 * s + 2) - 1) * (q ** (2 * s + 1) + 1) * (q ** (s + 1) + 1)


def lines_closed(s: int, q: int) -> int:
    num = card2_closed(s, q) * cone_closed(s, q)
    den = (q - 1) * (q * q - 1)
    assert num % den == 0
    return num // den


def singular_sections_closed(s: int, q: int) -> int:
    return card2_closed(s, q) * (q ** (3 * s) + q ** (2 * s + 1) - q**s + 1)


def divisor2_sections_closed(s: int, q: int) -> int:
    return (
        q ** (2 * s + 1)
        * (q ** (2 * s + 1) - 1)
        * (q ** (2 * s) + q**s + 1)
        * (q ** (s + 1) - 1)
        * (q ** (s + 1) + q**s + q ** (s - 1) + 1)
    )


def quadric_zero_count(k: int, q: int) -> int:
    """#{x in F_q^{2k-6} : Q(x) = 0} for the split form Q with I = x1 Q."""
    m = k - 3
    return q ** (2 * m - 1) + q**m - q ** (m - 1)


# the cone as an orbit -------------------------------------------------------


def _encode(V: np.ndarray, q: int) -> np.ndarray:
    d = V.shape[1]
    if d * np.log2(q) > 62:
        raise ValueError("vectors too long to encode in int64")
    w = q ** np.arange(d, dtype=np.int64)
    return V @ w


def _decode(codes: np.ndarray, q: int, d: int) -> np.ndarray:
    return np.stack([(codes // q**i) % q for i in range(d)], axis=1)


def _generators(group: str, q: int) -> list[Callable[[np.ndarray], np.ndarray]]:
    ar = _Arith(q)
    F = ar.F
    ts = [F.p**i for i in range(F.f)]
    gens = []
    for a in simple_levi_roots(group):
        for sign in (1, -1):
            alpha = tuple(sign * x for x in a)
            table = _levi_table(group, alpha)
            for t in ts:
                def g(V, table=table, t=t):
                    out = V.copy()
                    for src, dst, c in table:
                        out[:, dst] = ar.add(out[:, dst], ar.mul(V[:, src], ar.signed(c, np.int64(t))))
                    return out
                gens.append(g)
    gen = F.generator()
    gens.append(lambda V: ar.mul(V, np.int64(gen)))
    return gens


def cone_orbit(group: str, q: int, budget: float | None = None) -> np.ndarray:
    """Sorted codes of the orbit of e_beta0 under the Levi subgroup over F_q."""
    import time

    group = parse_group(group)
    d = 2 * HeisenbergFrame.of(group).n + 2
    gens = _generators(group, q)
    start = np.zeros((1, d), dtype=np.int64)
    start[0, 0] = 1
    seen = _encode(start, q)
    frontier = start
    t0 = time.monotonic()
    while len(frontier):
        new = []
        for g in gens:
            new.append(_encode(g(frontier), q))
        cand = np.unique(np.concatenate(new))
        cand = cand[~np.isin(cand, seen, assume_unique=True)]
        seen = np.union1d(seen, cand)
        frontier = _decode(cand, q, d)
        _tick(budget, t0)
    return seen


def orbit_vectors(group: str, q: int) -> np.ndarray:
    d = 2 * HeisenbergFrame.of(group).n + 2
    return _decode(cone_orbit(group, q), q, d)


def trivector_count(q: int) -> int:
    """Nonzero decomposable vectors in Lambda^3 F_q^6, enumerated directly (q prime)."""
    vecs = all_vectors(q, 6)
    triples = list(itertools.combinations(range(6), 3))
    seen = set()
    for i in range(1, len(vecs)):
        for j in range(i + 1, len(vecs)):
            a, b = vecs[i], vecs[j]
            M = np.stack([np.broadcast_to(a, vecs.shape), np.broadcast_to(b, vecs.shape), vecs], axis=1)
            pl = np.stack(
                [np.round(np.linalg.det(M[:, :, list(t)].astype(float))).astype(np.int64) % q for t in triples],
                axis=1,
            )
            good = pl.any(axis=1)
            seen.update(_encode(pl[good], q).tolist())
    return len(seen)


def decomposable_trivectors_closed(q: int) -> int:
    """(q - 1) times the number of 3-planes in F_q^6."""
    num = (q**6 - 1) * (q**5 - 1) * (q**4 - 1)
    den = (q**3 - 1) * (q**2 - 1) * (q - 1)
    return (q - 1) * num // den


def lines_through_point(orbit: np.ndarray, codes: np.ndarray, a: np.ndarray, q: int) -> int:
    """Lines of P(V) through [a] lying in the projectivised cone."""
    ar = _Arith(q)
    others = orbit
    ok = np.ones(len(others), dtype=bool)
    # b must not be a multiple of a
    for c in range(1, q):
        ok &= _encode(others, q) != _encode(ar.mul(a[None, :], np.int64(c)), q)
    for t in range(1, q):
        tb = ar.mul(others, np.int64(t))
        ok &= np.isin(_encode(ar.add(a[None, :], tb), q), codes)
    return int(ok.sum()) // (q * (q - 1))


def brute_lines(group: str, q: int, samples: int = 4, seed: int = 0) -> dict:
    """Lines in the cone: by all pairs when q = 2, else via constant per-point counts."""
    codes = cone_orbit(group, q)
    d = 2 * HeisenbergFrame.of(group).n + 2
    orbit = _decode(codes, q, d)
    points = len(codes) // (q - 1)
    rng = np.random.default_rng(seed)
    picks = [0] + list(rng.choice(len(orbit), size=samples, replace=False))
    per_point = [lines_through_point(orbit, codes, orbit[i], q) for i in picks]
    out = {"per_point": per_point, "constant": len(set(per_point)) == 1}
    out["via_points"] = points * per_point[0] // (q + 1)
    if q == 2:
        hits = 0
        for i in range(len(codes)):
            hits += int(np.isin(codes[i + 1:] ^ codes[i], codes).sum())
        out["via_pairs"] = hits // 3
    return out


# sections of O(1)^n on P^1 ---------------------------------------------------


def _hessian_np(group: str, a: np.ndarray, q: int) -> np.ndarray:
    """Hessian of I at a (mod q), so grad I(a u + b v) has uv-part H(a) b."""
    form = cubic_form(group)
    n = form.n
    H = np.zeros((n, n), dtype=np.int64)
    for i, j, k, c in form.monomials:
        for (r, s, t) in ((i, j, k), (j, k, i), (k, i, j)):
            H[r, s] += c * a[t]
            H[s, r] += c * a[t]
    return H % q


def singular_sections_direct(group: str, q: int) -> int:
    """#{(a, b) != 0 : grad I(a u + b v) = 0} by enumerating all pairs."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    ar = _Arith(q)
    vecs = all_vectors(q, n)
    grads = gradient_values(group, vecs, ar)
    total = 0
    for a, ga in zip(vecs, grads):
        if ga.any():
            continue
        P = (vecs @ _hessian_np(group, a, q).T) % q
        total += int((~P.any(axis=1) & ~grads.any(axis=1)).sum())
    return total - 1


def _projective_class(M: np.ndarray, q: int) -> np.ndarray:
    """Code of the first-nonzero-normalised rows of M (q prime); 0 rows map to -1."""
    nz = M != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = M[np.arange(len(M)), first]
    inv = np.array([0] + [pow(int(x), -1, q) for x in range(1, q)], dtype=np.int64)
    N = (M * inv[lead][:, None]) % q
    codes = _encode(N, q)
    return np.where(has, codes, -1)


def divisor2_sections(group: str, q: int, budget: float | None = None) -> int:
    """#{(a, b) : I(a u + b v) = 0 and the n quadrics of grad I share a
    degree-2 factor}, i.e. the n x 3 coefficient matrix has rank one.

    Uses the invariance under a -> c a for c in F_q^* (q prime)."""
    import time

    group = parse_group(group)
    form = cubic_form(group)
    n = form.n
    ar = _Arith(q)
    if not ar.prime:
        raise ValueError("implemented for prime q")
    vecs = all_vectors(q, n)
    gb = gradient_values(group, vecs, ar)
    Ib = cubic_values(group, vecs, ar)
    cls_b = _projective_class(gb, q)
    start = time.monotonic()
    total = 0
    for ai, a in enumerate(vecs):
        nzi = np.flatnonzero(a)
        if len(nzi) == 0:
            weight = 1
        elif a[nzi[0]] != 1:
            continue
        else:
            weight = q - 1
        ga = gb[ai]
        Ia = Ib[ai]
        if Ia:
            continue
        P = (vecs @ _hessian_np(group, a, q).T) % q
        c21 = (vecs @ ga) % q
        c12 = (gb @ a) % q
        cub = (c21 == 0) & (c12 == 0) & (Ib == 0)
        cls_p = _projective_class(P, q)
        if ga.any():
            w = _projective_class(ga[None, :], q)[0]
            good = ((cls_p == -1) | (cls_p == w)) & ((cls_b == -1) | (cls_b == w))
        else:
            good = ((cls_p == -1) ^ (cls_b == -1)) | ((cls_p == cls_b) & (cls_p != -1))
        total += weight * int((good & cub).sum())
        _tick(budget, start)
    return total


def divisor2_sections_naive(group: str, q: int) -> int:
    """Reference implementation over all pairs using all 2x2 minors (small q only)."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    ar = _Arith(q)
    vecs = all_vectors(q, n)
    gb = gradient_values(group, vecs, ar)
    Ib = cubic_values(group, vecs, ar)
    total = 0
    for ai, a in enumerate(vecs):
        cols = [np.broadcast_to(gb[ai], gb.shape), (vecs @ _hessian_np(group, a, q).T) % q, gb]
        M = np.stack(cols, axis=2)
        nonzero = M.reshape(len(vecs), -1).any(axis=1)
        rank1 = nonzero.copy()
        for r, s in itertools.combinations(range(n), 2):
            for c1, c2 in itertools.combinations(range(3), 2):
                minor = (M[:, r, c1] * M[:, s, c2] - M[:, s, c1] * M[:, r, c2]) % q
                rank1 &= minor == 0
        cub = (Ib[ai] == 0) & ((vecs @ gb[ai]) % q == 0) & ((gb @ a) % q == 0) & (Ib == 0)
        total += int((rank1 & cub).sum())
    return total


@dataclass(frozen=True)
class CountSpec:
    label: str
    brute: Callable
    closed: Callable


COUNT_LABELS = ("card1", "card2", "cone", "lines", "sections_singular", "sections_divisor2")


def count(label: str, group: str, q: int, budget: float | None = None) -> tuple[int, int]:
    """(brute force, closed form) for a named count."""
    group = parse_group(group)
    fr = HeisenbergFrame.of(group)
    s = fr.s if group.startswith("E") else None
    table = {
        "card1": (lambda: brute_card1(group, q, budget), lambda: card1_closed(s, q)),
        "card2": (lambda: brute_card2(group, q, budget), lambda: card2_closed(s, q)),
        "cone": (lambda: len(cone_orbit(group, q, budget)), lambda: cone_closed(s, q)),
        "lines": (lambda: brute_lines(group, q)["via_points"], lambda: lines_closed(s, q)),
        "sections_singular": (
            lambda: singular_sections_direct(group, q),
            lambda: singular_sections_closed(s, q),
        ),
        "sections_divisor2": (
            lambda: divisor2_sections(group, q, budget),
            lambda: divisor2_sections_closed(s, q),
        ),
    }
    if label not in table:
        raise KeyError(f"unknown count {label!r}; choose from {sorted(table)}")
    if s is None:
        raise ValueError("closed forms are stated for E_k")
    brute, closed = table[label]
    return brute(), closed()
