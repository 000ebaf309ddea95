"""Finite Fourier self-duality of the residue tables f_{p^l}.

A table is an int64 array of shape (N,)*(n+1) + (N,) with N = p^l: the last
axis holds group-ring coefficients, so entry [..., k] is the coefficient of
zeta_N^k.  Equality is tested after reduction to the power basis of
Q(zeta_N), which makes every comparison exact.
"""
from __future__ import annotations

import hashlib
import struct
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cone import cubic_form
from .counting import _Arith, all_vectors, cubic_values, iter_space
from .padic import SphericalValue
from .rootsys import HeisenbergFrame, parse_group
from .spherical import family, spherical_eval

_BIG = 1 << 30
MAGIC = b"MRFT"


def _vval(a: np.ndarray, p: int) -> np.ndarray:
    """p-adic valuation of an int64 array; zeros map to a large sentinel."""
    v = np.zeros(a.shape, dtype=np.int64)
    m = np.abs(a)
    live = m != 0
    while True:
        div = live & (m % p == 0)
        if not div.any():
            break
        v[div] += 1
        m = np.where(div, m // p, m)
    return np.where(a == 0, _BIG, v)


def _radial(group: str, p: int, N: np.ndarray) -> np.ndarray:
    kind, par = family(group)
    out = np.zeros(N.shape, dtype=np.int64)
    ok = N >= 0
    if kind == "D" and par == 4:
        out[ok] = 1 + N[ok]
        return out
    u = par if kind == "E" else par - 4
    qu = p**u
    out[ok] = (qu ** (N[ok] + 1) - 1) // (qu - 1)
    return out


def _prefactor(group: str, p: int, vx0: np.ndarray, vx1: np.ndarray) -> np.ndarray:
    kind, par = family(group)
    if kind == "E":
        return p ** ((par + 1) * vx0)
    out = p**vx0
    if par > 4:
        out = out * p ** ((par - 4) * np.maximum(0, vx0 - vx1))
    return out


def entries(group: str, p: int, l: int, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Magnitudes and zeta_{p^l} exponents of f_0(p^l, x0, x) for integer rows
    X = (x0, x1..xn) with entries in [0, p^l)."""
    group = parse_group(group)
    N = p**l
    x0 = X[:, 0]
    x = X[:, 1:]
    form = cubic_form(group)
    cub = form.value_np(x)
    grad = form.gradient_np(x)
    vx = _vval(x, p).min(axis=1)
    vI = _vval(cub, p)
    vG = _vval(grad, p).min(axis=1)
    vx1 = _vval(x[:, 0], p)
    mag = np.zeros(len(X), dtype=np.int64)
    ex = np.zeros(len(X), dtype=np.int64)

    near = x0 != 0
    if near.any():
        k = _vval(x0[near], p)
        lift = np.minimum.reduce([k, vx[near], vI[near] - 2 * k, vG[near] - k])
        lift = np.minimum(lift, _BIG // 2)
        m = _prefactor(group, p, k, vx1[near]) * _radial(group, p, lift)
        u = x0[near] // p**k
        uinv = np.array([pow(int(a), -1, N) for a in u], dtype=np.int64) if len(u) else u
        # -I/(p^l x0) = -(I / p^{2k}) p^k u^{-1} / p^l, integral part dropped
        J = np.where(lift >= 0, cub[near] // np.where(lift >= 0, p ** (2 * k), 1), 0)
        e = (-(J % N) * (p**k % N) % N * uinv) % N
        mag[near] = m
        ex[near] = np.where(m != 0, e, 0)
    far = ~near
    if far.any():
        lift = np.minimum.reduce([np.full(far.sum(), l), vx[far], vI[far] - 2 * l, vG[far] - l])
        lift = np.minimum(lift, _BIG // 2)
        mag[far] = _prefactor(group, p, np.full(far.sum(), l), vx1[far]) * _radial(group, p, lift)
    return mag, ex


def residue_table(group: str, p: int, l: int = 1, chunk: int = 1 << 19) -> np.ndarray:
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    N = p**l
    total = N ** (n + 1)
    T = np.zeros((total, N), dtype=np.int64)
    for start in range(0, total, chunk):
        r = np.arange(start, min(total, start + chunk), dtype=np.int64)
        X = np.stack([(r // N ** (n - i)) % N for i in range(n + 1)], axis=1)
        mag, ex = entries(group, p, l, X)
        T[r, ex] = mag
    return T.reshape((N,) * (n + 1) + (N,))


def table_value(group: str, p: int, l: int, x0: int, x) -> SphericalValue:
    """Scalar path: the same entry computed by spherical_eval."""
    return spherical_eval(group, p, [Fraction(p**l), Fraction(x0), *map(Fraction, x)])


def entry_as_value(T: np.ndarray, p: int, l: int, index) -> SphericalValue | None:
    """Read a table cell back as magnitude * zeta; None if it is not of that shape."""
    cell = T[tuple(index)]
    nz = np.flatnonzero(cell)
    if len(nz) == 0:
        return SphericalValue(0)
    if len(nz) > 1:
        return None
    return SphericalValue(int(cell[nz[0]]), Fraction(int(nz[0]), p**l))


def reduce_group_ring(A: np.ndarray, p: int, l: int) -> np.ndarray:
    """Canonical power-basis coefficients (length phi(p^l)) along the last axis."""
    N = p**l
    step = N // p
    phi = N - step
    A = A.copy()
    for k in range(N - 1, phi - 1, -1):
        c = A[..., k].copy()
        A[..., k] = 0
        for j in range(1, p):
            A[..., k - j * step] -= c
    return A[..., :phi]


def dft_unnormalised(T: np.ndarray, p: int, l: int) -> np.ndarray:
    """sum_{x'} psi(x . x' / p^l) T(x'), as n+1 one-dimensional passes."""
    N = p**l
    d = T.ndim - 1
    cur = T
    for axis in range(d):
        new = np.zeros_like(cur)
        for xj in range(N):
            dst = [slice(None)] * cur.ndim
            dst[axis] = xj
            acc = new[tuple(dst)]
            for xp in range(N):
                src = [slice(None)] * cur.ndim
                src[axis] = xp
                shift = (xj * xp) % N
                block = cur[tuple(src)]
                acc += np.roll(block, shift, axis=-1) if shift else block
        cur = new
    return cur


def self_duality(group: str, p: int, l: int = 1) -> dict:
    """Compare q^{(n+1) l / 2} T with the unnormalised transform of T."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    T = residue_table(group, p, l)
    F = dft_unnormalised(T, p, l)
    assert (n + 1) % 2 == 0
    scale = p ** ((n + 1) // 2 * l)
    lhs = reduce_group_ring(F, p, l)
    rhs = reduce_group_ring(T, p, l) * scale
    bad = np.argwhere((lhs != rhs).any(axis=-1))
    return {"group": group, "p": p, "l": l, "entries": int(T[..., 0].size), "mismatches": int(len(bad)), "pass": len(bad) == 0}


def lift_independent(group: str, p: int, l: int, rows: np.ndarray, shifts: int = 2, seed: int = 0) -> bool:
    """f_0(p^l, x0 + p^l r0, x + p^l r) agrees with the residue entry."""
    rng = np.random.default_rng(seed)
    N = p**l
    for row in rows:
        base = table_value(group, p, l, int(row[0]), [int(a) for a in row[1:]])
        for _ in range(shifts):
            r = rng.integers(-2, 3, size=len(row))
            moved = row + N * r
            if moved[0] == 0 and row[0] != 0:
                continue
            val = table_value(group, p, l, int(moved[0]), [int(a) for a in moved[1:]])
            if val != base:
                return False
    return True


# character sums --------------------------------------------------------------


def char_sums(group: str, q: int) -> dict:
    """The two sums over x0 != 0 and x of psi(-I(x)/(x0 pi)) and of
    psi(-I(x)/(x0 pi) + x0/pi), computed by brute force over F_q."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    ar = _Arith(q)
    F = ar.F
    counts = _value_counts(group, q, n, ar)
    tr = F.trace_table
    s1 = np.zeros(F.p, dtype=np.int64)
    s2 = np.zeros(F.p, dtype=np.int64)
    for x0 in range(1, q):
        inv = F.inv(x0)
        for c in range(q):
            if not counts[c]:
                continue
            z = F.neg(F.mul(c, inv))
            s1[tr[z]] += counts[c]
            s2[tr[F.add(z, x0)]] += counts[c]
    return {"S1": _rational_sum(s1, F.p), "S2": _rational_sum(s2, F.p)}


def _value_counts(group: str, q: int, n: int, ar: _Arith) -> np.ndarray:
    counts = np.zeros(q, dtype=np.int64)
    for X in iter_space(q, n):
        counts += np.bincount(cubic_values(group, X, ar), minlength=q)
    return counts


def _rational_sum(coeffs: np.ndarray, p: int) -> int:
    """sum_k coeffs[k] zeta_p^k, which must be rational here."""
    if len(set(coeffs[1:].tolist())) != 1:
        raise ArithmeticError("character sum is not rational")
    return int(coeffs[0] - coeffs[1])


def card_quadric_nonzero(group: str, q: int) -> int:
    """#{x != 0 : Q(x) = 0} where I = x1 Q(x2..xn) for D_k."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    ar = _Arith(q)
    X = all_vectors(q, n - 1)
    full = np.concatenate([np.ones((len(X), 1), dtype=np.int64), X], axis=1)
    return int((cubic_values(group, full, ar) == 0).sum()) - 1


def d_first_sum(group: str, q: int) -> int:
    """sum over x0 != 0, x1, x of psi(-x1 Q(x)/(x0 pi) + x0/pi), brute force."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    ar = _Arith(q)
    F = ar.F
    counts = _value_counts(group, q, n, ar)
    tr = F.trace_table
    acc = np.zeros(F.p, dtype=np.int64)
    for x0 in range(1, q):
        inv = F.inv(x0)
        for c in range(q):
            if counts[c]:
                acc[tr[F.add(F.neg(F.mul(c, inv)), x0)]] += counts[c]
    return _rational_sum(acc, F.p)


def solve_a(group: str, q: int) -> dict:
    """Solve the self-duality equations for the constant a from brute-force sums."""
    from .counting import brute_card1, brute_card2

    group = parse_group(group)
    kind, par = family(group)
    if kind == "E":
        s = par
        sums = char_sums(group, q)
        c2 = brute_card2(group, q)
        R = (Fraction(sums["S1"] - sums["S2"], q ** (3 * s + 2)) + 1) / q ** (s + 1)
        a = (1 - R) / (R - q**s)
        eq0 = sums["S2"] + q ** (s + 1) * c2 + q ** (s + 1) * R == q ** (3 * s + 2)
        return {
            "S1": sums["S1"],
            "S2": sums["S2"],
            "S1_closed": (q - 1) * q ** (6 * s + 3) - q * brute_card1(group, q),
            "S2_closed": q ** (3 * s + 1) * (1 - q ** (2 * s + 1) - q ** (s + 1)),
            "card2": c2,
            "a": a,
            "a_expected": -(q**s),
            "eq0": eq0,
        }
    k = par
    S = d_first_sum(group, q)
    cq = card_quadric_nonzero(group, q)
    R = Fraction(q ** (k - 2) - S - q ** (k - 3) * (q - 1) - q * cq, q)
    a = (1 - R) / (R - q ** (k - 4))
    return {"S": S, "S_closed": -q * (cq + 1), "card_Q0": cq, "a": a, "a_expected": -(q ** (k - 4))}


def level_characterisation(group: str, p: int, l: int, samples: int = 200, seed: int = 0) -> bool:
    """f_{p^l}(u p^k, x) = psi(-I(x)/(u p^{k+l})) f_{p^k}(0, x) for 0 <= k < l."""
    from .padic import psi

    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    form = cubic_form(group)
    rng = np.random.default_rng(seed)
    N = p**l
    for _ in range(samples):
        k = int(rng.integers(0, l))
        u = int(rng.integers(1, N))
        while u % p == 0:
            u = int(rng.integers(1, N))
        x = [int(a) for a in rng.integers(0, N, size=n)]
        if rng.random() < 0.5:
            # bias towards the support: x divisible by p^k
            x = [(a * p**k) % N for a in x]
        lhs = table_value(group, p, l, u * p**k, x)
        if k == 0:
            base = SphericalValue(1)
        else:
            base = table_value(group, p, k, 0, [a % p**k for a in x])
        if not base.magnitude:
            rhs = base
        else:
            rhs = base.twist(psi(Fraction(-form(x), u * p ** (k + l)), p))
        if lhs != rhs:
            return False
    return True


# binary table cache ------------------------------------------------------------


def save_table(path: str | Path, group: str, p: int, l: int, T: np.ndarray) -> None:
    data = np.ascontiguousarray(T, dtype="<i8").tobytes()
    g = parse_group(group).encode()
    header = MAGIC + struct.pack("<BBBB", len(g), p, l, T.ndim) + g
    header += struct.pack(f"<{T.ndim}Q", *T.shape)
    digest = hashlib.sha256(data).digest()
    Path(path).write_bytes(header + digest + data)


def load_table(path: str | Path) -> tuple[str, int, int, np.ndarray]:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError("not a residue table file")
    glen, p, l, ndim = struct.unpack("<BBBB", raw[4:8])
    pos = 8
    group = raw[pos : pos + glen].decode()
    pos += glen
    shape = struct.unpack(f"<{ndim}Q", raw[pos : pos + 8 * ndim])
    pos += 8 * ndim
    digest = raw[pos : pos + 32]
    data = raw[pos + 32 :]
    if hashlib.sha256(data).digest() != digest:
        raise ValueError("checksum mismatch in residue table file")
    return group, p, l, np.frombuffer(data, dtype="<i8").reshape(shape).copy()


# packed kernel for p = 2, l = 1 -----------------------------------------------------


def real_table_p2(group: str, chunk: int = 1 << 20) -> np.ndarray:
    """f_pi for p = 2 as a flat int64 array: zeta_2 = -1, so entries are integers."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    total = 2 ** (n + 1)
    T = np.empty(total, dtype=np.int64)
    for start in range(0, total, chunk):
        r = np.arange(start, min(total, start + chunk), dtype=np.int64)
        X = np.stack([(r >> (n - i)) & 1 for i in range(n + 1)], axis=1)
        mag, ex = entries(group, 2, 1, X)
        T[r] = np.where(ex == 1, -mag, mag)
    return T


def hadamard_inplace(A: np.ndarray, block: int = 1 << 22) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of a flat array of length 2^d, with
    temporaries bounded by `block` elements."""
    d = A.size.bit_length() - 1
    for j in range(d):
        view = A.reshape(-1, 2, 2**j)
        outer, inner = view.shape[0], view.shape[2]
        step_i = min(inner, block)
        step_o = max(1, block // inner)
        for o in range(0, outer, step_o):
            for i in range(0, inner, step_i):
                a = view[o : o + step_o, 0, i : i + step_i]
                b = view[o : o + step_o, 1, i : i + step_i]
                diff = a - b
                a += b
                b[...] = diff
    return A


def self_duality_p2(group: str, block: int = 1 << 22) -> dict:
    """Self-duality at p = 2, l = 1 in place; a narrow copy of the table is kept
    for the comparison."""
    group = parse_group(group)
    n = HeisenbergFrame.of(group).n
    T = real_table_p2(group)
    bound = int(np.abs(T).max())
    narrow = np.int16 if bound < 1 << 15 else np.int64
    orig = T.astype(narrow)
    hadamard_inplace(T, block)
    scale = 2 ** ((n + 1) // 2)
    bad = 0
    for start in range(0, T.size, block):
        bad += int(np.count_nonzero(T[start : start + block] != scale * orig[start : start + block].astype(np.int64)))
    return {"group": group, "p": 2, "l": 1, "entries": int(T.size), "mismatches": bad, "pass": bad == 0}
