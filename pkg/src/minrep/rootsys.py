"""Simply-laced root systems of types D and E, the Chevalley sign cocycle and
the Heisenberg frame attached to the highest root.

Roots are integer tuples in the basis of simple roots (Bourbaki numbering).
The pairing is the Cartan matrix, so every computation here is exact integer
arithmetic, including E8 which would need half-integers in the ambient
Euclidean realization.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

Root = tuple[int, ...]

_E_RANK = {"E6": 6, "E7": 7, "E8": 8}
_E_S = {"E6": 1, "E7": 2, "E8": 4}


def _cartan_from_edges(rank: int, edges) -> np.ndarray:
    c = 2 * np.eye(rank, dtype=np.int64)
    for i, j in edges:
        c[i - 1, j - 1] = c[j - 1, i - 1] = -1
    return c


def _edges(label: str) -> tuple[int, list[tuple[int, int]]]:
    if label in _E_RANK:
        k = _E_RANK[label]
        chain = [1, 3, 4, 5, 6, 7, 8][: k - 1]
        return k, list(zip(chain, chain[1:])) + [(2, 4)]
    if label.startswith("D"):
        k = int(label[1:])
        if k < 4:
            raise ValueError(f"D_k needs k >= 4, got {label}")
        return k, [(i, i + 1) for i in range(1, k - 1)] + [(k - 2, k)]
    raise ValueError(f"unsupported group label {label!r}")


def parse_group(label: str) -> str:
    label = label.strip().upper()
    _edges(label)
    return label


@dataclass(frozen=True)
class RootSystem:
    label: str
    cartan: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def of(cls, label: str) -> "RootSystem":
        return _root_system(parse_group(label))

    @property
    def rank(self) -> int:
        return self.cartan.shape[0]

    @property
    def family(self) -> str:
        return self.label[0]

    def simple(self, i: int) -> Root:
        """Simple root alpha_i, 1-based."""
        return tuple(int(j == i - 1) for j in range(self.rank))

    def pair(self, a, b) -> int:
        return int(np.asarray(a) @ self.cartan @ np.asarray(b))

    def height(self, a) -> int:
        return int(sum(a))

    @cached_property
    def positive_roots(self) -> tuple[Root, ...]:
        # grow by simple roots: in the simply-laced case b + alpha_i is a root
        # exactly when <b, alpha_i> = -1
        simples = [self.simple(i) for i in range(1, self.rank + 1)]
        seen = set(simples)
        queue = deque(simples)
        while queue:
            b = queue.popleft()
            for i, a in enumerate(simples):
                if self.pair(b, a) == -1:
                    c = tuple(x + y for x, y in zip(b, a))
                    if c not in seen:
                        seen.add(c)
                        queue.append(c)
        return tuple(sorted(seen, key=lambda r: (sum(r), r)))

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        pos = self.positive_roots
        return pos + tuple(tuple(-x for x in r) for r in pos)

    @cached_property
    def root_index(self) -> dict[Root, int]:
        return {r: i for i, r in enumerate(self.roots)}

    def is_root(self, a) -> bool:
        return tuple(a) in self.root_index

    @cached_property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    @cached_property
    def beta0(self) -> int:
        """1-based index of the simple root adjacent to the affine node."""
        w = self.highest_root
        hits = [i for i in range(1, self.rank + 1) if self.pair(w, self.simple(i)) != 0]
        if len(hits) != 1:
            raise ValueError("affine node is not attached to a single simple root")
        return hits[0]

    @cached_property
    def branch_node(self) -> int:
        """1-based index of the trivalent node of the Dynkin diagram."""
        deg = [(self.cartan[i] == -1).sum() for i in range(self.rank)]
        return int(np.argmax(deg)) + 1

    def neighbours(self, i: int) -> list[int]:
        return [j + 1 for j in range(self.rank) if self.cartan[i - 1, j] == -1]

    def geodesic(self, i: int, j: int) -> list[int]:
        """Vertices on the unique Dynkin path from node i to node j, inclusive."""
        prev = {i: None}
        queue = deque([i])
        while queue:
            u = queue.popleft()
            for w in self.neighbours(u):
                if w not in prev:
                    prev[w] = u
                    queue.append(w)
        path = [j]
        while path[-1] != i:
            path.append(prev[path[-1]])
        return path[::-1]

    @cached_property
    def inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        import sympy

        inv = sympy.Matrix(self.cartan.tolist()).inv()
        return tuple(
            tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    def fundamental_weight(self, i: int) -> tuple[Fraction, ...]:
        """omega_i in simple-root coordinates (equal to the coweight here)."""
        return self.inverse_cartan[i - 1]

    def rho_of_coweight(self, i: int) -> Fraction:
        """<rho, omega_i^vee>: half the alpha_i coefficient summed over positive roots."""
        return Fraction(sum(r[i - 1] for r in self.positive_roots), 2)

    # sign cocycle -----------------------------------------------------------

    @cached_property
    def cocycle_matrix(self) -> np.ndarray:
        b = np.triu(self.cartan, 1) + np.eye(self.rank, dtype=np.int64)
        return b

    def sign(self, a, b) -> int:
        """Chevalley sign c(a, b) = (-1)^{B(a, b)}."""
        return -1 if int(np.asarray(a) @ self.cocycle_matrix @ np.asarray(b)) % 2 else 1

    @cached_property
    def sign_table(self) -> np.ndarray:
        r = np.array(self.roots, dtype=np.int64)
        return np.where((r @ self.cocycle_matrix @ r.T) % 2 == 1, -1, 1).astype(np.int8)

    @cached_property
    def pairing_table(self) -> np.ndarray:
        r = np.array(self.roots, dtype=np.int64)
        return r @ self.cartan @ r.T

    def s_parameter(self) -> int:
        if self.label not in _E_S:
            raise ValueError("s is defined for E_k only")
        return _E_S[self.label]


@lru_cache(maxsize=None)
def _root_system(label: str) -> RootSystem:
    k, edges = _edges(label)
    return RootSystem(label, _cartan_from_edges(k, edges))


def check_sign_table(rs: RootSystem) -> dict[str, bool]:
    """Exhaustive checks of the cocycle identities over all pairs of roots."""
    r = np.array(rs.roots, dtype=np.int64)
    n = len(r)
    c = rs.sign_table.astype(np.int64)
    pos = len(rs.positive_roots)
    neg = np.concatenate([np.arange(pos, n), np.arange(pos)])
    out = {
        "c(-a,b)=c(a,b)": bool((c[neg, :] == c).all()),
        "c(a,b)c(b,a)=(-1)^<a,b>": bool(
            ((c * c.T) == np.where(rs.pairing_table % 2 == 0, 1, -1)).all()
        ),
        "c(a,a)=-1": bool((np.diag(c) == -1).all()),
    }
    # additivity in the second slot over every triple with b + b' a root
    idx = rs.root_index
    additive = True
    for j, b in enumerate(rs.roots):
        for k, b2 in enumerate(rs.roots):
            s = tuple(x + y for x, y in zip(b, b2))
            m = idx.get(s)
            if m is None:
                continue
            if not (c[:, m] == c[:, j] * c[:, k]).all():
                additive = False
                break
        if not additive:
            break
    out["c(a,b+b')=c(a,b)c(a,b')"] = additive
    return out


@dataclass(frozen=True)
class HeisenbergFrame:
    """Coordinates on V = Lambda + Lambda' attached to the highest root.

    Vector layout: index 0 is beta_0, 1..n are beta_1..beta_n, n+1 is
    gamma_0 and n+1+i is gamma_i = omega - beta_i.
    """

    rs: RootSystem

    @classmethod
    def of(cls, label: str) -> "HeisenbergFrame":
        return _frame(parse_group(label))

    @property
    def label(self) -> str:
        return self.rs.label

    @cached_property
    def omega(self) -> Root:
        return self.rs.highest_root

    @cached_property
    def sigma(self) -> tuple[Root, ...]:
        w = self.omega
        return tuple(r for r in self.rs.roots if self.rs.pair(w, r) == 1)

    @cached_property
    def betas(self) -> tuple[Root, ...]:
        rs = self.rs
        b0 = rs.simple(rs.beta0)
        rest = [r for r in self.sigma if rs.pair(b0, r) == 1]
        rest.sort(key=lambda r: (sum(r), r))
        if rs.family == "D" and rs.rank >= 5:
            a1 = self._a1_node()
            first = tuple(x + y for x, y in zip(b0, rs.simple(a1)))
            rest.remove(first)
            rest.insert(0, first)
        return (b0, *rest)

    def _a1_node(self) -> int:
        rs = self.rs
        leaves = [
            j for j in rs.neighbours(rs.beta0) if rs.neighbours(j) == [rs.beta0]
        ]
        return leaves[0]

    @property
    def n(self) -> int:
        return len(self.betas) - 1

    @cached_property
    def gammas(self) -> tuple[Root, ...]:
        w = self.omega
        return tuple(tuple(a - b for a, b in zip(w, beta)) for beta in self.betas)

    @cached_property
    def basis(self) -> tuple[Root, ...]:
        return self.betas + self.gammas

    @cached_property
    def basis_index(self) -> dict[Root, int]:
        return {r: i for i, r in enumerate(self.basis)}

    @cached_property
    def eps(self) -> tuple[int, ...]:
        return tuple(self.rs.sign(b, g) for b, g in zip(self.betas, self.gammas))

    @cached_property
    def delta(self) -> Root:
        total = list(self.omega)
        for g in self.gammas:
            total = [a + b for a, b in zip(total, g)]
        return tuple(total)

    @property
    def s(self) -> int:
        return self.rs.s_parameter()

    @cached_property
    def levi_roots(self) -> tuple[Root, ...]:
        w = self.omega
        return tuple(r for r in self.rs.roots if self.rs.pair(w, r) == 0)

    def symplectic(self, u, v) -> int | Fraction:
        """E(u, v) = sum over gamma + gamma' = omega of c(gamma, gamma') u v."""
        total = 0
        m = self.n + 1
        for i in range(m):
            e = self.eps[i]
            total += e * (u[i] * v[m + i] - u[m + i] * v[i])
        return total


@lru_cache(maxsize=None)
def _frame(label: str) -> HeisenbergFrame:
    return HeisenbergFrame(RootSystem.of(label))


def expected_n(label: str) -> int:
    label = parse_group(label)
    if label in _E_S:
        return 6 * _E_S[label] + 3
    return 2 * int(label[1:]) - 5


def dump(label: str) -> dict:
    """JSON-friendly summary of the root data and frame."""
    fr = HeisenbergFrame.of(label)
    rs = fr.rs
    return {
        "group": rs.label,
        "rank": rs.rank,
        "positive_roots": len(rs.positive_roots),
        "highest_root": list(rs.highest_root),
        "beta0": rs.beta0,
        "branch_node": rs.branch_node,
        "n": fr.n,
        "sigma_size": len(fr.sigma),
        "betas": [list(b) for b in fr.betas],
        "eps": list(fr.eps),
        "delta": list(fr.delta),
        "rho_beta0": str(rs.rho_of_coweight(rs.beta0)),
    }
