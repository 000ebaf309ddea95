"""Acceptance criteria as lists of exact checks, shared by the CLI and the tests.

Every check compares an lhs with an rhs by exact equality.  Each criterion has
a fast tier (small parameters) and a full tier (the stated parameters); the
stretch tier adds the E8 enumerations.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable

from . import cone, counting, fourierfinite, globalconst, heckemod, rootsys, spherical
from .padic import SphericalValue

ALL_GROUPS = ("D4", "D5", "D6", "D7", "E6", "E7", "E8")
TIERS = ("fast", "full", "stretch")


@dataclass
class Check:
    name: str
    params: dict
    lhs: object
    rhs: object
    passed: bool
    millis: float = 0.0
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "lhs": exact_str(self.lhs),
            "rhs": exact_str(self.rhs),
            "pass": self.passed,
            "millis": round(self.millis, 3),
        }
        if self.note:
            out["note"] = self.note
        return out


def _plain(v):
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(a) for a in v]
    return exact_str(v)


def exact_str(v) -> str:
    """Exact values as strings: integers, rationals, dicts and lists of them."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {exact_str(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(exact_str(x) for x in v) + "]"
    return str(v)


def run(name: str, params: dict, fn: Callable[[], tuple]) -> Check:
    """fn returns (lhs, rhs) or (lhs, rhs, note)."""
    start = time.perf_counter()
    out = fn()
    millis = (time.perf_counter() - start) * 1000
    lhs, rhs, *rest = out
    return Check(name, params, lhs, rhs, lhs == rhs, millis, rest[0] if rest else "")


# 1 sign tables ----------------------------------------------------------------


def criterion1(tier: str = "full") -> list[Check]:
    out = []
    for g in ALL_GROUPS:
        def fn(g=g):
            res = rootsys.check_sign_table(rootsys.RootSystem.of(g))
            return res, {k: True for k in res}
        out.append(run("sign_table", {"group": g}, fn))
    return out


# 2 prehomogeneous identities ----------------------------------------------------


def criterion2(tier: str = "full") -> list[Check]:
    count = 200 if tier != "fast" else 50
    out = []
    for g in ALL_GROUPS:
        for fld in ("Q", 5, 101):
            def fn(g=g, fld=fld):
                res = cone.check_prehomogeneous(g, count, seed=0, field=fld)
                return res, {k: True for k in res}
            out.append(run("prehomogeneous", {"group": g, "field": fld, "points": count}, fn))
    return out


# 3 finite Fourier self-duality ---------------------------------------------------------

SELF_DUAL_FULL = (
    ("D4", 2, 1), ("D4", 3, 1), ("D4", 5, 1),
    ("D5", 2, 1), ("D5", 3, 1),
    ("E6", 2, 1), ("E6", 3, 1), ("E6", 5, 1),
    ("E7", 2, 1),
    ("D4", 2, 2), ("D4", 3, 2), ("E6", 2, 2),
)
SELF_DUAL_FAST = (("D4", 2, 1), ("D4", 3, 1), ("D5", 2, 1), ("E6", 2, 1), ("E6", 3, 1), ("D4", 2, 2))


def criterion3(tier: str = "full") -> list[Check]:
    cases = SELF_DUAL_FAST if tier == "fast" else SELF_DUAL_FULL
    out = []
    for g, p, l in cases:
        def fn(g=g, p=p, l=l):
            res = fourierfinite.self_duality(g, p, l)
            return res["mismatches"], 0, f"{res['entries']} entries"
        out.append(run("self_duality", {"group": g, "p": p, "l": l}, fn))
    if tier == "stretch":
        def e8():
            res = fourierfinite.self_duality_p2("E8")
            return res["mismatches"], 0, f"{res['entries']} entries"
        out.append(run("self_duality_packed", {"group": "E8", "p": 2, "l": 1}, e8))
    return out


# 4 counting ---------------------------------------------------------------------------


def _count_cases(tier: str) -> list[tuple[str, str, int]]:
    if tier == "fast":
        return [
            ("card1", "E6", 2), ("card1", "E6", 3), ("card2", "E6", 2), ("card2", "E6", 3),
            ("cone", "E6", 2), ("lines", "E6", 2), ("sections_singular", "E6", 2),
            ("sections_divisor2", "E6", 2),
        ]
    cases = [(lab, "E6", q) for lab in ("card1", "card2") for q in (2, 3, 4, 5)]
    cases += [(lab, "E7", q) for lab in ("card1", "card2") for q in (2, 3)]
    cases += [("cone", "E6", 2), ("cone", "E6", 3), ("cone", "E7", 2)]
    cases += [(lab, "E6", q) for lab in ("lines", "sections_singular", "sections_divisor2") for q in (2, 3)]
    return cases


def criterion4(tier: str = "full") -> list[Check]:
    out = []
    for lab, g, q in _count_cases(tier):
        out.append(run(f"count_{lab}", {"group": g, "q": q}, lambda lab=lab, g=g, q=q: counting.count(lab, g, q)))
    return out


# 5 Hecke module --------------------------------------------------------------------------


def expected_annihilator(group: str) -> list[int]:
    """Exponents e of the factors T - q^e in the stated annihilating polynomial."""
    fr = rootsys.HeisenbergFrame.of(group)
    n = fr.n
    if group.startswith("E"):
        return sorted({2 * (n + 1) - fr.s, 2 * (n + 1) - 2 * fr.s})
    k = int(group[1:])
    if k == 4:
        return [2 * (n + 1)]
    return sorted({2 * (n + 1), 2 * (n + 1) + 4 - k})


def criterion5(tier: str = "full") -> list[Check]:
    out = []
    for g in ALL_GROUPS:
        def rel(g=g):
            res = heckemod.check_relations(g)
            got = {"quadratic": all(res["quadratic"].values()), "braid": all(res["braid"].values())}
            return got, {"quadratic": True, "braid": True}
        out.append(run("hecke_relations", {"group": g}, rel))

        def comm(g=g):
            res = heckemod.commutes_with_levi(g)
            return res, {i: True for i in res}
        out.append(run("hecke_commutes", {"group": g}, comm))

        def ann(g=g):
            res = heckemod.annihilator_check(g)
            exps = sorted(res["exponents"])
            got = {"exponents": exps, "squarefree": res["squarefree_annihilates"]}
            if g == "D4":
                got["nilpotency"] = res.get("nilpotency")
                return got, {"exponents": expected_annihilator(g), "squarefree": False, "nilpotency": 2}
            got["proper_factor"] = any(res["proper_factor_annihilates"].values())
            return got, {"exponents": expected_annihilator(g), "squarefree": True, "proper_factor": False}
        out.append(run("hecke_annihilator", {"group": g}, ann))
    return out


# 6 spherical evaluator ---------------------------------------------------------------------


def _a_invariance(g: str, p: int, count: int, seed: int) -> tuple:
    rng = random.Random(f"{seed}:{g}:{p}")
    bad, done = 0, 0
    while done < count:
        pt = spherical.sample_point(g, p, rng)
        if pt[1] == 0:
            continue
        lhs, rhs = spherical.check_a_invariance(g, p, pt)
        bad += lhs != rhs
        done += 1
    return bad, 0, f"{done} points"


def _fbar_limit(g: str, p: int, count: int, seed: int) -> tuple:
    rng = random.Random(f"fbar:{seed}:{g}:{p}")
    bad, done = 0, 0
    while done < count:
        pt = spherical.sample_point(g, p, rng)
        x0, x = pt[1], pt[2:]
        if x0 == 0:
            continue
        v = spherical.valuation(x0, p)
        depths = [v, v + 1, v + 3]
        target = spherical.fbar_closed(g, p, x0, x)
        bad += any(val != target for val in spherical.fbar_limit(g, p, x0, x, depths))
        done += 1
    return bad, 0, f"{done} points"


def _d4_oracle(p: int, count: int, seed: int) -> tuple:
    rng = random.Random(f"d4:{seed}:{p}")
    sign = spherical.d4_cubic_sign()
    bad = 0
    for _ in range(count):
        pt = spherical.sample_point("D4", p, rng)
        lhs = spherical.d4_intertwiner_eval(p, pt, cubic_sign=sign)
        rhs = spherical.spherical_eval("D4", p, pt)
        bad += rhs != lhs
    return bad, 0, f"{count} points"


def criterion6(tier: str = "full") -> list[Check]:
    fast = tier == "fast"
    groups = ("D4", "D5", "E6") if fast else ALL_GROUPS
    n_a, n_f, n_d = (100, 50, 30) if fast else (1000, 200, 100)
    out = []
    for g in groups:
        for p in (2, 3):
            out.append(run("a_invariance", {"group": g, "p": p, "points": n_a}, lambda g=g, p=p: _a_invariance(g, p, n_a, 0)))
            out.append(run("fbar_limit", {"group": g, "p": p, "points": n_f}, lambda g=g, p=p: _fbar_limit(g, p, n_f, 0)))
    for p in (2, 3, 5):
        out.append(run("d4_intertwiner", {"p": p, "points": n_d}, lambda p=p: _d4_oracle(p, n_d, 0)))
    return out


# 7 global constants ---------------------------------------------------------------------------------


def criterion7(tier: str = "full") -> list[Check]:
    qs = (2, 3) if tier == "fast" else (2, 3, 4, 5)
    fields = (2,) if tier == "fast" else (2, 3)
    out = []
    for s in (1, 2, 4):
        for q in qs:
            def p1(s=s, q=q):
                return globalconst.p1_solve(s, q), globalconst.p1_closed(s, q)
            out.append(run("p1_constants", {"s": s, "q": q}, p1))
            out.append(run("l_identity_g0", {"s": s, "q": q}, lambda s=s, q=q: globalconst.l_identity(s, q)))
    for q in fields:
        curves = list(globalconst.all_curves(q))
        Ns = [globalconst.ec_count_points(q, c) for c in curves]
        for s in (1, 2, 4):
            def deg1(s=s, q=q):
                bad = [N for N in Ns if not globalconst.elliptic_deg1_check(s, q, N)["pass"]]
                return bad, [], f"{len(Ns)} curves"

            def deg2(s=s, q=q):
                bad = [N for N in Ns if not globalconst.elliptic_deg2_check(s, q, N)["pass"]]
                return bad, [], f"{len(Ns)} curves"

            def solved(s=s, q=q):
                bad = [N for N in set(Ns) if globalconst.solve_from_equations(s, q, N) != globalconst.elliptic_closed(s, q, N)]
                return bad, [], f"{len(set(Ns))} distinct N"

            def lid(s=s, q=q):
                bad = [N for N in Ns if (lambda r: r[0] != r[1])(globalconst.l_identity(s, q, N))]
                return bad, [], f"{len(Ns)} curves"

            params = {"s": s, "q": q}
            out.append(run("elliptic_deg1", params, deg1))
            out.append(run("elliptic_deg2", params, deg2))
            out.append(run("elliptic_solve", params, solved))
            out.append(run("l_identity_g1", params, lid))
    return out


# 8 cross-module weight ----------------------------------------------------------------------------


def criterion8(tier: str = "full") -> list[Check]:
    count = 100 if tier == "fast" else 500

    def fn():
        rng = random.Random(0)
        bad = nonzero = 0
        for _ in range(count):
            y, x0, x = globalconst.sample_triple(rng)
            lhs = globalconst.mu_weight(1, y, x0, x)
            bad += lhs != globalconst.local_product(1, y, x0, x)
            nonzero += lhs != SphericalValue(0)
        return bad, 0, f"{count} triples, {nonzero} nonzero"

    return [run("mu_weight", {"s": 1, "triples": count}, fn)]


# 9 stretch: E8 at q = 2 ---------------------------------------------------------------------------

E8_BUDGET_SECONDS = 3600.0


def criterion9(tier: str = "stretch") -> list[Check]:
    out = []
    for lab in ("card1", "card2"):
        out.append(run(f"count_{lab}", {"group": "E8", "q": 2, "budget_s": E8_BUDGET_SECONDS},
                       lambda lab=lab: counting.count(lab, "E8", 2, budget=E8_BUDGET_SECONDS)))
    return out


CRITERIA: dict[int, Callable[[str], list[Check]]] = {
    1: criterion1, 2: criterion2, 3: criterion3, 4: criterion4,
    5: criterion5, 6: criterion6, 7: criterion7, 8: criterion8, 9: criterion9,
}


def run_tier(tier: str, which: Iterable[int] | None = None) -> dict[int, list[Check]]:
    if tier not in TIERS:
        raise ValueError(f"tier must be one of {TIERS}")
    nums = list(which) if which is not None else [c for c in CRITERIA if c != 9 or tier == "stretch"]
    return {c: CRITERIA[c](tier) for c in nums}
