"""Command-line front end: every subcommand runs exact checks and emits a report.

Exit status: 0 when every check passes, 1 when one fails, 2 for invalid
parameters, 3 when a budget is exceeded.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import random
import sys
from collections import Counter
from pathlib import Path
from typing import Callable

from . import __version__
from . import cone, counting, fourierfinite, globalconst, heckemod, rootsys, spherical, suite
from .finitefield import is_prime, prime_power
from .padic import InvalidPoint, parse_point
from .suite import Check, exact_str, run

SCHEMA = "minrep.report/1"
EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_BUDGET = 0, 1, 2, 3
CACHE_ENV = "MINREP_CACHE_DIR"
CACHED_COMMANDS = {("count", None), ("fourier", "selfdual"), ("fourier", "sums")}


class ParamError(ValueError):
    pass


# validation -------------------------------------------------------------------


def _group(text: str, family: str | None = None) -> str:
    try:
        g = rootsys.parse_group(text)
    except (ValueError, KeyError) as exc:
        raise ParamError(f"unknown group {text!r}") from exc
    if family and not g.startswith(family):
        raise ParamError(f"{g} is not of type {family}")
    return g


def _prime(p: int) -> int:
    if not is_prime(p):
        raise ParamError(f"p = {p} is not prime")
    return p


def _prime_power(q: int) -> int:
    try:
        prime_power(q)
    except ValueError as exc:
        raise ParamError(str(exc)) from exc
    return q


def _positive(name: str, v: int) -> int:
    if v < 1:
        raise ParamError(f"{name} must be positive")
    return v


def _s(v: int) -> int:
    if v not in (1, 2, 4):
        raise ParamError("s must be 1, 2 or 4")
    return v


# command bodies -----------------------------------------------------------------


def cmd_roots_dump(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    checks = [
        run("frame_dimension", {"group": g}, lambda: (rootsys.HeisenbergFrame.of(g).n, rootsys.expected_n(g))),
        run("sign_table", {"group": g}, lambda: (lambda r: (r, {k: True for k in r}))(
            rootsys.check_sign_table(rootsys.RootSystem.of(g)))),
    ]
    return checks, {"roots": rootsys.dump(g)}


def cmd_cone_verify(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    fld = "Q" if a.field.upper() == "Q" else _prime(int(a.field))
    n = _positive("count", a.count)

    def fn():
        res = cone.check_prehomogeneous(g, n, seed=a.seed, field=fld)
        return res, {k: True for k in res}

    return [run("prehomogeneous", {"group": g, "field": fld, "points": n, "seed": a.seed}, fn)], {}


def cmd_spherical_eval(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    p = _prime(a.p)
    pt = parse_point(a.point)
    val = spherical.spherical_eval(g, p, pt)
    checks = []
    if a.expect is not None:
        checks.append(run("spherical_eval", {"group": g, "p": p, "point": a.point},
                          lambda: (str(val), a.expect)))
    return checks, {"value": str(val), "magnitude": str(val.magnitude), "phase": str(val.phase)}


def cmd_spherical_check(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    p = _prime(a.p)
    n = _positive("count", a.count)
    checks = [
        run("a_invariance", {"group": g, "p": p, "points": n, "seed": a.seed},
            lambda: suite._a_invariance(g, p, n, a.seed)),
        run("fbar_limit", {"group": g, "p": p, "points": n, "seed": a.seed},
            lambda: suite._fbar_limit(g, p, n, a.seed)),
    ]
    if g == "D4":
        checks.append(run("d4_intertwiner", {"p": p, "points": n, "seed": a.seed},
                          lambda: suite._d4_oracle(p, n, a.seed)))
    return checks, {}


def cmd_fourier_selfdual(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    p = _prime(a.p)
    l = _positive("l", a.l)
    if a.packed:
        if p != 2 or l != 1:
            raise ParamError("the packed kernel needs p = 2 and l = 1")
        res = fourierfinite.self_duality_p2(g)
    else:
        res = fourierfinite.self_duality(g, p, l)
    chk = Check("self_duality", {"group": g, "p": p, "l": l}, res["mismatches"], 0, res["pass"],
                note=f"{res['entries']} entries")
    return [chk], {"entries": res["entries"]}


def cmd_fourier_sums(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    q = _prime_power(a.q)
    res: dict = {}

    def solve():
        res.update(fourierfinite.solve_a(g, q))
        return res["a"], res["a_expected"]

    checks = [run("constant_a", {"group": g, "q": q}, solve)]
    if "S1" in res:
        checks.append(Check("S1", {"group": g, "q": q}, res["S1"], res["S1_closed"], res["S1"] == res["S1_closed"]))
        checks.append(Check("S2", {"group": g, "q": q}, res["S2"], res["S2_closed"], res["S2"] == res["S2_closed"]))
    else:
        checks.append(Check("S", {"group": g, "q": q}, res["S"], res["S_closed"], res["S"] == res["S_closed"]))
    return checks, {k: exact_str(v) for k, v in res.items()}


def cmd_hecke_relations(a) -> tuple[list[Check], dict]:
    g = _group(a.group)

    def fn():
        res = heckemod.check_relations(g)
        return {"quadratic": all(res["quadratic"].values()), "braid": all(res["braid"].values())}, {
            "quadratic": True, "braid": True}

    return [run("hecke_relations", {"group": g}, fn)], {}


def cmd_hecke_eigen(a) -> tuple[list[Check], dict]:
    g = _group(a.group)
    rs = rootsys.RootSystem.of(g)
    node = rs.beta0 if a.node is None else a.node
    if not 1 <= node <= rs.rank:
        raise ParamError(f"node must lie in 1..{rs.rank}")
    data: dict = {"node": node}

    def mult():
        got = heckemod.eigen_multiplicities(g, node)
        data["exponents"] = got
        return got, dict(sorted(Counter(heckemod.lambda_exponents(g, node)).items()))

    def comm():
        res = heckemod.commutes_with_levi(g, node)
        return res, {i: True for i in res}

    def ann():
        res = heckemod.annihilator_check(g, node)
        sq = res["squarefree_annihilates"]
        return {"annihilated": sq or res.get("nilpotency") is not None}, {"annihilated": True}

    checks = [
        run("eigen_multiplicities", {"group": g, "node": node}, mult),
        run("hecke_commutes", {"group": g, "node": node}, comm),
        run("hecke_annihilator", {"group": g, "node": node}, ann),
    ]
    if node == rs.beta0:
        data["closed_form_exponents"] = dict(sorted(Counter(heckemod.closed_form_exponents(g)).items()))
    return checks, {k: exact_str(v) for k, v in data.items()}


def cmd_count(a) -> tuple[list[Check], dict]:
    g = _group(a.group, "E")
    q = _prime_power(a.q)
    if a.label not in counting.COUNT_LABELS:
        raise ParamError(f"unknown count {a.label!r}; choose from {list(counting.COUNT_LABELS)}")
    chk = run(f"count_{a.label}", {"group": g, "q": q}, lambda: counting.count(a.label, g, q, budget=a.budget))
    return [chk], {"brute": str(chk.lhs), "closed": str(chk.rhs)}


def cmd_global_p1(a) -> tuple[list[Check], dict]:
    s, q = _s(a.s), _prime_power(a.q)
    a1, a2 = globalconst.p1_closed(s, q)
    checks = [
        run("p1_constants", {"s": s, "q": q}, lambda: (globalconst.p1_solve(s, q), (a1, a2))),
        run("l_identity_g0", {"s": s, "q": q}, lambda: globalconst.l_identity(s, q)),
    ]
    return checks, {"alpha1": str(a1), "alpha2": str(a2)}


def cmd_global_elliptic(a) -> tuple[list[Check], dict]:
    s, q = _s(a.s), _prime_power(a.q)
    if a.coeffs:
        try:
            coeffs = [int(c) for c in a.coeffs.split(",")]
        except ValueError as exc:
            raise ParamError("coefficients must be integers") from exc
        if len(coeffs) != 5 or not all(0 <= c < q for c in coeffs):
            raise ParamError("need five field codes a1,a2,a3,a4,a6 in [0, q)")
        try:
            curves = [globalconst.EllipticCurveData.of(q, coeffs)]
        except globalconst.SingularCurve as exc:
            raise ParamError(str(exc)) from exc
    else:
        if q > 5:
            raise ParamError("enumerating every curve is limited to q <= 5; pass --coeffs")
        curves = [globalconst.EllipticCurveData.of(q, c) for c in globalconst.all_curves(q)]
    checks = []
    for N in sorted({c.N for c in curves}):
        params = {"s": s, "q": q, "N": N}
        d1 = globalconst.elliptic_deg1_check(s, q, N)
        checks.append(Check("elliptic_deg1", params, d1["lhs"], d1["rhs"], d1["pass"]))
        d2 = globalconst.elliptic_deg2_check(s, q, N)
        checks.append(Check("elliptic_deg2", params, d2["residual"], 0, d2["pass"]))
        checks.append(run("l_identity_g1", params, lambda N=N: globalconst.l_identity(s, q, N)))
    data = {"curves": len(curves)}
    if len(curves) == 1:
        a1, a2 = globalconst.elliptic_closed(s, q, curves[0].N)
        data.update(N=curves[0].N, alpha1=str(a1), alpha2=str(a2))
    return checks, data


def cmd_global_weight(a) -> tuple[list[Check], dict]:
    s = _s(a.s)
    if a.triple:
        parts = [t for t in a.triple.split(",") if t]
        try:
            y, x0, *x = (int(t) for t in parts)
        except ValueError as exc:
            raise ParamError("triple entries must be integers") from exc
        if len(x) != 6 * s + 3 or y == 0:
            raise ParamError(f"need y != 0, x0 and {6 * s + 3} coordinates")
        val = globalconst.mu_weight(s, y, x0, x)
        chk = run("mu_weight", {"s": s, "triple": a.triple}, lambda: (val, globalconst.local_product(s, y, x0, x)))
        return [chk], {"value": str(val)}
    n = _positive("count", a.count)

    def fn():
        rng = random.Random(a.seed)
        bad = 0
        for _ in range(n):
            y, x0, x = globalconst.sample_triple(rng, s)
            bad += globalconst.mu_weight(s, y, x0, x) != globalconst.local_product(s, y, x0, x)
        return bad, 0, f"{n} triples"

    return [run("mu_weight", {"s": s, "triples": n, "seed": a.seed}, fn)], {}


def cmd_suite_all(a) -> tuple[list[Check], dict]:
    which = None
    if a.criteria:
        try:
            which = [int(c) for c in a.criteria.split(",")]
        except ValueError as exc:
            raise ParamError("criteria must be integers") from exc
        if not set(which) <= set(suite.CRITERIA):
            raise ParamError(f"criteria lie in {sorted(suite.CRITERIA)}")
    results = suite.run_tier(a.tier, which)
    checks = []
    summary = {}
    for c, cs in results.items():
        for chk in cs:
            chk.params = {"criterion": c, **chk.params}
        checks.extend(cs)
        summary[c] = all(x.passed for x in cs)
    return checks, {"criteria": {str(c): ok for c, ok in summary.items()}, "tier": a.tier}


COMMANDS: dict[tuple[str, str | None], Callable] = {
    ("roots", "dump"): cmd_roots_dump,
    ("cone", "verify"): cmd_cone_verify,
    ("spherical", "eval"): cmd_spherical_eval,
    ("spherical", "check"): cmd_spherical_check,
    ("fourier", "selfdual"): cmd_fourier_selfdual,
    ("fourier", "sums"): cmd_fourier_sums,
    ("hecke", "relations"): cmd_hecke_relations,
    ("hecke", "eigen"): cmd_hecke_eigen,
    ("count", None): cmd_count,
    ("global", "p1"): cmd_global_p1,
    ("global", "elliptic"): cmd_global_elliptic,
    ("global", "weight"): cmd_global_weight,
    ("suite", "all"): cmd_suite_all,
}


# parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--cache-dir", default=None, help=f"cache directory (overrides ${CACHE_ENV})")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="minrep", description="Exact checks for minimal representations.")
    parser.add_argument("--version", action="version", version=f"minrep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(parent, name, **kw):
        return parent.add_parser(name, parents=[common], **kw)

    def actions(name):
        p = sub.add_parser(name)
        return p.add_subparsers(dest="action", required=True)

    roots = actions("roots")
    leaf(roots, "dump").add_argument("--group", required=True)

    c = leaf(actions("cone"), "verify")
    c.add_argument("--group", required=True)
    c.add_argument("--field", default="Q", help="Q or a prime")
    c.add_argument("--count", type=int, default=200)

    sph = actions("spherical")
    e = leaf(sph, "eval")
    e.add_argument("--group", required=True)
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--point", required=True, help="y,x0,x1,...,xn (rationals)")
    e.add_argument("--expect", default=None, help="expected value as printed")
    ch = leaf(sph, "check")
    ch.add_argument("--group", required=True)
    ch.add_argument("--p", type=int, required=True)
    ch.add_argument("--count", type=int, default=200)

    fou = actions("fourier")
    sd = leaf(fou, "selfdual")
    sd.add_argument("--group", required=True)
    sd.add_argument("--p", type=int, required=True)
    sd.add_argument("--l", type=int, default=1)
    sd.add_argument("--packed", action="store_true", help="real Hadamard kernel for p = 2")
    sm = leaf(fou, "sums")
    sm.add_argument("--group", required=True)
    sm.add_argument("--q", type=int, required=True)

    hk = actions("hecke")
    leaf(hk, "relations").add_argument("--group", required=True)
    he = leaf(hk, "eigen")
    he.add_argument("--group", required=True)
    he.add_argument("--node", type=int, default=None, help="simple root index (default beta0)")

    cnt = leaf(sub, "count")
    cnt.add_argument("label", help=", ".join(counting.COUNT_LABELS))
    cnt.add_argument("--group", required=True)
    cnt.add_argument("--q", type=int, required=True)
    cnt.add_argument("--budget", type=float, default=None, help="seconds")
    cnt.add_argument("--csv", default=None, help="append the count to a CSV table")

    gl = actions("global")
    p1 = leaf(gl, "p1")
    p1.add_argument("--s", type=int, required=True)
    p1.add_argument("--q", type=int, required=True)
    el = leaf(gl, "elliptic")
    el.add_argument("--s", type=int, required=True)
    el.add_argument("--q", type=int, required=True)
    el.add_argument("--coeffs", default=None, help="a1,a2,a3,a4,a6 as field codes")
    w = leaf(gl, "weight")
    w.add_argument("--s", type=int, default=1)
    w.add_argument("--count", type=int, default=500)
    w.add_argument("--triple", default=None, help="y,x0,x1,...,xn (integers)")

    st = leaf(actions("suite"), "all")
    st.add_argument("--tier", choices=suite.TIERS, default="fast")
    st.add_argument("--criteria", default=None, help="comma separated subset of 1..9")
    return parser


# caching and output ---------------------------------------------------------------------------


def _params_of(ns: argparse.Namespace) -> dict:
    skip = {"format", "cache_dir", "no_cache", "command", "action", "csv"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip}


def cache_key(command: str, action: str | None, params: dict) -> str:
    blob = json.dumps({"command": command, "action": action, "params": params, "version": __version__},
                      sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_dir(ns: argparse.Namespace) -> Path:
    if ns.cache_dir:
        return Path(ns.cache_dir)
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    return Path.home() / ".cache" / "minrep"


def _cache_load(path: Path) -> dict | None:
    try:
        report = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if report.get("schema") != SCHEMA or report.get("version") != __version__:
        return None
    return report


def make_report(command: str, action: str | None, params: dict, checks: list[Check], data: dict) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command if action is None else f"{command} {action}",
        "params": {k: suite._plain(v) for k, v in params.items()},
        "pass": all(c.passed for c in checks),
        "checks": [c.to_json() for c in checks],
        "data": data,
    }


def render_table(report: dict) -> str:
    rows = [("name", "params", "lhs", "rhs", "pass", "ms")]
    for c in report["checks"]:
        params = ",".join(f"{k}={v}" for k, v in c["params"].items())
        rows.append((c["name"], params, c["lhs"], c["rhs"], "PASS" if c["pass"] else "FAIL", f"{c['millis']:.0f}"))
    rows = [tuple(r if len(r) <= 48 else r[:45] + "..." for r in row) for row in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in rows]
    lines.append(f"overall: {'PASS' if report['pass'] else 'FAIL'}")
    return "\n".join(lines)


def _append_csv(path: str, report: dict) -> None:
    new = not Path(path).exists()
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(["label", "group", "q", "brute", "closed", "pass"])
        c = report["checks"][0]
        w.writerow([c["name"].removeprefix("count_"), c["params"]["group"], c["params"]["q"],
                    c["lhs"], c["rhs"], c["pass"]])


def _emit(report: dict, fmt: str) -> None:
    if fmt == "table":
        print(render_table(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=False))


def _error(kind: str, message: str, fmt: str, code: int) -> int:
    err = {"schema": SCHEMA, "version": __version__, "pass": False, "error": {"kind": kind, "message": message}}
    if fmt == "table":
        print(f"error ({kind}): {message}", file=sys.stderr)
    else:
        print(json.dumps(err, indent=2))
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARAMS
    command, action = ns.command, getattr(ns, "action", None)
    fn = COMMANDS[(command, action)]
    params = _params_of(ns)
    path = None
    if (command, action) in CACHED_COMMANDS and not ns.no_cache:
        path = cache_dir(ns) / f"{cache_key(command, action, params)}.json"
        hit = _cache_load(path)
        if hit is not None:
            _emit(hit, ns.format)
            if command == "count" and ns.csv:
                _append_csv(ns.csv, hit)
            return EXIT_OK if hit["pass"] else EXIT_FAIL
    try:
        checks, data = fn(ns)
    except (ParamError, InvalidPoint) as exc:
        return _error("invalid_parameters", str(exc), ns.format, EXIT_PARAMS)
    except counting.BudgetExceeded as exc:
        return _error("budget_exceeded", str(exc), ns.format, EXIT_BUDGET)
    report = make_report(command, action, params, checks, data)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(report, indent=2))
        tmp.replace(path)
    _emit(report, ns.format)
    if command == "count" and ns.csv:
        _append_csv(ns.csv, report)
    return EXIT_OK if report["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
