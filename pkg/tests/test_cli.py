import json
import subprocess
import sys

import pytest

from minrep import cli


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    return tmp_path / "cache"


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out)


def strip_timing(rep):
    rep = json.loads(json.dumps(rep))
    for c in rep.get("checks", []):
        c.pop("millis", None)
    return rep


def test_count_card1(capsys):
    code, rep = report(capsys, "count", "card1", "--group", "E6", "--q", "2")
    assert code == 0 and rep["pass"]
    assert rep["data"] == {"brute": "168", "closed": "168"}
    (chk,) = rep["checks"]
    assert set(chk) >= {"name", "params", "lhs", "rhs", "pass", "millis"}
    assert rep["schema"] == cli.SCHEMA


def test_spherical_eval_normalisation(capsys):
    code, rep = report(capsys, "spherical", "eval", "--group", "E6", "--p", "2", "--point", "1,0,0,0,0,0,0,0,0,0,0")
    assert code == 0 and rep["data"]["value"] == "1"


def test_expect_mismatch_fails(capsys):
    code, rep = report(capsys, "spherical", "eval", "--group", "E6", "--p", "2", "--point", "4,2,0,0,0,0,0,0,0,0,0",
                       "--expect", "13")
    assert code == 1 and not rep["pass"]
    assert rep["data"]["value"] == "12"


def test_suite_fast(capsys):
    code, rep = report(capsys, "suite", "all", "--tier", "fast")
    assert code == 0 and rep["pass"]
    assert set(rep["data"]["criteria"]) == {str(c) for c in range(1, 9)}


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "card1", "--group", "E6", "--q", "6"],
        ["count", "card1", "--group", "D5", "--q", "2"],
        ["count", "volume", "--group", "E6", "--q", "2"],
        ["spherical", "eval", "--group", "E6", "--p", "4", "--point", "1,0"],
        ["spherical", "eval", "--group", "E6", "--p", "2", "--point", "1,0"],
        ["fourier", "selfdual", "--group", "E6", "--p", "3", "--packed"],
        ["global", "p1", "--s", "3", "--q", "2"],
        ["global", "elliptic", "--s", "1", "--q", "3", "--coeffs", "0,0,0,0,0"],
        ["hecke", "eigen", "--group", "E6", "--node", "9"],
        ["suite", "all", "--criteria", "12"],
    ],
)
def test_invalid_parameters(capsys, argv):
    code, out = invoke(capsys, *argv, "--no-cache")
    assert code == cli.EXIT_PARAMS
    assert json.loads(out)["error"]["kind"] == "invalid_parameters"


def test_unparseable_arguments(capsys):
    assert cli.main(["count"]) == cli.EXIT_PARAMS
    capsys.readouterr()


def test_budget_exceeded(capsys):
    code, out = invoke(capsys, "count", "card1", "--group", "E7", "--q", "3", "--budget", "0", "--no-cache")
    assert code == cli.EXIT_BUDGET
    assert json.loads(out)["error"]["kind"] == "budget_exceeded"


def test_reports_are_deterministic(capsys):
    argv = ["global", "weight", "--count", "40", "--seed", "3"]
    _, a = report(capsys, *argv)
    _, b = report(capsys, *argv)
    assert strip_timing(a) == strip_timing(b)


def test_cache_hit_and_revalidation(capsys, cache):
    argv = ["count", "cone", "--group", "E6", "--q", "2"]
    _, first = report(capsys, *argv)
    files = list(cache.glob("*.json"))
    assert len(files) == 1
    _, second = report(capsys, *argv)
    assert first == second
    stale = json.loads(files[0].read_text())
    stale["version"] = "0.0.0"
    stale["pass"] = False
    files[0].write_text(json.dumps(stale))
    code, third = report(capsys, *argv)
    assert code == 0 and third["pass"]


def test_cache_key_depends_on_params():
    a = cli.cache_key("count", None, {"label": "card1", "q": 2})
    b = cli.cache_key("count", None, {"label": "card1", "q": 3})
    assert a != b and len(a) == 64


def test_csv_export(capsys, tmp_path):
    path = tmp_path / "counts.csv"
    for q in ("2", "3"):
        invoke(capsys, "count", "card2", "--group", "E6", "--q", q, "--csv", str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "label,group,q,brute,closed,pass"
    assert lines[1:] == ["card2,E6,2,49,49,True", "card2,E6,3,338,338,True"]


def test_table_format(capsys):
    code, out = invoke(capsys, "hecke", "relations", "--group", "D4", "--format", "table")
    assert code == 0 and "hecke_relations" in out and out.strip().endswith("overall: PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["roots", "dump", "--group", "E7"],
        ["cone", "verify", "--group", "E6", "--field", "101", "--count", "20"],
        ["spherical", "check", "--group", "D4", "--p", "3", "--count", "20"],
        ["fourier", "selfdual", "--group", "D4", "--p", "3"],
        ["fourier", "selfdual", "--group", "E6", "--p", "2", "--packed"],
        ["fourier", "sums", "--group", "E6", "--q", "2"],
        ["fourier", "sums", "--group", "D5", "--q", "3"],
        ["hecke", "eigen", "--group", "E6", "--node", "1"],
        ["global", "p1", "--s", "2", "--q", "3"],
        ["global", "elliptic", "--s", "1", "--q", "2"],
        ["global", "elliptic", "--s", "4", "--q", "2", "--coeffs", "0,0,1,1,0"],
        ["global", "weight", "--triple", "4,2,1,0,0,0,0,0,0,0,0"],
    ],
)
def test_subcommands_pass(capsys, argv):
    code, rep = report(capsys, *argv)
    assert code == 0 and rep["pass"], rep


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "minrep.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "minrep" in out.stdout
