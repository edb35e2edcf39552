import json
import subprocess
import sys
from pathlib import Path

import pytest

from hopfinv.cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, EXIT_SCHEMA, EXIT_UNDECIDED, main

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
GOOD = sorted(p.name for p in FIXTURES.glob("*.json") if p.name != "corrupted_sign.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fx(name):
    return FIXTURES / name


@pytest.mark.parametrize("name", GOOD)
def test_validate_good_fixtures(capsys, name):
    code, out, _ = run(capsys, "validate", fx(name), "--nodes", "12")
    assert code == EXIT_OK, out


def test_validate_corrupted(capsys):
    code, out, _ = run(capsys, "validate", fx("corrupted_sign.json"), "--json")
    assert code == EXIT_FAIL
    payload = json.loads(out)
    assert not payload["ok"]
    assert "cocommutativity" in {f["check"] for f in payload["failures"]}


def test_missing_and_malformed_files(capsys, tmp_path):
    code, _, err = run(capsys, "validate", tmp_path / "nope.json")
    assert code == EXIT_SCHEMA and "error" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 1, "kind": "scenario"}')
    assert run(capsys, "hopf", bad)[0] == EXIT_SCHEMA


def test_hopf_p1(capsys):
    code, out, _ = run(capsys, "hopf", fx("p1.json"), "--json")
    assert code == EXIT_OK
    M = json.loads(out)["maps"]["p1"]
    vals = {(e["cycle"], e["pi"]): e["value"] for e in M["entries"]}
    assert vals[("alpha", "xi")] == "1" and vals[("beta", "xi")] == "0"


def test_hopf_text_and_unknown_map(capsys):
    code, out, _ = run(capsys, "hopf", fx("hopf_s3.json"), "--nodes", "24")
    assert code == EXIT_OK and "lambda[sigma,[xi,xi]]" in out
    assert run(capsys, "hopf", fx("p1.json"), "--map", "nope")[0] == EXIT_SCHEMA


@pytest.mark.parametrize("name,expected", [("p1_vs_p2.json", EXIT_FAIL), ("constant_vs_inclusion.json", EXIT_OK)])
def test_compare(capsys, name, expected):
    code, out, _ = run(capsys, "compare", fx(name), "--json", "--nodes", "16")
    assert code == expected
    assert json.loads(out)["verdict"] == ("distinct-class" if expected else "equal-class")


@pytest.mark.parametrize("name,expected", [("gauge_distinct.json", EXIT_FAIL), ("gauge_equal.json", EXIT_OK)])
def test_gauge(capsys, name, expected):
    assert run(capsys, "gauge", fx(name))[0] == expected


def _gauge_variant(tmp_path, tau, kappa, extra_cell=False):
    data = json.loads(fx("gauge_equal.json").read_text())
    data["tau"], data["kappa"] = tau, kappa
    if extra_cell:
        data["complex"]["cells"].append({"label": "delta", "degree": 6})
    p = tmp_path / "g.json"
    p.write_text(json.dumps(data))
    return p


def test_gauge_undecided_and_invalid(capsys, tmp_path):
    p = _gauge_variant(tmp_path, {"phi[alpha,x]": "1", "phi[gamma,[x,[x,y]]]": "1"}, {"phi[alpha,x]": "1"}, True)
    assert run(capsys, "gauge", p)[0] == EXIT_UNDECIDED
    p = _gauge_variant(tmp_path, {"phi[alpha,x]": "1", "phi[beta,x]": "1"}, {})
    code, _, err = run(capsys, "gauge", p)
    assert code == EXIT_ERROR and "InvalidMCError" in err


def test_transfer(capsys):
    code, out, _ = run(capsys, "transfer", fx("massey.json"), "--json")
    assert code == EXIT_OK
    ops = json.loads(out)["operations"]
    assert {"inputs": ["x", "y", "x"], "output": {"xz": "2"}} in ops["3"]
    assert run(capsys, "transfer", fx("p1.json"))[0] == EXIT_SCHEMA


def test_freelie(capsys):
    code, out, _ = run(capsys, "freelie", "x:2", "y:2", "--max-degree", "4", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["dimensions"] == {"2": 2, "3": 3, "4": 2}
    code, out, _ = run(capsys, "freelie", "xi:2", "--max-degree", "3", "--brackets")
    assert "l2(xi, xi)" in out
    assert run(capsys, "freelie", "xi")[0] == EXIT_SCHEMA


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hopfinv", "freelie", "x:2", "--max-degree", "6"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "degree 3: 1" in r.stdout
