import json
import subprocess
import sys
from pathlib import Path

import pytest

from hopfinv import io, models
from hopfinv.coalgebra import CInftyCoalgebra
from hopfinv.cwtower import AlgebraicCWComplex
from hopfinv.errors import SchemaError
from hopfinv.htt import CommutativeDGA, Contraction, massey_model, validate_contraction
from hopfinv.linfty import TableLInfty
from hopfinv.pipeline import full_matrix

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
ALL = sorted(p.name for p in FIXTURES.glob("*.json"))


def test_fixture_set_is_complete():
    assert {"p1.json", "p2.json", "inclusion_y.json", "hopf_s3.json", "massey.json", "gauge_equal.json",
            "gauge_distinct.json", "corrupted_sign.json"} <= set(ALL)


@pytest.mark.parametrize("name", ALL)
def test_fixture_parses(name):
    data = io.load_json(FIXTURES / name)
    obj = io.parse_document(data)
    expected = {"coalgebra": CInftyCoalgebra, "linfty": TableLInfty, "cw": AlgebraicCWComplex,
                "contraction": Contraction, "dga": CommutativeDGA, "scenario": io.Scenario, "gauge": dict}
    assert isinstance(obj, expected[data["kind"]])


def test_fixtures_are_reproducible(tmp_path):
    subprocess.run([sys.executable, str(ROOT / "demos" / "make_fixtures.py"), str(tmp_path)], check=True,
                   capture_output=True)
    for name in ALL:
        assert json.loads((tmp_path / name).read_text()) == json.loads((FIXTURES / name).read_text()), name


def test_scenario_round_trip():
    sc = io.scenario_from(io.load_json(FIXTURES / "p1.json"))
    again = io.scenario_from(json.loads(json.dumps(sc.to_dict())))
    a = full_matrix(sc.maps["p1"], sc.source, sc.target)
    b = full_matrix(again.maps["p1"], again.source, again.target)
    assert a.to_dict() == b.to_dict()
    assert a.value("alpha", "xi") == 1


def test_hopf_scenario_keeps_its_primitive():
    sc = io.scenario_from(io.load_json(FIXTURES / "hopf_s3.json"))
    assert ("hopf", "omega") in sc.source.primitives
    ref = models.hopf_primitive()
    assert sc.source.primitives[("hopf", "omega")].evaluate([0.1, 0.2, 0.3, 0.4]) == \
        pytest.approx(ref.evaluate([0.1, 0.2, 0.3, 0.4]))


def test_linfty_round_trip():
    L = models.free_shifted_lie([("x", 2), ("y", 3)], 6)
    back = io.linfty_from(io.linfty_to_dict(L))
    assert back.space == L.space and back.same_brackets(L)


def test_contraction_round_trip():
    A, c = massey_model()
    back = io.contraction_from(io.contraction_to_dict(c), True, A.complex)
    assert validate_contraction(back).ok
    # the small space name is not serialised, so compare the matrices
    for f in ("h", "i", "p"):
        rows = lambda g: {k: dict(v.items()) for k, v in g.matrix.items()}
        assert rows(getattr(back, f)) == rows(getattr(c, f))


@pytest.mark.parametrize("text,msg", [
    ("{", "line 1"),
    ("[]", "top level"),
    ('{"format_version": 2, "kind": "cw"}', "format_version"),
    ('{"format_version": 1, "kind": "banana"}', "kind must be"),
])
def test_load_errors(tmp_path, text, msg):
    p = tmp_path / "bad.json"
    p.write_text(text)
    with pytest.raises(SchemaError, match=msg):
        io.load_json(p)


def test_missing_file():
    with pytest.raises(SchemaError, match="cannot read"):
        io.load_json("/nonexistent/file.json")


def test_scenario_schema_errors():
    data = io.load_json(FIXTURES / "p1_vs_p2.json")
    with pytest.raises(SchemaError, match="unknown option"):
        io.scenario_from({**data, "options": {"speed": 3}})
    with pytest.raises(SchemaError, match="compare"):
        io.scenario_from({**data, "compare": ["p1", "p3"]})
    with pytest.raises(SchemaError, match="at least one map"):
        io.scenario_from({**data, "maps": {}})


def test_malformed_entries_are_schema_errors():
    with pytest.raises(SchemaError):
        io.parse_document({"format_version": 1, "kind": "coalgebra", "basis": [{"label": "a"}]})
