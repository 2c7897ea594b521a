import json

import pytest

from funceq.concrete import T
from funceq.errors import ParseError, SchemaError
from funceq.schema import (SCHEMA_VERSION, ansatz_from_json, ansatz_to_json, dumps, load_json,
                           models_from_json, models_to_json)
from funceq.sympoly import UnknownPoly


def test_ansatz_round_trip(data_dir):
    doc = load_json(data_dir / "generic.json")
    ans = ansatz_from_json(doc)
    assert ansatz_from_json(ansatz_to_json(ans)) == ans
    assert ans["f1"].coeff(0, 1) == UnknownPoly.var("lam_1_1")


def test_ansatz_defaults_and_integer_coeffs():
    ans = ansatz_from_json({"functions": [{"name": "f", "terms": [{"coeff": 3}, {"order": 2, "coeff": "a/2"}]}]})
    f = ans["f"]
    assert f.coeff(0, 0) == UnknownPoly.const(3)
    assert f.order() == 2


@pytest.mark.parametrize("doc, fragment", [
    ([], "functions"),
    ({"functions": [{"name": "1f", "terms": []}]}, "bad name"),
    ({"functions": [{"name": "f", "terms": []}, {"name": "f", "terms": []}]}, "defined twice"),
    ({"functions": [{"name": "f", "terms": [{"coeff": "1", "power": 2}]}]}, "unknown keys"),
    ({"functions": [{"name": "f", "terms": [{"exp": -1, "coeff": "1"}]}]}, "nonnegative"),
    ({"functions": [{"name": "f", "terms": [{"order": True, "coeff": "1"}]}]}, "nonnegative"),
    ({"functions": [{"name": "f", "terms": [{"order": 1}]}]}, "missing coeff"),
    ({"functions": [{"name": "f", "terms": [{"coeff": "1"}, {"coeff": "2"}]}]}, "repeated"),
    ({"functions": [{"name": "f", "terms": [{"coeff": "a +"}]}]}, "bad coefficient"),
    ({"functions": [{"name": "f", "terms": [{"coeff": 1.5}]}]}, "string or integer"),
])
def test_ansatz_rejections(doc, fragment):
    with pytest.raises(SchemaError, match=fragment):
        ansatz_from_json(doc)


def test_models_both_layouts(data_dir):
    listed = models_from_json(load_json(data_dir / "two_exp_models.json"))
    keyed = models_from_json({"models": {n: m.to_dict() for n, m in listed.items()}})
    assert keyed == listed
    assert models_from_json(models_to_json(listed)) == listed
    assert listed["g1"].atoms[1].endo == T ** 2


@pytest.mark.parametrize("doc, fragment", [
    ({}, "'models'"),
    ({"models": 3}, "list or an object"),
    ({"models": [{"atoms": []}]}, "needs a name"),
    ({"models": {"f": {"atoms": [{"endo": "2"}]}}}, "non-constant"),
    ({"models": {"f": {"atoms": [{"endo": "s"}]}}}, "bad endo"),
    ({"models": {"f": {"atoms": [{"scalar": "1/0"}]}}}, "bad scalar"),
    ({"models": {"f": {"atoms": [{"shift": 1}]}}}, "unknown keys"),
    ({"models": {"f": {}}}, "'atoms' list"),
])
def test_model_rejections(doc, fragment):
    with pytest.raises(SchemaError, match=fragment):
        models_from_json(doc)


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"functions":\n  [,]}')
    with pytest.raises(ParseError) as ei:
        load_json(p)
    assert ei.value.line == 2


def test_dumps_deterministic():
    a = {"b": [1, {"z": 1, "a": 2}], "a": "x"}
    b = {"a": "x", "b": [1, {"a": 2, "z": 1}]}
    assert dumps(a) == dumps(b)
    assert json.loads(dumps(a, pretty=True)) == a
    assert SCHEMA_VERSION == 1
