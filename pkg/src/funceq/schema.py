"""JSON readers and writers for ansatz, model and report documents."""

from __future__ import annotations

import json
from fractions import Fraction

from .concrete import AdditiveModel, Atom
from .equation import FunctionSpec, FunctionTerm
from .errors import ParseError, SchemaError
from .parsing import parse_rational_function, parse_unknown_poly
from .sympoly import NAME_RE

SCHEMA_VERSION = 1


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _nonneg_int(v, what):
    _require(isinstance(v, int) and not isinstance(v, bool) and v >= 0,
             f"{what} must be a nonnegative integer, got {v!r}")
    return v


def _coeff(v, where):
    _require(isinstance(v, (str, int)) and not isinstance(v, bool),
             f"{where}: coeff must be a string or integer")
    try:
        return parse_unknown_poly(v)
    except ParseError as e:
        raise SchemaError(f"{where}: bad coefficient {v!r}: {e}") from None


def ansatz_from_json(doc) -> dict:
    """{"functions": [{"name": "f1", "terms": [{"exp", "order", "coeff"}]}]}"""
    _require(isinstance(doc, dict) and isinstance(doc.get("functions"), list),
             "ansatz must be an object with a 'functions' list")
    out = {}
    for i, fn in enumerate(doc["functions"]):
        _require(isinstance(fn, dict), f"functions[{i}] must be an object")
        name = fn.get("name")
        _require(isinstance(name, str) and NAME_RE.match(name), f"functions[{i}]: bad name {name!r}")
        _require(name not in out, f"function {name} defined twice")
        _require(isinstance(fn.get("terms"), list), f"{name}: 'terms' must be a list")
        terms, seen = [], set()
        for j, t in enumerate(fn["terms"]):
            where = f"{name}.terms[{j}]"
            _require(isinstance(t, dict), f"{where} must be an object")
            extra = set(t) - {"exp", "order", "coeff"}
            _require(not extra, f"{where}: unknown keys {sorted(extra)}")
            e = _nonneg_int(t.get("exp", 0), f"{where}.exp")
            k = _nonneg_int(t.get("order", 0), f"{where}.order")
            _require("coeff" in t, f"{where}: missing coeff")
            _require((e, k) not in seen, f"{where}: repeated (exp, order) = ({e}, {k})")
            seen.add((e, k))
            terms.append(FunctionTerm(e, k, _coeff(t["coeff"], where)))
        out[name] = FunctionSpec(name, tuple(sorted(terms, key=lambda t: (t.exp, t.order))))
    return out


def ansatz_to_json(ansatz) -> dict:
    return {"functions": [
        {"name": name, "terms": [{"exp": t.exp, "order": t.order, "coeff": str(t.coeff)}
                                 for t in f.terms]}
        for name, f in sorted(ansatz.items())]}


def _model(doc, where) -> AdditiveModel:
    _require(isinstance(doc, dict) and isinstance(doc.get("atoms"), list),
             f"{where}: a model is an object with an 'atoms' list")
    atoms = []
    for j, a in enumerate(doc["atoms"]):
        w = f"{where}.atoms[{j}]"
        _require(isinstance(a, dict), f"{w} must be an object")
        extra = set(a) - {"scalar", "endo", "order"}
        _require(not extra, f"{w}: unknown keys {sorted(extra)}")
        try:
            scalar = Fraction(str(a.get("scalar", "1")))
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{w}: bad scalar {a.get('scalar')!r}") from None
        try:
            endo = parse_rational_function(a.get("endo", "t"))
        except (ParseError, ZeroDivisionError) as e:
            raise SchemaError(f"{w}: bad endo {a.get('endo')!r}: {e}") from None
        _require(not endo.is_constant(), f"{w}: endo must be non-constant")
        atoms.append(Atom(scalar, endo, _nonneg_int(a.get("order", 0), f"{w}.order")))
    return AdditiveModel(atoms)


def models_from_json(doc) -> dict:
    """{"models": [{"name": "f1", "atoms": [...]}]} or {"models": {"f1": {"atoms": [...]}}}."""
    _require(isinstance(doc, dict) and "models" in doc, "models document needs a 'models' key")
    ms = doc["models"]
    out = {}
    if isinstance(ms, dict):
        items = sorted(ms.items())
    elif isinstance(ms, list):
        items = []
        for i, m in enumerate(ms):
            _require(isinstance(m, dict) and isinstance(m.get("name"), str),
                     f"models[{i}] needs a name")
            items.append((m["name"], m))
    else:
        raise SchemaError("'models' must be a list or an object")
    for name, m in items:
        _require(NAME_RE.match(name) is not None, f"bad model name {name!r}")
        _require(name not in out, f"model {name} defined twice")
        out[name] = _model(m, name)
    return out


def models_to_json(models) -> dict:
    return {"models": [{"name": n, **m.to_dict()} for n, m in sorted(models.items())]}


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e.msg}", e.lineno, e.colno) from None


def dumps(obj, pretty: bool = False) -> str:
    """Deterministic serialization."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=str)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=str)
