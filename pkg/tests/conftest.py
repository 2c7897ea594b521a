import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from funceq.sympoly import Generator, Monomial, SymPoly, UnknownPoly

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA


small_frac = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))

unknown_names = st.sampled_from(["a", "b", "lam_1_0"])


@st.composite
def unknown_polys(draw, max_terms=3):
    acc = UnknownPoly.const(draw(small_frac))
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(small_frac)
        v = UnknownPoly.var(draw(unknown_names), draw(st.integers(1, 2)))
        acc = acc + UnknownPoly.const(c) * v
    return acc


generators = st.builds(Generator, st.integers(0, 1), st.integers(0, 2), st.integers(0, 2))

monomials = st.lists(st.tuples(generators, st.integers(1, 2)), max_size=3).map(Monomial)


@st.composite
def sympolys(draw, max_terms=4, symbolic=True):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = draw(monomials)
        c = draw(unknown_polys()) if symbolic else UnknownPoly.const(draw(small_frac))
        terms[m] = c
    return SymPoly(terms)


# acceptance report: one line per criterion in the terminal summary

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, literal=True): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not (rep.when == "setup" and rep.outcome != "passed")):
        return
    n = mark.args[0]
    literal = mark.kwargs.get("literal", True)
    entry = _CRITERIA.setdefault(n, {"ok": True, "notes": []})
    if hasattr(rep, "wasxfail"):
        if literal:
            entry["ok"] = False
            entry["notes"].append(f"{item.name}: unattainable as stated (strict xfail)")
        else:
            entry["notes"].append(f"{item.name}: broader reading refuted (strict xfail)")
    elif rep.outcome != "passed":
        entry["ok"] = False
        entry["notes"].append(f"{item.name}: {rep.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        line = f"criterion {n}: {'PASS' if e['ok'] else 'FAIL'}"
        if e["notes"]:
            line += " [" + "; ".join(e["notes"]) + "]"
        terminalreporter.write_line(line)
