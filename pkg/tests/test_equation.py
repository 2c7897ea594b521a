import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funceq.equation import (EquationSpec, FunctionSpec, Term, build_lhs, check_conditions,
                             extract_constraints, grade_by_scaling, homogenize, relabel_ansatz,
                             symmetrize, triviality_flags, verify_solution)
from funceq.errors import (NonHomogeneousError, NotNumericError, SymmetrizationCapError,
                           UnresolvedFunctionError)
from funceq.sympoly import G, SymPoly, UnknownPoly, mono

U = UnknownPoly.var
FIVE_TERM = [(16, 5), (12, 9), (11, 10), (3, 7), (2, 8)]


def fs(name, **coeffs):
    """fs("f", x=1, d=2, m1=-1): keys x, d, dK, mJ, mJd."""
    table = {}
    for k, v in coeffs.items():
        if k == "x":
            key = (0, 0)
        elif k == "d":
            key = (0, 1)
        elif k.startswith("d"):
            key = (0, int(k[1:]))
        elif k.endswith("d"):
            key = (int(k[1:-1]), 1)
        else:
            key = (int(k[1:]), 0)
        table[key] = v
    return FunctionSpec.build(name, table)


def two_exp(N):
    spec = EquationSpec.from_pairs([(2, N - 2), (1, N - 1)])
    ans = {"f1": fs("f1", m1=1, m2=-1), "g1": fs("g1", m1=1, m2=1),
           "f2": fs("f2", m1=-1, m2=1), "g2": fs("g2", m1=1, m2=1)}
    return spec, ans


def generic_ansatz(spec, order=1, exps=(0,), prefix="c"):
    out = {}
    for name in spec.function_names():
        out[name] = FunctionSpec.build(name, {(j, k): U(f"{prefix}_{name}_{j}_{k}")
                                              for j in exps for k in range(order + 1)})
    return out


def random_numeric_ansatz(spec, rng, order=1, exps=(0, 1)):
    out = {}
    for name in spec.function_names():
        out[name] = FunctionSpec.build(name, {(j, k): rng.randint(-2, 2)
                                              for j in exps for k in range(order + 1)})
    return out


# conditions

def test_conditions_two_term():
    rep = check_conditions(EquationSpec.from_pairs([(3, 4), (2, 5)]))
    assert rep.sorted_pairs == [(2, 5), (3, 4)]
    assert rep.c1 and rep.c2 and rep.N == 7 and rep.c3 and rep.all_distinct


def test_conditions_duplicate_p():
    rep = check_conditions(EquationSpec.from_pairs([(2, 3), (2, 3)]))
    assert not rep.c1 and rep.duplicate_p == [2]


def test_conditions_c3():
    rep = check_conditions(EquationSpec.from_pairs([(2, 5), (3, 4), (4, 3)]))
    assert not rep.c3
    assert rep.c1 and rep.c2


# homogenization

def test_homogenize_split():
    parts = homogenize(EquationSpec.from_pairs(FIVE_TERM))
    assert [s.pairs() for s in parts] == [[(16, 5), (12, 9), (11, 10)], [(3, 7), (2, 8)]]
    assert [s.N for s in parts] == [21, 10]


def test_homogenize_trivial_cases():
    spec = EquationSpec.from_pairs([(2, 5), (3, 4)])
    assert homogenize(spec) == [spec]
    parts = homogenize(EquationSpec.from_pairs([(1, 2), (1, 4)]))
    assert [s.pairs() for s in parts] == [[(1, 2)], [(1, 4)]]


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(1, 6), st.integers(1, 6)), min_size=1, max_size=6))
def test_homogenize_is_permutation(pairs):
    spec = EquationSpec.from_pairs(pairs)
    parts = homogenize(spec)
    flat = [t for s in parts for t in s.terms]
    assert sorted(flat, key=repr) == sorted(spec.terms, key=repr)
    assert all(s.is_homogeneous() for s in parts)
    assert len({s.N for s in parts}) == len(parts)


# left-hand sides

def test_two_exp_vanishes():
    spec, ans = two_exp(5)
    assert build_lhs(spec, ans).is_zero()


def test_zero_functions_give_zero():
    spec = EquationSpec.from_pairs([(2, 5), (3, 4)])
    zero = {n: FunctionSpec(n, ()) for n in spec.function_names()}
    assert build_lhs(spec, zero).is_zero()
    assert all(triviality_flags(spec, zero).values())


def test_derivation_instance():
    spec = EquationSpec.from_pairs([(3, 4), (2, 5)])
    ans = {"f1": fs("f1", d=1), "g1": fs("g1", d=1), "f2": fs("f2", x=-3), "g2": fs("g2", d=1)}
    assert build_lhs(spec, ans).is_zero()


def test_lhs_errors():
    spec = EquationSpec.from_pairs([(1, 2), (1, 4)])
    ans = generic_ansatz(spec)
    with pytest.raises(NonHomogeneousError):
        build_lhs(spec, ans)
    del ans["g2"]
    with pytest.raises(UnresolvedFunctionError):
        build_lhs(EquationSpec.from_pairs([(1, 2), (2, 1)]), ans)


def test_term_validation():
    with pytest.raises(ValueError):
        Term(0, 3, "f", "g")


# constraints

def test_single_term_constraint():
    spec = EquationSpec.from_pairs([(2, 3)])
    ans = {"f1": fs("f1", m1=U("alpha")), "g1": fs("g1", m1=U("beta"))}
    system = extract_constraints(build_lhs(spec, ans))
    assert len(system) == 1
    (m, poly), = system.entries
    assert m == mono((G(0, 1, 0), 5))
    assert poly == U("alpha") * U("beta") ** 3


def test_empty_system():
    assert extract_constraints(SymPoly.zero()).is_empty()


def test_constraint_json_shape():
    spec = EquationSpec.from_pairs([(2, 3)])
    ans = {"f1": fs("f1", m1=U("a")), "g1": fs("g1", m1=U("b"))}
    js = extract_constraints(build_lhs(spec, ans)).to_json()
    assert js == [{"monomial": "m1^5", "poly": "a*b^3"}]


# verification

def test_verify_two_exp_and_perturbation():
    spec, ans = two_exp(5)
    assert verify_solution(spec, ans).passed
    bad = dict(ans, f1=fs("f1", m1=1, m2=-2))
    v = verify_solution(spec, bad)
    assert not v.passed and v.witnesses


def test_verify_repeated_p_family():
    # 1 + lambda^q = 0 with lambda = -1, q = 3
    spec = EquationSpec((Term(2, 3, "f", "f"), Term(2, 3, "f", "h")))
    ans = {"f": fs("f", x=1), "h": fs("h", x=-1)}
    assert verify_solution(spec, ans).passed


def test_verify_requires_numeric():
    spec, ans = two_exp(5)
    ans["g1"] = fs("g1", m1=U("a"))
    with pytest.raises(NotNumericError):
        verify_solution(spec, ans)


def test_three_truths_agree():
    rng = random.Random(7)
    spec = EquationSpec.from_pairs([(2, 5), (3, 4)])
    sym = generic_ansatz(spec)
    system = extract_constraints(build_lhs(spec, sym))
    hits = 0
    for _ in range(200):
        vals = {u: rng.choice([-1, 0, 0, 1]) for u in system.unknowns}
        num = {n: f.substitute({k: UnknownPoly.const(v) for k, v in vals.items()})
               for n, f in sym.items()}
        a = verify_solution(spec, num).passed
        b = extract_constraints(build_lhs(spec, num)).is_empty()
        c = system.satisfied_by(vals)
        assert a == b == c
        hits += a
    assert hits > 0


# grading

def test_grade_homogeneous():
    spec, ans = two_exp(6)
    ans = dict(ans, f1=fs("f1", m1=1, m2=-2))
    comps = grade_by_scaling(spec, ans)
    assert list(comps) == [6]
    assert comps[6] == build_lhs(spec, ans)


def test_grade_five_term_degrees():
    spec = EquationSpec.from_pairs(FIVE_TERM)
    comps = grade_by_scaling(spec, generic_ansatz(spec, order=0))
    assert sorted(comps) == [10, 21]


def test_grade_matches_homogenize_random():
    rng = random.Random(2024)
    spec = EquationSpec.from_pairs(FIVE_TERM)
    for _ in range(10):
        ans = random_numeric_ansatz(spec, rng, order=1, exps=(0,))
        comps = grade_by_scaling(spec, ans)
        for sub in homogenize(spec):
            assert comps.get(sub.N, SymPoly.zero()) == build_lhs(sub, ans)


def test_grade_two_singletons_symbolic():
    spec = EquationSpec.from_pairs([(1, 2), (1, 4)])
    ans = generic_ansatz(spec)
    comps = grade_by_scaling(spec, ans)
    parts = homogenize(spec)
    assert sorted(comps) == [3, 5]
    for sub in parts:
        assert comps[sub.N] == build_lhs(sub, ans)


# symmetrization

def test_symmetrize_two_slots():
    spec = EquationSpec.from_pairs([(1, 1)])
    ans = {"f1": fs("f1", m1=U("alpha")), "g1": fs("g1", m1=U("beta"))}
    sym = symmetrize(spec, ans)
    expected = SymPoly({mono(G(0, 1, 0), G(1, 1, 0)): U("alpha") * U("beta")})
    assert sym == expected
    assert sym.diagonal() == build_lhs(spec, ans)


SYM_SPECS = [[(1, 1)], [(1, 2), (2, 1)], [(2, 2), (1, 3)], [(1, 4), (2, 3)], [(3, 3), (1, 5)],
             [(2, 4), (5, 1)]]


@pytest.mark.parametrize("pairs", SYM_SPECS)
def test_symmetrize_diagonal(pairs):
    rng = random.Random(len(pairs) * 31 + pairs[0][0])
    spec = EquationSpec.from_pairs(pairs)
    for ans in (generic_ansatz(spec, order=1, exps=(0,)),
                random_numeric_ansatz(spec, rng, order=1, exps=(0, 1))):
        assert symmetrize(spec, ans).diagonal() == build_lhs(spec, ans)


@pytest.mark.parametrize("pairs", [p for p in SYM_SPECS if sum(p[0]) <= 5])
def test_symmetrize_permutation_invariant(pairs):
    rng = random.Random(11)
    spec = EquationSpec.from_pairs(pairs)
    ans = random_numeric_ansatz(spec, rng, order=1, exps=(0, 1))
    sym = symmetrize(spec, ans)
    N = spec.N
    for _ in range(20):
        perm = list(range(N))
        rng.shuffle(perm)
        assert sym.permute_slots(perm) == sym


def test_symmetrize_two_exp_zero():
    spec, ans = two_exp(5)
    assert symmetrize(spec, ans, 5).is_zero()


def test_symmetrize_errors():
    spec, ans = two_exp(5)
    with pytest.raises(NonHomogeneousError):
        symmetrize(spec, ans, 6)
    spec, ans = two_exp(11)
    with pytest.raises(SymmetrizationCapError):
        symmetrize(spec, ans)


# relabeling

def test_exponential_relabel_permutes_system():
    spec = EquationSpec.from_pairs([(1, 4), (2, 3)])
    ans = generic_ansatz(spec, order=0, exps=(1, 2))
    system = extract_constraints(build_lhs(spec, ans))
    swapped = relabel_ansatz(ans, {1: 2, 2: 1})
    system2 = extract_constraints(build_lhs(spec, swapped))
    relabeled = {m.map_generators(lambda g: G(g.var, {1: 2, 2: 1}.get(g.exp, g.exp), g.order)): p
                 for m, p in system.entries}
    assert dict(system2.entries) == relabeled


def test_scalar_terms_and_sharing():
    spec = EquationSpec((Term(2, 3, "f", "g"), Term(4, 1, "f", "g", Fraction(-2))))
    assert spec.function_names() == ["f", "g"]
    lhs = build_lhs(spec, {"f": fs("f", x=1), "g": fs("g", x=1)})
    assert lhs == SymPoly.gen(G(0, 0, 0), -1, 5)
