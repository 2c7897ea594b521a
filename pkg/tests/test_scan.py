from fractions import Fraction

import pytest

from funceq.analysis import vandermonde_certificate
from funceq.equation import EquationSpec, verify_solution
from funceq.errors import ScanCapError
from funceq.scan import conjecture_scan, order_ansatz, scan_assignment

Q_BIG = EquationSpec.from_pairs([(1, 6), (2, 5)])
CASE_A = EquationSpec.from_pairs([(2, 5), (3, 4)])


@pytest.fixture(scope="module")
def big_report():
    return conjecture_scan(Q_BIG, 3)


def test_max_order_is_n_minus_1(big_report):
    assert big_report.max_nontrivial_order == 1 == big_report.n_minus_1
    assert big_report.consistent
    assert big_report.counts()["inconclusive"] == 0


def test_found_witnesses_reverify(big_report):
    assert big_report.found
    for r in big_report.found:
        assert r.witness_verified
        assert verify_solution(Q_BIG, r.witness).passed
        assert not all(f.is_zero() for f in r.witness.values())


def _mat(cert):
    return [[Fraction(x) for x in row] for row in cert["matrix"]]


def test_g_linear_high_order_certified(big_report):
    linear = [r for r in big_report.results if r.g_linear and r.max_order >= 2]
    assert len(linear) == 12
    for r in linear:
        assert r.verdict == "only_trivial" and r.method == "linear"
        cert = r.certificate
        assert cert["rank"] <= cert["n_columns"]
        assert cert["vandermonde"]["rows_match"] and cert["vandermonde"]["trivial_kernel"]
        # each row combination y gives y^T M = unit vector on a leading column
        M = _mat(cert)
        assert cert["row_combinations"]
        for col, y in cert["row_combinations"].items():
            c = cert["columns"].index(col)
            y = [Fraction(v) for v in y]
            combo = [sum(y[i] * M[i][j] for i in range(len(M))) for j in range(len(M[0]))]
            assert combo == [Fraction(int(j == c)) for j in range(len(combo))]


def test_vandermonde_cross_check(big_report):
    assert big_report.vandermonde == vandermonde_certificate([1, 2]).to_dict()


def test_case_a_witness():
    rep = conjecture_scan(CASE_A, 1)
    assert rep.max_nontrivial_order >= 1
    assert all(r.witness_verified for r in rep.found)


def test_single_term_only_trivial():
    rep = conjecture_scan(EquationSpec.from_pairs([(2, 3)]), 2)
    assert not rep.found
    assert rep.max_nontrivial_order == -1
    assert all(r.verdict == "only_trivial" for r in rep.results)


def test_monotone_in_k_max():
    small = conjecture_scan(CASE_A, 1)
    large = conjecture_scan(CASE_A, 2)
    found_small = {r.key for r in small.found}
    found_large = {r.key for r in large.found}
    assert found_small <= found_large
    assert large.max_nontrivial_order >= small.max_nontrivial_order


def test_reproducible():
    a = conjecture_scan(CASE_A, 1).to_dict()
    b = conjecture_scan(CASE_A, 1).to_dict()
    assert a == b


def test_nonzero_mode_runs():
    rep = conjecture_scan(CASE_A, 1, mode="nonzero")
    assert rep.mode == "nonzero"
    assert rep.found


def test_caps_and_bad_arguments():
    with pytest.raises(ScanCapError):
        conjecture_scan(CASE_A, 7)
    with pytest.raises(ValueError):
        conjecture_scan(CASE_A, 1, strategy="groebner")
    with pytest.raises(ValueError):
        conjecture_scan(CASE_A, 1, mode="other")


def test_order_ansatz_names():
    ans = order_ansatz({"f1": 2, "g1": 0})
    assert sorted(ans["f1"].unknowns()) == ["f1_0", "f1_1", "f1_2"]
    assert ans["g1"].order() == 0


def test_assignment_serialization():
    orders = {"f1": 0, "g1": 1, "f2": 1, "g2": 1}
    r = scan_assignment(CASE_A, orders)
    d = r.to_dict()
    assert d["orders"] == orders
    assert d["verdict"] in ("found", "only_trivial", "inconclusive")
