import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyspec.clifford import Signature
from fuzzyspec.dirac import DiracData, assemble_dense, random_dirac_data
from fuzzyspec.oracle import VerificationReport, relative_error, trace_power, verify


def test_trace_power_examples():
    assert trace_power(np.eye(5), 7) == 5
    D = np.diag([1.0, -1.0])
    assert trace_power(D, 2) == 2
    assert trace_power(D, 3) == 0
    with pytest.raises(ValueError):
        trace_power(np.ones((2, 3)), 2)
    with pytest.raises(ValueError):
        trace_power(D, 0)
    with pytest.raises(ValueError):
        trace_power(D, 2, method="svd")


def test_trace_power_diagonal_d1():
    lam = np.array([0.3, -1.2, 0.7])
    D = assemble_dense(DiracData(Signature(1, 0), 3, {(1,): np.diag(lam)}))
    assert abs(trace_power(D, 2) - np.sum((lam[:, None] + lam[None, :]) ** 2)) < 1e-12


@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_multiply_and_eigh_agree(m, N, seed):
    D = assemble_dense(random_dirac_data(Signature(1, 1), N, seed))
    a = trace_power(D, 2 * m)
    b = trace_power(D, 2 * m, method="eigh")
    assert relative_error(a, b) < 1e-11
    assert a.real >= -1e-12 * abs(a) and abs(a.imag) <= 1e-12 * abs(a)


def test_scalar_2_0_value():
    data = DiracData(Signature(2, 0), 1, {(1,): np.ones((1, 1)), (2,): np.ones((1, 1))})
    assert trace_power(assemble_dense(data), 2) == 16


@pytest.mark.parametrize("sig,N,tmax", [("1,1", 3, 3), ("0,4", 2, 2), ("2,0", 1, 1), ("1,0", 3, 2)])
def test_verify_passes(sig, N, tmax):
    report = verify(sig, N, tmax, 3)
    assert report.passed, report.table()
    assert report.max_error < 1e-10
    assert [r.seed for r in report.records] == [0, 1, 2]


def test_verify_reports_failure_without_raising():
    report = verify("1,1", 2, 2, [4, 1], tolerance=1e-30)
    assert not report.passed
    assert [r.seed for r in report.records] == [1, 4]
    assert "FAIL" in report.table()


def test_verify_workers_match_serial():
    a = verify("2,0", 2, 2, 3, workers=1)
    b = verify("2,0", 2, 2, 3, workers=2)
    assert a.to_json()["records"] == b.to_json()["records"]


def test_report_json_round_trip():
    report = verify("1,0", 2, 2, 2)
    back = VerificationReport.from_json(report.to_json())
    assert back == report
    assert back.notes and "even d" in back.notes[0]


def test_relative_error_floor():
    assert relative_error(1e-13, 0.0) == pytest.approx(0.1)
