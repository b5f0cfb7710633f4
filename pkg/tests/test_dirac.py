import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import D2, D4
from fuzzyspec.clifford import Signature, build_gamma
from fuzzyspec.dirac import (
    DEFAULT_DIM_CAP,
    DiracData,
    assemble_dense,
    check_dims,
    dim_cap,
    index_set,
    project,
    random_dirac_data,
)

EVEN = D2 + D4


def test_index_set_sizes():
    assert [I.indices for I, _, _ in index_set(Signature(1, 1))] == [(1,), (2,)]
    assert len(index_set(Signature(2, 2))) == 8
    riem = {I.indices: kind for I, kind, _ in index_set(Signature(0, 4))}
    assert all(riem[(a,)] == "L" for a in range(1, 5))
    assert all(kind == "H" for idx, kind in riem.items() if len(idx) == 3)
    assert [kind for _, kind, _ in index_set(Signature(1, 0))] == ["H"]
    assert [kind for _, kind, _ in index_set(Signature(0, 1))] == ["L"]
    with pytest.raises(ValueError):
        index_set(Signature(2, 1))


@given(st.sampled_from(EVEN), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_random_data_respects_hermiticity(sig, N, seed):
    data = random_dirac_data(sig, N, seed)
    for label, m in data.coefficients.items():
        sign = 1 if data.letter_type(label) == "H" else -1
        assert np.array_equal(m.conj().T, sign * m)
    again = random_dirac_data(sig, N, seed)
    assert all(np.array_equal(data[k], again[k]) for k in data.labels())


def test_random_data_scale_zero_and_traceless():
    data = random_dirac_data(Signature(2, 2), 3, 1, scale=0)
    assert all(not m.any() for m in data.coefficients.values())
    data = random_dirac_data(Signature(0, 4), 3, 1, traceless_L=True)
    for label in data.labels():
        if data.letter_type(label) == "L":
            assert abs(np.trace(data[label])) < 1e-14


def test_data_validation():
    sig = Signature(1, 1)
    with pytest.raises(ValueError, match="anti-Hermitian"):
        DiracData(sig, 2, {(2,): np.eye(2)})
    with pytest.raises(ValueError, match="odd multi-index"):
        DiracData(sig, 2, {(1, 2): np.eye(2)})
    with pytest.raises(ValueError, match="shape"):
        DiracData(sig, 2, {(1,): np.eye(3)})
    with pytest.raises(ValueError, match="traceless"):
        DiracData(sig, 2, {(2,): 1j * np.eye(2)}, traceless_L=True)
    filled = DiracData(sig, 2, {(1,): np.eye(2)})
    assert not filled[(2,)].any()


def test_complement_alias():
    data = random_dirac_data(Signature(1, 3), 2, 0)
    assert np.array_equal(data.complement(1), data[(2, 3, 4)])
    assert np.array_equal(data.complement(3), data[(1, 2, 4)])


@pytest.mark.parametrize("sig", EVEN + [Signature(1, 0), Signature(0, 1)], ids=str)
def test_json_round_trip_exact(sig):
    data = random_dirac_data(sig, 3, 5)
    back = DiracData.loads(data.dumps())
    assert back.signature == sig
    assert all(np.array_equal(back[k], data[k]) for k in data.labels())
    obj = json.loads(data.dumps())
    obj["entries"]["1"] = [[0, 0]]
    with pytest.raises(ValueError):
        DiracData.from_json(obj)


def test_project():
    m = np.array([[1, 2j], [3, 4]])
    assert np.allclose(project(m, "H"), project(m, "H").conj().T)
    L = project(m, "L", traceless=True)
    assert np.allclose(L, -L.conj().T)
    assert abs(np.trace(L)) < 1e-15


def test_d1_eigenvalues_are_pairwise_sums():
    rng = np.random.default_rng(3)
    N = 4
    lam = rng.normal(size=N)
    data = DiracData(Signature(1, 0), N, {(1,): np.diag(lam)})
    eig = np.sort(np.linalg.eigvalsh(assemble_dense(data)))
    assert np.allclose(eig, np.sort((lam[:, None] + lam[None, :]).ravel()), atol=1e-12)


def test_commutators_vanish_for_scalars():
    data = random_dirac_data(Signature(0, 2), 1, 0)
    assert not assemble_dense(data).any()


def test_assembly_action_on_matrices():
    # D vec(R) = sum_I Gamma^I (x) vec(K R + e R K)
    sig = Signature(1, 1)
    N = 3
    data = random_dirac_data(sig, N, 4)
    rep = build_gamma(sig)
    rng = np.random.default_rng(0)
    psi = rng.normal(size=(rep.dimV, N, N)) + 1j * rng.normal(size=(rep.dimV, N, N))
    out = np.zeros_like(psi)
    for label, K in data.coefficients.items():
        G = rep.product(label)
        e = data.e_sign(label)
        k_psi = np.stack([K @ R + e * R @ K for R in psi])
        out += np.einsum("ab,bij->aij", G, k_psi)
    assert np.allclose(assemble_dense(data) @ psi.ravel(), out.ravel(), atol=1e-12)


@given(st.sampled_from(EVEN), st.integers(1, 4), st.integers(0, 1000))
def test_assembled_operator_self_adjoint_with_vanishing_odd_traces(sig, N, seed):
    D = assemble_dense(random_dirac_data(sig, N, seed))
    norm = np.linalg.norm(D, 2)
    assert np.abs(D - D.conj().T).max() <= 1e-12 * max(norm, 1)
    for m in (1, 3, 5):
        assert abs(np.trace(np.linalg.matrix_power(D, m))) <= 1e-10 * max(norm, 1) ** m * D.shape[0]


@pytest.mark.parametrize("sig", EVEN, ids=str)
def test_traceless_shift_leaves_operator_unchanged(sig):
    data = random_dirac_data(sig, 3, 11)
    shifted = {
        k: (m - np.trace(m) / 3 * np.eye(3)) if data.letter_type(k) == "L" else m
        for k, m in data.coefficients.items()
    }
    D0 = assemble_dense(data)
    D1 = assemble_dense(DiracData(sig, 3, shifted))
    assert np.abs(D0 - D1).max() < 1e-14


def test_dim_cap(monkeypatch):
    monkeypatch.delenv("FUZZY_DIM_CAP", raising=False)
    assert dim_cap() == DEFAULT_DIM_CAP
    check_dims(Signature(2, 2), 32)
    with pytest.raises(ValueError, match="exceeds"):
        check_dims(Signature(2, 2), 33)
    monkeypatch.setenv("FUZZY_DIM_CAP", "10")
    with pytest.raises(ValueError, match="FUZZY_DIM_CAP"):
        assemble_dense(random_dirac_data(Signature(2, 0), 3, 0))
    monkeypatch.setenv("FUZZY_DIM_CAP", "lots")
    with pytest.raises(ValueError):
        dim_cap()


def test_rep_signature_mismatch():
    with pytest.raises(ValueError):
        assemble_dense(random_dirac_data(Signature(2, 0), 2, 0), build_gamma(Signature(1, 1)))
