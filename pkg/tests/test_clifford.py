import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL
from fuzzyspec.clifford import (
    Signature,
    all_multi_indices,
    build_gamma,
    complement,
    direct_gamma_trace,
    hermiticity_sign,
    letter_type,
    multi_index,
    odd_multi_indices,
)

signatures = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda pq: 1 <= sum(pq) <= 5).map(lambda pq: Signature(*pq))


def test_signature_fields():
    sig = Signature(1, 3)
    assert sig.d == 4
    assert sig.s == 2
    assert sig.metric == (1, -1, -1, -1)
    assert Signature(3, 1).s == 6
    assert Signature.parse(" 2,0 ") == Signature(2, 0)


@pytest.mark.parametrize("text", ["2", "a,b", "1,2,3", "-1,2", ""])
def test_signature_parse_rejects(text):
    with pytest.raises(ValueError):
        Signature.parse(text)


def test_signature_rejects_empty_and_negative():
    with pytest.raises(ValueError):
        Signature(0, 0)
    with pytest.raises(ValueError):
        Signature(-1, 2)


def test_ko_signs_defined_for_every_s():
    for s in range(8):
        sig = Signature(0, s) if s else Signature(1, 1)
        assert sig.s == s
        assert all(x in (1, -1) for x in sig.ko_signs)


@given(signatures)
def test_clifford_relations(sig):
    rep = build_gamma(sig)
    eye = np.eye(rep.dimV)
    for a, b in itertools.product(range(sig.d), repeat=2):
        ga, gb = rep.gammas[a], rep.gammas[b]
        expected = 2 * sig.metric[a] * eye if a == b else 0 * eye
        assert np.array_equal(ga @ gb + gb @ ga, expected)


@given(signatures)
def test_gamma_hermiticity_follows_metric(sig):
    rep = build_gamma(sig)
    assert rep.dimV == 2 ** (sig.d // 2)
    for mu, g in enumerate(rep.gammas, start=1):
        assert np.array_equal(g.conj().T, sig.metric[mu - 1] * g)


@pytest.mark.parametrize("sig", [s for s in SMALL if s.d % 2 == 0], ids=str)
def test_chirality(sig):
    rep = build_gamma(sig)
    c = rep.chirality
    assert np.allclose(c @ c, np.eye(rep.dimV), atol=0)
    for g in rep.gammas:
        assert np.array_equal(c @ g, -g @ c)


def test_build_gamma_examples():
    lor = build_gamma(Signature(1, 3))
    assert lor.dimV == 4
    assert np.array_equal(lor.gammas[0] @ lor.gammas[0], np.eye(4))
    for g in lor.gammas[1:]:
        assert np.array_equal(g @ g, -np.eye(4))
        assert np.array_equal(g.conj().T, -g)
    for g in build_gamma(Signature(0, 2)).gammas:
        assert np.array_equal(g @ g, -np.eye(2))


def test_build_gamma_deterministic_and_read_only():
    a = build_gamma(Signature(2, 2))
    assert a is build_gamma(Signature(2, 2))
    with pytest.raises(ValueError):
        a.gammas[0][0, 0] = 5


def test_multi_index_counts():
    I = multi_index((1, 3, 4), Signature(1, 3))
    assert (I.u, I.t, I.cardinality) == (2, 1, 3)
    with pytest.raises(ValueError):
        multi_index((2, 1), Signature(2, 0))
    with pytest.raises(ValueError):
        multi_index((3,), Signature(2, 0))


def test_hermiticity_sign_examples():
    assert hermiticity_sign((1, 2, 3), Signature(0, 4)) == 1
    assert hermiticity_sign((1, 2, 3), Signature(4, 0)) == -1
    assert hermiticity_sign((1,), Signature(1, 3)) == 1
    with pytest.raises(ValueError):
        hermiticity_sign((5,), Signature(2, 2))


@pytest.mark.parametrize("sig", SMALL, ids=str)
def test_hermiticity_sign_matches_matrices_exactly(sig):
    rep = build_gamma(sig)
    for I in all_multi_indices(sig.d):
        G = rep.product(I)
        assert np.array_equal(G.conj().T, hermiticity_sign(I, sig) * G)


@pytest.mark.parametrize("sig", [Signature(p, 4 - p) for p in range(5)], ids=str)
def test_single_and_complement_signs(sig):
    for mu in range(1, 5):
        assert hermiticity_sign((mu,), sig) * hermiticity_sign(complement(mu, 4), sig) == (-1) ** (sig.q + 1)


def test_letter_type_examples():
    assert letter_type((1,), Signature(2, 0)) == "H"
    assert letter_type((1,), Signature(0, 2)) == "L"
    assert letter_type((2, 3, 4), Signature(1, 3)) == "H"
    assert letter_type((1, 2, 3), Signature(4, 0)) == "L"
    with pytest.raises(ValueError):
        letter_type((1,), Signature(1, 0))
    with pytest.raises(ValueError):
        letter_type((1, 2), Signature(2, 0))


@pytest.mark.parametrize("sig", [s for s in SMALL if s.d % 2 == 0], ids=str)
def test_letter_type_agrees_with_sign(sig):
    for I in odd_multi_indices(sig.d):
        assert (letter_type(I, sig) == "H") == (hermiticity_sign(I, sig) == 1)


def test_direct_gamma_trace_examples():
    rep = build_gamma(Signature(2, 0))
    assert direct_gamma_trace(rep, (1, 1)) == 2
    assert direct_gamma_trace(rep, (1, 2, 1, 2)) == -2
    assert direct_gamma_trace(rep, ()) == 2


@given(signatures.filter(lambda s: s.d % 2 == 0), st.lists(st.integers(1, 4), min_size=1, max_size=7).filter(lambda x: len(x) % 2))
def test_odd_gamma_products_traceless(sig, idx):
    idx = [min(i, sig.d) for i in idx]
    assert direct_gamma_trace(build_gamma(sig), idx) == 0


def test_multi_index_enumeration():
    assert odd_multi_indices(4) == [(1,), (2,), (3,), (4,), (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    assert len(all_multi_indices(4)) == 15
