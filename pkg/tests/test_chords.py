import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyspec.chords import (
    ChordDiagram,
    bracket,
    bracket_batch,
    bracket_pruned,
    chi_tensor,
    crossings,
    enumerate_diagrams,
    pizza_cut,
)
from fuzzyspec.clifford import Signature, build_gamma, direct_gamma_trace


def double_factorial(k):
    return math.prod(range(k, 0, -2))


@pytest.mark.parametrize("n2", [2, 4, 6, 8, 10, 12])
def test_enumeration_counts(n2):
    diagrams = enumerate_diagrams(n2)
    assert len(diagrams) == double_factorial(n2 - 1)
    assert len(set(diagrams)) == len(diagrams)


def test_enumeration_order_is_canonical():
    assert [d.partner for d in enumerate_diagrams(4)] == [(1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]


def test_enumeration_rejects():
    for bad in (0, 3, -2):
        with pytest.raises(ValueError):
            enumerate_diagrams(bad)
    with pytest.raises(ValueError):
        enumerate_diagrams(14)


def test_diagram_validation():
    with pytest.raises(ValueError):
        ChordDiagram((0, 1))
    with pytest.raises(ValueError):
        ChordDiagram((1, 2, 0))
    d = ChordDiagram.from_chords([(0, 3), (1, 2)])
    assert d.chords == ((0, 3), (1, 2))
    assert d.points == 4


def test_crossing_examples():
    nested = ChordDiagram.from_chords([(0, 5), (1, 4), (2, 3)])
    assert crossings(nested) == 0
    assert crossings(pizza_cut(8)) == 6
    for w in range(1, 7):
        assert crossings(pizza_cut(2 * w)) == w * (w - 1) // 2


def test_chi_tensor_examples():
    xi = ChordDiagram.from_chords([(0, 2), (1, 3)])
    assert chi_tensor(xi, (1, 2, 1, 2), (1, 1)) == -1
    theta = ChordDiagram.from_chords([(0, 1), (2, 3)])
    g = (1, -1)
    for mu in itertools.product((1, 2), repeat=4):
        expected = (mu[0] == mu[1]) * g[mu[0] - 1] * (mu[2] == mu[3]) * g[mu[2] - 1]
        assert chi_tensor(theta, mu, g) == expected
    assert chi_tensor(theta, (1, 1, 2, 1), g) == 0
    with pytest.raises(ValueError):
        chi_tensor(theta, (1, 1), g)


def test_bracket_four_point_identity():
    g = (1, -1, -1)
    for mu in itertools.product((1, 2, 3), repeat=4):
        a, b, c, d = mu
        G = lambda x, y: g[x - 1] * (x == y)
        assert bracket(mu, g) == G(a, b) * G(c, d) - G(a, c) * G(b, d) + G(a, d) * G(b, c)


@pytest.mark.parametrize("sig", [Signature(p, 4 - p) for p in range(5)], ids=str)
def test_repeated_multi_index_bracket(sig):
    from fuzzyspec.clifford import all_multi_indices, multi_index

    for I in all_multi_indices(4):
        mi = multi_index(I, sig)
        w = len(I)
        assert bracket(I + I, sig.metric) == (-1) ** (mi.u + w * (w - 1) // 2)


def test_bracket_trivial_lengths():
    assert bracket((), (1,)) == 1
    assert bracket((1, 1, 1), (1,)) == 0
    with pytest.raises(ValueError):
        bracket((1,) * 14, (1,))


@given(st.integers(0, 3), st.lists(st.integers(1, 4), min_size=2, max_size=8).filter(lambda x: len(x) % 2 == 0), st.integers(0, 7))
def test_bracket_cyclic_and_pruned(p, mu, shift):
    metric = Signature(p, 4 - p).metric
    rotated = mu[shift % len(mu):] + mu[: shift % len(mu)]
    b = bracket(mu, metric)
    assert bracket(rotated, metric) == b
    assert bracket_pruned(mu, metric) == b


@given(st.lists(st.integers(1, 2), max_size=4), st.lists(st.integers(3, 4), max_size=4))
def test_bracket_splits_time_then_space(time_part, space_part):
    metric = Signature(2, 2).metric
    if (len(time_part) + len(space_part)) % 2:
        time_part = time_part + [1]
    whole = bracket(time_part + space_part, metric)
    if len(time_part) % 2:
        assert whole == 0
    else:
        assert whole == bracket(time_part, metric) * bracket(space_part, metric)


def test_bracket_matches_gamma_traces_d2():
    for sig in (Signature(2, 0), Signature(1, 1), Signature(0, 2)):
        rep = build_gamma(sig)
        for n in range(0, 7):
            for mu in itertools.product((1, 2), repeat=n):
                assert rep.dimV * bracket(mu, sig.metric) == direct_gamma_trace(rep, mu)


def test_bracket_batch_matches_scalar():
    metric = Signature(1, 3).metric
    rng = np.random.default_rng(0)
    tuples = rng.integers(1, 5, size=(200, 6))
    assert list(bracket_batch(tuples, metric)) == [bracket(t, metric) for t in tuples]
    assert not bracket_batch(tuples[:, :5], metric).any()
