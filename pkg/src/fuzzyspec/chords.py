"""Chord diagrams on 2n cyclically ordered points and the signed metric
contractions that evaluate normalized traces of gamma-matrix products."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_CAP = 12


@dataclass(frozen=True)
class ChordDiagram:
    """A fixed-point-free involution on points ``0..2n-1``, stored as its partner array."""

    partner: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        for i, j in enumerate(p):
            if j == i or not 0 <= j < len(p) or p[j] != i:
                raise ValueError(f"not a perfect pairing: {p}")

    @property
    def points(self) -> int:
        return len(self.partner)

    @property
    def chords(self) -> tuple[tuple[int, int], ...]:
        """Chords as ``(a, b)`` with ``a < b``, sorted by ``a``."""
        return tuple((i, j) for i, j in enumerate(self.partner) if i < j)

    @classmethod
    def from_chords(cls, chords) -> "ChordDiagram":
        n2 = 2 * len(chords)
        partner = [-1] * n2
        for a, b in chords:
            partner[a], partner[b] = b, a
        return cls(tuple(partner))


def _pairings(points: tuple[int, ...]):
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for k in range(len(rest)):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _pairings(remaining):
            yield ((first, rest[k]),) + tail


@lru_cache(maxsize=None)
def _enumerate_cached(n2: int) -> tuple[ChordDiagram, ...]:
    return tuple(ChordDiagram.from_chords(c) for c in _pairings(tuple(range(n2))))


def enumerate_diagrams(n2: int, cap: int = DEFAULT_CAP) -> tuple[ChordDiagram, ...]:
    """All (n2 - 1)!! chord diagrams on ``n2`` points.

    Point 0 is paired with each later point in turn and the rest is
    enumerated recursively, which fixes a canonical order.
    """
    if n2 <= 0 or n2 % 2:
        raise ValueError(f"number of points must be a positive even integer, got {n2}")
    if n2 > cap:
        raise ValueError(f"{n2} points exceeds the chord cap {cap}")
    return _enumerate_cached(n2)


def crossings(chi: ChordDiagram) -> int:
    ch = chi.chords
    count = 0
    for i, (a, b) in enumerate(ch):
        for c, d in ch[i + 1:]:
            if a < c < b < d or c < a < d < b:
                count += 1
    return count


def pizza_cut(n2: int) -> ChordDiagram:
    """Antipodal pairing of ``n2`` points."""
    w = n2 // 2
    return ChordDiagram.from_chords([(i, i + w) for i in range(w)])


def chi_tensor(chi: ChordDiagram, mu, metric) -> int:
    """(-1)^crossings times the product of diagonal metric entries along the chords."""
    mu = tuple(mu)
    if len(mu) != chi.points:
        raise ValueError(f"index tuple of length {len(mu)} on a {chi.points}-point diagram")
    val = -1 if crossings(chi) % 2 else 1
    for a, b in chi.chords:
        if mu[a] != mu[b]:
            return 0
        val *= metric[mu[a] - 1]
    return val


@lru_cache(maxsize=None)
def _diagram_table(n2: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    diagrams = _enumerate_cached(n2)
    left = np.array([[a for a, _ in d.chords] for d in diagrams], dtype=np.intp)
    right = np.array([[b for _, b in d.chords] for d in diagrams], dtype=np.intp)
    signs = np.array([-1 if crossings(d) % 2 else 1 for d in diagrams], dtype=np.int64)
    return left, right, signs


def bracket(mu, metric, cap: int = DEFAULT_CAP) -> int:
    """Sum of chi-tensors over every chord diagram on ``len(mu)`` points.

    Equals the gamma-matrix trace of the product over ``mu`` divided by the
    spinor dimension. Odd lengths give zero.
    """
    mu = np.asarray(tuple(mu), dtype=np.intp)
    if mu.size == 0:
        return 1
    if mu.size % 2:
        return 0
    if mu.size > cap:
        raise ValueError(f"{mu.size} points exceeds the chord cap {cap}")
    left, right, signs = _diagram_table(int(mu.size))
    g = np.asarray(metric, dtype=np.int64)
    lv, rv = mu[left], mu[right]
    match = np.all(lv == rv, axis=1)
    weights = np.prod(g[lv - 1], axis=1)
    return int(np.sum(signs * weights * match))


def bracket_batch(tuples: np.ndarray, metric) -> np.ndarray:
    """``bracket`` for each row of an integer array of equal-length tuples."""
    tuples = np.asarray(tuples, dtype=np.intp)
    n2 = tuples.shape[1]
    if n2 % 2:
        return np.zeros(tuples.shape[0], dtype=np.int64)
    left, right, signs = _diagram_table(n2)
    g = np.asarray(metric, dtype=np.int64)
    lv, rv = tuples[:, left], tuples[:, right]
    match = np.all(lv == rv, axis=2)
    weights = np.prod(g[lv - 1], axis=2)
    return (match * weights) @ signs


def bracket_pruned(mu, metric) -> int:
    """Same sum as ``bracket`` but skipping diagrams with a vanishing chi-tensor.

    Pairing the first point with point ``k`` crosses exactly the chords with one
    end strictly between them, whose count has the parity of ``k - 1``.
    """
    return _bracket_rec(tuple(mu), tuple(metric))


@lru_cache(maxsize=1 << 18)
def _bracket_rec(mu: tuple[int, ...], metric: tuple[int, ...]) -> int:
    if not mu:
        return 1
    if len(mu) % 2:
        return 0
    first, rest = mu[0], mu[1:]
    total = 0
    for k, v in enumerate(rest):
        if v == first:
            sub = _bracket_rec(rest[:k] + rest[k + 1:], metric)
            if sub:
                total += (-1) ** k * metric[first - 1] * sub
    return total
