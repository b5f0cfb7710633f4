"""Gamma matrices for an arbitrary signature (p, q) and the sign bookkeeping
attached to products of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

# (epsilon, epsilon', epsilon'') indexed by the KO-dimension s
_KO_SIGNS = {
    0: (1, 1, 1),
    1: (1, -1, 1),
    2: (-1, 1, -1),
    3: (-1, 1, 1),
    4: (-1, 1, 1),
    5: (-1, -1, 1),
    6: (1, 1, -1),
    7: (1, 1, 1),
}

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class Signature:
    """Metric signature with ``p`` time-like (+1) and ``q`` space-like (-1) directions."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature entries must be nonnegative, got ({self.p},{self.q})")
        if self.p + self.q == 0:
            raise ValueError("signature (0,0) has no dimensions")

    @property
    def d(self) -> int:
        return self.p + self.q

    @property
    def s(self) -> int:
        """KO-dimension."""
        return (self.q - self.p) % 8

    @property
    def metric(self) -> tuple[int, ...]:
        return (1,) * self.p + (-1,) * self.q

    @property
    def ko_signs(self) -> tuple[int, int, int]:
        return _KO_SIGNS[self.s]

    def is_spatial(self, mu: int) -> bool:
        return mu > self.p

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"p,q"``."""
        parts = text.replace(" ", "").split(",")
        if len(parts) != 2 or not all(x.isdigit() for x in parts):
            raise ValueError(f"malformed signature {text!r}, expected 'p,q'")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class MultiIndex:
    indices: tuple[int, ...]
    u: int
    t: int

    @property
    def cardinality(self) -> int:
        return len(self.indices)


def multi_index(indices, sig: Signature) -> MultiIndex:
    idx = tuple(int(i) for i in indices)
    _check_range(idx, sig)
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"multi-index {idx} is not strictly increasing")
    u = sum(1 for i in idx if sig.is_spatial(i))
    return MultiIndex(idx, u, len(idx) - u)


@dataclass(frozen=True, eq=False)
class GammaRep:
    signature: Signature
    dimV: int
    gammas: tuple[np.ndarray, ...] = field(repr=False)
    chirality: np.ndarray = field(repr=False)

    def product(self, indices) -> np.ndarray:
        """Ordered product gamma^{i1} ... gamma^{ik}; identity for an empty tuple."""
        out = np.eye(self.dimV, dtype=complex)
        for i in indices:
            out = out @ self.gammas[i - 1]
        return out


def _euclidean_gammas(d: int) -> list[np.ndarray]:
    # Hermitian, pairwise anticommuting, squaring to one
    if d == 1:
        return [np.ones((1, 1), dtype=complex)]
    if d == 2:
        return [_PAULI[0].copy(), _PAULI[1].copy()]
    if d % 2 == 1:
        lower = _euclidean_gammas(d - 1)
        top = lower[0]
        for g in lower[1:]:
            top = top @ g
        # product of all even-d generators anticommutes with each of them
        return lower + [_hermitian_phase(top)]
    lower = _euclidean_gammas(d - 2)
    eye = np.eye(lower[0].shape[0], dtype=complex)
    out = [np.kron(_PAULI[0], g) for g in lower]
    out.append(np.kron(_PAULI[1], eye))
    out.append(np.kron(_PAULI[2], eye))
    return out


def _hermitian_phase(m: np.ndarray) -> np.ndarray:
    # m squares to +-1 and is unitary; pick the phase making it Hermitian
    for phase in (1, 1j, -1, -1j):
        c = phase * m
        if np.array_equal(c, c.conj().T):
            return c
    raise AssertionError("no Hermitian phase found")


@lru_cache(maxsize=None)
def build_gamma(sig: Signature) -> GammaRep:
    """Deterministic gamma matrices: the first ``p`` Hermitian (square +1),
    the last ``q`` anti-Hermitian (square -1)."""
    if sig.d == 0:
        raise ValueError("signature (0,0) has no dimensions")
    base = _euclidean_gammas(sig.d)
    gammas = []
    for mu, g in enumerate(base, start=1):
        g = g * 1j if sig.is_spatial(mu) else g.copy()
        g.setflags(write=False)
        gammas.append(g)
    dimV = base[0].shape[0]
    prod = np.eye(dimV, dtype=complex)
    for g in gammas:
        prod = prod @ g
    s = sig.s
    chir = (-1j) ** ((s * (s - 1) // 2) % 4) * prod
    chir.setflags(write=False)
    return GammaRep(sig, dimV, tuple(gammas), chir)


def _check_range(indices, sig: Signature):
    for i in indices:
        if not 1 <= i <= sig.d:
            raise ValueError(f"index {i} out of range 1..{sig.d} for signature {sig}")


def hermiticity_sign(I, sig: Signature) -> int:
    """+1 if the ordered gamma product over ``I`` is Hermitian, -1 if anti-Hermitian."""
    if not isinstance(I, MultiIndex):
        I = multi_index(I, sig)
    else:
        _check_range(I.indices, sig)
    return -1 if (I.u + I.cardinality // 2) % 2 else 1


def letter_type(I, sig: Signature) -> str:
    """``'H'`` or ``'L'`` for odd-cardinality multi-indices in even dimension."""
    if sig.d % 2:
        raise ValueError(f"letter types are only classified for even d, got d={sig.d}")
    if not isinstance(I, MultiIndex):
        I = multi_index(I, sig)
    if I.cardinality % 2 == 0:
        raise ValueError(f"multi-index {I.indices} has even cardinality")
    r = (I.cardinality + 1) // 2
    return "H" if (I.u % 2) != (r % 2) else "L"


def direct_gamma_trace(rep: GammaRep, indices) -> complex:
    """Literal trace of the gamma-matrix product."""
    indices = tuple(indices)
    _check_range(indices, rep.signature)
    return complex(np.trace(rep.product(indices)))


def odd_multi_indices(d: int) -> list[tuple[int, ...]]:
    """All strictly increasing odd-length tuples over 1..d, ordered by (length, indices)."""
    return [c for r in range(1, d + 1, 2) for c in combinations(range(1, d + 1), r)]


def all_multi_indices(d: int) -> list[tuple[int, ...]]:
    return [c for r in range(1, d + 1) for c in combinations(range(1, d + 1), r)]


def complement(mu: int, d: int) -> tuple[int, ...]:
    return tuple(i for i in range(1, d + 1) if i != mu)
