"""Parametrization of fuzzy Dirac operators by (anti-)Hermitian matrices and
their dense assembly on V (x) M_N(C)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .clifford import (
    GammaRep,
    MultiIndex,
    Signature,
    build_gamma,
    hermiticity_sign,
    letter_type,
    multi_index,
    odd_multi_indices,
)

DEFAULT_DIM_CAP = 4096


def dim_cap() -> int:
    """Upper bound on dimV * N**2, overridable through ``FUZZY_DIM_CAP``."""
    raw = os.environ.get("FUZZY_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"FUZZY_DIM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"FUZZY_DIM_CAP must be positive, got {cap}")
    return cap


def index_set(sig: Signature) -> list[tuple[MultiIndex, str, int]]:
    """``(multi-index, 'H' or 'L', e_I)`` for every odd-cardinality multi-index.

    Even d uses the standard letter table. d = 1 has the single index (1,),
    Hermitian exactly when its gamma matrix is.
    """
    if sig.d == 1:
        I = multi_index((1,), sig)
        e = hermiticity_sign(I, sig)
        return [(I, "H" if e == 1 else "L", e)]
    if sig.d % 2:
        raise ValueError(f"odd d={sig.d} is not supported beyond d=1")
    out = []
    for idx in odd_multi_indices(sig.d):
        I = multi_index(idx, sig)
        out.append((I, letter_type(I, sig), hermiticity_sign(I, sig)))
    return out


def _key(label) -> str:
    return ",".join(str(i) for i in label)


@dataclass
class DiracData:
    """Coefficient matrices ``K_I`` keyed by index tuples."""

    signature: Signature
    N: int
    coefficients: dict = field(default_factory=dict)
    traceless_L: bool = False

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        info = {I.indices: (kind, e) for I, kind, e in index_set(self.signature)}
        coeffs = {}
        for label, m in self.coefficients.items():
            label = tuple(label)
            if label not in info:
                raise ValueError(f"{label} is not an odd multi-index for signature {self.signature}")
            coeffs[label] = np.array(m, dtype=complex)
        for label in info:
            if label not in coeffs:
                coeffs[label] = np.zeros((self.N, self.N), dtype=complex)
        self.coefficients = {label: coeffs[label] for label in info}
        self._info = info
        self.validate()

    def validate(self, atol: float = 1e-12):
        for label, m in self.coefficients.items():
            kind, _ = self._info[label]
            if m.shape != (self.N, self.N):
                raise ValueError(f"K{label} has shape {m.shape}, expected ({self.N},{self.N})")
            sign = 1 if kind == "H" else -1
            scale = max(1.0, float(np.abs(m).max(initial=0.0)))
            if np.abs(m.conj().T - sign * m).max(initial=0.0) > atol * scale:
                raise ValueError(f"K{label} violates its {'Hermitian' if sign == 1 else 'anti-Hermitian'} constraint")
            if self.traceless_L and kind == "L" and abs(np.trace(m)) > atol * scale * self.N:
                raise ValueError(f"K{label} must be traceless")

    def letter_type(self, label) -> str:
        return self._info[tuple(label)][0]

    def e_sign(self, label) -> int:
        return self._info[tuple(label)][1]

    def labels(self) -> list[tuple[int, ...]]:
        return list(self.coefficients)

    def __getitem__(self, label) -> np.ndarray:
        return self.coefficients[tuple(label)]

    def complement(self, mu: int) -> np.ndarray:
        """For d = 4, the matrix attached to the triple that omits ``mu``."""
        return self.coefficients[tuple(i for i in range(1, self.signature.d + 1) if i != mu)]

    def scaled(self, c: float) -> "DiracData":
        return DiracData(self.signature, self.N, {k: c * m for k, m in self.coefficients.items()}, self.traceless_L)

    def centered(self) -> "DiracData":
        """Same operator D, with the trace removed from every coefficient that
        acts by commutator (e_I = -1). Such traces drop out of D exactly, but
        left in place they make trace polynomials cancel catastrophically."""
        out = {}
        for label, m in self.coefficients.items():
            if self.e_sign(label) == -1:
                m = m - (np.trace(m) / self.N) * np.eye(self.N)
            out[label] = m
        return self._replace(out)

    def _replace(self, coefficients: dict) -> "DiracData":
        # skips validation; callers guarantee the hermiticity classes
        out = object.__new__(DiracData)
        out.signature, out.N, out.traceless_L = self.signature, self.N, self.traceless_L
        out.coefficients, out._info = coefficients, self._info
        return out

    def copy(self) -> "DiracData":
        return DiracData(self.signature, self.N, {k: m.copy() for k, m in self.coefficients.items()}, self.traceless_L)

    def to_json(self) -> dict:
        return {
            "signature": [self.signature.p, self.signature.q],
            "N": self.N,
            "traceless_L": self.traceless_L,
            "entries": {
                _key(label): [[[float(z.real), float(z.imag)] for z in row] for row in m]
                for label, m in self.coefficients.items()
            },
        }

    @classmethod
    def from_json(cls, obj) -> "DiracData":
        sig = Signature(*obj["signature"])
        N = int(obj["N"])
        coeffs = {}
        for key, rows in obj["entries"].items():
            label = tuple(int(x) for x in key.split(","))
            arr = np.array(rows, dtype=float)
            if arr.shape != (N, N, 2):
                raise ValueError(f"entry {key!r} has shape {arr.shape[:2]}, expected ({N},{N})")
            coeffs[label] = arr[..., 0] + 1j * arr[..., 1]
        return cls(sig, N, coeffs, bool(obj.get("traceless_L", False)))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "DiracData":
        return cls.from_json(json.loads(text))


def project(m: np.ndarray, kind: str, traceless: bool = False) -> np.ndarray:
    """Hermitian or anti-Hermitian part, optionally with the trace removed."""
    out = 0.5 * (m + m.conj().T) if kind == "H" else 0.5 * (m - m.conj().T)
    if traceless and kind == "L":
        out = out - (np.trace(out) / out.shape[0]) * np.eye(out.shape[0])
    return out


def random_dirac_data(sig: Signature, N: int, seed=None, scale: float | None = None, traceless_L: bool = False) -> DiracData:
    """Gaussian coefficient matrices projected onto their hermiticity class.

    ``scale`` defaults to ``1/sqrt(N)``.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if scale is None:
        scale = 1.0 / np.sqrt(N)
    rng = np.random.default_rng(seed)
    coeffs = {}
    for I, kind, _ in index_set(sig):
        g = scale * (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))
        coeffs[I.indices] = project(g, kind, traceless_L)
    return DiracData(sig, N, coeffs, traceless_L)


def check_dims(sig: Signature, N: int):
    dimV = 2 ** (sig.d // 2)
    cap = dim_cap()
    if dimV * N * N > cap:
        raise ValueError(f"dense operator of size {dimV * N * N} exceeds the cap {cap} (set FUZZY_DIM_CAP to raise it)")


def assemble_dense(data: DiracData, rep: GammaRep | None = None) -> np.ndarray:
    """Dense D acting on V (x) N (x) N-bar.

    A matrix R is vectorized row-major, so ``A R B^T`` becomes ``kron(A, B) vec(R)``.
    """
    if rep is None:
        rep = build_gamma(data.signature)
    if rep.signature != data.signature:
        raise ValueError(f"gamma representation is for {rep.signature}, data for {data.signature}")
    N = data.N
    check_dims(data.signature, N)
    eye = np.eye(N)
    D = np.zeros((rep.dimV * N * N,) * 2, dtype=complex)
    for label, K in data.coefficients.items():
        e = data.e_sign(label)
        k = np.kron(K, eye) + e * np.kron(eye, K.T)
        D += np.kron(rep.product(label), k)
    return D
