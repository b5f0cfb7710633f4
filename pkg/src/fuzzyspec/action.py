"""Closed-form spectral-action evaluators.

Each evaluator returns a normalized quantity; multiplying by the matching
entry of :data:`NORMALIZATION` gives the raw trace Tr D^m:

=================  ==============================  ==========
evaluator          returns                         multiplier
=================  ==============================  ==========
``tr_d2``          Tr D^2 / dimV                   dimV
``tr_d4_dim1``     Tr D^4 / 2                      2
``tr_d4_dim2``     Tr D^4 / 4                      4
``tr_d6_dim2``     Tr D^6 / 2                      2
``tr_d4_dim4``     Tr D^4 / 4                      4
=================  ==============================  ==========

In d = 4, ``K[a]`` is the matrix of the single index ``a`` and ``X[a]`` that
of the triple omitting ``a``.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .dirac import DiracData, assemble_dense, check_dims

log = logging.getLogger(__name__)

NORMALIZATION = {"tr_d4_dim1": 2, "tr_d4_dim2": 4, "tr_d6_dim2": 2, "tr_d4_dim4": 4}


@dataclass
class ActionSpec:
    """Polynomial f(x) = sum_m coefficients[m] x^m without constant term."""

    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {}
        for m, c in self.coefficients.items():
            m = int(m)
            if m < 1:
                raise ValueError(f"powers must be positive (no constant term), got {m}")
            if c != 0:
                coeffs[m] = float(c)
        self.coefficients = dict(sorted(coeffs.items()))

    @classmethod
    def parse(cls, text: str) -> "ActionSpec":
        """Parse ``"2:1,4:0.5"``."""
        coeffs = {}
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            try:
                m, c = part.split(":")
                coeffs[int(m)] = coeffs.get(int(m), 0.0) + float(c)
            except ValueError:
                raise ValueError(f"malformed action term {part!r}, expected 'power:coeff'") from None
        if not coeffs:
            raise ValueError("action polynomial has no terms")
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return max(self.coefficients, default=0)

    def check_confining(self):
        """The leading even coefficient must be positive so that e^{-S} is normalizable."""
        even = [m for m in self.coefficients if m % 2 == 0]
        if not even or self.coefficients[max(even)] <= 0 or self.degree % 2:
            raise ValueError("action needs a positive leading even coefficient of highest degree")

    def __str__(self) -> str:
        return ",".join(f"{m}:{c:g}" for m, c in self.coefficients.items())


def _tr(*ms) -> complex:
    if len(ms) == 1:
        return np.trace(ms[0])
    if len(ms) == 2:
        return np.einsum("ij,ji->", ms[0], ms[1])
    half = len(ms) // 2
    left = reduce(np.matmul, ms[:half])
    right = reduce(np.matmul, ms[half:])
    return np.einsum("ij,ji->", left, right)


def _perm_sign(seq) -> int:
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


_PERMS4 = [(p, _perm_sign(p)) for p in itertools.permutations((1, 2, 3, 4))]
_PAIRS4 = [(a, b) for a in range(1, 5) for b in range(1, 5) if a != b]


def _real(z, scale: float) -> float:
    z = complex(z)
    if abs(z.imag) > 1e-9 * max(scale, 1.0):
        log.warning("closed form has imaginary residue %.3e", z.imag)
    return z.real


def tr_d2(data: DiracData, letter_signs: dict | None = None) -> float:
    """Tr D^2 / dimV as a sum of N Tr K^2 and (Tr K)^2 terms.

    ``letter_signs`` may override e_I per index tuple, for parametrizations
    whose letter types are supplied by the caller.
    """
    N = data.N
    sig = data.signature
    total = 0.0
    for label, K in data.coefficients.items():
        w = len(label)
        u = sum(1 for i in label if sig.is_spatial(i))
        e = data.e_sign(label) if letter_signs is None else letter_signs.get(label, data.e_sign(label))
        sign = -1 if (u + w * (w - 1) // 2) % 2 else 1
        total += 2 * sign * (N * _tr(K, K) + e * _tr(K) ** 2)
    return _real(total, 1.0)


def tr_d4_dim1(data: DiracData) -> float:
    """Tr D^4 / 2 in d = 1."""
    if data.signature.d != 1:
        raise ValueError(f"tr_d4_dim1 needs d=1, got {data.signature}")
    (label,) = data.labels()
    K, e = data[label], data.e_sign(label)
    val = data.N * _tr(K, K, K, K) + 4 * e * _tr(K) * _tr(K, K, K) + 3 * _tr(K, K) ** 2
    return _real(val, 1.0)


def tr_d4_dim2(data: DiracData) -> float:
    """Tr D^4 / 4 in d = 2."""
    if data.signature.d != 2:
        raise ValueError(f"tr_d4_dim2 needs d=2, got {data.signature}")
    e1, e2 = data.signature.metric
    K1, K2 = data[(1,)], data[(2,)]
    N = data.N
    single = _tr(K1, K1, K1, K1) + _tr(K2, K2, K2, K2) + 4 * e1 * e2 * _tr(K1, K1, K2, K2) - 2 * e1 * e2 * _tr(K1, K2, K1, K2)
    inner = e1 * K1 @ K1 + e2 * K2 @ K2
    bi = 4 * (_tr(K1, K2) ** 2 + _tr(K1) * _tr(K1, inner) + _tr(K2) * _tr(K2, inner))
    bi += 3 * (_tr(K1, K1) ** 2 + _tr(K2, K2) ** 2) + 2 * e1 * e2 * _tr(K1, K1) * _tr(K2, K2)
    return _real(N * single + bi, 1.0)


def tr_d6_dim2(data: DiracData) -> float:
    """Tr D^6 / 2 in d = 2, as N * single + bi."""
    if data.signature.d != 2:
        raise ValueError(f"tr_d6_dim2 needs d=2, got {data.signature}")
    e1, e2 = data.signature.metric
    A, B = data[(1,)], data[(2,)]
    N = data.N
    t = _tr
    A2, B2 = A @ A, B @ B
    single = 2 * (
        e1 * t(A2, A2, A2) + 6 * e2 * t(A2, A2, B2) - 6 * e2 * t(A2, A, B, A, B) + 3 * e2 * t(A2, B, A2, B)
        + e2 * t(B2, B2, B2) + 6 * e1 * t(B2, B2, A2) - 6 * e1 * t(B2, B, A, B, A) + 3 * e1 * t(B2, A, B2, A)
    )
    e12 = e1 * e2
    bi = 6 * t(A) * (2 * t(A2, A2, A) + 2 * t(A, B2, B2) + 6 * e12 * t(A2, A, B2) - 2 * e12 * t(A2, B, A, B))
    bi += 6 * t(B) * (2 * t(B2, B2, B) + 2 * t(B, A2, A2) + 6 * e12 * t(B2, B, A2) - 2 * e12 * t(B2, A, B, A))
    bi += 48 * t(A, B) * (e1 * t(A2, A, B) + e2 * t(B2, B, A))
    bi += 6 * t(A2) * (e2 * (8 * t(A2, B2) - 2 * t(B, A, B, A)) + e1 * (5 * t(A2, A2) + t(B2, B2)))
    bi += 6 * t(B2) * (e1 * (8 * t(A2, B2) - 2 * t(A, B, A, B)) + e2 * (5 * t(B2, B2) + t(A2, A2)))
    bi += 4 * (
        5 * t(A2, A) ** 2 + 6 * e12 * t(A, B2) * t(A2, A) + 9 * t(A2, B) ** 2
        + 5 * t(B2, B) ** 2 + 6 * e12 * t(A2, B) * t(B2, B) + 9 * t(A, B2) ** 2
    )
    return _real(N * single + bi, 1.0)


def _d4_matrices(data: DiracData):
    if data.signature.d != 4:
        raise ValueError(f"d=4 evaluator called on signature {data.signature}")
    K = {a: data[(a,)] for a in range(1, 5)}
    X = {a: data.complement(a) for a in range(1, 5)}
    return K, X


def _quartic_d4_general(K, X, e, s, N) -> complex:
    """N * single + bi for Tr D^4 / 4 in d = 4 with metric signs ``e`` and s = (-1)^q."""
    t = _tr
    R = range(1, 5)

    def alt(a, b):
        return -1 if (a + b) % 2 else 1

    S = sum(2 * (t(K[a], K[a], K[a], K[a]) + t(X[a], X[a], X[a], X[a])) for a in R)
    for a in R:
        S += s * (4 * t(K[a], X[a], K[a], X[a]) - 8 * t(K[a], K[a], X[a], X[a]))
    for a, b in _PAIRS4:
        ee = e[a] * e[b]
        S += ee * (4 * t(K[a], K[a], K[b], K[b]) - 2 * t(K[a], K[b], K[a], K[b]))
        S += ee * (4 * t(X[a], X[a], X[b], X[b]) - 2 * t(X[a], X[b], X[a], X[b]))
        S -= s * ee * (4 * t(K[a], X[b], K[a], X[b]) + 8 * t(K[a], K[a], X[b], X[b]))
        S += s * alt(a, b) * (
            8 * t(K[a], K[b], X[a], X[b]) - 8 * t(K[a], K[b], X[b], X[a])
            + 4 * t(K[a], X[a], K[b], X[b]) + 4 * t(K[a], X[b], K[b], X[a])
        )
    for (a, b, c, d), lc in _PERMS4:
        S += s * lc * (
            -8 * e[d] * alt(d, 0) * t(K[a], K[b], K[c], X[d])
            + 8 * e[a] * alt(a, 0) * t(K[a], X[b], X[c], X[d])
        )

    B = 0
    for a in R:
        Ka, Xa = K[a], X[a]
        B += 8 * e[a] * (t(Ka, Ka, Ka) * t(Ka) + t(Ka, Ka, Xa) * t(Xa))
        B -= 8 * s * e[a] * (t(Ka, Xa, Xa) * t(Ka) + t(Xa, Xa, Xa) * t(Xa))
        B += 6 * t(Ka, Ka) ** 2 + 6 * t(Xa, Xa) ** 2 - 4 * s * t(Ka, Ka) * t(Xa, Xa) + 8 * t(Ka, Xa) ** 2
    for a, b in _PAIRS4:
        Ka, Kb, Xa, Xb = K[a], K[b], X[a], X[b]
        ee, sg = e[a] * e[b], alt(a, b)
        B += 8 * e[a] * t(Ka, Ka, Kb) * t(Kb) + 24 * e[a] * t(Ka, Ka, Xb) * t(Xb)
        B -= 8 * s * e[a] * t(Xa, Xa, Xb) * t(Xb) + 24 * s * e[b] * t(Ka, Xb, Xb) * t(Ka)
        B -= 8 * sg * (e[b] * t(Ka, Kb, Xa) * t(Xb) + e[a] * t(Ka, Kb, Xb) * t(Xa))
        B += 8 * s * sg * e[b] * (t(Ka, Xa, Xb) + t(Ka, Xb, Xa)) * t(Kb)
        B += 2 * ee * (t(Ka, Ka) * t(Kb, Kb) + t(Xa, Xa) * t(Xb, Xb)) - 12 * s * ee * t(Ka, Ka) * t(Xb, Xb)
        B += 4 * t(Ka, Kb) ** 2 + 4 * t(Xa, Xb) ** 2 + 24 * t(Ka, Xb) ** 2
        B += 8 * s * ee * sg * t(Ka, Kb) * t(Xa, Xb)
        B -= 8 * sg * t(Ka, Xa) * t(Kb, Xb) + 8 * ee * sg * t(Ka, Xb) * t(Kb, Xa)
    for (a, b, c, d), lc in _PERMS4:
        B += 8 * lc * alt(d, 0) * t(K[a], K[b], K[c]) * t(X[d])
        B += 8 * lc * alt(c, 0) * e[a] * e[b] * t(K[a], K[b], X[c]) * t(K[d])
        B -= 8 * lc * alt(a, 0) * e[a] * e[d] * t(K[a], X[b], X[c]) * t(X[d])
        B += 8 * s * lc * alt(a, 0) * t(K[a]) * t(X[b], X[c], X[d])
    return N * S + B


def _quartic_riemann(L, H, N) -> complex:
    """Signature (0,4): all metric signs -1, (-1)^q = +1; L anti-Hermitian, H Hermitian."""
    t = _tr
    R = range(1, 5)
    S = 0
    for a in R:
        La, Ha = L[a], H[a]
        S += 2 * (t(La, La, La, La) + t(Ha, Ha, Ha, Ha)) + 4 * t(La, Ha, La, Ha) - 8 * t(La, La, Ha, Ha)
    for a, b in _PAIRS4:
        La, Lb, Ha, Hb = L[a], L[b], H[a], H[b]
        S += 4 * t(La, La, Lb, Lb) - 2 * t(La, Lb, La, Lb) + 4 * t(Ha, Ha, Hb, Hb) - 2 * t(Ha, Hb, Ha, Hb)
        S -= 4 * t(La, Hb, La, Hb) + 8 * t(La, La, Hb, Hb)
        # La Lb [Ha, Hb] plus the two alternating orderings
        S += (-1) ** (a + b) * (8 * t(La, Lb, Ha @ Hb - Hb @ Ha) + 4 * t(La, Ha, Lb, Hb) + 4 * t(La, Hb, Lb, Ha))
    for (a, b, c, d), lc in _PERMS4:
        S += 8 * lc * (-1) ** d * t(L[a], L[b], L[c], H[d]) - 8 * lc * (-1) ** a * t(L[a], H[b], H[c], H[d])

    B = 0
    for a in R:
        La, Ha = L[a], H[a]
        B -= 8 * (t(La, La, La) * t(La) + t(La, La, Ha) * t(Ha))
        B += 8 * (t(La, Ha, Ha) * t(La) + t(Ha, Ha, Ha) * t(Ha))
        B += 6 * t(La, La) ** 2 + 6 * t(Ha, Ha) ** 2 - 4 * t(La, La) * t(Ha, Ha) + 8 * t(La, Ha) ** 2
    for a, b in _PAIRS4:
        La, Lb, Ha, Hb = L[a], L[b], H[a], H[b]
        sg = (-1) ** (a + b)
        B -= 8 * t(La, La, Lb) * t(Lb) + 24 * t(La, La, Hb) * t(Hb)
        B += 8 * t(Ha, Ha, Hb) * t(Hb) + 24 * t(La, Hb, Hb) * t(La)
        B += 8 * sg * (t(La, Lb, Ha) * t(Hb) + t(La, Lb, Hb) * t(Ha))
        B -= 8 * sg * (t(La, Ha, Hb) + t(La, Hb, Ha)) * t(Lb)
        B += 2 * (t(La, La) * t(Lb, Lb) + t(Ha, Ha) * t(Hb, Hb)) - 12 * t(La, La) * t(Hb, Hb)
        B += 4 * t(La, Lb) ** 2 + 4 * t(Ha, Hb) ** 2 + 24 * t(La, Hb) ** 2
        B += 8 * sg * t(La, Lb) * t(Ha, Hb)
        B -= 8 * sg * (t(La, Ha) * t(Lb, Hb) + t(La, Hb) * t(Lb, Ha))
    for (a, b, c, d), lc in _PERMS4:
        B += 8 * lc * (-1) ** d * t(L[a], L[b], L[c]) * t(H[d])
        B += 8 * lc * (-1) ** c * t(L[a], L[b], H[c]) * t(L[d])
        B -= 8 * lc * (-1) ** a * t(L[a], H[b], H[c]) * t(H[d])
        B += 8 * lc * (-1) ** a * t(L[a]) * t(H[b], H[c], H[d])
    return N * S + B


_LORENTZ_E = {0: 1, 1: -1, 2: -1, 3: -1}
_PERMS_LABELS = [(p, _perm_sign(p)) for p in itertools.permutations((0, 1, 2, 3))]


def _lorentz_pair_single(Ka, Xa, Kb, Xb, ee, sg):
    t = _tr
    val = ee * (4 * t(Ka, Ka, Kb, Kb) - 2 * t(Ka, Kb, Ka, Kb) + 4 * t(Xa, Xa, Xb, Xb) - 2 * t(Xa, Xb, Xa, Xb))
    val += ee * (4 * t(Ka, Xb, Ka, Xb) + 8 * t(Ka, Ka, Xb, Xb))
    val -= sg * (8 * t(Ka, Kb, Xa @ Xb - Xb @ Xa) + 4 * t(Ka, Xa, Kb, Xb) + 4 * t(Ka, Xb, Kb, Xa))
    return val


def _lorentz_pair_bi(Ka, Xa, Kb, Xb, ea, eb, sg):
    t = _tr
    ee = ea * eb
    val = 8 * ea * t(Ka, Ka, Kb) * t(Kb) + 24 * ea * t(Ka, Ka, Xb) * t(Xb)
    val += 8 * ea * t(Xa, Xa, Xb) * t(Xb) + 24 * eb * t(Ka, Xb, Xb) * t(Ka)
    val -= 8 * sg * (eb * t(Ka, Kb, Xa) * t(Xb) + ea * t(Ka, Kb, Xb) * t(Xa))
    val -= 8 * sg * eb * (t(Ka, Xa, Xb) + t(Ka, Xb, Xa)) * t(Kb)
    val += 2 * ee * (t(Ka, Ka) * t(Kb, Kb) + t(Xa, Xa) * t(Xb, Xb)) + 12 * ee * t(Ka, Ka) * t(Xb, Xb)
    val += 4 * t(Ka, Kb) ** 2 + 4 * t(Xa, Xb) ** 2 + 24 * t(Ka, Xb) ** 2
    val -= 8 * ee * sg * t(Ka, Kb) * t(Xa, Xb)
    val -= 8 * sg * t(Ka, Xa) * t(Kb, Xb) + 8 * ee * sg * t(Ka, Xb) * t(Kb, Xa)
    return val


def _quartic_lorentz(H, Q, L, R, N) -> complex:
    """Signature (1,3) with time label 0 and spatial labels 1..3.

    H = K_time and Q = X_time are Hermitian, L[a] = K_a and R[a] = X_a
    anti-Hermitian; (-1)^q = -1.
    """
    t = _tr
    sp = (1, 2, 3)
    S = 2 * (t(H, H, H, H) + t(Q, Q, Q, Q)) - 4 * t(H, Q, H, Q) + 8 * t(H, H, Q, Q)
    for a in sp:
        S += 2 * (t(L[a], L[a], L[a], L[a]) + t(R[a], R[a], R[a], R[a]))
        S -= 4 * t(L[a], R[a], L[a], R[a]) - 8 * t(L[a], L[a], R[a], R[a])
        sg = (-1) ** a
        S += _lorentz_pair_single(H, Q, L[a], R[a], -1, sg) + _lorentz_pair_single(L[a], R[a], H, Q, -1, sg)
        for b in sp:
            if b != a:
                S += _lorentz_pair_single(L[a], R[a], L[b], R[b], 1, (-1) ** (a + b))
    K = {0: H, **L}
    X = {0: Q, **R}
    # e times (-1)^(internal index): -1 for time, (-1)^a for space
    w = {0: -1, 1: -1, 2: 1, 3: -1}
    for (a, b, c, d), lc in _PERMS_LABELS:
        S += 8 * lc * (w[d] * t(K[a], K[b], K[c], X[d]) - w[a] * t(K[a], X[b], X[c], X[d]))

    B = 8 * (t(H, H, H) * t(H) + t(H, H, Q) * t(Q) + t(H, Q, Q) * t(H) + t(Q, Q, Q) * t(Q))
    B += 6 * t(H, H) ** 2 + 6 * t(Q, Q) ** 2 + 4 * t(H, H) * t(Q, Q) + 8 * t(H, Q) ** 2
    for a in sp:
        La, Ra = L[a], R[a]
        B -= 8 * (t(La, La, La) * t(La) + t(La, La, Ra) * t(Ra) + t(La, Ra, Ra) * t(La) + t(Ra, Ra, Ra) * t(Ra))
        B += 6 * t(La, La) ** 2 + 6 * t(Ra, Ra) ** 2 + 4 * t(La, La) * t(Ra, Ra) + 8 * t(La, Ra) ** 2
        sg = (-1) ** a
        B += _lorentz_pair_bi(H, Q, La, Ra, 1, -1, sg) + _lorentz_pair_bi(La, Ra, H, Q, -1, 1, sg)
        for b in sp:
            if b != a:
                B += _lorentz_pair_bi(La, Ra, L[b], R[b], -1, -1, (-1) ** (a + b))
    e = _LORENTZ_E
    for (a, b, c, d), lc in _PERMS_LABELS:
        # (-1)^(internal index) is minus (-1)^label
        B -= 8 * lc * (-1) ** d * t(K[a], K[b], K[c]) * t(X[d])
        B -= 8 * lc * (-1) ** c * e[a] * e[b] * t(K[a], K[b], X[c]) * t(K[d])
        B += 8 * lc * (-1) ** a * e[a] * e[d] * t(K[a], X[b], X[c]) * t(X[d])
        B += 8 * lc * (-1) ** a * t(K[a]) * t(X[b], X[c], X[d])
    return N * S + B


def tr_d4_dim4(data: DiracData, path: str = "auto") -> float:
    """Tr D^4 / 4 in d = 4.

    ``path`` selects ``general`` (any signature), ``riemann`` (0,4),
    ``lorentz`` (1,3) or ``auto``, which picks a specialized path when one
    applies.
    """
    sig = data.signature
    K, X = _d4_matrices(data)
    if path == "auto":
        path = {(0, 4): "riemann", (1, 3): "lorentz"}.get((sig.p, sig.q), "general")
    if path == "general":
        e = {a: sig.metric[a - 1] for a in range(1, 5)}
        val = _quartic_d4_general(K, X, e, (-1) ** sig.q, data.N)
    elif path == "riemann":
        if (sig.p, sig.q) != (0, 4):
            raise ValueError(f"riemann path needs signature (0,4), got {sig}")
        val = _quartic_riemann(K, X, data.N)
    elif path == "lorentz":
        if (sig.p, sig.q) != (1, 3):
            raise ValueError(f"lorentz path needs signature (1,3), got {sig}")
        L = {a: K[a + 1] for a in (1, 2, 3)}
        R = {a: X[a + 1] for a in (1, 2, 3)}
        val = _quartic_lorentz(K[1], X[1], L, R, data.N)
    else:
        raise ValueError(f"unknown path {path!r}")
    return _real(val, 1.0)


def closed_form_trace(data: DiracData, m: int, center: bool = True) -> float | None:
    """Raw Tr D^m from a closed form, or None when no closed form covers (d, m).

    ``center`` evaluates on :meth:`DiracData.centered`, which leaves D unchanged.
    """
    d = data.signature.d
    if center:
        data = data.centered()
    if m % 2 and d % 2 == 0:
        return 0.0
    if m == 2:
        dimV = 2 ** (d // 2)
        return dimV * tr_d2(data)
    if d == 1 and m == 4:
        return NORMALIZATION["tr_d4_dim1"] * tr_d4_dim1(data)
    if d == 2 and m == 4:
        return NORMALIZATION["tr_d4_dim2"] * tr_d4_dim2(data)
    if d == 2 and m == 6:
        return NORMALIZATION["tr_d6_dim2"] * tr_d6_dim2(data)
    if d == 4 and m == 4:
        return NORMALIZATION["tr_d4_dim4"] * tr_d4_dim4(data)
    return None


def generated_trace(data: DiracData, m: int, center: bool = True) -> float | None:
    """Raw Tr D^m from the chord-generated functional, or None past the chord cap."""
    from .clifford import build_gamma
    from .ncpoly import generate_trace_functionals

    if m % 2:
        return 0.0 if data.signature.d % 2 == 0 else None
    if data.signature.d % 2:
        return None
    try:
        functional = generate_trace_functionals(data.signature, m // 2)
    except ValueError:
        return None
    if center:
        data = data.centered()
    val = functional.evaluate(data.coefficients, data.N) * build_gamma(data.signature).dimV
    return _real(val, 1.0)


def oracle_trace(data: DiracData, m: int) -> float:
    from .oracle import trace_power

    return trace_power(assemble_dense(data), m).real


PATHS = ("closed_form", "generated", "oracle")


@dataclass
class ActionEvaluation:
    value: float
    terms: dict = field(default_factory=dict)  # power -> (path, raw trace)


def evaluate_action(f: ActionSpec, data: DiracData, path: str = "auto") -> ActionEvaluation:
    """Tr f(D) with the evaluation path of every power recorded.

    ``auto`` tries closed forms, then generated functionals, then the dense
    oracle. A named path is used for every power and fails if it cannot serve one.
    """
    if path != "auto" and path not in PATHS:
        raise ValueError(f"unknown evaluation path {path!r}")
    even_d = data.signature.d % 2 == 0
    odd = [m for m in f.coefficients if m % 2]
    if odd and even_d:
        warnings.warn(f"odd powers {odd} contribute nothing for even d", stacklevel=2)
    order = PATHS if path == "auto" else (path,)
    out = ActionEvaluation(0.0)
    for m, c in f.coefficients.items():
        if m % 2 and even_d:
            out.terms[m] = ("parity", 0.0)
            continue
        for p in order:
            if p == "closed_form":
                val = closed_form_trace(data, m)
            elif p == "generated":
                val = generated_trace(data, m)
            else:
                check_dims(data.signature, data.N)
                val = oracle_trace(data, m)
            if val is not None:
                out.terms[m] = (p, val)
                out.value += c * val
                break
        else:
            raise ValueError(f"no evaluation path covers Tr D^{m} for {data.signature} via {path!r}")
    return out


def spectral_action(f: ActionSpec, data: DiracData, path: str = "auto") -> float:
    """S(D) = Tr f(D) = sum_m f_m Tr D^m."""
    return evaluate_action(f, data, path).value


def aux_d1_decompose(H: np.ndarray, lam: float) -> tuple[float, float]:
    """Split (Tr D^2 + lam Tr D^4) / 2 for D = {H, .} into a single-trace
    Gaussian-plus-quartic part and a bi-trace part."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.abs(H).max(initial=0.0)))
    if np.abs(H - H.conj().T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("H must be Hermitian")
    N = H.shape[0]
    H2 = H @ H
    t1, t2 = np.trace(H).real, np.trace(H2).real
    t3 = np.einsum("ij,ji->", H2, H).real
    t4 = np.einsum("ij,ji->", H2, H2).real
    single = N * (t2 + lam * t4)
    bitrace = 3 * lam * t2 ** 2 + 4 * lam * t1 * t3 + t1 ** 2
    return float(single), float(bitrace)


def observable_F(data: DiracData) -> float:
    """sum (Tr H)^2 / (N sum Tr H^2) over the Hermitian coefficient matrices."""
    num = den = 0.0
    for label, K in data.coefficients.items():
        if data.letter_type(label) == "H":
            num += np.trace(K).real ** 2
            den += _tr(K, K).real
    if den == 0.0:
        raise ValueError("observable F is undefined: every Hermitian coefficient has Tr H^2 = 0")
    return num / (data.N * den)
