"""Noncommutative trace polynomials and their generation from chord-diagram
sums.

A word is a tuple of :class:`Letter`; the trace of the empty word is ``N``.
Words in a :class:`TraceFunctional` are always stored in cyclic normal form.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .chords import DEFAULT_CAP, ChordDiagram, bracket_pruned, chi_tensor
from .clifford import Signature, hermiticity_sign, letter_type, odd_multi_indices

SELF_ADJOINT = "cyclic_self_adjoint"
ANTI_SELF_ADJOINT = "cyclic_anti_self_adjoint"
NEITHER = "neither"


@dataclass(frozen=True)
class Letter:
    """A matrix variable labelled by a multi-index.

    ``star_sign`` is +1 for Hermitian and -1 for anti-Hermitian letters;
    ``e_sign`` selects anticommutator (+1) or commutator (-1) action.
    """

    label: tuple[int, ...]
    star_sign: int = 1
    e_sign: int = 1

    @property
    def key(self) -> tuple:
        return (len(self.label), self.label)

    @property
    def name(self) -> str:
        return "K" + "".join(str(i) for i in self.label)

    def __lt__(self, other: "Letter") -> bool:
        return self.key < other.key


def signature_letters(sig: Signature) -> tuple[Letter, ...]:
    """One letter per odd-cardinality multi-index, for even d."""
    if sig.d % 2:
        raise ValueError(f"letters from a signature need even d, got d={sig.d}")
    out = []
    for I in odd_multi_indices(sig.d):
        e = hermiticity_sign(I, sig)
        star = 1 if letter_type(I, sig) == "H" else -1
        out.append(Letter(I, star, e))
    return tuple(out)


Word = tuple  # tuple[Letter, ...]


@dataclass(frozen=True)
class TraceWord:
    coefficient: int
    letters: Word


def _word_key(w: Word) -> tuple:
    return tuple(x.key for x in w)


@lru_cache(maxsize=1 << 16)
def _normal(w: Word) -> Word:
    if len(w) < 2:
        return w
    best = w
    bk = _word_key(w)
    for i in range(1, len(w)):
        r = w[i:] + w[:i]
        rk = _word_key(r)
        if rk < bk:
            best, bk = r, rk
    return best


def cyclic_normal_form(w):
    """Lexicographically smallest rotation; accepts a word or a :class:`TraceWord`."""
    if isinstance(w, TraceWord):
        return TraceWord(w.coefficient, _normal(tuple(w.letters)))
    return _normal(tuple(w))


def _star(w: Word) -> int:
    s = 1
    for x in w:
        s *= x.star_sign
    return s


def adjoint_word(w):
    """Formal adjoint: reverse the letters and multiply by their star signs."""
    if isinstance(w, TraceWord):
        return TraceWord(w.coefficient * _star(w.letters), tuple(reversed(w.letters)))
    return TraceWord(_star(w), tuple(reversed(w)))


def _as_poly(P) -> dict:
    if isinstance(P, dict):
        items = P.items()
    elif isinstance(P, TraceWord):
        items = [(P.letters, P.coefficient)]
    else:
        items = [(tw.letters, tw.coefficient) for tw in P]
    out: Counter = Counter()
    for w, c in items:
        out[_normal(tuple(w))] += c
    return {w: c for w, c in out.items() if c != 0}


def classify_cyclic(P) -> str:
    """Classify a polynomial (dict word -> coeff, a TraceWord, or an iterable of TraceWords)."""
    poly = _as_poly(P)
    image: Counter = Counter()
    for w, c in poly.items():
        image[_normal(tuple(reversed(w)))] += c * _star(w)
    image = {w: c for w, c in image.items() if c != 0}
    if image == poly:
        return SELF_ADJOINT
    if image == {w: -c for w, c in poly.items()}:
        return ANTI_SELF_ADJOINT
    return NEITHER


def word_class(w: Word) -> str:
    return classify_cyclic({w: 1})


def _bi_key(a: Word, b: Word) -> tuple[Word, Word]:
    return (a, b) if _word_key(a) <= _word_key(b) else (b, a)


@dataclass
class TraceFunctional:
    """``N * Tr(single) + sum coeff * Tr(left) * Tr(right)`` with integer coefficients."""

    single: dict = field(default_factory=dict)
    bi: dict = field(default_factory=dict)
    letters: tuple = ()
    signature: Signature | None = None
    power: int | None = None

    def single_words(self) -> list[TraceWord]:
        return [TraceWord(c, w) for w, c in _sorted_items(self.single)]

    def bi_terms(self) -> list[tuple[int, Word, Word]]:
        items = sorted(self.bi.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), len(kv[0][0]), _word_key(kv[0][0]), _word_key(kv[0][1])))
        return [(c, a, b) for (a, b), c in items]

    def bi_pairs(self) -> list[tuple[dict, dict]]:
        """Group bi-trace terms as ``sum_i Tr(Phi_i) Tr(Psi_i)``.

        Each group is keyed by a factor word that is its own adjoint up to
        rotation and sign; ``Psi`` collects everything multiplying it.
        """
        groups: dict = defaultdict(Counter)
        for (a, b), c in self.bi.items():
            ca, cb = word_class(a), word_class(b)
            if ca != NEITHER and (cb == NEITHER or _word_key(a) <= _word_key(b)):
                groups[a][b] += c
            elif cb != NEITHER:
                groups[b][a] += c
            else:
                groups[a][b] += c
        out = []
        for phi in sorted(groups, key=lambda w: (len(w), _word_key(w))):
            psi = {w: c for w, c in groups[phi].items() if c}
            if psi:
                out.append(({phi: 1}, psi))
        return out

    def evaluate(self, assignment, N: int, check: bool = True) -> complex:
        return evaluate_functionals(self, assignment, N, check=check)

    def render(self) -> str:
        return render_text(self)

    def to_json(self) -> dict:
        return {
            "signature": None if self.signature is None else [self.signature.p, self.signature.q],
            "power": self.power,
            "letters": [
                {"name": x.name, "label": list(x.label), "type": "H" if x.star_sign == 1 else "L", "e": x.e_sign}
                for x in self.letters
            ],
            "single": [{"coeff": c, "word": [x.name for x in w]} for w, c in _sorted_items(self.single)],
            "bi": [
                {"coeff": c, "left": [x.name for x in a], "right": [x.name for x in b]}
                for c, a, b in self.bi_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "TraceFunctional":
        letters = tuple(Letter(tuple(x["label"]), 1 if x["type"] == "H" else -1, x["e"]) for x in obj["letters"])
        by_name = {x.name: x for x in letters}
        single = {_normal(tuple(by_name[n] for n in t["word"])): t["coeff"] for t in obj["single"]}
        bi = {}
        for t in obj["bi"]:
            a = _normal(tuple(by_name[n] for n in t["left"]))
            b = _normal(tuple(by_name[n] for n in t["right"]))
            bi[_bi_key(a, b)] = t["coeff"]
        sig = None if obj.get("signature") is None else Signature(*obj["signature"])
        return cls(single, bi, letters, sig, obj.get("power"))


def _sorted_items(poly: dict):
    return sorted(poly.items(), key=lambda kv: (-len(kv[0]), _word_key(kv[0])))


def subset_terms(word: Word):
    """Expand the trace of a product of left-plus-right multiplications.

    Yields ``(sign, forward, reversed)`` for each of the ``2**len(word)``
    subsets: letters outside the subset keep their order, letters inside
    are read backwards (their transposes, traced), weighted by the product
    of their ``e_sign``.
    """
    r = len(word)
    for mask in range(1 << r):
        sign = 1
        fwd, bwd = [], []
        for i, x in enumerate(word):
            if mask >> i & 1:
                sign *= x.e_sign
                bwd.append(x)
            else:
                fwd.append(x)
        yield sign, tuple(fwd), tuple(reversed(bwd))


def _accumulate(single: Counter, bi: Counter, word: Word, weight: int):
    for sign, fwd, bwd in subset_terms(word):
        c = weight * sign
        if not bwd:
            single[_normal(fwd)] += c
        elif not fwd:
            single[_normal(bwd)] += c
        else:
            bi[_bi_key(_normal(fwd), _normal(bwd))] += c


def _finish(single: Counter, bi: Counter, letters, sig, power) -> TraceFunctional:
    return TraceFunctional(
        {w: c for w, c in single.items() if c},
        {k: c for k, c in bi.items() if c},
        tuple(letters),
        sig,
        power,
    )


def _check_generation(sig: Signature, t: int, cap: int):
    if sig.d % 2:
        raise ValueError(f"trace functionals are generated for even d only, got d={sig.d}")
    if t < 1:
        raise ValueError(f"power exponent t must be positive, got {t}")
    if 2 * t * (sig.d - 1) > cap:
        raise ValueError(f"Tr D^{2 * t} in d={sig.d} needs {2 * t * (sig.d - 1)} chord points, cap is {cap}")


@lru_cache(maxsize=None)
def generate_trace_functionals(sig: Signature, t: int, cap: int = DEFAULT_CAP) -> TraceFunctional:
    """Functional whose value equals ``Tr D^(2t) / dimV``.

    Sums over every tuple of ``2t`` letters, every chord diagram on the
    concatenated gamma indices, and every subset of positions.
    """
    _check_generation(sig, t, cap)
    letters = signature_letters(sig)
    metric = sig.metric
    single: Counter = Counter()
    bi: Counter = Counter()
    for word in product(letters, repeat=2 * t):
        mu = tuple(i for x in word for i in x.label)
        b = bracket_pruned(mu, metric)
        if b:
            _accumulate(single, bi, word, b)
    return _finish(single, bi, letters, sig, 2 * t)


def diagram_functional(sig: Signature, t: int, chi: ChordDiagram) -> TraceFunctional:
    """Contribution of a single chord diagram, restricted to index tuples whose
    concatenation has as many points as the diagram."""
    _check_generation(sig, t, max(DEFAULT_CAP, chi.points))
    letters = signature_letters(sig)
    metric = sig.metric
    single: Counter = Counter()
    bi: Counter = Counter()
    for word in product(letters, repeat=2 * t):
        mu = tuple(i for x in word for i in x.label)
        if len(mu) != chi.points:
            continue
        w = chi_tensor(chi, mu, metric)
        if w:
            _accumulate(single, bi, word, w)
    return _finish(single, bi, letters, sig, 2 * t)


def _lookup(assignment, letter: Letter):
    if letter in assignment:
        return assignment[letter]
    if letter.label in assignment:
        return assignment[letter.label]
    raise KeyError(f"no matrix assigned to {letter.name}")


class _TraceCache:
    def __init__(self, mats: dict, N: int):
        self.mats = mats
        self.N = N
        self.prods: dict = {}

    def product(self, w: Word) -> np.ndarray:
        if w in self.prods:
            return self.prods[w]
        if len(w) == 1:
            m = self.mats[w[0]]
        else:
            m = self.product(w[:-1]) @ self.mats[w[-1]]
        self.prods[w] = m
        return m

    def trace(self, w: Word) -> complex:
        if not w:
            return complex(self.N)
        if len(w) == 1:
            return complex(np.trace(self.mats[w[0]]))
        # last multiplication folded into the trace
        left = self.product(w[:-1])
        return complex(np.einsum("ij,ji->", left, self.mats[w[-1]]))


def evaluate_functionals(f: TraceFunctional, assignment, N: int, check: bool = True, rtol: float = 1e-12) -> complex:
    """``N * single + bi`` with letters replaced by matrices.

    ``assignment`` maps letters (or their labels) to ``N x N`` arrays.
    """
    letters = set(f.letters)
    for w in f.single:
        letters.update(w)
    for a, b in f.bi:
        letters.update(a)
        letters.update(b)
    mats = {}
    for x in letters:
        m = np.asarray(_lookup(assignment, x), dtype=complex)
        if m.shape != (N, N):
            raise ValueError(f"{x.name} has shape {m.shape}, expected ({N},{N})")
        if check:
            err = np.abs(m.conj().T - x.star_sign * m).max(initial=0.0)
            if err > rtol * max(1.0, np.abs(m).max(initial=0.0)):
                kind = "Hermitian" if x.star_sign == 1 else "anti-Hermitian"
                raise ValueError(f"{x.name} must be {kind}; deviation {err:.3e}")
        mats[x] = m
    cache = _TraceCache(mats, N)
    s = sum(c * cache.trace(w) for w, c in f.single.items())
    b = sum(c * cache.trace(a) * cache.trace(bw) for (a, bw), c in f.bi.items())
    return N * complex(s) + complex(b)


def _render_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(w[i].name + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return " ".join(parts)


def _render_coeff(c: int, first: bool) -> str:
    if first:
        return ("-" if c < 0 else "") + (f"{abs(c)} " if abs(c) != 1 else "")
    return (" - " if c < 0 else " + ") + (f"{abs(c)} " if abs(c) != 1 else "")


def render_text(f: TraceFunctional) -> str:
    """Plain-text form ``N*Tr[...] + c*Tr[...]*Tr[...] + ...`` in a stable order."""
    out = []
    if f.single:
        body = "".join(_render_coeff(c, i == 0) + _render_word(w) for i, (w, c) in enumerate(_sorted_items(f.single)))
        out.append(f"N*Tr[{body}]")
    for c, a, b in f.bi_terms():
        sign = "-" if c < 0 else "+"
        mag = f"{abs(c)}*" if abs(c) != 1 else ""
        term = f"{mag}Tr[{_render_word(a)}]*Tr[{_render_word(b)}]"
        out.append(term if not out and sign == "+" else f"{sign} {term}" if out else f"-{term}")
    if not out:
        return "0"
    return " ".join(out)


def dumps(f: TraceFunctional) -> str:
    return json.dumps(f.to_json(), indent=2)
