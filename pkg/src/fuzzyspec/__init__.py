"""Spectral actions of fuzzy Dirac operators: chord-diagram trace polynomials,
closed forms, a dense oracle and Metropolis sampling."""

from .action import ActionSpec, aux_d1_decompose, closed_form_trace, observable_F, spectral_action
from .chords import ChordDiagram, bracket, enumerate_diagrams
from .clifford import Signature, build_gamma, hermiticity_sign, letter_type
from .dirac import DiracData, assemble_dense, random_dirac_data
from .ncpoly import TraceFunctional, classify_cyclic, generate_trace_functionals
from .oracle import trace_power, verify

__all__ = [
    "ActionSpec",
    "ChordDiagram",
    "DiracData",
    "Signature",
    "TraceFunctional",
    "assemble_dense",
    "aux_d1_decompose",
    "bracket",
    "build_gamma",
    "classify_cyclic",
    "closed_form_trace",
    "enumerate_diagrams",
    "generate_trace_functionals",
    "hermiticity_sign",
    "letter_type",
    "observable_F",
    "random_dirac_data",
    "spectral_action",
    "trace_power",
    "verify",
]
