"""Pseudo-Hermiticity analysis of finite-dimensional, possibly nondiagonalizable operators."""

from .antilinear import AntilinearOp
from .antisym import (
    build_involutory_symmetry,
    build_T,
    kramers_check,
    realify,
    symmetry_to_eta,
    symplectic_form,
    verify_symmetry,
)
from .estimator import PseudoHermitianAnalyzer
from .jordan import (
    JordanBlockSpec,
    JordanDecomposition,
    assemble_jordan_matrix,
    conjugation_of_biorthonormal,
    conjugation_of_frame,
    jordan_decompose,
)
from .numfield import TolerancePolicy
from .pseudoherm import (
    build_eta,
    classify_spectrum,
    eta_inner,
    inertia,
    intertwiner_space,
    oracle_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "AntilinearOp",
    "JordanBlockSpec",
    "JordanDecomposition",
    "PseudoHermitianAnalyzer",
    "TolerancePolicy",
    "assemble_jordan_matrix",
    "build_T",
    "build_eta",
    "build_involutory_symmetry",
    "classify_spectrum",
    "conjugation_of_biorthonormal",
    "conjugation_of_frame",
    "eta_inner",
    "inertia",
    "intertwiner_space",
    "jordan_decompose",
    "kramers_check",
    "oracle_verdict",
    "realify",
    "symmetry_to_eta",
    "symplectic_form",
    "verify_symmetry",
]
