"""Dense complex matrix helpers and the tolerance policy.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
helpers here add the input validation and relative-tolerance checks that the
rest of the package relies on.
"""

from dataclasses import dataclass, asdict

import numpy as np
import scipy.linalg as la

from .exceptions import (
    ConvergenceFailure,
    DimensionError,
    InputError,
    NonSquare,
    SingularMatrix,
    TooLarge,
)

__all__ = [
    "MAX_DIM",
    "TolerancePolicy",
    "as_matrix",
    "check_operator",
    "matmul",
    "adjoint",
    "solve",
    "inv",
    "eig",
    "op_norm",
    "rel",
    "numerical_rank",
    "null_space",
]

MAX_DIM = 32


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerances consulted by every module.

    Each tolerance multiplies an operator-norm estimate of the matrix under
    study; none of them is used as a bare absolute threshold.

    Parameters
    ----------
    eig_cluster_tol : float
        Two computed eigenvalues closer than ``eig_cluster_tol * ||H||`` are
        linked into the same cluster.
    rank_tol : float
        Singular values below ``rank_tol * scale`` count as zero.
    residual_tol : float
        Bound for relative residuals of certificates.
    realness_tol : float
        Eigenvalues with ``|Im E| <= realness_tol * ||H||`` are real.
    """

    eig_cluster_tol: float = 1e-6
    rank_tol: float = 1e-8
    residual_tol: float = 1e-9
    realness_tol: float = 1e-8

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (0.0 < value < 1.0):
                raise InputError(f"{name} must lie in (0, 1), got {value!r}")

    def to_dict(self):
        return asdict(self)


DEFAULT_TOL = TolerancePolicy()


def as_matrix(a, square=True, max_dim=MAX_DIM):
    """Validate ``a`` and return it as a 2-d complex128 array (copied)."""
    try:
        arr = np.array(a, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot interpret input as a complex matrix: {exc}") from exc
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix contains NaN or Inf entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {arr.shape}")
    if max(arr.shape) > max_dim:
        raise TooLarge(f"dimension {max(arr.shape)} exceeds the limit {max_dim}")
    if arr.size == 0:
        raise DimensionError("empty matrix")
    return arr


# Operators are always square; kept as a separate name for readability.
def check_operator(H):
    return as_matrix(H, square=True)


def matmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def adjoint(a):
    return np.conj(np.asarray(a)).T


def op_norm(a):
    """Largest singular value (0.0 for the zero matrix)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def rel(num, den):
    """``num / den`` guarded against a vanishing denominator."""
    return float(num / den) if den > 0 else float(num)


def numerical_rank(a, tol=DEFAULT_TOL, scale=None):
    """Number of singular values above ``rank_tol * scale``.

    ``scale`` defaults to the largest singular value of ``a``.
    """
    s = la.svdvals(np.asarray(a))
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else scale
    return int(np.sum(s > tol.rank_tol * ref))


def null_space(a, threshold):
    """Orthonormal basis for the right null space.

    Singular values ``<= threshold`` (absolute) are treated as zero.
    """
    a = np.asarray(a)
    _, s, vh = la.svd(a, full_matrices=True)
    rank = int(np.sum(s > threshold))
    return np.conj(vh[rank:]).T


def solve(a, b, tol=DEFAULT_TOL):
    """Solve ``a @ x = b`` for square, numerically nonsingular ``a``.

    Raises
    ------
    SingularMatrix
        When ``a`` is rank deficient at ``tol.rank_tol``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"solve needs a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    s = la.svdvals(a)
    if s[0] == 0.0 or s[-1] <= tol.rank_tol * s[0]:
        raise SingularMatrix(
            f"matrix is singular at rank_tol={tol.rank_tol:g} "
            f"(sigma_min/sigma_max={s[-1] / s[0] if s[0] else 0.0:.3e})"
        )
    return la.solve(a, b)


def inv(a, tol=DEFAULT_TOL):
    a = np.asarray(a)
    return solve(a, np.eye(a.shape[0], dtype=np.complex128), tol)


def eig(a):
    """Eigenvalues with algebraic multiplicity and unit-norm eigenvectors.

    Returns a list of ``(eigenvalue, column)`` pairs.  For a defective matrix
    LAPACK returns (nearly) parallel columns for the repeated eigenvalue; no
    attempt is made to hide that here, the Jordan module handles it.
    """
    a = as_matrix(a)
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    v = v / np.linalg.norm(v, axis=0)
    return [(complex(w[j]), v[:, j]) for j in range(w.size)]
