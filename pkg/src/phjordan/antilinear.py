"""Antilinear operators stored through their linear part.

An antilinear map ``A`` on C^N is written ``A = L K`` with ``K`` the entrywise
complex conjugation, so that ``A v = L @ conj(v)``.
"""

from dataclasses import dataclass

import numpy as np

from .numfield import DEFAULT_TOL, as_matrix, op_norm, rel


@dataclass(frozen=True, eq=False)
class AntilinearOp:
    """Antilinear operator ``v -> L @ conj(v)``.

    Composition of two antilinear operators is linear, so :meth:`compose`
    returns a plain array.  Mixed products with a linear matrix stay
    antilinear (:meth:`left_mul`, :meth:`right_mul`).
    """

    linear_part: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear_part", as_matrix(self.linear_part))

    @property
    def L(self):
        return self.linear_part

    @property
    def dim(self):
        return self.linear_part.shape[0]

    def __call__(self, v):
        return self.linear_part @ np.conj(np.asarray(v, dtype=np.complex128))

    def compose(self, other):
        """Linear part of ``self o other``: ``L1 @ conj(L2)``."""
        return self.linear_part @ np.conj(other.linear_part)

    def square(self):
        return self.compose(self)

    def left_mul(self, A):
        """The antilinear operator ``A o self``."""
        return AntilinearOp(np.asarray(A) @ self.linear_part)

    def right_mul(self, A):
        """The antilinear operator ``self o A``."""
        return AntilinearOp(self.linear_part @ np.conj(np.asarray(A)))

    def commutator_residual(self, H):
        """Relative size of ``[H, self]``, i.e. ``||H L - L conj(H)|| / (||H|| ||L||)``."""
        H = np.asarray(H)
        L = self.linear_part
        return rel(op_norm(H @ L - L @ np.conj(H)), op_norm(H) * op_norm(L))

    def square_residual(self, sign=1):
        """``||L conj(L) - sign * I||``."""
        return op_norm(self.square() - sign * np.eye(self.dim))

    def commutes_with(self, H, tol=DEFAULT_TOL):
        return self.commutator_residual(H) <= tol.residual_tol
