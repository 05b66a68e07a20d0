"""Spectral classification, the canonical metric and the intertwiner oracle.

The metric is assembled in the chain basis as ``eta = S U V S^H`` where
``S = Q`` maps the standard frame onto the dual vectors, ``V`` reverses every
Jordan chain and ``U`` swaps each complex eigenvalue's blocks with those of
its conjugate partner.  :func:`intertwiner_space` solves ``eta H = H^H eta``
directly as a null-space problem and shares no code with that construction.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .exceptions import (
    AmbiguousRealness,
    ConditionViolated,
    InputError,
    NearSingular,
    PairingMismatch,
)
from .numfield import DEFAULT_TOL, adjoint, op_norm, rel, solve

__all__ = [
    "PairedEigenvalue",
    "SpectralClassification",
    "EtaConstruction",
    "Metric",
    "OracleVerdict",
    "classify_spectrum",
    "build_eta",
    "metric_residual",
    "inertia",
    "eta_inner",
    "pseudonorm",
    "hermitian_basis",
    "intertwiner_space",
    "sample_invertible",
    "oracle_verdict",
]


@dataclass(frozen=True)
class PairedEigenvalue:
    n_plus: int
    n_minus: int
    E_plus: complex
    E_minus: complex
    segre_plus: tuple
    segre_minus: tuple

    @property
    def jordan_match(self):
        return self.segre_plus == self.segre_minus

    @property
    def conjugation_error(self):
        return abs(self.E_minus - self.E_plus.conjugate())


@dataclass(frozen=True)
class SpectralClassification:
    """Partition of the eigenvalue clusters.

    ``real_eigs`` holds ``(n, E, segre)``; ``unpaired_complex`` holds
    ``(n, E)``.
    """

    real_eigs: tuple
    paired_eigs: tuple
    unpaired_complex: tuple

    @property
    def condition_i_holds(self):
        return not self.unpaired_complex and all(p.jordan_match for p in self.paired_eigs)

    @property
    def all_real(self):
        return not self.paired_eigs and not self.unpaired_complex

    @property
    def real_indices(self):
        return [n for n, _, _ in self.real_eigs]


def classify_spectrum(jd, tol=None):
    """Split the clusters of ``jd`` into real, conjugate-paired and unpaired.

    Raises
    ------
    AmbiguousRealness
        If some ``|Im E|`` lies within a factor 2 of ``realness_tol * ||H||``.
    """
    tol = tol or jd.tol
    scale = jd.scale
    real_thr = tol.realness_tol * scale
    pair_thr = tol.eig_cluster_tol * scale

    real, upper, lower = [], [], []
    for n, E in enumerate(jd.eigenvalues):
        im = abs(E.imag)
        if 0.5 * real_thr <= im <= 2.0 * real_thr:
            raise AmbiguousRealness(
                f"|Im E| = {im:.3e} is within a factor 2 of the realness threshold {real_thr:.3e}"
            )
        if im <= real_thr:
            real.append((n, complex(E), tuple(jd.segre(n))))
        elif E.imag > 0:
            upper.append(n)
        else:
            lower.append(n)

    pairs, unpaired = [], []
    free = list(lower)
    for n in upper:
        target = jd.eigenvalues[n].conjugate()
        best = min(free, key=lambda j: abs(jd.eigenvalues[j] - target), default=None)
        if best is None or abs(jd.eigenvalues[best] - target) > pair_thr:
            unpaired.append((n, complex(jd.eigenvalues[n])))
            continue
        free.remove(best)
        pairs.append(
            PairedEigenvalue(
                n,
                best,
                complex(jd.eigenvalues[n]),
                complex(jd.eigenvalues[best]),
                tuple(jd.segre(n)),
                tuple(jd.segre(best)),
            )
        )
    unpaired.extend((j, complex(jd.eigenvalues[j])) for j in free)
    unpaired.sort()
    return SpectralClassification(tuple(real), tuple(pairs), tuple(unpaired))


@dataclass(frozen=True, eq=False)
class EtaConstruction:
    S: np.ndarray
    U: np.ndarray
    V: np.ndarray
    eta_tilde: np.ndarray
    frame_pairing: tuple  # (n, a, i) label of every standard basis vector


@dataclass(frozen=True, eq=False)
class Metric:
    eta: np.ndarray
    inertia: tuple
    residual: float
    hermiticity: float

    @property
    def definite(self):
        n_pos, n_neg = self.inertia
        return n_pos == 0 or n_neg == 0

    def certified(self, tol=DEFAULT_TOL):
        return self.residual <= tol.residual_tol and self.hermiticity <= tol.residual_tol


def _paired_block_columns(jd, pair):
    plus = jd.block_indices_at(pair.n_plus)
    minus = jd.block_indices_at(pair.n_minus)
    if len(plus) != len(minus):
        raise PairingMismatch(
            f"eigenvalues {pair.E_plus:.6g} and {pair.E_minus:.6g} have "
            f"{len(plus)} and {len(minus)} blocks"
        )
    out = []
    for bp, bm in zip(plus, minus):
        if jd.blocks[bp].block_size != jd.blocks[bm].block_size:
            raise PairingMismatch(
                f"block sizes {jd.blocks[bp].block_size} and {jd.blocks[bm].block_size} "
                f"cannot be paired"
            )
        out.append((jd.block_columns(bp), jd.block_columns(bm)))
    return out


def pairing_permutation(jd, cls):
    """The swap ``U``: identity on real clusters, exchange of partner blocks otherwise."""
    N = jd.N
    U = np.zeros((N, N))
    for n in cls.real_indices:
        for j in jd.block_indices_at(n):
            for c in jd.block_columns(j):
                U[c, c] = 1.0
    for pair in cls.paired_eigs:
        for cols_p, cols_m in _paired_block_columns(jd, pair):
            for cp, cm in zip(cols_p, cols_m):
                U[cp, cm] = U[cm, cp] = 1.0
    return U


def chain_reversal(jd):
    """``V``: maps chain position ``i`` to ``p + 1 - i`` inside every block."""
    N = jd.N
    V = np.zeros((N, N))
    for j in range(len(jd.blocks)):
        cols = jd.block_columns(j)
        for c, r in zip(cols, reversed(cols)):
            V[r, c] = 1.0
    return V


def metric_residual(eta, H, tol=DEFAULT_TOL):
    """``||eta H eta^{-1} - H^H|| / ||H||``."""
    H = np.asarray(H)
    lhs = eta @ H @ solve(eta, np.eye(H.shape[0]), tol)
    return rel(op_norm(lhs - adjoint(H)), op_norm(H))


def build_eta(jd, cls, tol=None):
    """Canonical Hermitian metric ``eta = S U V S^H``.

    Returns
    -------
    (EtaConstruction, Metric)

    Raises
    ------
    ConditionViolated
        If the spectrum is not real-or-conjugate-paired with matching blocks.
    """
    tol = tol or jd.tol
    if not cls.condition_i_holds:
        raise ConditionViolated(
            "spectrum is not real or in conjugate pairs with matching Jordan structure"
        )
    S = jd.Q
    U = pairing_permutation(jd, cls)
    V = chain_reversal(jd)
    eta_tilde = U @ V
    eta = S @ eta_tilde @ adjoint(S)
    construction = EtaConstruction(S, U, V, eta_tilde, tuple(jd.column_labels))
    metric = Metric(
        eta=eta,
        inertia=inertia(eta, tol),
        residual=metric_residual(eta, jd.H, tol),
        hermiticity=rel(op_norm(eta - adjoint(eta)), op_norm(eta)),
    )
    return construction, metric


def inertia(eta, tol=DEFAULT_TOL):
    """``(n_plus, n_minus)`` for a Hermitian invertible matrix.

    Raises
    ------
    NearSingular
        If an eigenvalue is below ``rank_tol * ||eta||`` in magnitude.
    """
    eta = np.asarray(eta, dtype=np.complex128)
    scale = op_norm(eta)
    if op_norm(eta - adjoint(eta)) > tol.residual_tol * scale:
        raise InputError("inertia is only defined for Hermitian matrices")
    lam = la.eigvalsh(0.5 * (eta + adjoint(eta)))
    if scale == 0 or np.abs(lam).min() < tol.rank_tol * scale:
        raise NearSingular(
            f"smallest |eigenvalue| {np.abs(lam).min():.3e} is below rank_tol * ||eta||"
        )
    return int(np.sum(lam > 0)), int(np.sum(lam < 0))


def eta_inner(eta, x, y):
    """``<x| eta |y>``."""
    return complex(np.vdot(np.asarray(x), np.asarray(eta) @ np.asarray(y)))


def pseudonorm(eta, x):
    return eta_inner(eta, x, x)


def hermitian_basis(n):
    """Frobenius-orthonormal real basis of the n x n Hermitian matrices."""
    out = []
    r = 1.0 / np.sqrt(2.0)
    for j in range(n):
        E = np.zeros((n, n), dtype=np.complex128)
        E[j, j] = 1.0
        out.append(E)
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[j, k] = E[k, j] = r
            out.append(E)
            F = np.zeros((n, n), dtype=np.complex128)
            F[j, k] = -1j * r
            F[k, j] = 1j * r
            out.append(F)
    return out


def _vec(X):
    return np.asarray(X).reshape(-1, order="F")


def intertwiner_space(H, hermitian_only=True, tol=DEFAULT_TOL):
    """Basis of ``{eta : eta H = H^H eta}``.

    With ``hermitian_only`` the basis spans the real vector space of Hermitian
    solutions; otherwise the complex space of all solutions.  Both bases are
    orthonormal in the Frobenius inner product.
    """
    H = np.asarray(H, dtype=np.complex128)
    n = H.shape[0]
    eye = np.eye(n)
    # vec(eta H - H^H eta) with column-major vec
    K = np.kron(H.T, eye) - np.kron(eye, adjoint(H))
    if hermitian_only:
        basis = hermitian_basis(n)
        B = np.column_stack([_vec(E) for E in basis])
        C = K @ B
        R = np.vstack([C.real, C.imag])
        _, s, vh = la.svd(R)
        thr = tol.rank_tol * max(s[0], op_norm(H))
        rank = int(np.sum(s > thr))
        coeffs = vh[rank:]
        return [sum(c * E for c, E in zip(row, basis)) for row in coeffs]
    _, s, vh = la.svd(K)
    thr = tol.rank_tol * max(s[0], op_norm(H))
    rank = int(np.sum(s > thr))
    return [np.conj(row).reshape((n, n), order="F") for row in vh[rank:]]


def _sigma_ratio(X):
    s = la.svdvals(X)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def sample_invertible(basis, rng, tol=DEFAULT_TOL, count=1, tries=50, complex_coeffs=False):
    """Random invertible elements of ``span(basis)``.

    Draws up to ``tries`` Gaussian combinations (real coefficients unless
    ``complex_coeffs``) and keeps those with ``sigma_min > rank_tol *
    sigma_max``, stopping once ``count`` have been found.  Also returns the
    best singular-value ratio seen, which certifies the negative outcome.
    """
    found, best = [], 0.0
    if not basis:
        return found, best
    for _ in range(tries):
        c = rng.normal(size=len(basis))
        if complex_coeffs:
            c = c + 1j * rng.normal(size=len(basis))
        X = sum(cj * B for cj, B in zip(c, basis))
        ratio = _sigma_ratio(X)
        best = max(best, ratio)
        if ratio > tol.rank_tol:
            found.append(X)
            if len(found) >= count:
                break
    return found, best


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    pseudo_hermitian: bool
    dimension: int
    witness: object  # invertible eta or None
    sigma_ratio: float
    residual: float  # ||witness H - H^H witness|| / (||witness|| ||H||), nan without witness


def oracle_verdict(H, tol=DEFAULT_TOL, rng=None, hermitian_only=True, tries=50):
    """Decide pseudo-Hermiticity from the intertwiner space alone."""
    rng = np.random.default_rng(0) if rng is None else rng
    H = np.asarray(H, dtype=np.complex128)
    basis = intertwiner_space(H, hermitian_only, tol)
    found, best = sample_invertible(
        basis, rng, tol, count=1, tries=tries, complex_coeffs=not hermitian_only
    )
    if found:
        eta = found[0]
        res = rel(op_norm(eta @ H - adjoint(H) @ eta), op_norm(eta) * op_norm(H))
        return OracleVerdict(True, len(basis), eta, best, res)
    return OracleVerdict(False, len(basis), None, best, float("nan"))
