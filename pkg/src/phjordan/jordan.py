"""Numerical Jordan decomposition with a biorthonormal chain basis.

The computed eigenvalues are grouped by single linkage; each cluster's
invariant subspace is extracted from a reordered Schur form, and the
nilpotent part restricted to it is resolved by a rank-revealing staircase.
Columns of ``P`` are the chain vectors ``psi_{n,a,i}`` with

    H psi_{n,a,1} = E_n psi_{n,a,1}
    H psi_{n,a,i} = E_n psi_{n,a,i} + psi_{n,a,i-1}     (i > 1)

and ``Q = inv(P)^H`` holds the dual vectors ``phi_{n,a,i}``.
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import cmp_to_key

import numpy as np
import scipy.linalg as la
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .antilinear import AntilinearOp
from .exceptions import ClusterAmbiguity, ConvergenceFailure, IllConditioned, InputError
from .numfield import (
    DEFAULT_TOL,
    adjoint,
    check_operator,
    null_space,
    op_norm,
    rel,
)

__all__ = [
    "JordanBlockSpec",
    "JordanDecomposition",
    "jordan_decompose",
    "assemble_jordan_matrix",
    "jordan_block",
    "conjugation_of_frame",
    "conjugation_of_biorthonormal",
    "weyr_ranks",
]


@dataclass(frozen=True)
class JordanBlockSpec:
    """One Jordan block: eigenvalue index ``n`` (0-based), label ``a`` (1-based), size ``p``."""

    eigenvalue_index: int
    degeneracy_label: int
    block_size: int

    def __post_init__(self):
        if self.block_size < 1:
            raise InputError(f"block size must be positive, got {self.block_size}")
        if self.degeneracy_label < 1:
            raise InputError(f"degeneracy label must be >= 1, got {self.degeneracy_label}")


@dataclass(frozen=True, eq=False)
class JordanDecomposition:
    H: np.ndarray
    eigenvalues: np.ndarray
    blocks: tuple
    P: np.ndarray
    Q: np.ndarray
    tol: object = DEFAULT_TOL
    residuals: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.H.shape[0]

    @property
    def norm(self):
        return op_norm(self.H)

    @property
    def scale(self):
        """Operator norm used for relative thresholds (1.0 for H = 0)."""
        nrm = self.norm
        return nrm if nrm > 0 else 1.0

    @property
    def psi(self):
        return self.P

    @property
    def phi(self):
        return self.Q

    @property
    def offsets(self):
        """First column index of every block."""
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.block_size
        return out

    def block_columns(self, index):
        start = self.offsets[index]
        return list(range(start, start + self.blocks[index].block_size))

    @property
    def column_labels(self):
        """``(n, a, i)`` for every column, ``i`` 1-based along the chain."""
        return [
            (b.eigenvalue_index, b.degeneracy_label, i)
            for b in self.blocks
            for i in range(1, b.block_size + 1)
        ]

    def blocks_at(self, n):
        return [b for b in self.blocks if b.eigenvalue_index == n]

    def block_indices_at(self, n):
        return [j for j, b in enumerate(self.blocks) if b.eigenvalue_index == n]

    def geometric_multiplicity(self, n):
        return len(self.blocks_at(n))

    def algebraic_multiplicity(self, n):
        return sum(b.block_size for b in self.blocks_at(n))

    def segre(self, n):
        """Block sizes at eigenvalue ``n``, descending."""
        return sorted((b.block_size for b in self.blocks_at(n)), reverse=True)

    def identical_block_count(self, block):
        """``k(n, a)``: how many blocks share eigenvalue and size with ``block``."""
        return sum(
            1
            for b in self.blocks
            if b.eigenvalue_index == block.eigenvalue_index and b.block_size == block.block_size
        )

    @property
    def d(self):
        return [self.geometric_multiplicity(n) for n in range(len(self.eigenvalues))]

    @property
    def g(self):
        return [self.algebraic_multiplicity(n) for n in range(len(self.eigenvalues))]

    @property
    def is_diagonalizable(self):
        return all(b.block_size == 1 for b in self.blocks)

    @property
    def jordan_matrix(self):
        return assemble_jordan_matrix(self.blocks, self.eigenvalues)

    def ledger(self):
        """Plain-data view of the block ledger."""
        return [
            {
                "n": b.eigenvalue_index,
                "eigenvalue": complex(self.eigenvalues[b.eigenvalue_index]),
                "a": b.degeneracy_label,
                "p": b.block_size,
                "k": self.identical_block_count(b),
            }
            for b in self.blocks
        ]


def jordan_block(eigenvalue, size):
    J = np.eye(size, dtype=np.complex128) * eigenvalue
    J += np.eye(size, k=1, dtype=np.complex128)
    return J


def assemble_jordan_matrix(blocks, eigenvalues):
    """Block-diagonal Jordan matrix in ledger order."""
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    return la.block_diag(
        *[jordan_block(eigenvalues[b.eigenvalue_index], b.block_size) for b in blocks]
    ).astype(np.complex128)


def _single_linkage(w, threshold):
    d = np.abs(w[:, None] - w[None, :])
    _, labels = connected_components(csr_matrix(d <= threshold), directed=False)
    clusters = [np.flatnonzero(labels == c) for c in range(labels.max() + 1)]
    for c1 in range(len(clusters)):
        for c2 in range(c1 + 1, len(clusters)):
            gap = d[np.ix_(clusters[c1], clusters[c2])].min()
            if gap <= 2.0 * threshold:
                raise ClusterAmbiguity(
                    f"eigenvalue clusters at distance {gap:.3e} straddle the "
                    f"clustering threshold {threshold:.3e}"
                )
    return clusters


def _cluster_order(threshold):
    def cmp(x, y):
        a, b = x[0], y[0]
        if abs(a.real - b.real) > threshold:
            return -1 if a.real < b.real else 1
        if abs(a.imag - b.imag) > threshold:
            return -1 if a.imag < b.imag else 1
        return 0

    return cmp_to_key(cmp)


def _invariant_subspace(H, mu, radius, m, real):
    try:
        if real:
            T, Z, sdim = la.schur(
                H.real, output="real", sort=lambda re, im: abs(complex(re, im) - mu) <= radius
            )
        else:
            T, Z, sdim = la.schur(H, output="complex", sort=lambda x: abs(x - mu) <= radius)
    except la.LinAlgError as exc:
        raise ConvergenceFailure(f"Schur reordering failed: {exc}") from exc
    if sdim != m:
        raise IllConditioned(
            f"reordered Schur form selected {sdim} eigenvalues near {mu:.6g}, expected {m}"
        )
    return Z[:, :m], T[:m, :m]


def _orth(B):
    if B.shape[1] == 0:
        return B
    U, s, _ = la.svd(B, full_matrices=False)
    return U[:, : int(np.sum(s > 1e-12 * s[0]))] if s[0] > 0 else U[:, :0]


def _staircase(Nn, tol):
    """Chain tops of the (scaled) nilpotent matrix ``Nn``.

    Returns ``[(length, top), ...]`` with lengths descending.  ``top`` lies in
    ker(Nn^length) but outside ker(Nn^(length-1)) plus the span of longer
    chains at that level.
    """
    m = Nn.shape[0]
    kernels = [np.zeros((m, 0), dtype=Nn.dtype)]
    power = np.eye(m, dtype=Nn.dtype)
    for _ in range(m):
        power = Nn @ power
        kernels.append(null_space(power, tol.rank_tol))
        if kernels[-1].shape[1] == m:
            break
    else:
        raise IllConditioned("cluster is not nilpotent at rank_tol")
    dims = [K.shape[1] for K in kernels]
    widths = [dims[k] - dims[k - 1] for k in range(1, len(dims))] + [0]
    if widths[0] < 1 or any(widths[k] < widths[k + 1] for k in range(len(widths) - 1)):
        raise IllConditioned(f"inconsistent kernel dimensions {dims} in Jordan staircase")

    chains = []
    for k in range(len(dims) - 1, 0, -1):
        count = widths[k - 1] - widths[k]
        if count == 0:
            continue
        level = [np.linalg.matrix_power(Nn, L - k) @ top for L, top in chains]
        B = _orth(np.column_stack([kernels[k - 1]] + level)) if (level or dims[k - 1]) else None
        Kk = kernels[k]
        R = Kk if B is None else Kk - B @ (adjoint(B) @ Kk)
        U, s, _ = la.svd(R, full_matrices=False)
        if s.size < count or s[count - 1] <= np.sqrt(tol.rank_tol):
            raise IllConditioned(f"degenerate quotient space at chain length {k}")
        chains.extend((k, U[:, j]) for j in range(count))
    return chains


def _normalize_phase(v):
    j = int(np.argmax(np.abs(v)))
    return v * (abs(v[j]) / v[j])


def jordan_decompose(H, tol=DEFAULT_TOL):
    """Jordan form ``H = P J P^{-1}`` with ``Q = P^{-H}``.

    Parameters
    ----------
    H : array_like, shape (N, N)
        Complex operator, ``N <= 32``.
    tol : TolerancePolicy

    Returns
    -------
    JordanDecomposition

    Raises
    ------
    ClusterAmbiguity
        Distinct clusters closer than twice the clustering threshold.
    IllConditioned
        The staircase is inconsistent, ``cond(P) > 1/rank_tol``, or a
        certificate residual exceeds ``residual_tol``.
    """
    H = check_operator(H)
    N = H.shape[0]
    norm = op_norm(H)
    scale = norm if norm > 0 else 1.0
    real_input = not np.any(H.imag)
    try:
        w = la.eigvals(H)
    except la.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc

    threshold = tol.eig_cluster_tol * scale
    clusters = [(w[idx].mean(), idx) for idx in _single_linkage(w, threshold)]
    clusters.sort(key=_cluster_order(threshold))

    eigenvalues, blocks, columns = [], [], []
    for n, (mu, idx) in enumerate(clusters):
        m = idx.size
        outside = np.delete(w, idx)
        radius = 0.5 * np.abs(outside - mu).min() if outside.size else np.inf
        if np.abs(w[idx] - mu).max() >= radius:
            raise ClusterAmbiguity(f"cluster near {mu:.6g} overlaps its neighbours")
        real = real_input and abs(mu.imag) <= tol.realness_tol * scale
        if real:
            mu = complex(mu.real)
        Z, T = _invariant_subspace(H, mu, radius, m, real)
        chains = _staircase((T - mu * np.eye(m)) / scale, tol)

        shift = H - mu * np.eye(N)
        eigenvalues.append(mu)
        for a, (length, top) in enumerate(chains, start=1):
            v = _normalize_phase(Z @ top)
            chain = [v]
            for _ in range(length - 1):
                chain.append(shift @ chain[-1])
            chain.reverse()
            # balance so the geometric mean of column norms is 1
            c = np.exp(-np.mean(np.log([np.linalg.norm(x) for x in chain])))
            columns.extend(c * x for x in chain)
            blocks.append(JordanBlockSpec(n, a, length))

    P = np.column_stack(columns).astype(np.complex128)
    s = la.svdvals(P)
    if s[-1] <= tol.rank_tol * s[0]:
        raise IllConditioned(f"chain basis has condition number {s[0] / s[-1]:.3e}")
    Pinv = la.inv(P)
    Q = adjoint(Pinv)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    blocks = tuple(blocks)
    J = assemble_jordan_matrix(blocks, eigenvalues)
    eye = np.eye(N)
    residuals = {
        "biorthonormality": op_norm(adjoint(P) @ Q - eye),
        "completeness": op_norm(P @ adjoint(Q) - eye),
        "reconstruction": rel(op_norm(P @ J @ Pinv - H), norm),
        "condition_number": float(s[0] / s[-1]),
    }
    for key in ("biorthonormality", "completeness", "reconstruction"):
        if residuals[key] > tol.residual_tol:
            raise IllConditioned(
                f"{key} residual {residuals[key]:.3e} exceeds residual_tol {tol.residual_tol:g}"
            )
    return JordanDecomposition(H, eigenvalues, blocks, P, Q, tol, residuals)


def weyr_ranks(H, eigenvalue, max_power, tol=DEFAULT_TOL):
    """Numerical ranks of ``(H - E I)^m`` for ``m = 0 .. max_power``."""
    H = check_operator(H)
    N = H.shape[0]
    scale = op_norm(H) or 1.0
    A = (H - eigenvalue * np.eye(N)) / scale
    ranks, power = [N], np.eye(N, dtype=np.complex128)
    for _ in range(max_power):
        power = A @ power
        s = la.svdvals(power)
        ranks.append(int(np.sum(s > tol.rank_tol)))
    return ranks


def expected_weyr_ranks(jd, n, max_power):
    """Ranks of ``(H - E_n I)^m`` implied by the ledger."""
    sizes = jd.segre(n)
    return [jd.N - sum(min(p, m) for p in sizes) for m in range(max_power + 1)]


def conjugation_of_frame(n):
    """Entrywise complex conjugation in the standard basis."""
    if n < 1:
        raise InputError("dimension must be positive")
    return AntilinearOp(np.eye(n, dtype=np.complex128))


def conjugation_of_biorthonormal(jd):
    """Conjugation associated with the chain basis: ``v -> sum psi_j conj(<phi_j|v>)``.

    Its linear part is ``P @ Q^T``.
    """
    return AntilinearOp(jd.P @ jd.Q.T)


def block_multiset(jd):
    """Multiset of block sizes, ignoring eigenvalue labels."""
    return Counter(b.block_size for b in jd.blocks)
