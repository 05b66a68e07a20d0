"""Antilinear symmetries of pseudo-Hermitian operators.

All operators are built in the chain basis of a :class:`JordanDecomposition`.
An antilinear map ``sum_x s_x |psi_x> K <phi_y|`` has linear part
``P @ Pi @ Q^T`` where ``Pi`` is the signed permutation ``Pi[x, y] = s_x``.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .antilinear import AntilinearOp
from .exceptions import (
    ConditionViolated,
    NoInvertibleM,
    NotASymmetry,
    NotInvolutory,
    NotTSymmetric,
    PairingUnavailable,
)
from .numfield import DEFAULT_TOL, op_norm, rel
from .pseudoherm import _paired_block_columns, chain_reversal, pairing_permutation

__all__ = [
    "AntilinearOp",
    "SymmetryCheck",
    "RealificationResult",
    "KramersVerdict",
    "FalsifierResult",
    "build_involutory_symmetry",
    "verify_symmetry",
    "symmetry_to_eta",
    "realify",
    "kramers_pairing",
    "kramers_check",
    "build_T",
    "symplectic_form",
    "quaternionic_defect",
    "kramers_falsifier",
]

PLUS_ONE = "plus_one"
MINUS_ONE = "minus_one"
OTHER = "other"


@dataclass(frozen=True)
class SymmetryCheck:
    commutes: bool
    square_kind: str
    commutation_residual: float
    square_residual: float

    def __iter__(self):
        return iter((self.commutes, self.square_kind))


def _square_scale(L):
    return max(1.0, op_norm(L) ** 2)


def verify_symmetry(H, omega, tol=DEFAULT_TOL):
    """Check ``[H, omega] = 0`` and classify ``omega^2`` against ``+1`` and ``-1``.

    Unpacks as ``commutes, square_kind``; residuals are kept on the result.
    The square residual is relative to ``max(1, ||L||^2)``.
    """
    H = np.asarray(H, dtype=np.complex128)
    L = omega.linear_part
    if L.shape != H.shape:
        raise ValueError(f"operator shapes differ: {L.shape} vs {H.shape}")
    comm = omega.commutator_residual(H)
    sq = omega.square()
    eye = np.eye(H.shape[0])
    scale = _square_scale(L)
    plus = op_norm(sq - eye) / scale
    minus = op_norm(sq + eye) / scale
    if plus <= tol.residual_tol:
        kind, res = PLUS_ONE, plus
    elif minus <= tol.residual_tol:
        kind, res = MINUS_ONE, minus
    else:
        kind, res = OTHER, min(plus, minus)
    return SymmetryCheck(comm <= tol.residual_tol, kind, comm, res)


def build_involutory_symmetry(jd, cls):
    """Involutory antilinear symmetry ``S^{H,-1} U S^H Theta_E``.

    With ``S = Q`` this is the antilinear map with linear part ``P U Q^T``.
    """
    if not cls.condition_i_holds:
        raise ConditionViolated("no involutory antilinear symmetry: spectrum is not real-or-conjugate-paired with matching blocks")
    U = pairing_permutation(jd, cls)
    return AntilinearOp(jd.P @ U @ jd.Q.T)


def symmetry_to_eta(H, omega, jd, tol=None):
    """Linear metric ``S V Theta_F S^H omega`` induced by an antilinear symmetry.

    The result satisfies ``eta H eta^{-1} = H^H`` but need not be Hermitian.
    """
    tol = tol or jd.tol
    check = verify_symmetry(H, omega, tol)
    if not check.commutes:
        raise NotASymmetry(
            f"operator does not commute with H (residual {check.commutation_residual:.3e})"
        )
    s = la.svdvals(omega.linear_part)
    if s[-1] <= tol.rank_tol * s[0]:
        raise NotASymmetry("antilinear operator is not invertible")
    V = chain_reversal(jd)
    Q = jd.Q
    # Theta_F o (Q^H L K) is the linear map conj(Q^H L) = Q^T conj(L)
    return Q @ V @ Q.T @ np.conj(omega.linear_part)


@dataclass(frozen=True, eq=False)
class RealificationResult:
    M: np.ndarray
    realified: np.ndarray
    max_imag: float
    c: complex
    factor_residual: float  # ||L - M conj(M)^{-1}|| / ||L||


_C_CANDIDATES = (1, 1j, 1 + 1j, 1 - 1j, 2 + 1j, 1 + 2j, 2 - 1j, 1 - 2j)


def realify(omega, H, tol=DEFAULT_TOL, rng=None, random_tries=50):
    """Basis change ``M`` with ``M^{-1} H M`` real, from an involutory symmetry.

    ``M = c L + conj(c) I`` satisfies ``L conj(M) = M`` whenever
    ``L conj(L) = I``, hence ``L = M conj(M)^{-1}``.  Among a fixed list of
    scalars ``c`` the best-conditioned invertible ``M`` is kept; random
    complex ``c`` are drawn only if all of them fail.
    """
    H = np.asarray(H, dtype=np.complex128)
    L = omega.linear_part
    N = L.shape[0]
    eye = np.eye(N)
    if op_norm(L @ np.conj(L) - eye) > tol.residual_tol * _square_scale(L):
        raise NotInvolutory("linear part does not satisfy L conj(L) = I")
    if not omega.commutes_with(H, tol):
        raise NotASymmetry("operator does not commute with H")

    def ratio(c):
        s = la.svdvals(c * L + np.conj(c) * eye)
        return s[-1] / s[0] if s[0] > 0 else 0.0

    scored = [(ratio(c), k, c) for k, c in enumerate(_C_CANDIDATES)]
    best_ratio, _, c = max(scored)
    if best_ratio <= tol.rank_tol:
        rng = np.random.default_rng(0) if rng is None else rng
        for _ in range(random_tries):
            c = complex(rng.normal(), rng.normal())
            if ratio(c) > tol.rank_tol:
                break
        else:
            raise NoInvertibleM("no invertible M = c L + conj(c) I found")
    c = complex(c)
    M = c * L + np.conj(c) * eye
    realified = la.solve(M, H @ M)
    factor = la.solve(np.conj(M).T, M.T).T  # M conj(M)^{-1}
    return RealificationResult(
        M=M,
        realified=realified,
        max_imag=float(np.abs(realified.imag).max()),
        c=c,
        factor_residual=rel(op_norm(L - factor), op_norm(L)),
    )


def kramers_pairing(jd, cls):
    """Partner blocks for every real eigenvalue.

    Identical blocks (same eigenvalue, same size) are taken in ledger order
    and the first half of each group is paired with the second half.

    Returns
    -------
    list of (block_index, partner_block_index)

    Raises
    ------
    PairingUnavailable
        If some group of identical blocks at a real eigenvalue has odd size.
    """
    pairs = []
    for n in cls.real_indices:
        groups = defaultdict(list)
        for j in jd.block_indices_at(n):
            groups[jd.blocks[j].block_size].append(j)
        for size, members in groups.items():
            if len(members) % 2:
                raise PairingUnavailable(
                    f"eigenvalue {jd.eigenvalues[n]:.6g}: {len(members)} blocks of size {size}"
                )
            half = len(members) // 2
            pairs.extend(zip(members[:half], members[half:]))
    return pairs


def _T_permutation(jd, cls, pairing):
    N = jd.N
    Pi = np.zeros((N, N))
    for a, b in pairing:
        for ca, cb in zip(jd.block_columns(a), jd.block_columns(b)):
            Pi[ca, cb] = 1.0
            Pi[cb, ca] = -1.0
    for pair in cls.paired_eigs:
        for cols_p, cols_m in _paired_block_columns(jd, pair):
            for cp, cm in zip(cols_p, cols_m):
                Pi[cm, cp] = 1.0
                Pi[cp, cm] = -1.0
    return Pi


def build_T(jd, cls, pairing=None):
    """Antilinear symmetry squaring to ``-1``.

    Real eigenvalues contribute ``|psi_a> K <phi_b| - |psi_b> K <phi_a|`` for
    each paired block ``(a, b)``; conjugate pairs contribute
    ``|psi_-> K <phi_+| - |psi_+> K <phi_-|``.
    """
    if not cls.condition_i_holds:
        raise PairingUnavailable("spectrum is not real-or-conjugate-paired with matching blocks")
    if pairing is None:
        pairing = kramers_pairing(jd, cls)
    Pi = _T_permutation(jd, cls, pairing)
    if np.any(np.abs(Pi).sum(axis=0) != 1):
        raise PairingUnavailable("pairing does not cover every chain vector exactly once")
    return AntilinearOp(jd.P @ Pi @ jd.Q.T)


@dataclass(frozen=True, eq=False)
class KramersVerdict:
    pairing_ok: bool
    offending_blocks: tuple  # ((E, p, k), ...) with k odd
    T: object = None
    square_residual: float = float("nan")  # ||T^2 + 1|| / max(1, ||L||^2)
    commutation_residual: float = float("nan")


def kramers_check(jd, cls, tol=None):
    """Even-pairing test for the blocks at every real eigenvalue, plus ``T`` when it exists."""
    tol = tol or jd.tol
    offending = []
    for n in cls.real_indices:
        counts = defaultdict(int)
        for b in jd.blocks_at(n):
            counts[b.block_size] += 1
        offending.extend(
            (complex(jd.eigenvalues[n]), p, k) for p, k in sorted(counts.items()) if k % 2
        )
    pairing_ok = not offending
    if not (pairing_ok and cls.condition_i_holds):
        return KramersVerdict(pairing_ok, tuple(offending))
    T = build_T(jd, cls)
    check = verify_symmetry(jd.H, T, tol)
    return KramersVerdict(
        True,
        (),
        T,
        op_norm(T.square() + np.eye(jd.N)) / _square_scale(T.linear_part),
        check.commutation_residual,
    )


def _rank_jump(B, new, rank_tol):
    C = np.column_stack([B, new]) if B.shape[1] else new
    s = la.svdvals(C)
    return int(np.sum(s > rank_tol * s[0])) == C.shape[1], C


def quaternionic_defect(X):
    """Largest entrywise violation of ``[[Z1, Z2], [-conj(Z2), conj(Z1)]]``."""
    X = np.asarray(X)
    m = X.shape[0] // 2
    Z1, Z2 = X[:m, :m], X[:m, m:]
    Z3, Z4 = X[m:, :m], X[m:, m:]
    return float(max(np.abs(Z3 + np.conj(Z2)).max(), np.abs(Z4 - np.conj(Z1)).max()))


def symplectic_form(H, T, jd, tol=None):
    """``H`` in the symmetry-adapted basis ``{psi_n, T psi_n}``.

    Whole Jordan chains are added to ``{psi_n}`` greedily, real and
    upper-half-plane eigenvalues first, as long as the chains together with
    their images under ``T`` stay linearly independent.

    Returns
    -------
    ndarray, shape (N, N)
        Block matrix ``[[Z1, Z2], [-conj(Z2), conj(Z1)]]``.
    """
    tol = tol or jd.tol
    H = np.asarray(H, dtype=np.complex128)
    N = H.shape[0]
    check = verify_symmetry(H, T, tol)
    if N % 2 or not check.commutes or check.square_kind != MINUS_ONE:
        raise NotTSymmetric(
            f"need [H, T] = 0 and T^2 = -1 on an even-dimensional space "
            f"(commutation {check.commutation_residual:.3e}, square {check.square_kind})"
        )
    order = sorted(
        range(len(jd.blocks)),
        key=lambda j: (jd.eigenvalues[jd.blocks[j].eigenvalue_index].imag < -tol.realness_tol * jd.scale, j),
    )
    X = np.zeros((N, 0), dtype=np.complex128)
    full = np.zeros((N, 0), dtype=np.complex128)
    for j in order:
        chain = jd.P[:, jd.block_columns(j)]
        ok, cand = _rank_jump(full, np.column_stack([chain, T(chain)]), tol.rank_tol)
        if ok:
            X = np.column_stack([X, chain])
            full = cand
        if X.shape[1] == N // 2:
            break
    if X.shape[1] != N // 2:
        raise NotTSymmetric("could not assemble a symmetry-adapted basis")
    B = np.column_stack([X, T(X)])
    form = la.solve(B, H @ B)
    defect = quaternionic_defect(form)
    if defect > tol.residual_tol * max(1.0, op_norm(form)):
        raise NotTSymmetric(f"quaternionic block identity violated by {defect:.3e}")
    return form


@dataclass(frozen=True)
class FalsifierResult:
    samples: int
    commuting_found: int
    min_commutation_residual: float
    structural: bool  # odd dimension: no antilinear map squares to -1 at all


def kramers_falsifier(H, rng, samples=500, tol=DEFAULT_TOL):
    """Search for an antilinear ``T`` with ``T^2 = -1`` commuting with ``H``.

    Candidates are ``M J conj(M)^{-1}`` for Gaussian ``M`` and the symplectic
    unit ``J``.  Finding none is evidence, not proof.
    """
    H = np.asarray(H, dtype=np.complex128)
    N = H.shape[0]
    if N % 2:
        return FalsifierResult(0, 0, float("inf"), True)
    m = N // 2
    J = np.block([[np.zeros((m, m)), np.eye(m)], [-np.eye(m), np.zeros((m, m))]])
    found, best = 0, float("inf")
    for _ in range(samples):
        M = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        L = M @ J @ la.inv(np.conj(M))
        res = AntilinearOp(L).commutator_residual(H)
        best = min(best, res)
        found += res <= tol.residual_tol
    return FalsifierResult(samples, found, best, False)
