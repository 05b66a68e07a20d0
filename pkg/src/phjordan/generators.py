"""Random test operators with a prescribed Jordan structure.

Every instance is ``P0 @ J @ inv(P0)`` for a known Jordan matrix ``J`` and a
random similarity ``P0`` of controlled condition number, so the expected
verdicts are known without running any of the analysis code.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .jordan import jordan_block

__all__ = [
    "Instance",
    "random_unitary",
    "random_similarity",
    "from_jordan_spec",
    "random_ensemble",
    "quaternionic_matrix",
    "random_quaternionic_similarity",
    "kramers_instance",
]


@dataclass(frozen=True, eq=False)
class Instance:
    H: np.ndarray
    spec: tuple  # ((eigenvalue, block_size), ...)
    kind: str
    condition_i: bool

    @property
    def diagonalizable(self):
        return all(p == 1 for _, p in self.spec)

    @property
    def real_spectrum(self):
        return all(e.imag == 0 for e, _ in self.spec)

    @property
    def definite_expected(self):
        return self.condition_i and self.diagonalizable and self.real_spectrum


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_similarity(n, rng, cond=10.0):
    """Random complex matrix with condition number exactly ``cond``."""
    s = np.logspace(0.0, np.log10(cond), n)
    rng.shuffle(s)
    return random_unitary(n, rng) @ np.diag(s) @ random_unitary(n, rng)


def from_jordan_spec(spec, rng, cond=10.0):
    """``(H, P0, J)`` with ``H = P0 J P0^{-1}``."""
    J = la.block_diag(*[jordan_block(e, p) for e, p in spec]).astype(np.complex128)
    P0 = random_similarity(J.shape[0], rng, cond)
    return P0 @ J @ la.inv(P0), P0, J


def _spec_condition_i(spec):
    by_value = {}
    for e, p in spec:
        by_value.setdefault(complex(e), []).append(p)
    for e, sizes in by_value.items():
        if e.imag != 0 and sorted(by_value.get(e.conjugate(), [])) != sorted(sizes):
            return False
    return True


_REAL_POOL = np.arange(-3.0, 3.5, 0.75)
_IMAG_POOL = np.array([0.75, 1.5, 2.25])


def _draw_values(rng, n_real, n_complex):
    reals = rng.choice(_REAL_POOL, size=n_real, replace=False)
    grid = [(x, y) for x in _REAL_POOL for y in _IMAG_POOL]
    picks = rng.choice(len(grid), size=n_complex, replace=False)
    comps = [complex(grid[j][0], grid[j][1]) for j in picks]
    return [complex(r) for r in reals], comps


def _random_spec(kind, rng, max_dim):
    """Jordan spec for one ensemble category (block sizes at most 2)."""
    while True:
        n_real = int(rng.integers(0, 3))
        n_cplx = int(rng.integers(0, 3))
        reals, comps = _draw_values(rng, n_real, n_cplx)
        spec = []
        defective = kind.endswith("defective")
        for e in reals:
            for _ in range(int(rng.integers(1, 3))):
                spec.append((e, int(rng.integers(1, 3)) if defective else 1))
        for e in comps:
            sizes = [int(rng.integers(1, 3)) if defective else 1 for _ in range(int(rng.integers(1, 3)))]
            for p in sizes:
                spec.append((e, p))
            if kind.startswith("paired"):
                spec.extend((e.conjugate(), p) for p in sizes)
            elif kind == "unpaired":
                pass
            elif kind == "mismatched":
                # same algebraic multiplicity on both sides, different Segre
                g = sum(sizes)
                if max(sizes) > 1:
                    partner = [1] * g
                elif g >= 2:
                    partner = [2] + [1] * (g - 2)
                else:
                    partner = []
                spec.extend((e.conjugate(), p) for p in partner)
        if kind in ("real-diagonalizable", "real-defective"):
            spec = [(e, p) for e, p in spec if e.imag == 0]
        dim = sum(p for _, p in spec)
        if dim == 0 or dim > max_dim:
            continue
        if kind == "real-defective" and all(p == 1 for _, p in spec):
            continue
        if kind == "paired-defective" and all(p == 1 for _, p in spec):
            continue
        if kind in ("unpaired", "mismatched") and _spec_condition_i(spec):
            continue
        if kind.startswith("paired") and not any(e.imag for e, _ in spec):
            continue
        return tuple(spec)


ENSEMBLE_KINDS = (
    "real-diagonalizable",
    "real-defective",
    "paired-diagonalizable",
    "paired-defective",
    "unpaired",
    "mismatched",
)


def random_ensemble(rng, count=240, max_dim=8, max_cond=1e3):
    """Mixed ensemble cycling through :data:`ENSEMBLE_KINDS`.

    Similarity condition numbers are log-uniform in ``[1, max_cond]``.
    """
    out = []
    for j in range(count):
        kind = ENSEMBLE_KINDS[j % len(ENSEMBLE_KINDS)]
        spec = _random_spec(kind, rng, max_dim)
        cond = float(10 ** rng.uniform(0.0, np.log10(max_cond)))
        H, _, _ = from_jordan_spec(spec, rng, cond)
        out.append(Instance(H, spec, kind, _spec_condition_i(spec)))
    return out


def quaternionic_matrix(Z1, Z2):
    """``[[Z1, Z2], [-conj(Z2), conj(Z1)]]``."""
    Z1 = np.asarray(Z1, dtype=np.complex128)
    Z2 = np.asarray(Z2, dtype=np.complex128)
    return np.block([[Z1, Z2], [-np.conj(Z2), np.conj(Z1)]])


def symplectic_unit(m):
    """``[[0, I], [-I, 0]]``; the antilinear map ``v -> S conj(v)`` squares to -1."""
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, eye], [-eye, zero]]).astype(np.complex128)


def random_quaternionic_similarity(m, rng, cond=10.0):
    """Quaternionic-form matrix (commutes with the symplectic conjugation)."""
    while True:
        W = quaternionic_matrix(
            rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)),
            rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)),
        )
        s = la.svdvals(W)
        if s[0] / s[-1] <= cond:
            return W


def kramers_instance(rng, max_half_dim=4, cond=100.0):
    """Operator commuting with an antilinear map squaring to -1.

    Built as ``M (W Jq W^{-1}) M^{-1}`` where ``Jq = Z ⊕ conj(Z)`` with ``Z`` a
    Jordan matrix, ``W`` quaternionic and ``M`` a generic similarity.  Returns
    ``(H, T_linear_part, spec_of_Z)``.
    """
    while True:
        n_real = int(rng.integers(0, 3))
        n_cplx = int(rng.integers(0, 2))
        reals, comps = _draw_values(rng, n_real, n_cplx)
        spec = [(e, int(rng.integers(1, 3))) for e in reals + comps]
        m = sum(p for _, p in spec)
        if 1 <= m <= max_half_dim:
            break
    Z = la.block_diag(*[jordan_block(e, p) for e, p in spec]).astype(np.complex128)
    Hq = quaternionic_matrix(Z, np.zeros_like(Z))
    W = random_quaternionic_similarity(m, rng, cond=cond)
    Hq = W @ Hq @ la.inv(W)
    M = random_similarity(2 * m, rng, cond=cond)
    H = M @ Hq @ la.inv(M)
    T = M @ symplectic_unit(m) @ la.inv(np.conj(M))
    return H, T, tuple(spec)
