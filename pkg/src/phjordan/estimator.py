"""Estimator-style front end composing the whole analysis pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .antisym import build_involutory_symmetry, kramers_check, realify, symplectic_form
from .exceptions import ConditionViolated, DimensionError, NotTSymmetric
from .jordan import jordan_decompose
from .numfield import TolerancePolicy, check_operator, solve
from .pseudoherm import build_eta, classify_spectrum, oracle_verdict

__all__ = ["PseudoHermitianAnalyzer"]


class PseudoHermitianAnalyzer(TransformerMixin, BaseEstimator):
    """Analyze a single operator for pseudo-Hermiticity.

    ``fit`` takes the operator itself (an ``(N, N)`` complex array) rather
    than a sample matrix.  ``transform`` maps state vectors, one per row, to
    coordinates in a basis where the fitted operator is real.

    Parameters
    ----------
    eig_cluster_tol, rank_tol, residual_tol, realness_tol : float
        See :class:`~phjordan.numfield.TolerancePolicy`.
    oracle_samples : int, default=50
        Random draws from the Hermitian intertwiner space.
    random_state : int, default=0
        Seed for the oracle sampling and the realification fallback.

    Attributes
    ----------
    jordan_ : JordanDecomposition
    classification_ : SpectralClassification
    oracle_ : OracleVerdict
    is_pseudo_hermitian_ : bool
        Structural verdict from the Jordan ledger.
    eta_construction_, metric_ : EtaConstruction, Metric or None
    symmetry_ : AntilinearOp or None
        Involutory antilinear symmetry.
    realification_ : RealificationResult or None
    kramers_ : KramersVerdict
    symplectic_form_ : ndarray or None
    n_features_in_ : int
    """

    def __init__(
        self,
        eig_cluster_tol=1e-6,
        rank_tol=1e-8,
        residual_tol=1e-9,
        realness_tol=1e-8,
        oracle_samples=50,
        random_state=0,
    ):
        self.eig_cluster_tol = eig_cluster_tol
        self.rank_tol = rank_tol
        self.residual_tol = residual_tol
        self.realness_tol = realness_tol
        self.oracle_samples = oracle_samples
        self.random_state = random_state

    @property
    def tol_(self):
        return TolerancePolicy(
            eig_cluster_tol=self.eig_cluster_tol,
            rank_tol=self.rank_tol,
            residual_tol=self.residual_tol,
            realness_tol=self.realness_tol,
        )

    def fit(self, X, y=None):
        H = check_operator(X)
        tol = self.tol_
        rng = np.random.default_rng(self.random_state)
        self.n_features_in_ = H.shape[0]
        self.jordan_ = jd = jordan_decompose(H, tol)
        self.classification_ = cls = classify_spectrum(jd, tol)
        self.oracle_ = oracle_verdict(H, tol, rng, tries=self.oracle_samples)
        self.is_pseudo_hermitian_ = cls.condition_i_holds

        self.eta_construction_ = self.metric_ = None
        self.symmetry_ = self.realification_ = None
        if cls.condition_i_holds:
            self.eta_construction_, self.metric_ = build_eta(jd, cls, tol)
            self.symmetry_ = build_involutory_symmetry(jd, cls)
            self.realification_ = realify(self.symmetry_, H, tol, rng)

        self.kramers_ = kramers_check(jd, cls, tol)
        self.symplectic_form_ = None
        if self.kramers_.T is not None:
            try:
                self.symplectic_form_ = symplectic_form(H, self.kramers_.T, jd, tol)
            except NotTSymmetric:
                self.symplectic_form_ = None
        return self

    def _frame(self):
        check_is_fitted(self, "jordan_")
        if self.realification_ is None:
            raise ConditionViolated("the fitted operator admits no real frame")
        return self.realification_.M

    def transform(self, X):
        M = self._frame()
        X = np.atleast_2d(np.asarray(X, dtype=np.complex128))
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"expected vectors of length {self.n_features_in_}, got shape {X.shape}"
            )
        return solve(M, X.T, self.tol_).T

    def inverse_transform(self, X):
        M = self._frame()
        X = np.atleast_2d(np.asarray(X, dtype=np.complex128))
        return (M @ X.T).T

    @property
    def realified_operator_(self):
        check_is_fitted(self, "jordan_")
        return None if self.realification_ is None else self.realification_.realified
