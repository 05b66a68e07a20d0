import numpy as np
import pytest
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st

from phjordan.exceptions import AmbiguousRealness, ConditionViolated, InputError, NearSingular
from phjordan.generators import from_jordan_spec
from phjordan.jordan import jordan_decompose
from phjordan.numfield import DEFAULT_TOL, adjoint, op_norm
from phjordan.pseudoherm import (
    build_eta,
    classify_spectrum,
    eta_inner,
    hermitian_basis,
    inertia,
    intertwiner_space,
    metric_residual,
    oracle_verdict,
    pseudonorm,
    sample_invertible,
)

TOL = DEFAULT_TOL.residual_tol
A = np.array([[1.0, 1.0], [0.0, 1.0]])


def classify(H):
    jd = jordan_decompose(H)
    return jd, classify_spectrum(jd)


def test_classify_real():
    _, cls = classify(np.diag([1.0, 2.0]))
    assert cls.all_real and cls.condition_i_holds
    assert [E for _, E, _ in cls.real_eigs] == [1, 2]


def test_classify_conjugate_pair():
    _, cls = classify(np.array([[0, 1j], [2j, 0]]))
    assert not cls.real_eigs and not cls.unpaired_complex
    (pair,) = cls.paired_eigs
    assert abs(pair.E_plus - 1j * np.sqrt(2)) < 1e-12
    assert abs(pair.E_minus + 1j * np.sqrt(2)) < 1e-12
    assert pair.jordan_match and cls.condition_i_holds


def test_classify_unpaired():
    _, cls = classify(np.array([[1j]]))
    assert len(cls.unpaired_complex) == 1
    assert not cls.condition_i_holds


def test_classify_mismatched_jordan_structure():
    H = la.block_diag([[1j, 1], [0, 1j]], [[-1j]], [[-1j]])
    _, cls = classify(H)
    (pair,) = cls.paired_eigs
    assert pair.segre_plus == (2,) and pair.segre_minus == (1, 1)
    assert not pair.jordan_match and not cls.condition_i_holds


def test_ambiguous_realness():
    thr = DEFAULT_TOL.realness_tol
    H = np.array([[1.0 + 1j * thr]])
    jd = jordan_decompose(H)
    with pytest.raises(AmbiguousRealness):
        classify_spectrum(jd)


def test_build_eta_on_jordan_block():
    jd, cls = classify(A)
    con, met = build_eta(jd, cls)
    assert np.array_equal(jd.P, np.eye(2))
    assert np.array_equal(con.U, np.eye(2))
    assert np.array_equal(con.V, [[0, 1], [1, 0]])
    assert np.allclose(met.eta, [[0, 1], [1, 0]], atol=1e-15)
    assert met.inertia == (1, 1) and not met.definite


def test_build_eta_hermitian_diagonal():
    jd, cls = classify(np.diag([1.0, 2.0]))
    con, met = build_eta(jd, cls)
    assert np.array_equal(con.U, np.eye(2)) and np.array_equal(con.V, np.eye(2))
    assert np.allclose(met.eta, con.S @ adjoint(con.S))
    assert met.inertia == (2, 0) and met.definite


def test_build_eta_mixed_fixture(mixed6):
    H, jd, cls = mixed6
    con, met = build_eta(jd, cls)
    assert met.residual <= TOL
    assert op_norm(met.eta - adjoint(met.eta)) <= TOL * op_norm(met.eta)
    n_pos, n_neg = inertia(met.eta)
    assert n_pos >= 1 and n_neg >= 1
    eye = np.eye(jd.N)
    for X in (con.U, con.V):
        assert op_norm(X - adjoint(X)) <= TOL and op_norm(X @ X - eye) <= TOL
    assert op_norm(con.U @ con.V - con.V @ con.U) <= TOL
    assert np.allclose(con.eta_tilde, con.U @ con.V)
    assert met.certified()


def test_build_eta_requires_condition_i():
    jd, cls = classify(np.array([[1j]]))
    with pytest.raises(ConditionViolated):
        build_eta(jd, cls)


def test_U_and_V_corollaries(ensemble):
    for inst, jd, cls in ensemble:
        if not cls.condition_i_holds:
            continue
        con, _ = build_eta(jd, cls)
        eye = np.eye(jd.N)
        assert np.array_equal(con.U, eye) == cls.all_real
        assert np.array_equal(con.V, eye) == jd.is_diagonalizable


def test_inertia_examples():
    assert inertia(np.array([[0.0, 1.0], [1.0, 0.0]])) == (1, 1)
    assert inertia(np.eye(4)) == (4, 0)


def test_inertia_errors():
    with pytest.raises(NearSingular):
        inertia(np.diag([1.0, 1e-12]))
    with pytest.raises(InputError):
        inertia(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("seed", range(10))
def test_inertia_congruence_invariance(seed):
    rng = np.random.default_rng(seed)
    d = rng.choice([-1.0, 1.0], size=5) * rng.uniform(0.5, 2.0, size=5)
    W = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    Qm, _ = np.linalg.qr(W)
    eta = Qm @ np.diag(d) @ adjoint(Qm)
    R = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)) + 3 * np.eye(5)
    expected = (int((d > 0).sum()), int((d < 0).sum()))
    assert inertia(eta) == expected
    assert inertia(adjoint(R) @ eta @ R) == expected


def test_eta_inner_standard():
    x = np.array([1 + 1j, 2.0])
    y = np.array([0.5, -1j])
    assert eta_inner(np.eye(2), x, y) == pytest.approx(np.vdot(x, y))


def test_pseudonorm_signs():
    eta = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert pseudonorm(eta, np.array([1.0, 1.0]) / np.sqrt(2)) == pytest.approx(1.0)
    assert pseudonorm(eta, np.array([1.0, -1.0]) / np.sqrt(2)) == pytest.approx(-1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pseudonorm_is_real(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    eta = X + adjoint(X)
    x = rng.normal(size=4) + 1j * rng.normal(size=4)
    val = pseudonorm(eta, x)
    assert abs(val.imag) <= TOL * op_norm(eta) * np.vdot(x, x).real


def test_hermitian_basis_is_orthonormal():
    basis = hermitian_basis(3)
    assert len(basis) == 9
    G = np.array([[np.vdot(a, b).real for b in basis] for a in basis])
    assert np.allclose(G, np.eye(9))
    assert all(np.array_equal(B, adjoint(B)) for B in basis)


@pytest.mark.parametrize("E", [1.0, -0.5, 3.0])
def test_intertwiner_space_of_jordan_block(E):
    H = np.array([[E, 1.0], [0.0, E]])
    basis = intertwiner_space(H)
    assert len(basis) == 2
    target = [np.array([[0, 1], [1, 0]]), np.array([[0, 0], [0, 1]])]
    # same real span: every target lies in span(basis) and vice versa
    B = np.column_stack([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis])
    T = np.column_stack([np.concatenate([t.real.ravel(), np.zeros(4)]) for t in target])
    assert np.linalg.matrix_rank(np.column_stack([B, T]), tol=1e-9) == 2
    for b in basis:
        assert op_norm(b - adjoint(b)) <= TOL
        assert op_norm(b @ H - H.T @ b) <= TOL


def test_intertwiner_space_unpaired():
    assert intertwiner_space(np.array([[1j]])) == []
    verdict = oracle_verdict(np.array([[1j]]))
    assert not verdict.pseudo_hermitian and verdict.dimension == 0


def test_intertwiner_full_space_contains_hermitian_space():
    H = np.diag([1.0, 2.0, 2.0])
    herm = intertwiner_space(H)
    full = intertwiner_space(H, hermitian_only=False)
    assert len(herm) == 5 and len(full) == 5


def test_sample_invertible_empty():
    found, best = sample_invertible([], np.random.default_rng(0))
    assert found == [] and best == 0.0


def test_metric_residual_detects_wrong_eta():
    assert metric_residual(np.eye(2), A) > 0.1
    assert metric_residual(np.array([[0.0, 1.0], [1.0, 0.0]]), A) <= TOL


@pytest.mark.parametrize("seed", range(8))
def test_oracle_agrees_on_pairs(seed):
    rng = np.random.default_rng(seed)
    good, _, _ = from_jordan_spec(((2 + 1j, 1), (2 - 1j, 1), (0.5, 2)), rng, cond=30)
    bad, _, _ = from_jordan_spec(((2 + 1j, 2), (2 - 1j, 1), (2 - 1j, 1)), rng, cond=30)
    assert oracle_verdict(good, rng=rng).pseudo_hermitian
    assert not oracle_verdict(bad, rng=rng).pseudo_hermitian


def test_weak_equals_strong(ensemble):
    rng = np.random.default_rng(5)
    for inst, jd, cls in ensemble[:120]:
        strong = oracle_verdict(inst.H, rng=rng).pseudo_hermitian
        weak = oracle_verdict(inst.H, rng=rng, hermitian_only=False).pseudo_hermitian
        assert strong == weak == cls.condition_i_holds
