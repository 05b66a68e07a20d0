import numpy as np
import pytest
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import J2
from phjordan.antilinear import AntilinearOp
from phjordan.antisym import (
    MINUS_ONE,
    OTHER,
    PLUS_ONE,
    build_involutory_symmetry,
    build_T,
    kramers_check,
    kramers_falsifier,
    kramers_pairing,
    quaternionic_defect,
    realify,
    symmetry_to_eta,
    symplectic_form,
    verify_symmetry,
)
from phjordan.exceptions import (
    ConditionViolated,
    NotASymmetry,
    NotInvolutory,
    NotTSymmetric,
    PairingUnavailable,
)
from phjordan.generators import from_jordan_spec, kramers_instance, quaternionic_matrix
from phjordan.jordan import jordan_decompose
from phjordan.numfield import DEFAULT_TOL, adjoint, op_norm
from phjordan.pseudoherm import classify_spectrum, inertia, metric_residual

TOL = DEFAULT_TOL.residual_tol
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)
SYMPLECTIC = np.array([[0, 1], [-1, 0]], dtype=complex)
HEFF0 = np.array([[1, 1j], [0, 1]])


def setup(H):
    jd = jordan_decompose(H)
    return jd, classify_spectrum(jd)


def cmat(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.fixture(scope="module")
def mixed4():
    H, _, _ = from_jordan_spec(((0.5, 2), (2 + 1j, 1), (2 - 1j, 1)), np.random.default_rng(4), cond=40)
    return (H,) + setup(H)


# antilinear algebra


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_composition_matches_action(seed):
    rng = np.random.default_rng(seed)
    A, B = AntilinearOp(cmat(rng, 3)), AntilinearOp(cmat(rng, 3))
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    # two antilinear maps compose to a linear one
    assert np.allclose(A.compose(B) @ v, A(B(v)))
    assert np.allclose(A.compose(B), A.L @ np.conj(B.L))
    assert np.allclose(A.square(), A.L @ np.conj(A.L))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_antilinearity(seed):
    rng = np.random.default_rng(seed)
    A = AntilinearOp(cmat(rng, 3))
    x, y = cmat(rng, 3)[0], cmat(rng, 3)[1]
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    assert np.allclose(A(a * x + b * y), np.conj(a) * A(x) + np.conj(b) * A(y))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_commutation_criterion(seed):
    rng = np.random.default_rng(seed)
    H = cmat(rng, 3)
    A = AntilinearOp(cmat(rng, 3))
    v = cmat(rng, 3)[0]
    direct = np.linalg.norm(H @ A(v) - A(H @ v))
    # [H, LK] = 0 iff H L = L conj(H); a generic pair fails both ways
    assert (A.commutator_residual(H) <= 1e-12) == (direct <= 1e-12 * np.linalg.norm(v))


# verify_symmetry


def test_real_H_plain_conjugation():
    H = np.random.default_rng(0).normal(size=(4, 4))
    check = verify_symmetry(H, AntilinearOp(np.eye(4)))
    assert tuple(check) == (True, PLUS_ONE)


def test_i_times_identity_squares_to_plus_one():
    assert verify_symmetry(np.eye(2), AntilinearOp(1j * np.eye(2))).square_kind == PLUS_ONE


def test_symplectic_unit_squares_to_minus_one():
    H = np.diag([2.0, 2.0])
    assert tuple(verify_symmetry(H, AntilinearOp(SYMPLECTIC))) == (True, MINUS_ONE)
    H = np.diag([1.0, 2.0])
    assert tuple(verify_symmetry(H, AntilinearOp(SYMPLECTIC))) == (False, MINUS_ONE)


def test_other_square_kind():
    assert verify_symmetry(np.eye(2), AntilinearOp(2 * np.eye(2))).square_kind == OTHER


def test_heff_candidates_do_not_commute():
    rng = np.random.default_rng(1)
    for _ in range(20):
        M = cmat(rng, 2)
        L = M @ SYMPLECTIC @ la.inv(np.conj(M))
        commutes, kind = verify_symmetry(HEFF0, AntilinearOp(L))
        assert kind == MINUS_ONE and not commutes


# involutory symmetry and realification


def test_involutory_symmetry_real_diagonal():
    jd, cls = setup(np.diag([1.0, -2.0, 3.0]))
    assert np.allclose(build_involutory_symmetry(jd, cls).L, np.eye(3), atol=1e-15)


def test_involutory_symmetry_conjugate_pair():
    H = np.diag([1j, -1j])
    jd, cls = setup(H)
    omega = build_involutory_symmetry(jd, cls)
    assert np.allclose(omega.L, SWAP)
    assert tuple(verify_symmetry(H, omega)) == (True, PLUS_ONE)


def test_involutory_symmetry_mixed(mixed6):
    H, jd, cls = mixed6
    omega = build_involutory_symmetry(jd, cls)
    check = verify_symmetry(H, omega)
    assert check.commutes and check.square_kind == PLUS_ONE
    assert check.commutation_residual <= TOL and check.square_residual <= TOL


def test_involutory_symmetry_requires_condition_i():
    jd, cls = setup(np.array([[1j]]))
    with pytest.raises(ConditionViolated):
        build_involutory_symmetry(jd, cls)


def test_symmetry_to_eta_real_diagonal():
    H = np.diag([1.0, 2.0])
    jd, _ = setup(H)
    assert np.allclose(symmetry_to_eta(H, AntilinearOp(np.eye(2)), jd), np.eye(2))


def test_symmetry_to_eta_jordan_block():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    jd, _ = setup(A)
    eta = symmetry_to_eta(A, AntilinearOp(np.eye(2)), jd)
    assert np.allclose(eta, SWAP)
    assert metric_residual(eta, A) <= TOL


def test_symmetry_to_eta_mixed(mixed4):
    H, jd, cls = mixed4
    eta = symmetry_to_eta(H, build_involutory_symmetry(jd, cls), jd)
    assert metric_residual(eta, H) <= TOL


def test_symmetry_to_eta_rejects_non_symmetry():
    H = np.diag([1j, 2.0])
    jd, _ = setup(H)
    with pytest.raises(NotASymmetry):
        symmetry_to_eta(H, AntilinearOp(np.eye(2)), jd)


@pytest.mark.parametrize("c", [1, 1j, 1 + 1j, 2 - 1j, 0.3 + 0.7j])
def test_realify_determinant_formula(c):
    M = c * SWAP + np.conj(c) * np.eye(2)
    assert np.linalg.det(M) == pytest.approx(np.conj(c) ** 2 - c**2)


def test_realify_swap_needs_complex_c():
    assert abs(np.linalg.det(1 * SWAP + np.eye(2))) < 1e-15
    assert abs(np.linalg.det(1j * SWAP - 1j * np.eye(2))) < 1e-15
    assert np.linalg.det((1 + 1j) * SWAP + (1 - 1j) * np.eye(2)) == pytest.approx(-4j)


def test_realify_identity():
    H = np.random.default_rng(3).normal(size=(3, 3))
    res = realify(AntilinearOp(np.eye(3)), H)
    assert np.allclose(res.M, 2 * np.eye(3))
    assert res.max_imag == 0.0 and np.allclose(res.realified, H)


def test_realify_conjugate_pair():
    H = np.diag([1j, -1j])
    res = realify(AntilinearOp(SWAP), H)
    assert res.max_imag <= 1e-10
    assert abs(np.linalg.det(res.M)) > 0.1
    assert res.factor_residual <= TOL
    ev = np.sort_complex(la.eigvals(res.realified.real))
    assert np.allclose(ev, [-1j, 1j])


def test_realify_mixed(mixed6):
    H, jd, cls = mixed6
    res = realify(build_involutory_symmetry(jd, cls), H)
    assert res.max_imag <= TOL * op_norm(H)
    assert res.factor_residual <= TOL


def test_realify_errors():
    with pytest.raises(NotInvolutory):
        realify(AntilinearOp(SYMPLECTIC), np.eye(2))
    with pytest.raises(NotASymmetry):
        realify(AntilinearOp(np.eye(2)), np.diag([1j, 1.0]))


# Kramers


def test_kramers_two_equal_blocks():
    H = la.block_diag(J2(1), J2(1))
    jd, cls = setup(H)
    v = kramers_check(jd, cls)
    assert v.pairing_ok and v.T is not None
    assert op_norm(v.T.square() + np.eye(4)) <= TOL
    assert v.T.commutator_residual(H) <= TOL


def test_kramers_heff_fails():
    jd, cls = setup(HEFF0)
    v = kramers_check(jd, cls)
    assert not v.pairing_ok and v.T is None
    ((E, p, k),) = v.offending_blocks
    assert E == 1 and p == 2 and k == 1
    with pytest.raises(PairingUnavailable):
        kramers_pairing(jd, cls)


def test_kramers_conjugate_pair():
    H = np.diag([1j, -1j])
    jd, cls = setup(H)
    v = kramers_check(jd, cls)
    assert v.pairing_ok and not v.offending_blocks
    assert np.allclose(v.T.L, [[0, -1], [1, 0]])
    left, right = H @ v.T.L, v.T.L @ np.conj(H)
    assert np.allclose(left, [[0, -1j], [-1j, 0]]) and np.allclose(right, left)


def test_kramers_degenerate_diagonal():
    jd, cls = setup(np.diag([2.0, 2.0]))
    T = build_T(jd, cls)
    assert np.allclose(T.square(), -np.eye(2))
    # the opposite sign convention to [[0, -1], [1, 0]]; both square to -1
    assert np.allclose(T.L, [[0, 1], [-1, 0]])


def test_kramers_mixed_real_odd():
    jd, cls = setup(np.diag([1.0, 1.0, 2.0, 1j, -1j]))
    v = kramers_check(jd, cls)
    assert not v.pairing_ok
    assert [(E, p, k) for E, p, k in v.offending_blocks] == [(2, 1, 1)]


def test_kramers_needs_condition_i():
    jd, cls = setup(np.diag([1j, 1j]))
    v = kramers_check(jd, cls)
    assert v.pairing_ok and v.T is None


@pytest.mark.parametrize("seed", range(10))
def test_kramers_generated_instances(seed):
    rng = np.random.default_rng(seed)
    H, T0, spec = kramers_instance(rng)
    assert AntilinearOp(T0).commutator_residual(H) <= 1e-10
    jd, cls = setup(H)
    v = kramers_check(jd, cls)
    assert v.pairing_ok and v.T is not None
    assert v.square_residual <= TOL and v.commutation_residual <= TOL


def test_falsifier_on_heff():
    res = kramers_falsifier(HEFF0, np.random.default_rng(0), samples=500)
    assert res.commuting_found == 0 and res.min_commutation_residual > 1e-3


def test_falsifier_finds_symmetry_of_degenerate_operator():
    res = kramers_falsifier(np.eye(2), np.random.default_rng(0), samples=10)
    assert res.commuting_found == 10


def test_falsifier_odd_dimension():
    assert kramers_falsifier(np.eye(3), np.random.default_rng(0)).structural


# symplectic form


def test_symplectic_form_two_equal_blocks():
    H = la.block_diag(J2(1), J2(1))
    jd, cls = setup(H)
    form = symplectic_form(H, build_T(jd, cls), jd)
    assert np.allclose(form[:2, :2], J2(1), atol=1e-12)
    assert np.allclose(form[:2, 2:], 0, atol=1e-12)
    assert quaternionic_defect(form) <= TOL


def test_symplectic_form_conjugate_pair():
    H = np.diag([1j, -1j])
    jd, cls = setup(H)
    form = symplectic_form(H, build_T(jd, cls), jd)
    assert np.allclose(form, np.diag([1j, -1j]))


def test_symplectic_form_degenerate_diagonal():
    H = np.diag([2.0, 2.0])
    jd, cls = setup(H)
    assert np.allclose(symplectic_form(H, build_T(jd, cls), jd), 2 * np.eye(2))


@pytest.mark.parametrize("seed", range(10))
def test_symplectic_form_generated(seed):
    H, _, _ = kramers_instance(np.random.default_rng(seed))
    jd, cls = setup(H)
    form = symplectic_form(H, build_T(jd, cls), jd)
    assert quaternionic_defect(form) <= TOL * max(1.0, op_norm(form))
    for k in (1, 2, 3):
        t = np.trace(np.linalg.matrix_power(H, k))
        assert abs(np.trace(np.linalg.matrix_power(form, k)) - t) <= 1e-8 * op_norm(H) ** k * H.shape[0]


def test_symplectic_form_rejects_non_symmetry():
    H = np.diag([1.0, 2.0])
    jd, _ = setup(H)
    with pytest.raises(NotTSymmetric):
        symplectic_form(H, AntilinearOp(SYMPLECTIC), jd)


def test_quaternionic_defect():
    rng = np.random.default_rng(0)
    X = quaternionic_matrix(cmat(rng, 2), cmat(rng, 2))
    assert quaternionic_defect(X) == 0.0
    X[3, 3] += 1e-3
    assert quaternionic_defect(X) == pytest.approx(1e-3)


def test_metric_from_symmetry_is_indefinite_for_jordan_block():
    A = np.array([[2.0, 1.0], [0.0, 2.0]])
    jd, _ = setup(A)
    eta = symmetry_to_eta(A, AntilinearOp(np.eye(2)), jd)
    assert inertia(eta) == (1, 1)
