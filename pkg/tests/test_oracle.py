import json

import numpy as np
import pytest

from egfp.blockmat import MatrixPolynomial
from egfp.oracle import (Tolerances, companion_eigs, convolution_matrix, generalized_eigs, is_regular,
                         load_tolerances, match_eigenvalues, minimal_basis, minimal_indices, minimal_indices_pencil,
                         null_basis, subspace_angle, transfer_eval)


def test_scalar_quadratic_roots():
    P = MatrixPolynomial([np.array([[-1.0]]), np.array([[0.0]]), np.array([[1.0]])])
    r = companion_eigs(P)
    assert np.allclose(np.sort(r.finite.real), [-1, 1])
    assert r.n_infinite == 0


def test_singular_leading_coefficient_gives_infinite_eigenvalue():
    P = MatrixPolynomial([np.eye(2), np.eye(2), np.diag([1.0, 0.0])])
    r = companion_eigs(P)
    assert r.n_infinite == 1 and len(r.finite) == 3


def test_eigenvalue_conditions_are_finite_for_simple_eigenvalues(rng):
    r = companion_eigs(MatrixPolynomial.random(3, 2, rng))
    assert np.all(np.isfinite(r.cond)) and r.max_cond >= 1


def test_match_eigenvalues_handles_permutation():
    a = np.array([1, 2j, -3])
    err, x, y = match_eigenvalues(a, a[::-1] * (1 + 1e-12))
    assert err < 1e-11 and np.allclose(x, y)
    assert match_eigenvalues([1], [1, 2])[0] == np.inf


@pytest.mark.parametrize("M,dim", [(np.eye(3), 0), (np.zeros((2, 3)), 3), (np.array([[1.0, 1.0]]), 1),
                                   (np.array([[1.0, 2.0], [2.0, 4.0]]), 1)])
def test_null_basis_dimensions(M, dim):
    K = null_basis(M)
    assert K.shape[1] == dim
    if dim:
        assert np.allclose(M @ K, 0)
        assert np.allclose(K.conj().T @ K, np.eye(dim))


def _kronecker_block(eps):
    # L_eps(lam) = lam [I 0] - [0 I], eps x (eps+1)
    L1 = np.hstack([np.eye(eps), np.zeros((eps, 1))])
    L0 = np.hstack([np.zeros((eps, 1)), np.eye(eps)])
    return L1, L0


@pytest.mark.parametrize("eps", [1, 2, 3])
def test_minimal_index_of_kronecker_block(eps):
    L1, L0 = _kronecker_block(eps)
    assert minimal_indices_pencil(L1, L0) == ([eps], [])
    assert minimal_indices_pencil(L1.T, L0.T) == ([], [eps])


def test_minimal_indices_of_direct_sum():
    L1a, L0a = _kronecker_block(1)
    L1b, L0b = _kronecker_block(2)
    L1 = np.zeros((3, 5))
    L0 = np.zeros((3, 5))
    L1[:1, :2], L0[:1, :2] = L1a, L0a
    L1[1:, 2:], L0[1:, 2:] = L1b, L0b
    assert minimal_indices_pencil(L1, L0) == ([1, 2], [])


def test_minimal_basis_vectors_annihilate(rng):
    L1, L0 = _kronecker_block(2)
    (v,) = minimal_basis([-L0, L1])
    assert v.shape[0] == 3
    for z in (0.3, -1.2 + 0.5j):
        x = sum(v[k] * z ** k for k in range(v.shape[0]))
        assert np.allclose((z * L1 - L0) @ x, 0)


def test_regular_polynomial_has_no_minimal_indices(rng):
    P = MatrixPolynomial.random(2, 3, rng)
    assert is_regular(P)
    assert minimal_indices(P) == ([], [])


def test_convolution_matrix_shape():
    T = convolution_matrix([np.eye(2), np.eye(2)], 2)
    assert T.shape == (8, 6)


def test_subspace_angle():
    U = np.array([[1.0], [0.0]])
    assert subspace_angle(U, 3 * U) < 1e-12
    assert abs(subspace_angle(U, np.array([[0.0], [1.0]])) - np.pi / 2) < 1e-12


def test_transfer_eval_is_schur_complement(rng):
    from egfp.rational import random_realization, system_matrix
    R = random_realization(2, 2, 3, rng)
    lam = 0.4 + 0.3j
    S = system_matrix(R)(lam)
    n = R.n
    schur = S[:n, :n] - S[:n, n:] @ np.linalg.solve(S[n:, n:], S[n:, :n])
    assert np.allclose(transfer_eval(R.P, R.A, R.E, R.B, R.C, lam), schur)
    assert np.allclose(transfer_eval(R.P, np.zeros((0, 0)), None, None, None, lam), R.P(lam))


def test_generalized_eigs_flags_singular_pencil():
    A = np.diag([1.0, 0.0])
    B = np.diag([1.0, 0.0])
    assert generalized_eigs(A, B).singular


def test_tolerances_from_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "tol.json"
    cfg.write_text(json.dumps({"residual": 1e-6}))
    monkeypatch.setenv("EGFP_TOL_CONFIG", str(cfg))
    tol = load_tolerances()
    assert tol.residual == 1e-6 and tol.eig_rel == Tolerances().eig_rel
    assert load_tolerances(eig_rel=1e-3).eig_rel == 1e-3
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        load_tolerances()
