import warnings

import numpy as np
import pytest

from egfp.blockmat import MatrixPolynomial
from egfp.golden import FIXTURES
from egfp.oracle import generalized_eigs, minimal_indices, minimal_indices_pencil
from egfp.pencils import EgfpSpec, build, random_spec
from egfp.recovery import (NotApplicableError, RecoveryWarning, SingularCoefficientError, left_minimal_selector,
                           left_selector, minimal_index_shift, recover_eigenvectors, recover_infinite_eigenvectors,
                           recover_minimal_bases, recover_minimal_indices, right_infinity_selector,
                           right_minimal_selector, right_selector)
from egfp.suites import singular_polynomial
from egfp.tuples import IndexTuple

T = IndexTuple.of


def _residual(P, mu, X, side):
    M = P(mu) if side == "right" else P(mu).T
    scale = sum(abs(mu) ** j * np.linalg.norm(c, 2) for j, c in enumerate(P.coeffs))
    return np.linalg.norm(M @ X) / (scale * np.linalg.norm(X))


@pytest.mark.parametrize("m", [2, 3, 5])
def test_companion_selectors(m):
    spec = EgfpSpec(m, IndexTuple(range(m - 1, -1, -1)), T(-m))
    assert right_selector(spec).block == m and right_selector(spec).premult is None
    assert left_selector(spec).block == 1 and left_selector(spec).premult is None


@pytest.mark.parametrize("name,rb,rpre,lb,lpre", [
    ("recovery-m6", 4, None, 5, None),
    ("recovery-m5", 2, None, 5, None),
    ("not-operation-free-m3", 2, "A_m^-1", 3, None),
])
def test_selectors_of_stored_examples(name, rb, rpre, lb, lpre):
    spec = FIXTURES[name].spec()
    r, l = right_selector(spec), left_selector(spec)
    assert (r.block, r.premult) == (rb, rpre)
    assert (l.block, l.premult) == (lb, lpre)


@pytest.mark.parametrize("seed", range(20))
def test_recovered_eigenvectors_have_small_residual(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 6))
    spec = random_spec(m, rng).with_random_assignments(2, rng)
    P = MatrixPolynomial.random(m, 2, rng)
    L = build(spec, P)
    ev = generalized_eigs(L.L0.dense, L.L1.dense)
    mu = ev.finite[int(np.argmin(ev.cond))]
    for side in ("right", "left"):
        with warnings.catch_warnings():
            warnings.simplefilter("error", RecoveryWarning)
            Z, X = recover_eigenvectors(L, mu, side)
        assert Z.shape[1] == 1 and X.shape == (2, 1)
        assert _residual(P, mu, X, side) < 1e-8


def test_selector_matrix_agrees_with_apply(rng):
    spec = FIXTURES["not-operation-free-m3"].spec()
    P = MatrixPolynomial.random(3, 2, rng)
    Z = rng.standard_normal((6, 1))
    sel = right_selector(spec)
    assert np.allclose(sel.matrix(P) @ Z, sel.apply(Z, P))


def test_singular_premultiplier_raises(rng):
    spec = FIXTURES["not-operation-free-m3"].spec()
    P = MatrixPolynomial.random(3, 2, rng)
    P = MatrixPolynomial(list(P.coeffs[:3]) + [np.ones((2, 2))])
    with pytest.raises(SingularCoefficientError):
        right_selector(spec).apply(np.ones((6, 1)), P)


def test_infinite_eigenvectors(rng):
    spec = EgfpSpec(5, T(0, 2), T(-4, -5, -3, -1), tau2=T(-4)).with_random_assignments(2, rng)
    P = MatrixPolynomial.random(5, 2, rng)
    u = rng.standard_normal(2)
    P = MatrixPolynomial(list(P.coeffs[:5]) + [np.outer(P.coeffs[5] @ u, u)])  # rank one
    L = build(spec, P)
    for side in ("right", "left"):
        Z, X = recover_infinite_eigenvectors(L, side)
        assert X.shape[1] >= 1
        M = P.coeffs[5] if side == "right" else P.coeffs[5].T
        assert np.linalg.norm(M @ X) < 1e-8 * np.linalg.norm(M) * np.linalg.norm(X)


def test_infinity_needs_minus_m_in_tau():
    with pytest.raises(NotApplicableError):
        right_infinity_selector(EgfpSpec(3, T(0, 1, 2, 3), T()))


def test_minimal_index_shift_for_companion():
    # right indices of the first companion exceed those of P by m-1, left ones are equal
    assert tuple(minimal_index_shift(EgfpSpec(3, T(2, 1, 0), T(-3)))) == (2, 0)
    assert tuple(minimal_index_shift(EgfpSpec(3, T(0, 1, 2), T(-3)))) == (0, 2)


def test_minimal_selectors_need_zero_and_minus_m():
    with pytest.raises(NotApplicableError):
        right_minimal_selector(EgfpSpec(3, T(1, 2), T(-3, "-0")))
    with pytest.raises(NotApplicableError):
        minimal_index_shift(EgfpSpec(3, T(0, 1, 2, 3), T()))


@pytest.mark.parametrize("seed", range(4))
def test_minimal_indices_and_bases_recovered(seed):
    rng = np.random.default_rng(seed)
    m = 3
    right, left = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    P = singular_polynomial(m, right, left, rng)
    assert minimal_indices(P) == ([right], [left])
    spec = random_spec(m, rng, need_zero_in_sigma=True, need_minus_m_in_tau=True).with_random_assignments(4, rng)
    L = build(spec, P)
    rl, ll = minimal_indices_pencil(L.L1.dense, L.L0.dense)
    assert recover_minimal_indices(spec, rl, ll) == ([right], [left])
    for side, want in (("right", right), ("left", left)):
        (v,) = recover_minimal_bases(L, side)
        assert v.shape[0] - 1 == want
        M = P if side == "right" else P.transpose()
        z = 0.37 - 0.81j
        x = sum(v[k] * z ** k for k in range(v.shape[0]))
        assert np.linalg.norm(M(z) @ x) < 1e-7 * np.linalg.norm(M(z)) * np.linalg.norm(x)
    assert left_minimal_selector(spec).block >= 1
