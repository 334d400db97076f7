from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from egfp.blockmat import (MatrixAssignment, MatrixPolynomial, SingularAssignmentError, dense_product, elementary,
                           elementary_dense, exact_inverse, fiedler, fiedler_product, symbolic_col_action,
                           symbolic_row_action, to_exact)
from egfp.tuples import IndexTuple, SignedIndex


def test_elementary_inner_index_layout():
    X = np.array([[2.0]])
    M = elementary(1, X, 3).dense
    want = np.array([[1, 0, 0], [0, 2, 1], [0, 1, 0]], dtype=complex)
    assert np.array_equal(M, want)
    M = elementary(-1, X, 3).dense
    want = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 2]], dtype=complex)
    assert np.array_equal(M, want)


def test_elementary_end_indices_are_block_diagonal():
    X = np.array([[2.0, 1.0], [0.0, 1.0]])
    assert np.allclose(elementary(0, X, 3).dense[4:, 4:], X)
    assert np.allclose(elementary(-3, X, 3).dense[:2, :2], X)
    assert np.allclose(elementary("-0", X, 3).dense[4:, 4:], np.linalg.inv(X))
    assert np.allclose(elementary(3, X, 3).dense[:2, :2], np.linalg.inv(X))


def test_singular_end_assignment_rejected():
    with pytest.raises((SingularAssignmentError, np.linalg.LinAlgError, ValueError)):
        elementary("-0", np.zeros((2, 2)), 3).dense


@pytest.mark.parametrize("i", [0, 1, 2, 3])
def test_plus_minus_pair_inverts(rng, i):
    m, n = 4, 2
    X = rng.standard_normal((n, n))
    if i in (0,):
        # M_0(X) M_{-0}(X) = I for the block-diagonal pair
        prod = elementary(0, X, m).dense @ elementary("-0", X, m).dense
    else:
        prod = elementary(i, X, m).dense @ elementary(-i, -X, m).dense
    assert np.allclose(prod, np.eye(m * n))


@given(st.integers(0, 4), st.integers(0, 4))
def test_commuting_fiedler_factors(i, j):
    if abs(i - j) <= 1:
        return
    P = MatrixPolynomial.stand_in(5, 2)
    a, b = fiedler(i, P).dense, fiedler(j, P).dense
    assert (a @ b == b @ a).all()


def test_adjacent_fiedler_factors_do_not_commute():
    P = MatrixPolynomial.stand_in(4, 2)
    a, b = fiedler(1, P).dense, fiedler(2, P).dense
    assert not (a @ b == b @ a).all()


def test_fiedler_plus_minus_inverse(rng):
    P = MatrixPolynomial.random(4, 2, rng)
    for i in range(1, 4):
        assert np.allclose(fiedler(i, P).dense @ fiedler(-i, P).dense, np.eye(8))


def test_fiedler_trivial_labels():
    P = MatrixPolynomial.stand_in(3, 1)
    assert fiedler(1, P).tag(1, 1) == "-A1"
    assert fiedler(-2, P).tag(1, 1) == "A2"
    assert fiedler(-3, P).tag(0, 0) == "A3"


tuples = st.lists(st.sampled_from([0, 1, 2, 3]), max_size=5).map(IndexTuple)


@given(tuples)
def test_tags_realize_to_dense_product(t):
    from egfp.tuples import satisfies_sip
    if not satisfies_sip(t):
        return
    P = MatrixPolynomial.stand_in(4, 2)
    B = fiedler_product(t, P)
    assert (B.realize() == B.dense).all()
    mats = [(e, -P.coeffs[e.magnitude]) for e in t]
    assert (dense_product(mats, 4, 2, object) == B.dense).all()


@given(tuples, st.integers(0, 3))
def test_row_and_column_actions_match_dense(t, s):
    from egfp.tuples import satisfies_sip
    if not satisfies_sip(t):
        return
    m = 4
    P = MatrixPolynomial.stand_in(m, 1)
    D = fiedler_product(t, P)
    row = dict(symbolic_row_action(s, t, m=m))
    col = dict(symbolic_col_action(s, t, m=m))
    r = m - s - 1
    for c in range(m):
        assert D.tag(r, c) == (str(row[c + 1]) if c + 1 in row else "0")
        assert D.tag(c, r) == (str(col[c + 1]) if c + 1 in col else "0")


def test_row_action_checks_sip_and_range():
    with pytest.raises(ValueError):
        symbolic_row_action(0, IndexTuple.of(0, 0), m=3)
    with pytest.raises(ValueError):
        symbolic_row_action(3, IndexTuple.of(0), m=3)


def test_exact_arithmetic():
    X = to_exact([[1, 2], [3, 4]])
    inv = exact_inverse(X)
    assert inv[0, 0] == Fraction(-2)
    assert all(isinstance(v, Fraction) for v in inv.ravel())
    with pytest.raises(SingularAssignmentError):
        exact_inverse(to_exact([[1, 2], [2, 4]]))


def test_exact_assignment_product_is_fraction_valued():
    X = to_exact([[1, 1], [0, 1]])
    M = elementary(1, X, 3).dense
    assert M.dtype == object
    assert M[2, 2] == 1 and M[2, 3] == 1


def test_assignment_named_and_trivial():
    t = IndexTuple.of(1, 0)
    A = MatrixAssignment.trivial_for(t, 3)
    assert A.trivial and [str(l) for l in A.labels] == ["-A1", "-A0"]
    N = MatrixAssignment.named(t, prefix="Z")
    assert not N.trivial and len(N) == 2


def test_polynomial_basics(rng):
    P = MatrixPolynomial.random(3, 2, rng)
    lam = 0.7 - 0.2j
    want = sum(c * lam ** j for j, c in enumerate(P.coeffs))
    assert np.allclose(P(lam), want)
    assert np.allclose(P.rev()(lam), lam ** 3 * P(1 / lam))
    assert np.allclose(P.transpose()(lam), P(lam).T)
    assert (P.m, P.n) == (3, 2)


def test_signed_index_range_check():
    with pytest.raises(ValueError):
        elementary_dense(SignedIndex(False, 5), np.eye(1), 3, 1)
