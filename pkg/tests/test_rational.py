import numpy as np
import pytest

from egfp.blockmat import MatrixPolynomial
from egfp.golden import FIXTURES
from egfp.io import matrix_to_json, spec_from_json, spec_to_json
from egfp.oracle import companion_eigs, generalized_eigs, match_eigenvalues
from egfp.pencils import EgfpSpec, InvalidSpecError, bandwidth_agrees, build, random_spec
from egfp.rational import (Realization, bandwidth_rational, border_positions, build_rational, check_minimality,
                           predict_bandwidth_rational, random_realization, system_matrix)
from egfp.recovery import recover_system
from egfp.tuples import IndexTuple

T = IndexTuple.of


def _spectrum(bp):
    return generalized_eigs(bp.dense_L0(), bp.dense_L1())


def test_border_positions_of_stored_example():
    assert border_positions(FIXTURES["rational-m5"].spec()) == (4, 4)


def test_border_needs_zero_and_minus_m():
    with pytest.raises(InvalidSpecError):
        border_positions(EgfpSpec(3, T(1, 2), T(-3, "-0")))


def test_companion_border_sits_in_last_block():
    assert border_positions(EgfpSpec(3, T(2, 1, 0), T(-3))) == (1, 3)


@pytest.mark.parametrize("seed", range(8))
def test_bordered_spectrum_matches_system_matrix(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 5))
    spec = random_spec(m, rng, need_zero_in_sigma=True, need_minus_m_in_tau=True).with_random_assignments(2, rng)
    R = random_realization(m, 2, 2, rng)
    bp = build_rational(spec, R)
    got, ref = _spectrum(bp), companion_eigs(system_matrix(R).as_polynomial())
    if max(got.max_cond, ref.max_cond) > 1e6:
        pytest.skip("ill-conditioned draw")
    err, _, _ = match_eigenvalues(got.finite, ref.finite)
    assert err < 1e-8


def test_zero_border_splits_the_spectrum(rng):
    spec = EgfpSpec(3, T(0, 1), T(-3, -2))
    R0 = random_realization(3, 2, 2, rng)
    R = Realization(R0.P, R0.A, R0.E, np.zeros((2, 2)), np.zeros((2, 2)))
    bp = build_rational(spec, R)
    want = np.concatenate([companion_eigs(R.P).finite, np.linalg.eigvals(np.linalg.solve(R.E, R.A))])
    err, _, _ = match_eigenvalues(_spectrum(bp).finite, want)
    assert err < 1e-8
    assert not check_minimality(R).minimal


def test_minimality_of_generic_realization(rng):
    rep = check_minimality(random_realization(3, 2, 3, rng))
    assert rep.minimal and rep.controllable and rep.observable
    R = random_realization(3, 2, 2, rng)
    R = Realization(R.P, R.A, R.E, R.B, np.zeros((2, 2)))
    rep = check_minimality(R)
    assert rep.controllable and not rep.observable


def test_empty_state_gives_plain_pencil(rng):
    P = MatrixPolynomial.random(3, 2, rng)
    R = Realization(P, np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((2, 0)))
    spec = EgfpSpec(3, T(0, 1), T(-3, -2))
    bp = build_rational(spec, R)
    assert bp.size == 6
    assert np.allclose(bp.dense_L0(), build(spec, P).L0.dense)
    assert check_minimality(R).minimal


def test_symmetric_realization_gives_symmetric_pencil(rng):
    spec = FIXTURES["symmetric-penta-m8"].spec()
    R = random_realization(8, 2, 3, rng, symmetric=True)
    X = rng.standard_normal((2, 2))
    X = X + X.T
    data = spec_to_json(spec)
    for k in ("X1", "X2"):
        data["assignments"][k]["matrices"] = {"X": matrix_to_json(X)}
    bp = build_rational(spec_from_json(data), R)
    L1, L0 = bp.dense_L1(), bp.dense_L0()
    assert np.array_equal(L1, L1.T) and np.array_equal(L0, L0.T)
    assert bandwidth_rational(bp) == 2
    assert predict_bandwidth_rational(spec).kind == "pentadiagonal"


def test_border_tags():
    spec = FIXTURES["rational-m5"].spec()
    rng = np.random.default_rng(0)
    bp = build_rational(spec, random_realization(5, 2, 2, rng))
    grid = bp.tag_grid()
    assert grid[3][5] == "C" and grid[5][3] == "B" and grid[5][5] == "A - lam*E"
    assert sum(row[5] == "C" for row in grid) == 1


@pytest.mark.parametrize("seed", range(12))
def test_rational_bandwidth_prediction(seed):
    rng = np.random.default_rng(50 + seed)
    m = int(rng.integers(2, 6))
    spec = random_spec(m, rng, need_zero_in_sigma=True, need_minus_m_in_tau=True).with_random_assignments(2, rng)
    bp = build_rational(spec, random_realization(m, 2, 2, rng))
    assert bandwidth_agrees(predict_bandwidth_rational(spec).kind, bandwidth_rational(bp))


def test_transfer_function_eigenvectors(rng):
    spec = FIXTURES["rational-m5"].spec().with_random_assignments(2, rng)
    R = random_realization(5, 2, 2, rng)
    bp = build_rational(spec, R)
    ev = _spectrum(bp)
    poles = R.poles()
    mu = next(z for z in ev.finite[np.argsort(ev.cond)] if np.min(np.abs(poles - z)) > 1e-3)
    for side in ("right", "left"):
        out = recover_system(bp, mu, side)
        assert R.residual(mu, out["G"], side) < 1e-8
        S = system_matrix(R)(mu)
        S = S if side == "right" else S.T
        assert np.linalg.norm(S @ out["S"]) < 1e-8 * np.linalg.norm(S) * np.linalg.norm(out["S"])


def test_realization_validation(rng):
    P = MatrixPolynomial.random(2, 2, rng)
    with pytest.raises(ValueError):
        Realization(P, np.eye(2), np.zeros((2, 2)), np.ones((2, 2)), np.ones((2, 2)))
