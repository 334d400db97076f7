import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from egfp.blockmat import MatrixPolynomial, elementary_dense
from egfp.io import load_json, spec_from_json
from egfp.oracle import companion_eigs, companion_pencil, generalized_eigs, match_eigenvalues
from egfp.pencils import (EgfpSpec, InvalidSpecError, bandwidth, bandwidth_agrees, build, classify,
                          end_index_hypothesis, enumerate_specs, is_operation_free, operation_free_hypothesis,
                          predict_bandwidth, random_spec, validate)
from egfp.tuples import IndexTuple, standard_form

DATA = Path(__file__).resolve().parents[1] / "data"
T = IndexTuple.of


# ---------------------------------------------------------------- validation

def test_valid_spec_reports_no_violations():
    rep = validate(EgfpSpec(4, T(0, 1), T(-4, -2, -3)))
    assert rep.valid and rep.violations == []


def _clauses(spec):
    return {c for c, _ in validate(spec).violations}


def test_violations_name_their_clause():
    assert "permutation" in _clauses(EgfpSpec(3, T(0, 1), T(-3)))
    assert "sign-class" in _clauses(EgfpSpec(3, T(0, 1, -2), T(-3)))
    assert "range" in _clauses(EgfpSpec(3, T(0, 1, 2, 4), T(-3)))
    assert "degree" in _clauses(EgfpSpec(1, T(0), T(-1)))
    assert "sigma-decorations" in _clauses(EgfpSpec(3, T(0, 1, 2), T(-3), sigma1=T(2)))
    assert "tau-decorations" in _clauses(EgfpSpec(3, T(0), T(-3, -2, -1), tau2=T(-1)))
    assert "sigma-sip" in _clauses(EgfpSpec(3, T(0, 1, 2), T(-3), sigma1=T(1), sigma2=T(1)))


def test_sip_violation_data_file():
    spec = spec_from_json(load_json(DATA / "spec_sip_violation.json"))
    assert "sigma-sip" in _clauses(spec)


def test_full_sigma_with_empty_tau_is_valid_with_note():
    rep = validate(EgfpSpec(3, T(0, 1, 2, 3), T()))
    assert rep.valid
    assert any("A_m" in n for n in rep.notes)


def test_build_rejects_invalid_spec(rng):
    with pytest.raises(InvalidSpecError):
        build(EgfpSpec(3, T(0, 1), T(-3)))
    with pytest.raises(InvalidSpecError):
        build(EgfpSpec(3, T(0, 1, 2), T(-3)), MatrixPolynomial.random(4, 2, rng))


def test_build_needs_assignment_matrices(rng):
    spec = EgfpSpec(3, T(0, 1, 2), T(-3), sigma2=T(0))
    with pytest.raises(InvalidSpecError):
        build(spec, MatrixPolynomial.random(3, 2, rng))


# ---------------------------------------------------------------- building

def test_fiedler_pencil_is_first_companion(rng):
    P = MatrixPolynomial.random(4, 2, rng)
    L = build(EgfpSpec(4, T(3, 2, 1, 0), T(-4)), P)
    B, A = companion_pencil(P)
    assert np.allclose(L.L1.dense, B) and np.allclose(L.L0.dense, A)
    assert L.tag_grid()[0] == ["lam*A4 + A3", "A2", "A1", "A0"]


def _factorized(spec, P):
    m, n = spec.m, P.n
    vals = {k: v for a in spec.assignments().values() for k, v in a.symbol_values().items()}

    def mats(t, asg):
        out = []
        for e, lab in zip(t, asg.labels):
            (w, c), = lab.terms.items()
            name = w[0]
            if name.startswith("A") and name[1:].isdigit():
                M = P.coeffs[int(name[1:])]
            else:
                M = vals[name]
            out.append((e, c * np.asarray(M, dtype=complex)))
        return out

    def prod(pairs):
        out = np.eye(m * n, dtype=complex)
        for e, M in pairs:
            out = out @ elementary_dense(e, M, m, n)
        return out

    triv = spec.with_trivial_assignments()
    left = prod(mats(spec.tau1, spec.Y1) + mats(spec.sigma1, spec.X1))
    right = prod(mats(spec.sigma2, spec.X2) + mats(spec.tau2, spec.Y2))
    Mt = prod(mats(spec.tau, triv.Y1.__class__.trivial_for(spec.tau, m)))
    Ms = prod(mats(spec.sigma, triv.X1.__class__.trivial_for(spec.sigma, m)))
    return left @ Mt @ right, left @ Ms @ right


@pytest.mark.parametrize("seed", range(15))
def test_build_matches_product_of_elementary_matrices(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 6))
    spec = random_spec(m, rng).with_random_assignments(2, rng)
    P = MatrixPolynomial.random(m, 2, rng)
    L = build(spec, P)
    L1, L0 = _factorized(spec, P)
    assert np.allclose(L.L1.dense, L1, atol=1e-10)
    assert np.allclose(L.L0.dense, L0, atol=1e-10)
    assert np.allclose(L.L1.realize(), L.L1.dense, atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_pencil_spectrum_matches_companion(seed):
    rng = np.random.default_rng(100 + seed)
    m = int(rng.integers(2, 6))
    spec = random_spec(m, rng).with_random_assignments(2, rng)
    P = MatrixPolynomial.random(m, 2, rng)
    L = build(spec, P)
    got = generalized_eigs(L.L0.dense, L.L1.dense)
    ref = companion_eigs(P)
    if max(got.max_cond, ref.max_cond) > 1e6:
        pytest.skip("ill-conditioned draw")
    err, _, _ = match_eigenvalues(got.finite, ref.finite)
    assert err < 1e-8


def test_symbolic_and_numeric_tags_agree(rng):
    spec = EgfpSpec(5, T(3, 4, 2, 0), T(-5, -1))
    P = MatrixPolynomial.random(5, 2, rng)
    assert build(spec).tag_grid() == build(spec, P).tag_grid()


# ---------------------------------------------------------------- families

def test_classify_families():
    assert classify(EgfpSpec(3, T(2, 1, 0), T(-3))) >= {"FP", "GFP", "GFPR", "FPR"}
    assert classify(EgfpSpec(3, T(0, 1), T(-3, -2))) == {"GFP", "GFPR", "FPR"}
    decorated = EgfpSpec(3, T(1, 0), T(-2, -3), sigma2=T(0))
    assert classify(decorated) == {"GFPR"}
    assert classify(decorated.with_trivial_assignments()) == {"GFPR", "FPR"}
    assert classify(EgfpSpec(3, T(0, 2), T(-3, -1))) == {"GFP"}
    assert classify(EgfpSpec(3, T(0, 2), T(-3, -1), sigma1=T(0))) == {"EGFP-proper"}


def test_operation_free_examples():
    assert operation_free_hypothesis(EgfpSpec(3, T(0, 1), T(-3, -2)))
    nof = EgfpSpec(3, T(0, 1, 2, 3), T())
    assert not operation_free_hypothesis(nof)
    assert not is_operation_free(build(nof))
    assert is_operation_free(build(EgfpSpec(3, T(2, 1, 0), T(-3))))


# ---------------------------------------------------------------- enumeration

def _classes(values):
    if not values:
        return 1
    return len({standard_form(IndexTuple(p)) for p in itertools.permutations(values)})


@pytest.mark.parametrize("m", [2, 3])
def test_undecorated_enumeration_counts(m):
    universe = list(range(m + 1))
    all_count = distinct_count = 0
    for k in range(m + 2):
        for chosen in itertools.combinations(universe, k):
            rest = [v for v in universe if v not in chosen]
            all_count += len(list(itertools.permutations(chosen))) * len(list(itertools.permutations(rest)))
            distinct_count += _classes(list(chosen)) * _classes(rest)
    assert len(list(enumerate_specs(m, decorated=False))) == all_count
    assert len(list(enumerate_specs(m, decorated=False, distinct=True))) == distinct_count


def test_enumerated_specs_are_valid_and_unique():
    specs = list(enumerate_specs(3))
    assert all(validate(s).valid for s in specs)
    assert len({s.key() for s in specs}) == len(specs)


@pytest.mark.parametrize("m,want", [(3, 6), (4, 24)])
def test_fiedler_family_count(m, want):
    assert len(list(enumerate_specs(m, family="FP"))) == want


def test_enumeration_filters():
    for s in enumerate_specs(3, bandwidth_class="tridiagonal"):
        assert predict_bandwidth(s).kind == "tridiagonal"
    for s in enumerate_specs(3, operation_free=False):
        assert not operation_free_hypothesis(s)


@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_random_spec_is_valid(m, seed):
    assert validate(random_spec(m, np.random.default_rng(seed))).valid


# ---------------------------------------------------------------- bandwidth

def test_bandwidth_prediction_examples():
    cases = [(EgfpSpec(3, T(0, 2), T(-1, -3)), "tridiagonal", 1),
             (EgfpSpec(3, T(0, 1, 2), T(-3)), "pentadiagonal", 2),
             (EgfpSpec(4, T(1, 3, 0, 2), T(-4)), "pentadiagonal", 2),
             (EgfpSpec(4, T(0, 1, 2, 3), T(-4)), "wider", 3)]
    for spec, kind, bw in cases:
        assert predict_bandwidth(spec).kind == kind
        assert bandwidth(build(spec)) == bw


def test_block_diagonal_factors_do_not_widen():
    spec = EgfpSpec(3, T(), IndexTuple.of("-0", -1, -2, -3))
    pred = predict_bandwidth(spec)
    assert pred.literal_run == 2
    assert bandwidth(build(spec)) == 2
    assert bandwidth_agrees(pred.kind, 2)


def test_prediction_agrees_with_measurement_for_degree_three():
    for spec in enumerate_specs(3, distinct=True):
        pred = predict_bandwidth(spec)
        assert bandwidth_agrees(pred.kind, bandwidth(build(spec))), spec
        assert pred.hypothesis == end_index_hypothesis(spec)


def test_bandwidth_agrees_rules():
    assert bandwidth_agrees("tridiagonal", 1) and not bandwidth_agrees("tridiagonal", 2)
    assert bandwidth_agrees("pentadiagonal", 2) and not bandwidth_agrees("pentadiagonal", 3)
    assert bandwidth_agrees("wider", 3) and not bandwidth_agrees("wider", 2)
    assert bandwidth_agrees("not-applicable", 7)
