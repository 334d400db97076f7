import numpy as np
import pytest

from egfp.blockmat import MatrixPolynomial
from egfp.golden import (FIXTURES, UnsupportedTemplateError, compare_fixture, structure_holds, structured_generator,
                         structured_tags)
from egfp.oracle import companion_eigs, generalized_eigs, match_eigenvalues
from egfp.rational import border_positions

WITH_SPEC = [name for name, fx in FIXTURES.items() if fx.spec is not None]


@pytest.mark.parametrize("name", WITH_SPEC)
def test_assembled_tags_match_stored_display(name):
    assert compare_fixture(FIXTURES[name]) == []


@pytest.mark.parametrize("name", [n for n, fx in FIXTURES.items() if fx.structure])
def test_stored_structured_displays_have_their_structure(name):
    fx = FIXTURES[name]
    L1, L0 = structured_tags(fx)
    assert structure_holds(fx.structure, L1, L0, fx.m)


def test_structure_check_detects_violation():
    fx = FIXTURES["egfpr-m5"]
    L1, L0 = structured_tags(fx)
    assert not structure_holds("symmetric", L1, L0, fx.m)


def test_stored_border_positions():
    fx = FIXTURES["rational-m5"]
    assert border_positions(fx.spec()) == fx.border


def _structured_poly(kind, m, n, rng):
    cs = []
    for j in range(m + 1):
        M = rng.standard_normal((n, n))
        sym, skew = M + M.T, M - M.T
        if kind == "symmetric":
            cs.append(sym)
        elif kind == "skew":
            cs.append(skew)
        elif kind == "T-even":
            cs.append(sym if j % 2 == 0 else skew)
        elif kind == "T-odd":
            cs.append(skew if j % 2 == 0 else sym)
    if kind == "T-palindromic":
        cs = [rng.standard_normal((n, n)) for _ in range(m + 1)]
        cs = [cs[j] + cs[m - j].T for j in range(m + 1)]
    return MatrixPolynomial(cs)


def _holds(kind, L1, L0):
    t = lambda M: M.T  # noqa: E731
    if kind == "symmetric":
        return np.allclose(t(L1), L1) and np.allclose(t(L0), L0)
    if kind == "skew":
        return np.allclose(t(L1), -L1) and np.allclose(t(L0), -L0)
    if kind == "T-even":
        return np.allclose(t(L1), -L1) and np.allclose(t(L0), L0)
    if kind == "T-odd":
        return np.allclose(t(L1), L1) and np.allclose(t(L0), -L0)
    if kind == "T-palindromic":
        return np.allclose(t(L1), -L0)
    raise AssertionError(kind)


@pytest.mark.parametrize("kind,m", [("symmetric", 6), ("symmetric", 8), ("T-even", 5), ("T-odd", 5), ("skew", 5),
                                    ("T-palindromic", 7)])
def test_generated_pencil_is_structured_linearization(kind, m, rng):
    P = _structured_poly(kind, m, 2, rng)
    X = rng.standard_normal((2, 2))
    pen, _Q = structured_generator(kind, m, P, X + X.T)
    L1, L0 = pen.L1.dense, pen.L0.dense
    assert _holds(kind, L1, L0)
    got, ref = generalized_eigs(L0, L1), companion_eigs(P)
    err, _, _ = match_eigenvalues(got.finite, ref.finite)
    assert err < 1e-6


def test_unsupported_template():
    with pytest.raises(UnsupportedTemplateError, match="available"):
        structured_generator("symmetric", 4, MatrixPolynomial.stand_in(4, 1))
