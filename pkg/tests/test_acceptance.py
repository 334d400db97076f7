"""Full-size acceptance checks; each prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.  The checks live in
``egfp.suites`` so that ``egfp verify --suite acceptance`` runs the same code.
"""
import pytest

from egfp import suites

pytestmark = pytest.mark.slow


def _report(result, capsys):
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail + " " + str(result.stats.get("failures", ""))


def test_stored_displays_match_assembled_pencils(capsys):
    _report(suites.check_golden(max_seconds=1.0), capsys)


def test_spectra_match_companion_form(capsys):
    _report(suites.check_spectra(n_poly=200, n_spec=20), capsys)


def test_bandwidth_prediction_exhaustive_up_to_degree_five(capsys):
    _report(suites.check_bandwidth(max_m=5, n=2, cap=2), capsys)


def test_operation_free_criterion_exhaustive_up_to_degree_five(capsys):
    _report(suites.check_operation_free(max_m=5, n=2, cap=2), capsys)


def test_eigenvector_recovery(capsys):
    _report(suites.check_recovery(n_random=1000), capsys)


def test_rational_pipeline(capsys):
    _report(suites.check_rational(n_real=100), capsys)


def test_minimal_indices_and_bases(capsys):
    _report(suites.check_minimal_indices(n_poly=20), capsys)


def test_tuple_algebra_by_exact_products(capsys):
    _report(suites.check_tuple_algebra(max_m=5, max_len=6), capsys)
