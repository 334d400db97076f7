"""Extended generalized Fiedler pencils of matrix polynomials and rational matrices."""
from .blockmat import MatrixAssignment, MatrixPolynomial
from .golden import FIXTURES, structured_generator
from .oracle import Tolerances, companion_eigs, generalized_eigs, load_tolerances
from .pencils import (EgfpSpec, InvalidSpecError, bandwidth, build, classify, enumerate_specs, is_operation_free,
                      predict_bandwidth, random_spec, validate)
from .rational import Realization, build_rational, predict_bandwidth_rational, system_matrix
from .recovery import (left_selector, minimal_index_shift, recover_eigenvectors, recover_infinite_eigenvectors,
                       recover_minimal_bases, recover_minimal_indices, recover_system, right_selector)
from .tuples import IndexTuple, SignedIndex, consecutions, inversions, satisfies_sip, standard_form

__version__ = "0.1.0"

__all__ = [
    "FIXTURES", "EgfpSpec", "IndexTuple", "InvalidSpecError", "MatrixAssignment", "MatrixPolynomial",
    "Realization", "SignedIndex", "Tolerances", "bandwidth", "build", "build_rational", "classify",
    "companion_eigs", "consecutions", "enumerate_specs", "generalized_eigs", "inversions", "is_operation_free",
    "left_selector", "load_tolerances", "minimal_index_shift", "predict_bandwidth", "predict_bandwidth_rational",
    "random_spec", "recover_eigenvectors", "recover_infinite_eigenvectors", "recover_minimal_bases",
    "recover_minimal_indices", "recover_system", "right_selector", "satisfies_sip", "standard_form",
    "structured_generator", "system_matrix", "validate",
]
