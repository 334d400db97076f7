"""JSON and Matrix Market exchange formats.

Spec files look like::

    {"m": 5, "sigma": [3, 4, 2, 0], "tau": ["-5", "-1"], "sigma2": [3],
     "assignments": {"X2": {"labels": ["X"], "matrices": {"X": [[1, 0], [0, 1]]}}}}

An assignment may also be the string ``"trivial"``.  Matrices are nested lists,
or ``{"re": [...], "im": [...]}`` for complex data.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import scipy.io
import scipy.sparse

from .blockmat import MatrixAssignment, MatrixPolynomial
from .pencils import ASSIGNMENT_OF, DECORATIONS, BlockPencil, EgfpSpec
from .symbolic import Expr
from .tuples import IndexTuple

__all__ = [
    "FormatError",
    "matrix_to_json",
    "matrix_from_json",
    "spec_to_json",
    "spec_from_json",
    "poly_to_json",
    "poly_from_json",
    "realization_to_json",
    "realization_from_json",
    "load_json",
    "export_pencil",
    "import_pencil",
]


class FormatError(ValueError):
    """Malformed input file."""


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------- matrices

def matrix_to_json(M) -> Any:
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.any(M.imag != 0):
        return {"re": M.real.tolist(), "im": M.imag.tolist()}
    return np.real(M).tolist()


def matrix_from_json(data) -> np.ndarray:
    try:
        if isinstance(data, dict):
            return np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        M = np.asarray(data, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a matrix: {exc}") from exc
    if M.size == 0:
        return np.zeros((0, 0))
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise FormatError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


# ---------------------------------------------------------------- specs

def _assignment_to_json(asg: MatrixAssignment) -> Any:
    if asg.trivial:
        return "trivial"
    out: dict[str, Any] = {"labels": [str(l) for l in asg.labels]}
    mats = {}
    for lab, M in zip(asg.labels, asg.mats):
        if M is not None:
            (w, _c), = lab.terms.items()
            mats[w[0]] = matrix_to_json(M)
    if mats:
        out["matrices"] = mats
    return out


def _assignment_from_json(data, t: IndexTuple, m: int) -> MatrixAssignment:
    if data == "trivial":
        return MatrixAssignment.trivial_for(t, m)
    if not isinstance(data, dict) or "labels" not in data:
        raise FormatError("an assignment is 'trivial' or an object with 'labels'")
    labels = [Expr.parse(str(l)) for l in data["labels"]]
    if len(labels) != len(t):
        raise FormatError(f"{len(labels)} labels for a tuple of length {len(t)}")
    given = {k: matrix_from_json(v) for k, v in data.get("matrices", {}).items()}
    mats = []
    for lab in labels:
        if not lab.is_atomic() or lab.is_zero():
            raise FormatError(f"label {lab} must be a signed single symbol")
        (w, _c), = lab.terms.items()
        mats.append(given.get(w[0]))
    return MatrixAssignment(t, tuple(labels), tuple(mats) if any(M is not None for M in mats) else ())


def spec_to_json(spec: EgfpSpec) -> dict:
    out: dict[str, Any] = {"m": spec.m, "sigma": spec.sigma.to_json(), "tau": spec.tau.to_json()}
    asg = {}
    for dec, name in ASSIGNMENT_OF.items():
        t = getattr(spec, dec)
        if len(t):
            out[dec] = t.to_json()
            asg[name] = _assignment_to_json(getattr(spec, name))
    if asg:
        out["assignments"] = asg
    return out


def spec_from_json(data) -> EgfpSpec:
    if not isinstance(data, dict):
        raise FormatError("a spec is a JSON object")
    unknown = set(data) - {"m", "sigma", "tau", "assignments", *DECORATIONS}
    if unknown:
        raise FormatError(f"unknown spec fields: {', '.join(sorted(unknown))}")
    try:
        m = int(data["m"])
        tuples = {k: IndexTuple.from_json(data.get(k, [])) for k in ("sigma", "tau", *DECORATIONS)}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad spec: {exc}") from exc
    kw: dict[str, Any] = dict(tuples)
    for dec, name in ASSIGNMENT_OF.items():
        raw = data.get("assignments", {}).get(name)
        if raw is not None:
            kw[name] = _assignment_from_json(raw, tuples[dec], m)
    return EgfpSpec(m, **kw)


# ---------------------------------------------------------------- polynomials and realizations

def poly_to_json(P: MatrixPolynomial) -> dict:
    return {"coeffs": [matrix_to_json(c) for c in P.coeffs]}


def poly_from_json(data) -> MatrixPolynomial:
    coeffs = data.get("coeffs") if isinstance(data, dict) else data
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise FormatError("a polynomial needs a list of at least two coefficient matrices")
    mats = [matrix_from_json(c) for c in coeffs]
    if len({M.shape for M in mats}) != 1 or mats[0].shape[0] != mats[0].shape[1]:
        raise FormatError("coefficients must be square and of equal size")
    return MatrixPolynomial(mats)


def realization_to_json(real) -> dict:
    return {"P": [matrix_to_json(c) for c in real.P.coeffs],
            **{k: matrix_to_json(getattr(real, k)) for k in ("A", "E", "B", "C")}}


def realization_from_json(data):
    from .rational import Realization

    if not isinstance(data, dict) or "P" not in data:
        raise FormatError("a realization is an object with P, A, E, B, C")
    P = poly_from_json(data["P"])
    n = P.n
    r = len(data.get("A", []))

    def get(key, shape):
        if r == 0:
            return np.zeros(shape)
        M = matrix_from_json(data[key]) if key in data else None
        if M is None or M.shape != shape:
            raise FormatError(f"{key} must have shape {shape}")
        return M

    try:
        return Realization(P, get("A", (r, r)), get("E", (r, r)), get("B", (r, n)), get("C", (n, r)))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# ---------------------------------------------------------------- Matrix Market export

def export_pencil(pencil, out: str | Path, stem: str = "pencil") -> list[Path]:
    """Write L1 and L0 as Matrix Market files plus a JSON tag sidecar.

    ``pencil`` is a BlockPencil or a bordered pencil; the sidecar records the
    block tags and, for bordered pencils, where the state part starts.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(pencil, BlockPencil):
        L1, L0 = pencil.L1.dense, pencil.L0.dense
        side = {"m": pencil.m, "n": pencil.n, "tags": pencil.tag_grid(), "border": None}
        spec = pencil.spec
    else:
        L1, L0 = pencil.dense_L1(), pencil.dense_L0()
        core = pencil.core
        side = {"m": core.m, "n": core.n, "tags": pencil.tag_grid(),
                "border": {"row_C": pencil.row_C, "col_B": pencil.col_B, "offset": core.m * core.n,
                           "r": pencil.real.r}}
        spec = core.spec
    side["convention"] = "L(lam) = lam*L1 - L0"
    if spec is not None:
        side["spec"] = spec_to_json(spec)
    paths = []
    for name, M in (("L1", L1), ("L0", L0)):
        M = np.asarray(M)
        if not np.iscomplexobj(M) or not np.any(M.imag):
            M = np.real(M)
        p = out / f"{stem}_{name}.mtx"
        scipy.io.mmwrite(str(p), scipy.sparse.coo_matrix(M))
        paths.append(p)
    p = out / f"{stem}_tags.json"
    p.write_text(json.dumps(side, indent=1, sort_keys=True))
    paths.append(p)
    return paths


def import_pencil(out: str | Path, stem: str = "pencil") -> tuple[np.ndarray, np.ndarray, dict]:
    out = Path(out)
    L1 = scipy.io.mmread(str(out / f"{stem}_L1.mtx")).toarray()
    L0 = scipy.io.mmread(str(out / f"{stem}_L0.mtx")).toarray()
    return L1, L0, load_json(out / f"{stem}_tags.json")
