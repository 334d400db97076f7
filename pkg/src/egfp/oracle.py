"""Independent numerical references: companion eigensolver, QZ wrapper,
kernel bases, convolution-rank minimal indices and tolerance settings.

Nothing here uses the Fiedler machinery, so it can be used to check it.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .blockmat import MatrixPolynomial

__all__ = [
    "Tolerances",
    "load_tolerances",
    "EigResult",
    "companion_pencil",
    "companion_eigs",
    "generalized_eigs",
    "match_eigenvalues",
    "null_basis",
    "normal_rank",
    "is_regular",
    "convolution_matrix",
    "minimal_indices",
    "minimal_indices_pencil",
    "minimal_basis",
    "transfer_eval",
    "subspace_angle",
]

TOL_ENV = "EGFP_TOL_CONFIG"

# LAPACK through scipy is not guaranteed re-entrant on every BLAS build.
_LAPACK_LOCK = threading.Lock()


@dataclass(frozen=True)
class Tolerances:
    eig_rel: float = 1e-8          # relative eigenvalue agreement
    residual: float = 1e-8         # scaled residual for recovered vectors
    angle: float = 1e-8            # principal angle between subspaces
    cond_skip: float = 1e6         # skip instances above this eigenvalue condition
    infinite: float = 1e-10        # |beta| / ||(alpha, beta)|| below this is an infinite eigenvalue
    rank: float = 1e-10            # relative singular-value cutoff
    band: float = 1e-12            # relative size of a structurally nonzero block

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "Tolerances":
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise ValueError(f"unknown tolerance keys: {sorted(bad)}")
        return cls(**{k: float(v) for k, v in data.items()})


def load_tolerances(path: str | os.PathLike | None = None, **overrides) -> Tolerances:
    """Defaults, then the JSON file at ``path`` (or $EGFP_TOL_CONFIG), then overrides."""
    tol = Tolerances()
    path = path or os.environ.get(TOL_ENV)
    if path:
        tol = Tolerances.from_json(json.loads(Path(path).read_text()))
    clean = {k: float(v) for k, v in overrides.items() if v is not None}
    return replace(tol, **clean) if clean else tol


# ---------------------------------------------------------------- eigenvalues

@dataclass
class EigResult:
    finite: np.ndarray            # finite eigenvalues
    n_infinite: int               # count of infinite eigenvalues
    alpha: np.ndarray
    beta: np.ndarray
    right: np.ndarray | None = None
    left: np.ndarray | None = None
    cond: np.ndarray | None = None  # condition of each finite eigenvalue
    singular: bool = False

    @property
    def max_cond(self) -> float:
        if self.cond is None or not len(self.cond):
            return 0.0
        return float(np.max(self.cond))


def companion_pencil(P: MatrixPolynomial) -> tuple[np.ndarray, np.ndarray]:
    """First companion form (B, A) with A x = lam B x, written out directly."""
    m, n = P.m, P.n
    A_ = [np.asarray(P.coeffs[j], dtype=complex) for j in range(m + 1)]
    B = np.eye(m * n, dtype=complex)
    B[:n, :n] = A_[m]
    A = np.zeros((m * n, m * n), dtype=complex)
    for j in range(m):
        A[:n, j * n:(j + 1) * n] = -A_[m - 1 - j]
    A[n:, :-n] += np.eye((m - 1) * n)
    return B, A


def _eig_conditions(A, B, alpha, beta, vr, vl) -> np.ndarray:
    # Relative condition of a simple eigenvalue of A - lam B (infinite ones get inf).
    na, nb = np.linalg.norm(A, 2), np.linalg.norm(B, 2)
    out = np.full(len(alpha), np.inf)
    for k in range(len(alpha)):
        if beta[k] == 0:
            continue
        lam = alpha[k] / beta[k]
        x, y = vr[:, k], vl[:, k]
        d = abs(np.vdot(y, B @ x))
        if d == 0:
            continue
        scale = max(abs(lam), 1.0)
        out[k] = np.linalg.norm(x) * np.linalg.norm(y) * (na + abs(lam) * nb) / (d * scale)
    return out


def generalized_eigs(A: np.ndarray, B: np.ndarray, tol: Tolerances | None = None,
                     vectors: bool = True) -> EigResult:
    """Eigenvalues of the pencil A - lam B via QZ, with infinite ones split off.

    For a pencil built as lam*L1 - L0 call ``generalized_eigs(L0, L1)``.
    """
    tol = tol or Tolerances()
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    with _LAPACK_LOCK:
        if vectors:
            w, vl, vr = sla.eig(A, B, left=True, right=True, homogeneous_eigvals=True)
        else:
            w = sla.eig(A, B, right=False, homogeneous_eigvals=True)
            vl = vr = None
    alpha, beta = w[0], w[1]
    size = np.hypot(np.abs(alpha), np.abs(beta))
    singular = bool(np.any(size < tol.rank * max(np.linalg.norm(A), np.linalg.norm(B), 1.0)))
    is_inf = np.abs(beta) <= tol.infinite * np.where(size > 0, size, 1.0)
    fin = ~is_inf
    cond = None
    if vectors:
        c = _eig_conditions(A, B, alpha, np.where(is_inf, 0, beta), vr, vl)
        cond = c[fin]
    return EigResult(alpha[fin] / beta[fin], int(is_inf.sum()), alpha, beta,
                     vr[:, fin] if vectors else None, vl[:, fin] if vectors else None, cond, singular)


def companion_eigs(P: MatrixPolynomial, tol: Tolerances | None = None, vectors: bool = True) -> EigResult:
    B, A = companion_pencil(P)
    return generalized_eigs(A, B, tol, vectors)


def match_eigenvalues(a, b) -> tuple[float, np.ndarray, np.ndarray]:
    """Pair two multisets optimally; returns (max relative error, a sorted, b sorted)."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if len(a) != len(b):
        return np.inf, a, b
    if not len(a):
        return 0.0, a, b
    cost = np.abs(a[:, None] - b[None, :]) / np.maximum(1.0, np.abs(a[:, None]))
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()), a[r], b[c]


# ---------------------------------------------------------------- kernels and ranks

def null_basis(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of ker M; singular values below tol * max(1, s_max) count as zero."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.shape[1] == 0:
        return np.zeros((0, 0), dtype=complex)
    with _LAPACK_LOCK:
        _u, s, vh = np.linalg.svd(M)
    cut = tol * max(1.0, s[0] if len(s) else 0.0)
    r = int(np.sum(s > cut))
    return vh[r:].conj().T


def _rank(M: np.ndarray, tol: float) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def normal_rank(evaluate, size: int, rng: np.random.Generator | None = None, samples: int = 3,
                tol: float = 1e-10) -> int:
    """Rank of a matrix function at generic points (max over a few random samples)."""
    rng = rng or np.random.default_rng(12345)
    best = 0
    for _ in range(samples):
        z = complex(rng.standard_normal(), rng.standard_normal())
        best = max(best, _rank(np.asarray(evaluate(z)), tol))
        if best == size:
            break
    return best


def is_regular(P: MatrixPolynomial, tol: float = 1e-10) -> bool:
    return normal_rank(P, P.n, tol=tol) == P.n


def convolution_matrix(coeffs, d: int) -> np.ndarray:
    """Block Toeplitz map x_0..x_d -> coefficients of P(lam) x(lam), x(lam) = sum x_k lam^k."""
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    m = len(coeffs) - 1
    p, q = coeffs[0].shape
    T = np.zeros(((m + d + 1) * p, (d + 1) * q), dtype=complex)
    for k in range(d + 1):
        for j, Aj in enumerate(coeffs):
            T[(j + k) * p:(j + k + 1) * p, k * q:(k + 1) * q] = Aj
    return T


def _right_indices(coeffs, tol: float, dmax: int | None = None) -> list[int]:
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    q = coeffs[0].shape[1]

    def ev(z):
        return sum(c * z ** j for j, c in enumerate(coeffs))

    nr = normal_rank(ev, min(coeffs[0].shape), tol=tol)
    p = q - nr
    if p == 0:
        return []
    m = len(coeffs) - 1
    dmax = dmax if dmax is not None else m * min(coeffs[0].shape) + 1
    # dim ker T_d = sum over indices e <= d of (d - e + 1)
    out: list[int] = []
    prev_dim, prev_count = 0, 0
    for d in range(dmax + 1):
        T = convolution_matrix(coeffs, d)
        dim = T.shape[1] - _rank(T, tol)
        count = dim - prev_dim          # number of indices <= d
        out += [d] * (count - prev_count)
        prev_dim, prev_count = dim, count
        if count >= p:
            break
    if len(out) != p:
        raise RuntimeError(f"found {len(out)} of {p} minimal indices up to degree {dmax}")
    return out


def minimal_indices(P: MatrixPolynomial | list, tol: float = 1e-9) -> tuple[list[int], list[int]]:
    """(right, left) minimal indices of a matrix polynomial, ascending."""
    coeffs = P.coeffs if isinstance(P, MatrixPolynomial) else P
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    right = _right_indices(coeffs, tol)
    left = _right_indices([c.T for c in coeffs], tol)
    return right, left


def minimal_indices_pencil(L1: np.ndarray, L0: np.ndarray, tol: float = 1e-9) -> tuple[list[int], list[int]]:
    """Minimal indices of lam*L1 - L0."""
    return minimal_indices([-np.asarray(L0, dtype=complex), np.asarray(L1, dtype=complex)], tol)


def minimal_basis(coeffs, tol: float = 1e-9) -> list[np.ndarray]:
    """A right minimal basis, each vector as an array of coefficients (degree+1, q).

    Built degree by degree from convolution kernels: at degree d new vectors
    are kernel directions of T_d not spanned by shifts of lower-degree ones.
    """
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    q = coeffs[0].shape[1]
    idx = _right_indices(coeffs, tol)
    basis: list[np.ndarray] = []
    for d in sorted(set(idx)):
        need = idx.count(d)
        T = convolution_matrix(coeffs, d)
        K = null_basis(T, tol)
        # span of lam^s * v for already chosen vectors, padded to degree d
        shifts = []
        for v in basis:
            dv = v.shape[0] - 1
            for s in range(d - dv + 1):
                w = np.zeros((d + 1, q), dtype=complex)
                w[s:s + dv + 1] = v
                shifts.append(w.ravel())
        S = np.array(shifts).T if shifts else np.zeros(((d + 1) * q, 0), dtype=complex)
        chosen = 0
        for k in range(K.shape[1]):
            cand = K[:, k]
            trial = np.column_stack([S, cand]) if S.size else cand[:, None]
            if _rank(trial, tol) > (_rank(S, tol) if S.size else 0):
                basis.append(cand.reshape(d + 1, q))
                S = trial
                chosen += 1
                if chosen == need:
                    break
        if chosen != need:
            raise RuntimeError(f"could not extract {need} basis vectors of degree {d}")
    return basis


def subspace_angle(U: np.ndarray, V: np.ndarray) -> float:
    """Largest principal angle between the column spans of U and V."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    if U.shape[1] != V.shape[1]:
        return np.pi / 2
    return float(np.max(sla.subspace_angles(U, V)))


# ---------------------------------------------------------------- rational

def transfer_eval(P: MatrixPolynomial, A: np.ndarray, E: np.ndarray, B: np.ndarray, C: np.ndarray,
                  lam: complex) -> np.ndarray:
    """G(lam) = P(lam) + C (lam E - A)^{-1} B."""
    if np.asarray(A).size == 0:
        return P(lam)
    return P(lam) + C @ np.linalg.solve(lam * E - A, B)
