"""Recovering eigenvectors, minimal bases and minimal indices of P from an EGFP.

Every recovery rule reads one block row of a null vector of the pencil,
sometimes followed by a multiplication with A_m^{-1}, A_0^{-1} (right) or
their transposes (left).  ``RowSelector`` records which.  Left null vectors
are taken in the transpose sense: y^T L(mu) = 0.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .blockmat import MatrixPolynomial
from .oracle import Tolerances, minimal_basis, null_basis
from .pencils import BlockPencil, EgfpSpec
from .tuples import IndexTuple, SignedIndex, consecutions, inversions, total_consecutions, total_inversions

__all__ = [
    "RowSelector",
    "MinimalIndexShift",
    "NotApplicableError",
    "SingularCoefficientError",
    "RecoveryWarning",
    "infinity_selectors",
    "right_selector",
    "left_selector",
    "right_infinity_selector",
    "left_infinity_selector",
    "right_minimal_selector",
    "left_minimal_selector",
    "minimal_index_shift",
    "recover_eigenvectors",
    "recover_infinite_eigenvectors",
    "recover_minimal_bases",
    "recover_minimal_indices",
    "recover_system",
]


class NotApplicableError(ValueError):
    """The recovery rule's hypotheses do not hold for this spec."""


class SingularCoefficientError(ValueError):
    """A selector branch needs A_0 or A_m inverted but the coefficient is singular."""


class RecoveryWarning(UserWarning):
    """Selection lost rank; signals numerical degeneracy at the eigenvalue."""


@dataclass(frozen=True)
class RowSelector:
    block: int                  # 1-based block row of the null vector
    premult: str | None = None  # None, "A_m^-1", "A_0^-1", "A_m^-T", "A_0^-T"
    case: str = ""

    def _coefficient(self, P: MatrixPolynomial) -> np.ndarray:
        j = P.m if self.premult.startswith("A_m") else 0
        M = np.asarray(P.coeffs[j], dtype=complex)
        return M.T if self.premult.endswith("T") else M

    def _solve(self, P: MatrixPolynomial, rhs: np.ndarray) -> np.ndarray:
        M = self._coefficient(P)
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] <= max(M.shape) * np.finfo(float).eps * s[0]:
            j = "A_m" if self.premult.startswith("A_m") else "A_0"
            raise SingularCoefficientError(f"selector '{self}' needs {j} nonsingular")
        return np.linalg.solve(M, rhs)

    def matrix(self, P: MatrixPolynomial) -> np.ndarray:
        """The n x mn selector as a dense matrix."""
        m, n = P.m, P.n
        S = np.zeros((n, m * n), dtype=complex)
        S[:, (self.block - 1) * n:self.block * n] = np.eye(n)
        return S if self.premult is None else self._solve(P, S)

    def apply(self, Z: np.ndarray, P: MatrixPolynomial) -> np.ndarray:
        n = P.n
        out = np.asarray(Z)[(self.block - 1) * n:self.block * n]
        return out if self.premult is None else self._solve(P, out)

    def to_json(self) -> dict:
        return {"block": self.block, "premultiplier": self.premult, "case": self.case}

    def __str__(self) -> str:
        sel = f"block row {self.block}"
        return f"{self.premult} * {sel}" if self.premult else sel


@dataclass(frozen=True)
class MinimalIndexShift:
    i_L: int
    c_L: int

    def __iter__(self):
        return iter((self.i_L, self.c_L))


def _c(t: IndexTuple, k) -> int:
    return consecutions(t, k) if len(t) else -1


def _i(t: IndexTuple, k) -> int:
    return inversions(t, k) if len(t) else -1


def _in(t: IndexTuple, k: int, negative: bool = False) -> bool:
    return SignedIndex(negative, k) in t.entries


def right_selector(spec: EgfpSpec) -> RowSelector:
    """Maps right eigenvectors of L(mu) to right eigenvectors of P(mu)."""
    m, sig, s2, t2 = spec.m, spec.sigma, spec.sigma2, spec.tau2
    if _in(sig, 0):
        if _c(sig, 0) < m:
            return RowSelector(m - _c(sig + s2, 0), None, "0 in sigma")
        return RowSelector(1, "A_m^-1", "0 in sigma, full run")
    omega = spec.omega
    i0 = _i(omega, 0)
    if i0 == m:
        return RowSelector(m, "A_0^-1", "0 in omega, full run")
    if _in(sig, i0 + 1):
        s = i0 + _c(sig, i0 + 1) + 1
        if s < m:
            p = i0 + _c(sig + s2, i0 + 1) + 1
            return RowSelector(m - p, None, "next index in sigma")
        p = _c(t2, SignedIndex(True, m - 1)) + 2
        return RowSelector(p, "A_m^-1", "next index in sigma, run reaches m")
    p = i0 - _c(t2, SignedIndex(True, i0)) - 1
    return RowSelector(m - p, None, "next index not in sigma")


def left_selector(spec: EgfpSpec) -> RowSelector:
    """Maps left eigenvectors of L(mu) to left eigenvectors of P(mu)."""
    m, sig, s1, t1 = spec.m, spec.sigma, spec.sigma1, spec.tau1
    if _in(sig, 0):
        if _i(sig, 0) < m:
            return RowSelector(m - _i(s1 + sig, 0), None, "0 in sigma")
        return RowSelector(1, "A_m^-T", "0 in sigma, full run")
    omega = spec.omega
    c0 = _c(omega, 0)
    if c0 == m:
        return RowSelector(m, "A_0^-T", "0 in omega, full run")
    if _in(sig, c0 + 1):
        s = c0 + _i(sig, c0 + 1) + 1
        if s < m:
            p = c0 + _i(s1 + sig, c0 + 1) + 1
            return RowSelector(m - p, None, "next index in sigma")
        p = _i(t1, SignedIndex(True, m - 1)) + 2
        return RowSelector(p, "A_m^-T", "next index in sigma, run reaches m")
    p = c0 - _i(t1, SignedIndex(True, c0)) - 1
    return RowSelector(m - p, None, "next index not in sigma")


def right_infinity_selector(spec: EgfpSpec) -> RowSelector:
    m = spec.m
    if not _in(spec.tau, m, True):
        raise NotApplicableError("an infinite eigenvalue needs -m in tau (A_m singular)")
    if _c(spec.tau, SignedIndex(True, m)) < m:
        return RowSelector(_c(spec.tau + spec.tau2, SignedIndex(True, m)) + 1, None, "infinite")
    return RowSelector(m, "A_0^-1", "infinite, full run")


def left_infinity_selector(spec: EgfpSpec) -> RowSelector:
    m = spec.m
    if not _in(spec.tau, m, True):
        raise NotApplicableError("an infinite eigenvalue needs -m in tau (A_m singular)")
    if _i(spec.tau, SignedIndex(True, m)) < m:
        return RowSelector(_i(spec.tau1 + spec.tau, SignedIndex(True, m)) + 1, None, "infinite")
    return RowSelector(m, "A_0^-T", "infinite, full run")


def infinity_selectors(spec: EgfpSpec) -> tuple[RowSelector, RowSelector]:
    return right_infinity_selector(spec), left_infinity_selector(spec)


def _check_minimal(spec: EgfpSpec) -> None:
    if not _in(spec.sigma, 0) or not _in(spec.tau, spec.m, True):
        raise NotApplicableError("minimal-basis recovery needs 0 in sigma and -m in tau")


def right_minimal_selector(spec: EgfpSpec) -> RowSelector:
    _check_minimal(spec)
    return RowSelector(spec.m - _c(spec.sigma + spec.sigma2, 0), None, "right minimal basis")


def left_minimal_selector(spec: EgfpSpec) -> RowSelector:
    _check_minimal(spec)
    return RowSelector(spec.m - _i(spec.sigma1 + spec.sigma, 0), None, "left minimal basis")


def minimal_index_shift(spec: EgfpSpec) -> MinimalIndexShift:
    """(i_L, c_L): right indices of P are those of L minus i_L, left ones minus c_L.

    With tau = (tau_l, -m, tau_r) the counts are the total inversions and
    consecutions of the permutation (-rev(tau_l), sigma, -rev(tau_r)) of {0:m-1}.
    """
    m = spec.m
    ents = list(spec.tau.entries)
    top = SignedIndex(True, m)
    if top not in ents:
        raise NotApplicableError("the shift rule needs -m in tau")
    k = ents.index(top)
    tl, tr = IndexTuple(ents[:k]), IndexTuple(ents[k + 1:])
    alpha = (-tl.rev()) + spec.sigma + (-tr.rev())
    return MinimalIndexShift(total_inversions(alpha), total_consecutions(alpha))


# ---------------------------------------------------------------- numerical recovery

def _spec_of(pencil: BlockPencil) -> EgfpSpec:
    if pencil.spec is None or pencil.P is None:
        raise ValueError("recovery needs a pencil built from a spec and a polynomial")
    return pencil.spec


def _side(side: str) -> bool:
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    return side == "right"


def _null_tol(M: np.ndarray, tol: Tolerances) -> float:
    # null vectors at a computed eigenvalue sit near machine precision; allow
    # a margin proportional to the size of the pencil.
    return max(tol.rank, 1e3 * np.finfo(float).eps * max(M.shape))


def _selected(sel: RowSelector, Z: np.ndarray, P: MatrixPolynomial, where: str) -> np.ndarray:
    X = sel.apply(Z, P)
    if Z.shape[1] and np.linalg.matrix_rank(X, tol=1e-10 * max(1.0, np.linalg.norm(X))) < Z.shape[1]:
        warnings.warn(f"selection '{sel}' lost rank at {where}", RecoveryWarning, stacklevel=3)
    return X


def recover_eigenvectors(pencil: BlockPencil, mu: complex, side: str = "right", Z: np.ndarray | None = None,
                         tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(basis of the null space of L(mu), recovered basis for P(mu)) on the given side.

    ``Z`` may be supplied; otherwise it is computed from the singular values of L(mu).
    """
    tol = tol or Tolerances()
    spec = _spec_of(pencil)
    right = _side(side)
    if Z is None:
        Lm = pencil(mu)
        Z = null_basis(Lm if right else Lm.T, _null_tol(Lm, tol))
    sel = right_selector(spec) if right else left_selector(spec)
    return Z, _selected(sel, Z, pencil.P, f"mu = {mu}")


def recover_infinite_eigenvectors(pencil: BlockPencil, side: str = "right", Z: np.ndarray | None = None,
                                  tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors at infinity: null vectors of L1 mapped to null vectors of A_m."""
    tol = tol or Tolerances()
    spec = _spec_of(pencil)
    right = _side(side)
    if Z is None:
        L1 = np.asarray(pencil.L1.dense, dtype=complex)
        Z = null_basis(L1 if right else L1.T, _null_tol(L1, tol))
    sel = right_infinity_selector(spec) if right else left_infinity_selector(spec)
    return Z, _selected(sel, Z, pencil.P, "infinity")


def _trim(v: np.ndarray, tol: float) -> np.ndarray:
    scale = np.abs(v).max()
    while v.shape[0] > 1 and np.abs(v[-1]).max() <= tol * scale:
        v = v[:-1]
    return v


def _pencil_minimal_basis(L1: np.ndarray, L0: np.ndarray, right: bool, tol: float) -> list[np.ndarray]:
    if right:
        return minimal_basis([-L0, L1], tol)
    return minimal_basis([-L0.T, L1.T], tol)


def recover_minimal_bases(pencil: BlockPencil, side: str = "right", Z: list[np.ndarray] | None = None,
                          tol: float = 1e-9) -> list[np.ndarray]:
    """Minimal basis of P: a minimal basis of L with one block row kept.

    Vectors are coefficient arrays of shape (degree+1, size); ``Z`` may be
    given in that form, otherwise it comes from the convolution oracle.
    """
    spec = _spec_of(pencil)
    right = _side(side)
    if Z is None:
        Z = _pencil_minimal_basis(np.asarray(pencil.L1.dense, dtype=complex),
                                  np.asarray(pencil.L0.dense, dtype=complex), right, tol)
    sel = right_minimal_selector(spec) if right else left_minimal_selector(spec)
    n, k = pencil.n, sel.block - 1
    # the pencil vector may have higher degree than the block it carries
    return [_trim(z[:, k * n:(k + 1) * n], tol) for z in Z]


def recover_minimal_indices(spec: EgfpSpec, right_L: list[int], left_L: list[int]) -> tuple[list[int], list[int]]:
    iL, cL = minimal_index_shift(spec)
    return sorted(e - iL for e in right_L), sorted(e - cL for e in left_L)


# ---------------------------------------------------------------- system matrix and G

def _system_rows(bp, sel: RowSelector, Z: np.ndarray) -> np.ndarray:
    """[selector on the mn pencil rows; identity on the r corner rows]."""
    mn = bp.core.m * bp.core.n
    return np.vstack([sel.apply(Z[:mn], bp.core.P), Z[mn:]])


def recover_system(bp, mu: complex | None = None, side: str = "right", Z=None,
                   tol: Tolerances | None = None) -> dict:
    """Recover null vectors of S and G from a bordered pencil.

    With ``mu`` given: eigenvectors of S(mu), returned with their first n rows
    as eigenvectors of G(mu).  With ``mu=None``: minimal bases of S(lam) and G(lam)
    as coefficient arrays.
    """
    tol = tol or Tolerances()
    spec = _spec_of(bp.core)
    right = _side(side)
    n = bp.core.n
    if mu is not None:
        if Z is None:
            M = bp(mu)
            Z = null_basis(M if right else M.T, _null_tol(M, tol))
        sel = right_selector(spec) if right else left_selector(spec)
        S = _system_rows(bp, sel, Z)
        return {"pencil": Z, "S": S, "G": S[:n], "selector": sel}
    if Z is None:
        Z = _pencil_minimal_basis(bp.dense_L1(), bp.dense_L0(), right, 1e-9)
    sel = right_minimal_selector(spec) if right else left_minimal_selector(spec)
    S = [_trim(np.hstack([z[:, (sel.block - 1) * n:sel.block * n], z[:, bp.core.m * n:]]), 1e-9) for z in Z]
    return {"pencil": Z, "S": S, "G": [_trim(v[:, :n], 1e-9) for v in S], "selector": sel}
