"""State-space realizations G = P + C (lam E - A)^{-1} B and their bordered EGFPs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blockmat import MatrixPolynomial
from .pencils import (BandwidthPrediction, BlockPencil, EgfpSpec, InvalidSpecError, bandwidth, build,
                      predict_bandwidth)
from .tuples import SignedIndex, consecutions, inversions

__all__ = [
    "Realization",
    "SystemMatrix",
    "BorderedPencil",
    "MinimalityReport",
    "UnsupportedCaseError",
    "system_matrix",
    "check_minimality",
    "random_realization",
    "border_positions",
    "build_rational",
    "bandwidth_rational",
    "predict_bandwidth_rational",
]


class UnsupportedCaseError(InvalidSpecError):
    """The bordered construction is not defined for this spec."""


def _rank_tol(r: int, n: int) -> float:
    return max(r, n, 1) * np.finfo(float).eps * 64


@dataclass(frozen=True, eq=False)
class Realization:
    P: MatrixPolynomial
    A: np.ndarray
    E: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        n = self.P.n
        A = np.asarray(self.A, dtype=complex)
        if A.size == 0:
            A = np.zeros((0, 0), dtype=complex)
        r = A.shape[0]
        E = np.asarray(self.E, dtype=complex).reshape(r, r)
        B = np.asarray(self.B, dtype=complex).reshape(r, n)
        C = np.asarray(self.C, dtype=complex).reshape(n, r)
        if A.shape != (r, r):
            raise ValueError("A must be square")
        if r and np.linalg.matrix_rank(E) < r:
            raise ValueError("E must be nonsingular")
        for name, M in (("A", A), ("E", E), ("B", B), ("C", C)):
            object.__setattr__(self, name, M)

    @property
    def r(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def m(self) -> int:
        return self.P.m

    def __call__(self, lam) -> np.ndarray:
        """G(lam)."""
        if self.r == 0:
            return self.P(lam)
        return self.P(lam) + self.C @ np.linalg.solve(lam * self.E - self.A, self.B)

    def residual(self, lam, X: np.ndarray, side: str = "right") -> float:
        """||G(lam) X|| scaled by (||P(lam)|| + ||C|| ||(lam E - A)^{-1} B||) ||X||.

        The scale is the size of the two terms rather than of their sum, which
        vanishes entirely at a zero of a 1 x 1 transfer function.
        """
        G = self(lam)
        X = np.asarray(X)
        R = G @ X if side == "right" else G.T @ X
        scale = np.linalg.norm(self.P(lam), 2)
        if self.r:
            scale += np.linalg.norm(self.C, 2) * np.linalg.norm(np.linalg.solve(lam * self.E - self.A, self.B), 2)
        return float(np.linalg.norm(R) / (scale * np.linalg.norm(X)))

    def poles(self) -> np.ndarray:
        if self.r == 0:
            return np.zeros(0, dtype=complex)
        return np.linalg.eigvals(np.linalg.solve(self.E, self.A))


@dataclass(frozen=True, eq=False)
class SystemMatrix:
    """S(lam) = [[P(lam), C], [B, A - lam E]]."""

    real: Realization

    @property
    def size(self) -> int:
        return self.real.n + self.real.r

    def coefficients(self) -> list[np.ndarray]:
        R = self.real
        n, r = R.n, R.r
        out = []
        for j in range(R.m + 1):
            S = np.zeros((n + r, n + r), dtype=complex)
            S[:n, :n] = R.P.coeffs[j]
            out.append(S)
        out[0][:n, n:] = R.C
        out[0][n:, :n] = R.B
        out[0][n:, n:] = R.A
        out[1][n:, n:] = -R.E
        return out

    def as_polynomial(self) -> MatrixPolynomial:
        return MatrixPolynomial(self.coefficients())

    def __call__(self, lam) -> np.ndarray:
        return sum(c * lam ** j for j, c in enumerate(self.coefficients()))


def system_matrix(real: Realization) -> SystemMatrix:
    return SystemMatrix(real)


@dataclass
class MinimalityReport:
    controllable: bool
    observable: bool
    checks: list[dict] = field(default_factory=list)  # one per probed lam
    tol: float = 0.0

    @property
    def minimal(self) -> bool:
        return self.controllable and self.observable

    def to_json(self) -> dict:
        return {"minimal": self.minimal, "controllable": self.controllable, "observable": self.observable,
                "tol": self.tol, "checks": self.checks}


def _num_rank(M: np.ndarray, tol: float) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s[0] > 0 else 0


def check_minimality(real: Realization, rng: np.random.Generator | None = None, probes: int = 3) -> MinimalityReport:
    """Rank tests for [B, A - lam E] and [C; A - lam E] at every pole plus random probes."""
    r, n = real.r, real.n
    tol = _rank_tol(r, n)
    if r == 0:
        return MinimalityReport(True, True, [], tol)
    rng = rng or np.random.default_rng(0)
    lams = list(real.poles()) + list(rng.standard_normal(probes) + 1j * rng.standard_normal(probes))
    checks, ctrl, obs = [], True, True
    for lam in lams:
        M = real.A - lam * real.E
        rc = _num_rank(np.hstack([real.B, M]), tol)
        ro = _num_rank(np.vstack([real.C, M]), tol)
        checks.append({"lam": [float(np.real(lam)), float(np.imag(lam))],
                       "controllable": rc == r, "observable": ro == r})
        ctrl &= rc == r
        obs &= ro == r
    return MinimalityReport(ctrl, obs, checks, tol)


def random_realization(m: int, n: int, r: int, rng: np.random.Generator, *, symmetric: bool = False,
                       complex_: bool = False) -> Realization:
    """Generic random realization; minimal with probability one."""
    P = MatrixPolynomial.random(m, n, rng, complex_)

    def mat(a, b):
        M = rng.standard_normal((a, b))
        return M + 1j * rng.standard_normal((a, b)) if complex_ else M

    A, E, B, C = mat(r, r), mat(r, r) + 2 * np.eye(r), mat(r, n), mat(n, r)
    if symmetric:
        P = MatrixPolynomial([(c + c.T) / 2 for c in P.coeffs])
        A, E, C = (A + A.T) / 2, (E + E.T) / 2 + 2 * np.eye(r), B.T
    return Realization(P, A, E, B, C)


# ---------------------------------------------------------------- bordered pencil

@dataclass(frozen=True, eq=False)
class BorderedPencil:
    """[[L(lam), e_kC (x) C], [e_kB^T (x) B, A - lam E]] with 1-based block positions kC, kB."""

    core: BlockPencil
    row_C: int
    col_B: int
    real: Realization

    @property
    def size(self) -> int:
        return self.core.m * self.core.n + self.real.r

    def dense_L1(self) -> np.ndarray:
        mn, r = self.core.m * self.core.n, self.real.r
        L1 = np.zeros((mn + r, mn + r), dtype=complex)
        L1[:mn, :mn] = self.core.L1.dense
        L1[mn:, mn:] = -self.real.E
        return L1

    def dense_L0(self) -> np.ndarray:
        """L = lam*L1 - L0, so the borders enter L0 with a minus sign."""
        n, mn, r = self.core.n, self.core.m * self.core.n, self.real.r
        L0 = np.zeros((mn + r, mn + r), dtype=complex)
        L0[:mn, :mn] = self.core.L0.dense
        L0[(self.row_C - 1) * n:self.row_C * n, mn:] = -self.real.C
        L0[mn:, (self.col_B - 1) * n:self.col_B * n] = -self.real.B
        L0[mn:, mn:] = -self.real.A
        return L0

    def __call__(self, lam) -> np.ndarray:
        return lam * self.dense_L1() - self.dense_L0()

    def tag_grid(self) -> list[list[str]]:
        """Core tags with one extra block row and column for the state part."""
        m = self.core.m
        grid = [row + ["C" if k + 1 == self.row_C else "0"] for k, row in enumerate(self.core.tag_grid())]
        grid.append(["B" if k + 1 == self.col_B else "0" for k in range(m)] + ["A - lam*E"])
        return grid


def border_positions(spec: EgfpSpec) -> tuple[int, int]:
    """(block row of C, block column of B) = (m - i_0(sigma1,sigma), m - c_0(sigma,sigma2))."""
    m = spec.m
    if SignedIndex(False, 0) not in spec.sigma.entries or SignedIndex(True, m) not in spec.tau.entries:
        raise InvalidSpecError("a bordered EGFP needs 0 in sigma and -m in tau")
    i0 = inversions(spec.sigma1 + spec.sigma, 0)
    c0 = consecutions(spec.sigma + spec.sigma2, 0)
    if i0 >= m or c0 >= m:
        raise UnsupportedCaseError(f"border position m - {max(i0, c0)} falls outside the block range")
    return m - i0, m - c0


def build_rational(spec: EgfpSpec, real: Realization, *, check: bool = True) -> BorderedPencil:
    kC, kB = border_positions(spec)
    core = build(spec, real.P, check=check)
    return BorderedPencil(core, kC, kB, real)


def bandwidth_rational(bp: BorderedPencil, tol: float = 1e-12) -> int:
    """Block bandwidth with the state part counted as block m+1."""
    m = bp.core.m
    bw = bandwidth(bp.core, tol)
    if bp.real.r:
        if np.abs(bp.real.C).max(initial=0) > tol:
            bw = max(bw, m + 1 - bp.row_C)
        if np.abs(bp.real.B).max(initial=0) > tol:
            bw = max(bw, m + 1 - bp.col_B)
    return bw


def predict_bandwidth_rational(spec: EgfpSpec) -> BandwidthPrediction:
    """Core prediction combined with the reach of the two borders.

    Tridiagonal needs C and B in the last block row/column; pentadiagonal
    allows them one block earlier.
    """
    core = predict_bandwidth(spec)
    kC, kB = border_positions(spec)
    reach = spec.m + 1 - min(kC, kB)
    kind = core.kind
    if reach >= 3:
        kind = "wider"
    elif reach == 2 and kind == "tridiagonal":
        kind = "pentadiagonal"
    return BandwidthPrediction(kind, core.max_run, core.hypothesis, core.witness, core.literal_run)
