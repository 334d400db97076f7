"""Elementary and Fiedler block matrices, assignment products and block-row actions.

Block positions exposed to users follow the 1-based convention ``e_k`` of the
theory (block row ``m - i`` belongs to index ``i``).  ``BlockMatrix.blocks`` is
keyed by 0-based ``(row, col)`` pairs.

Two independent routes build every product:

* a dense route that multiplies explicit ``mn x mn`` elementary matrices, and
* a symbolic route that pushes unit block rows through the factors with the
  block-row action tables, never forming a dense matrix.

The symbolic route yields exact provenance tags (``symbolic.Expr``); the dense
route yields the numbers.  Tests compare the two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .symbolic import Expr, base_name, coefficient_index, inv_name, is_inverse
from .tuples import IndexLike, IndexTuple, SignedIndex, satisfies_sip

__all__ = [
    "SingularAssignmentError",
    "MatrixPolynomial",
    "MatrixAssignment",
    "Valuation",
    "BlockMatrix",
    "trivial_label",
    "elementary",
    "elementary_dense",
    "fiedler",
    "fiedler_product",
    "assignment_product",
    "symbolic_row_action",
    "symbolic_col_action",
    "exact_inverse",
    "to_exact",
]


class SingularAssignmentError(ValueError):
    """A matrix that must be inverted is singular."""


# ---------------------------------------------------------------- linear algebra

def to_exact(M) -> np.ndarray:
    """Object array of Fractions (exact-integer mode)."""
    A = np.asarray(M)
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        if isinstance(v, (complex, np.complexfloating)) and v.imag != 0:
            raise ValueError("exact mode holds real rationals only")
        out[idx] = Fraction(v.real if isinstance(v, (complex, np.complexfloating)) else v)
    return out


def exact_inverse(M: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over the rationals."""
    n = M.shape[0]
    A = [[Fraction(M[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise SingularAssignmentError("singular matrix in exact mode")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [v / piv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = A[i][n + j]
    return out


def _inverse(M: np.ndarray, what: str = "matrix") -> np.ndarray:
    if M.dtype == object:
        return exact_inverse(M)
    if M.size and np.linalg.cond(M) > 1e14:
        raise SingularAssignmentError(f"{what} is singular to working precision")
    return np.linalg.inv(M)


def _eye(k: int, dtype) -> np.ndarray:
    if dtype == object:
        e = np.empty((k, k), dtype=object)
        e[...] = Fraction(0)
        for i in range(k):
            e[i, i] = Fraction(1)
        return e
    return np.eye(k, dtype=dtype)


def _zeros(shape, dtype) -> np.ndarray:
    if dtype == object:
        z = np.empty(shape, dtype=object)
        z[...] = Fraction(0)
        return z
    return np.zeros(shape, dtype=dtype)


# ---------------------------------------------------------------- polynomial

@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """P(lam) = sum_i lam^i A_i with square n x n coefficients, degree m >= 2."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        cs = [np.atleast_2d(np.asarray(A)) for A in coeffs]
        if len(cs) < 3:
            raise ValueError("degree must be at least 2")
        n = cs[0].shape[0]
        for A in cs:
            if A.shape != (n, n):
                raise ValueError("coefficients must be square and of equal size")
        exact = any(A.dtype == object for A in cs)
        if exact:
            cs = [to_exact(A) if A.dtype != object else A for A in cs]
        else:
            cs = [A.astype(complex) for A in cs]
        if all(v == 0 for v in cs[-1].ravel()):
            raise ValueError("leading coefficient A_m must be nonzero")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def exact(self) -> bool:
        return self.coeffs[0].dtype == object

    @property
    def dtype(self):
        return object if self.exact else complex

    def __call__(self, lam) -> np.ndarray:
        out = _zeros((self.n, self.n), self.dtype)
        for A in reversed(self.coeffs):  # Horner
            out = out * lam + A
        return out

    evaluate = __call__

    def rev(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.coeffs[::-1])

    def transpose(self) -> "MatrixPolynomial":
        return MatrixPolynomial([A.T for A in self.coeffs])

    def norm_at(self, lam) -> float:
        """sum_i |lam|^i ||A_i||_F, the scale used in residual bounds."""
        a = abs(complex(lam))
        return float(sum(a ** i * np.linalg.norm(np.asarray(A, dtype=complex)) for i, A in enumerate(self.coeffs)))

    def symbols(self) -> dict[str, np.ndarray]:
        return {f"A{j}": A for j, A in enumerate(self.coeffs)}

    @classmethod
    def random(cls, m: int, n: int, rng: np.random.Generator, complex_: bool = False) -> "MatrixPolynomial":
        def draw():
            A = rng.standard_normal((n, n))
            if complex_:
                A = A + 1j * rng.standard_normal((n, n))
            return A
        return cls([draw() for _ in range(m + 1)])

    @classmethod
    def stand_in(cls, m: int, n: int = 2, seed: int = 7) -> "MatrixPolynomial":
        """Exact integer polynomial with A_j = (j+1) R for a fixed random integer R."""
        rng = np.random.default_rng(seed)
        while True:
            R = rng.integers(-3, 4, size=(n, n))
            if round(np.linalg.det(R)) != 0:
                break
        return cls([to_exact((j + 1) * R) for j in range(m + 1)])


# ---------------------------------------------------------------- valuations

class Valuation:
    """Numeric values of symbols; inverses are formed on demand and cached."""

    def __init__(self, n: int, dtype, base: Mapping[str, np.ndarray] | None = None):
        self.n = n
        self.dtype = dtype
        self.base: dict[str, np.ndarray] = {}
        self._inv: dict[str, np.ndarray] = {}
        for k, v in (base or {}).items():
            self.set(k, v)

    def set(self, name: str, value) -> None:
        v = np.asarray(value)
        if self.dtype == object and v.dtype != object:
            v = to_exact(v)
        elif self.dtype != object:
            v = v.astype(self.dtype)
        self.base[name] = v
        self._inv.pop(name, None)

    def __contains__(self, name: str) -> bool:
        return base_name(name) in self.base

    def __call__(self, name: str) -> np.ndarray:
        b = base_name(name)
        if b not in self.base:
            raise KeyError(f"no value for symbol {b}")
        if not is_inverse(name):
            return self.base[b]
        if b not in self._inv:
            self._inv[b] = _inverse(self.base[b], b)
        return self._inv[b]

    def merged(self, other: "Valuation | None") -> "Valuation":
        out = Valuation(self.n, self.dtype, self.base)
        if other is not None:
            for k, v in other.base.items():
                out.set(k, v)
        return out

    def evaluate(self, e: Expr) -> np.ndarray:
        return e.evaluate(self, self.n, self.dtype)

    @classmethod
    def of_polynomial(cls, P: MatrixPolynomial) -> "Valuation":
        return cls(P.n, P.dtype, P.symbols())


# ---------------------------------------------------------------- assignments

def trivial_label(idx: IndexLike, m: int) -> Expr:
    """Symbol of the trivial assignment, so that M_idx(label) is the Fiedler matrix at idx.

    -A_i at plus i < m, A_m at +m (M_m is the inverse of M_{-m}(A_m)),
    A_i at minus i >= 1, and -A_0 at -0 (M_{-0} is the inverse of M_0(-A_0)).
    """
    t = SignedIndex.parse(idx)
    j = t.magnitude
    if j > m:
        raise ValueError(f"index {t} exceeds degree {m}")
    if not t.negative:
        return Expr.sym(f"A{j}") if j == m else Expr.sym(f"A{j}", -1)
    return Expr.sym("A0", -1) if j == 0 else Expr.sym(f"A{j}")


@dataclass(frozen=True, eq=False)
class MatrixAssignment:
    """Matrices paired with the entries of an index tuple.

    Each entry carries a symbolic label (an ``Expr`` that is a signed single
    symbol) and, for named symbols, a numeric matrix.  Labels in the
    coefficient symbols ``Aj`` are resolved against the polynomial at build time.
    """

    tuple: IndexTuple
    labels: tuple
    mats: tuple = ()
    trivial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tuple", IndexTuple(self.tuple))
        labels = tuple(Expr.parse(l) if isinstance(l, str) else l for l in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(self.tuple):
            raise ValueError("assignment length does not match its tuple")
        mats = tuple(self.mats) if self.mats else (None,) * len(labels)
        if len(mats) != len(labels):
            raise ValueError("assignment length does not match its tuple")
        object.__setattr__(self, "mats", mats)
        for l in labels:
            if not l.is_atomic() or l.is_zero():
                raise ValueError(f"assignment label {l} must be a signed single symbol")

    @classmethod
    def empty(cls) -> "MatrixAssignment":
        return cls(IndexTuple(), ())

    @classmethod
    def trivial_for(cls, t, m: int) -> "MatrixAssignment":
        t = IndexTuple(t)
        return cls(t, tuple(trivial_label(e, m) for e in t), trivial=True)

    @classmethod
    def named(cls, t, mats: Sequence | None = None, names: Sequence[str] | None = None,
              prefix: str = "X") -> "MatrixAssignment":
        t = IndexTuple(t)
        if names is None:
            names = [prefix if len(t) == 1 else f"{prefix}[{k}]" for k in range(len(t))]
        labels = tuple(Expr.sym(nm) for nm in names)
        return cls(t, labels, tuple(mats) if mats is not None else ())

    @classmethod
    def random(cls, t, n: int, rng: np.random.Generator, prefix: str = "X",
               complex_: bool = False) -> "MatrixAssignment":
        """Well-conditioned random assignment (identity plus a small perturbation)."""
        t = IndexTuple(t)
        mats = []
        for _ in t:
            Z = rng.standard_normal((n, n))
            if complex_:
                Z = Z + 1j * rng.standard_normal((n, n))
            mats.append(np.eye(n) + 0.5 * Z / max(1.0, np.sqrt(n)))
        return cls.named(t, mats, prefix=prefix)

    def __len__(self) -> int:
        return len(self.tuple)

    def symbol_values(self) -> dict[str, np.ndarray]:
        out = {}
        for lab, M in zip(self.labels, self.mats):
            (w, _c), = lab.terms.items()
            name = w[0]
            if coefficient_index(name) is None and M is not None:
                out[base_name(name)] = M
        return out

    def factors(self) -> list[tuple[SignedIndex, Expr]]:
        return list(zip(self.tuple.entries, self.labels))


# ---------------------------------------------------------------- action tables

def _elem_entries(c: int, idx: SignedIndex, W: Expr, m: int) -> list[tuple[int, Expr]]:
    """Nonzero blocks of block row c of M_idx(W) (1-based).

    M_idx(W) has a symmetric block pattern, so the same list describes block
    column c as well.
    """
    I = Expr.identity()
    j = idx.magnitude
    if not idx.negative:
        if j == 0:
            return [(m, W)] if c == m else [(c, I)]
        if j == m:
            return [(1, W.inverse())] if c == 1 else [(c, I)]
        top = m - j
        if c == top:
            return [(top, W), (top + 1, I)]
        if c == top + 1:
            return [(top, I)]
        return [(c, I)]
    if j == m:
        return [(1, W)] if c == 1 else [(c, I)]
    if j == 0:
        return [(m, W.inverse())] if c == m else [(c, I)]
    top = m - j
    if c == top:
        return [(top + 1, I)]
    if c == top + 1:
        return [(top, I), (top + 1, W)]
    return [(c, I)]


def _row_step(row: dict[int, Expr], idx: SignedIndex, W: Expr, m: int) -> dict[int, Expr]:
    out: dict[int, Expr] = {}
    for c, e in row.items():
        for c2, f in _elem_entries(c, idx, W, m):
            out[c2] = out.get(c2, Expr()) + e * f
    return {k: v for k, v in out.items() if not v.is_zero()}


def _col_step(col: dict[int, Expr], idx: SignedIndex, W: Expr, m: int) -> dict[int, Expr]:
    out: dict[int, Expr] = {}
    for r, e in col.items():
        for r2, f in _elem_entries(r, idx, W, m):
            out[r2] = out.get(r2, Expr()) + f * e
    return {k: v for k, v in out.items() if not v.is_zero()}


def _check_factor_sip(t: IndexTuple) -> None:
    for neg in (False, True):
        part = IndexTuple(e for e in t if e.negative == neg)
        if not satisfies_sip(part):
            raise ValueError(f"tuple {t} violates the SIP")


def _row_through(start: int, factors: Sequence[tuple[SignedIndex, Expr]], m: int) -> dict[int, Expr]:
    row = {start: Expr.identity()}
    for idx, W in factors:
        row = _row_step(row, idx, W, m)
    return row


def _col_through(start: int, factors: Sequence[tuple[SignedIndex, Expr]], m: int) -> dict[int, Expr]:
    col = {start: Expr.identity()}
    for idx, W in reversed(factors):
        col = _col_step(col, idx, W, m)
    return col


def symbolic_row_action(s: int, alpha, X: MatrixAssignment | None = None, *, m: int,
                        check_sip: bool = True) -> list[tuple[int, Expr]]:
    """Block row (e_{m-s}^T (x) I) M_alpha(X) as sorted (1-based column, block) pairs.

    ``X`` defaults to the trivial assignment, so the result is a row of the
    Fiedler product M^P_alpha.
    """
    alpha = IndexTuple(alpha)
    if not 0 <= s <= m - 1:
        raise ValueError("s must lie in 0..m-1")
    if check_sip:
        _check_factor_sip(alpha)
    X = X if X is not None else MatrixAssignment.trivial_for(alpha, m)
    if X.tuple != alpha:
        raise ValueError("assignment does not belong to alpha")
    return sorted(_row_through(m - s, X.factors(), m).items())


def symbolic_col_action(s: int, alpha, X: MatrixAssignment | None = None, *, m: int,
                        check_sip: bool = True) -> list[tuple[int, Expr]]:
    """Block column M_alpha(X) (e_{m-s} (x) I) as sorted (1-based row, block) pairs."""
    alpha = IndexTuple(alpha)
    if not 0 <= s <= m - 1:
        raise ValueError("s must lie in 0..m-1")
    if check_sip:
        _check_factor_sip(alpha)
    X = X if X is not None else MatrixAssignment.trivial_for(alpha, m)
    if X.tuple != alpha:
        raise ValueError("assignment does not belong to alpha")
    return sorted(_col_through(m - s, X.factors(), m).items())


def symbolic_blocks(factors: Sequence[tuple[SignedIndex, Expr]], m: int) -> dict[tuple[int, int], Expr]:
    """All blocks of a product of elementary matrices (0-based keys) by row actions."""
    out = {}
    for r in range(1, m + 1):
        for c, e in _row_through(r, factors, m).items():
            out[(r - 1, c - 1)] = e
    return out


# ---------------------------------------------------------------- dense route

def elementary_dense(idx: IndexLike, W: np.ndarray, m: int, n: int) -> np.ndarray:
    """The mn x mn matrix M_idx(W) built directly from its definition."""
    idx = SignedIndex.parse(idx)
    W = np.asarray(W)
    dtype = object if W.dtype == object else complex
    j = idx.magnitude
    if j > m:
        raise ValueError(f"|{idx}| exceeds m = {m}")
    M = _eye(m * n, dtype)

    def put(r, c, B):  # 1-based block coordinates
        M[(r - 1) * n:r * n, (c - 1) * n:c * n] = B

    Z, I = _zeros((n, n), dtype), _eye(n, dtype)
    if not idx.negative and j == 0:
        put(m, m, W)
    elif not idx.negative and j == m:
        put(1, 1, _inverse(W, "assignment at +m"))
    elif idx.negative and j == m:
        put(1, 1, W)
    elif idx.negative and j == 0:
        put(m, m, _inverse(W, "assignment at -0"))
    else:
        top = m - j
        if not idx.negative:
            put(top, top, W); put(top, top + 1, I); put(top + 1, top, I); put(top + 1, top + 1, Z)
        else:
            put(top, top, Z); put(top, top + 1, I); put(top + 1, top, I); put(top + 1, top + 1, W)
    return M


def dense_product(mats: Sequence[tuple[SignedIndex, np.ndarray]], m: int, n: int, dtype) -> np.ndarray:
    out = _eye(m * n, dtype)
    for idx, W in mats:
        out = out @ elementary_dense(idx, W, m, n)
    return out


# ---------------------------------------------------------------- block matrix

@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Square grid of n x n blocks with exact provenance tags and a dense realization."""

    nb: int
    n: int
    blocks: Mapping[tuple[int, int], Expr]
    array: np.ndarray | None = None
    valuation: Valuation | None = None

    def block(self, r: int, c: int) -> Expr:
        return self.blocks.get((r, c), Expr())

    def tag(self, r: int, c: int) -> str:
        return str(self.block(r, c))

    def tags(self) -> list[list[str]]:
        return [[self.tag(r, c) for c in range(self.nb)] for r in range(self.nb)]

    def nonzero_blocks(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.blocks.items() if not v.is_zero())

    def realize(self, valuation: Valuation | None = None) -> np.ndarray:
        """Dense matrix rebuilt from the tags."""
        val = valuation or self.valuation
        if val is None:
            raise ValueError("no valuation to realize the tags")
        out = _zeros((self.nb * self.n, self.nb * self.n), val.dtype)
        n = self.n
        for (r, c), e in self.blocks.items():
            out[r * n:(r + 1) * n, c * n:(c + 1) * n] = val.evaluate(e)
        return out

    @property
    def dense(self) -> np.ndarray:
        return self.array if self.array is not None else self.realize()

    def dense_block(self, r: int, c: int) -> np.ndarray:
        n = self.n
        return self.dense[r * n:(r + 1) * n, c * n:(c + 1) * n]

    def symbolic_bandwidth(self) -> int:
        nz = self.nonzero_blocks()
        return max((abs(r - c) for r, c in nz), default=0)

    def is_operation_free(self) -> bool:
        return all(e.is_atomic() for e in self.blocks.values())

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if (self.nb, self.n) != (other.nb, other.n):
            raise ValueError("block shapes differ")
        blocks: dict[tuple[int, int], Expr] = {}
        by_row: dict[int, list[tuple[int, Expr]]] = {}
        for (r, c), e in other.blocks.items():
            by_row.setdefault(r, []).append((c, e))
        for (r, k), e in self.blocks.items():
            for c, f in by_row.get(k, []):
                blocks[(r, c)] = blocks.get((r, c), Expr()) + e * f
        blocks = {k: v for k, v in blocks.items() if not v.is_zero()}
        arr = None
        if self.array is not None and other.array is not None:
            arr = self.array @ other.array
        val = self.valuation.merged(other.valuation) if self.valuation is not None else other.valuation
        return BlockMatrix(self.nb, self.n, blocks, arr, val)

    def scaled_rows(self, signs: Sequence[int]) -> "BlockMatrix":
        """diag(s_1 I, ..., s_m I) @ self for signs s_k in {+1, -1}."""
        blocks = {(r, c): e.scale(signs[r]) for (r, c), e in self.blocks.items()}
        arr = None
        if self.array is not None:
            d = np.repeat(np.asarray(signs), self.n)
            arr = self.array * d[:, None]
        return BlockMatrix(self.nb, self.n, blocks, arr, self.valuation)

    def transpose(self, rule: Callable[[str], Expr] | None = None) -> "BlockMatrix":
        """Block transpose; ``rule`` gives the transpose of each base symbol (plain symbol by default)."""
        rule = rule or (lambda s: Expr.sym(s + "^T") if not s.endswith("^T") else Expr.sym(s[:-2]))
        blocks = {(c, r): e.transpose(rule) for (r, c), e in self.blocks.items()}
        blocks = {k: v for k, v in blocks.items() if not v.is_zero()}
        arr = None if self.array is None else self.array.T
        return BlockMatrix(self.nb, self.n, blocks, arr, self.valuation)

    def same_tags(self, other: "BlockMatrix") -> bool:
        keys = set(self.blocks) | set(other.blocks)
        return all(self.block(*k) == other.block(*k) for k in keys)


def _assemble(factors: Sequence[tuple[SignedIndex, Expr]], m: int, val: Valuation) -> BlockMatrix:
    blocks = symbolic_blocks(factors, m)
    mats = [(idx, val.evaluate(W)) for idx, W in factors]
    arr = dense_product(mats, m, val.n, val.dtype)
    return BlockMatrix(m, val.n, blocks, arr, val)


def elementary(i: IndexLike, X, m: int, n: int | None = None, label: str = "X") -> BlockMatrix:
    """M_i(X) as a tagged block matrix; -0 and +m give the inverse factors."""
    idx = SignedIndex.parse(i)
    X = np.asarray(X)
    n = X.shape[0] if n is None else n
    dtype = object if X.dtype == object else complex
    val = Valuation(n, dtype, {label: X})
    return _assemble([(idx, Expr.sym(label))], m, val)


def fiedler(i: IndexLike, P: MatrixPolynomial) -> BlockMatrix:
    idx = SignedIndex.parse(i)
    return _assemble([(idx, trivial_label(idx, P.m))], P.m, Valuation.of_polynomial(P))


def fiedler_product(t, P: MatrixPolynomial) -> BlockMatrix:
    t = IndexTuple(t)
    return assignment_product(t, MatrixAssignment.trivial_for(t, P.m), P)


def assignment_product(t, X: MatrixAssignment, P: MatrixPolynomial | None = None,
                       m: int | None = None, n: int | None = None, dtype=None) -> BlockMatrix:
    """M_t(X) = M_{t1}(X1) ... M_{tr}(Xr); identity for the empty tuple."""
    t = IndexTuple(t)
    if X.tuple != t:
        raise ValueError("assignment does not belong to the tuple")
    if P is not None:
        m, n = P.m, P.n
        val = Valuation.of_polynomial(P)
    else:
        if m is None or n is None:
            raise ValueError("m and n are required without a polynomial")
        if dtype is None:
            dtype = object if any(M is not None and np.asarray(M).dtype == object for M in X.mats) else complex
        val = Valuation(n, dtype)
    for k, v in X.symbol_values().items():
        val.set(k, v)
    return _assemble(X.factors(), m, val)
