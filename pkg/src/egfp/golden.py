"""Transcribed reference pencils and the structure-preserving templates built on them.

Each fixture stores a displayed pencil as strings, either blockwise in the
form ``lam*A5 + A4`` or as the two coefficients of lam*L1 - L0.  When a spec
producing the display is known it is stored too, so the assembled tags can be
compared with the transcription exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .blockmat import BlockMatrix, MatrixAssignment, MatrixPolynomial, Valuation
from .pencils import BlockPencil, EgfpSpec, build
from .symbolic import Expr, coefficient_index, parse_pencil_entry
from .tuples import IndexTuple

__all__ = [
    "Fixture",
    "FIXTURES",
    "UnsupportedTemplateError",
    "display_blocks",
    "fixture_tags",
    "spec_tags",
    "compare_fixture",
    "structure_holds",
    "structured_tags",
    "structured_generator",
    "template_pencil",
]


class UnsupportedTemplateError(ValueError):
    """No stored template for the requested (structure, degree) pair."""


Grid = tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Fixture:
    name: str
    m: int
    grid: Grid | None = None             # pencil entries, e.g. "lam*A5 + A4"
    L1: Grid | None = None               # or the coefficients of lam*L1 - L0
    L0: Grid | None = None
    spec: Callable[[], EgfpSpec] | None = None
    Q: tuple[int, ...] | None = None     # diagonal block signs applied on the left
    structure_Q: tuple[int, ...] | None = None  # signs that give the structure, when they differ from Q
    border: tuple[int, int] | None = None  # (block row of C, block column of B)
    structure: str | None = None
    symbols: tuple[str, ...] = ()        # assigned symbols besides the coefficients
    notes: str = ""


def _T(*items) -> IndexTuple:
    return IndexTuple(items)


def _asg(t, *labels) -> MatrixAssignment:
    return MatrixAssignment(IndexTuple(t), tuple(Expr.parse(l) for l in labels))


def _spec_egfpr(x_label: str = "X") -> EgfpSpec:
    return EgfpSpec(5, _T(3, 4, 2, 0), _T(-5, -1), sigma2=_T(3), X2=_asg([3], x_label))


def _spec_exa_rational() -> EgfpSpec:
    return EgfpSpec(5, _T(4, 1, 2, 0), _T(-5, -3), sigma2=_T(1),
                    X2=MatrixAssignment.trivial_for([1], 5))


def _spec_egfpr2() -> EgfpSpec:
    return EgfpSpec(6, _T(1, 2, 5), _T(-6, -3, -4, "-0"), sigma2=_T(1), tau1=_T(-4),
                    X2=_asg([1], "Y"), Y1=_asg([-4], "X"))


def _spec_egfpr2e() -> EgfpSpec:
    return EgfpSpec(5, _T(4, 2, 3), _T(-5, -1, "-0"), sigma2=_T(2), X2=_asg([2], "X"))


def _spec_nof() -> EgfpSpec:
    return EgfpSpec(3, _T(3), _T(-2, -1, "-0"), tau2=_T(-2), Y2=MatrixAssignment.trivial_for([-2], 3))


def _spec_sym8() -> EgfpSpec:
    return EgfpSpec(8, _T(4, 1, 0, 2), _T(-5, -8, -7, -6, -3), sigma1=_T(0), sigma2=_T(1, 0),
                    tau1=_T(-6), tau2=_T(-8), X1=_asg([0], "X"), X2=_asg([1, 0], "-A1", "X"),
                    Y1=MatrixAssignment.trivial_for([-6], 8), Y2=MatrixAssignment.trivial_for([-8], 8))


def _spec_sym6() -> EgfpSpec:
    return EgfpSpec(6, _T(1, 5), _T(-6, -3, -2, -4, "-0"), tau2=_T(-3),
                    Y2=MatrixAssignment.trivial_for([-3], 6))


_EGFPR = (
    ("lam*A5 + A4", "-X", "-I", "0", "0"),
    ("A3", "lam*X + A2", "lam*I", "-I", "0"),
    ("-I", "lam*I", "0", "0", "0"),
    ("0", "-I", "0", "0", "lam*I"),
    ("0", "0", "0", "lam*I", "lam*A1 + A0"),
)

_EXA_RATIONAL = (
    ("lam*A5 + A4", "-I", "0", "0", "0"),
    ("-I", "0", "lam*I", "0", "0"),
    ("0", "lam*I", "lam*A3 + A2", "A1", "-I"),
    ("0", "0", "A1", "-lam*A1 + A0", "lam*I"),
    ("0", "0", "-I", "lam*I", "0"),
)

_EGFPR2 = (
    ("lam*A6 + A5", "-I", "0", "0", "0", "0"),
    ("0", "0", "-I", "lam*I", "0", "0"),
    ("-I", "0", "lam*I - X", "lam*X", "0", "0"),
    ("0", "lam*I", "lam*A4", "lam*A3 + A2", "-Y", "-I"),
    ("0", "0", "0", "A1", "lam*Y - I", "lam*I"),
    ("0", "0", "0", "-I", "-lam*A0^-1", "0"),
)

_EGFPR2E = (
    ("lam*A5 + A4", "A3", "-X", "-I", "0"),
    ("-I", "lam*I", "0", "0", "0"),
    ("0", "A2", "lam*X - I", "lam*I", "0"),
    ("0", "-I", "0", "0", "-lam*A0^-1"),
    ("0", "0", "lam*I", "0", "-lam*A1*A0^-1 - I"),
)

_NOF_L1 = (
    ("0", "0", "-A0^-1"),
    ("0", "I", "-A2*A0^-1"),
    ("I", "A2", "-A1*A0^-1"),
)
_NOF_L0 = (
    ("0", "A3^-1", "0"),
    ("I", "A2", "0"),
    ("0", "0", "I"),
)

_SYM6 = (
    ("lam*A6 + A5", "-I", "0", "0", "0", "0"),
    ("-I", "0", "0", "lam*I", "0", "0"),
    ("0", "0", "0", "-I", "lam*I", "0"),
    ("0", "lam*I", "-I", "lam*A4 - A3", "lam*A3", "0"),
    ("0", "0", "lam*I", "lam*A3", "lam*A2 + A1", "-I"),
    ("0", "0", "0", "0", "-I", "-lam*A0^-1"),
)

_TEVEN = (
    ("lam*A5 + A4", "A3", "-I", "0", "0"),
    ("-A3", "lam*A3 - A2", "-lam*I", "I", "0"),
    ("-I", "lam*I", "0", "0", "0"),
    ("0", "I", "0", "0", "-lam*I"),
    ("0", "0", "0", "lam*I", "lam*A1 + A0"),
)

_TODD = (
    ("lam*A5 + A4", "A3", "-I", "0", "0"),
    ("-A3", "lam*A3 - A2", "-lam*I", "I", "0"),
    ("I", "-lam*I", "0", "0", "0"),
    ("0", "-I", "0", "0", "lam*I"),
    ("0", "0", "0", "-lam*I", "-lam*A1 - A0"),
)

_SKEW = (
    ("lam*A5 + A4", "A3", "-I", "0", "0"),
    ("A3", "-lam*A3 + A2", "lam*I", "-I", "0"),
    ("I", "-lam*I", "0", "0", "0"),
    ("0", "I", "0", "0", "-lam*I"),
    ("0", "0", "0", "lam*I", "lam*A1 + A0"),
)

# L(lam) = lam*Y + X, so L1 = Y and L0 = -X
_PAL7_Y = (
    ("0", "0", "0", "0", "0", "-I", "0"),
    ("0", "0", "0", "0", "0", "-A1", "-A0"),
    ("0", "0", "0", "I", "A3", "0", "0"),
    ("0", "0", "0", "0", "-I", "0", "0"),
    ("I", "A6", "A5", "0", "0", "0", "0"),
    ("0", "A7", "A6", "0", "0", "0", "0"),
    ("0", "0", "A7", "0", "0", "0", "0"),
)
_PAL7_X = (
    ("0", "0", "0", "0", "I", "0", "0"),
    ("0", "0", "0", "0", "A1", "A0", "0"),
    ("0", "0", "0", "0", "A2", "A1", "A0"),
    ("0", "0", "I", "0", "0", "0", "0"),
    ("0", "0", "A4", "-I", "0", "0", "0"),
    ("-I", "-A6", "0", "0", "0", "0", "0"),
    ("0", "-A7", "0", "0", "0", "0", "0"),
)

_SYM8 = (
    ("-A8", "0", "lam*A8", "0", "0", "0", "0", "0"),
    ("0", "0", "-I", "lam*I", "0", "0", "0", "0"),
    ("lam*A8", "-I", "lam*A7 - A6", "lam*A6", "0", "0", "0", "0"),
    ("0", "lam*I", "lam*A6", "lam*A5 + A4", "-I", "0", "0", "0"),
    ("0", "0", "0", "-I", "0", "lam*I", "0", "0"),
    ("0", "0", "0", "0", "lam*I", "lam*A3 + A2", "A1", "-X"),
    ("0", "0", "0", "0", "0", "A1", "-lam*A1 + A0", "lam*X"),
    ("0", "0", "0", "0", "0", "-X", "lam*X", "0"),
)


def _neg_grid(g: Grid) -> Grid:
    return tuple(tuple(str(-Expr.parse(e)) for e in row) for row in g)


FIXTURES: dict[str, Fixture] = {f.name: f for f in (
    Fixture("egfpr-m5", 5, grid=_EGFPR, spec=_spec_egfpr, symbols=("X",)),
    Fixture("rational-m5", 5, grid=_EXA_RATIONAL, spec=_spec_exa_rational, border=(4, 4),
            notes="decoration (1) sits on the right of sigma, as the product formula requires"),
    Fixture("recovery-m6", 6, grid=_EGFPR2, spec=_spec_egfpr2, symbols=("X", "Y")),
    Fixture("recovery-m5", 5, grid=_EGFPR2E, spec=_spec_egfpr2e, symbols=("X",)),
    Fixture("not-operation-free-m3", 3, L1=_NOF_L1, L0=_NOF_L0, spec=_spec_nof),
    Fixture("symmetric-m6", 6, grid=_SYM6, spec=_spec_sym6, structure="symmetric",
            notes="block (6,6) carries lam: the -0 factor belongs to the lam coefficient"),
    Fixture("T-even-m5", 5, grid=_TEVEN, spec=lambda: _spec_egfpr("-A3"), Q=(1, -1, 1, -1, 1),
            structure="T-even"),
    Fixture("T-odd-m5", 5, grid=_TODD, spec=lambda: _spec_egfpr("-A3"), Q=(1, -1, -1, 1, -1),
            structure_Q=(1, -1, -1, 1, 1), structure="T-odd",
            notes="the displayed sign on the last block row breaks the T-odd symmetry of the lam part"),
    Fixture("skew-m5", 5, grid=_SKEW, spec=lambda: _spec_egfpr("-A3"), Q=(1, 1, -1, -1, 1),
            structure="skew"),
    Fixture("palindromic-m7", 7, L1=_PAL7_Y, L0=_neg_grid(_PAL7_X), structure="T-palindromic"),
    Fixture("symmetric-penta-m8", 8, grid=_SYM8, spec=_spec_sym8, structure="symmetric", symbols=("X",)),
)}


# ---------------------------------------------------------------- tags

Blocks = dict[tuple[int, int], Expr]


def display_blocks(fx: Fixture) -> tuple[Blocks, Blocks]:
    """(L1, L0) tags of the transcribed display, zero blocks omitted."""
    b1: Blocks = {}
    b0: Blocks = {}
    for r in range(fx.m):
        for c in range(fx.m):
            if fx.grid is not None:
                a, b = parse_pencil_entry(fx.grid[r][c])
            else:
                a, b = Expr.parse(fx.L1[r][c]), Expr.parse(fx.L0[r][c])
            if not a.is_zero():
                b1[(r, c)] = a
            if not b.is_zero():
                b0[(r, c)] = b
    return b1, b0


def _signed(blocks: Blocks, Q: tuple[int, ...] | None) -> Blocks:
    if Q is None:
        return dict(blocks)
    return {(r, c): e.scale(Q[r]) for (r, c), e in blocks.items()}


def spec_tags(fx: Fixture) -> tuple[Blocks, Blocks]:
    """(L1, L0) tags assembled from the fixture's spec, with Q applied."""
    if fx.spec is None:
        raise UnsupportedTemplateError(f"fixture {fx.name} is a transcription without a spec")
    pen = build(fx.spec())
    nz = lambda b: {k: v for k, v in b.items() if not v.is_zero()}
    return _signed(nz(pen.L1.blocks), fx.Q), _signed(nz(pen.L0.blocks), fx.Q)


def fixture_tags(fx: Fixture) -> tuple[Blocks, Blocks]:
    """Tags of the fixture: from its spec when available, else the transcription."""
    return spec_tags(fx) if fx.spec is not None else display_blocks(fx)


def structured_tags(fx: Fixture) -> tuple[Blocks, Blocks]:
    """Tags of the structure-preserving pencil (Q corrected where needed)."""
    if fx.structure_Q is None:
        return fixture_tags(fx)
    b1, b0 = spec_tags(fx)
    flip = tuple(a * b for a, b in zip(fx.Q, fx.structure_Q))
    return _signed(b1, flip), _signed(b0, flip)


def compare_fixture(fx: Fixture) -> list[str]:
    """Blockwise differences between the assembled spec and the transcription ([] when equal)."""
    want1, want0 = display_blocks(fx)
    got1, got0 = spec_tags(fx)
    out = []
    for r in range(fx.m):
        for c in range(fx.m):
            for lab, w, g in (("L1", want1, got1), ("L0", want0, got0)):
                a, b = w.get((r, c), Expr()), g.get((r, c), Expr())
                if a != b:
                    out.append(f"{lab}[{r + 1},{c + 1}]: display {a}, assembled {b}")
    return out


# ---------------------------------------------------------------- structure

def _transpose_rule(kind: str, m: int) -> Callable[[str], Expr]:
    """Transpose of a coefficient symbol under the named structure of P."""
    def rule(name: str) -> Expr:
        j = coefficient_index(name)
        if j is None:
            # assigned symbols in the templates are taken symmetric
            return Expr.sym(name)
        if kind == "symmetric":
            return Expr.sym(name)
        if kind == "skew":
            return Expr.sym(name, -1)
        if kind == "T-even":
            return Expr.sym(name, (-1) ** j)
        if kind == "T-odd":
            return Expr.sym(name, (-1) ** (j + 1))
        if kind == "T-palindromic":
            return Expr.sym(f"A{m - j}")
        raise UnsupportedTemplateError(f"unknown structure {kind}")
    return rule


def _block_transpose(blocks: Blocks, rule) -> Blocks:
    return {(c, r): e.transpose(rule) for (r, c), e in blocks.items()}


def _equal(a: Blocks, b: Blocks, sign: int = 1) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, Expr()) == b.get(k, Expr()).scale(sign) for k in keys)


def structure_holds(kind: str, L1: Blocks, L0: Blocks, m: int) -> bool:
    """Exact tag-level check of the pencil structure matching P's structure.

    symmetric: L^T = L.  skew: L^T = -L.  T-even: L(-lam)^T = L(lam).
    T-odd: L(-lam)^T = -L(lam).  T-palindromic: rev(L)^T = L.
    """
    rule = _transpose_rule(kind, m)
    T1, T0 = _block_transpose(L1, rule), _block_transpose(L0, rule)
    if kind == "symmetric":
        return _equal(T1, L1) and _equal(T0, L0)
    if kind == "skew":
        return _equal(T1, L1, -1) and _equal(T0, L0, -1)
    if kind == "T-even":
        return _equal(T1, L1, -1) and _equal(T0, L0)
    if kind == "T-odd":
        return _equal(T1, L1) and _equal(T0, L0, -1)
    if kind == "T-palindromic":
        return _equal(T1, L0, -1)
    raise UnsupportedTemplateError(f"unknown structure {kind}")


# ---------------------------------------------------------------- numeric templates

_TEMPLATES = {
    ("symmetric", 6): "symmetric-m6",
    ("symmetric", 8): "symmetric-penta-m8",
    ("T-even", 5): "T-even-m5",
    ("T-odd", 5): "T-odd-m5",
    ("skew", 5): "skew-m5",
    ("T-palindromic", 7): "palindromic-m7",
}


def template_pencil(fx: Fixture, P: MatrixPolynomial, assigned: dict[str, np.ndarray] | None = None,
                    structured: bool = False) -> BlockPencil:
    """Numeric pencil from the fixture's tags, valued at the coefficients of P."""
    if P.m != fx.m:
        raise ValueError(f"template {fx.name} needs degree {fx.m}, got {P.m}")
    val = Valuation.of_polynomial(P)
    for name in fx.symbols:
        val.set(name, (assigned or {}).get(name, np.eye(P.n)))
    b1, b0 = structured_tags(fx) if structured else fixture_tags(fx)
    L1 = BlockMatrix(fx.m, P.n, b1, None, val)
    L0 = BlockMatrix(fx.m, P.n, b0, None, val)
    L1 = BlockMatrix(fx.m, P.n, b1, L1.realize(), val)
    L0 = BlockMatrix(fx.m, P.n, b0, L0.realize(), val)
    return BlockPencil(L1, L0, fx.spec() if fx.spec is not None and fx.Q is None else None, P)


def structured_generator(kind: str, m: int, P: MatrixPolynomial,
                         X: np.ndarray | None = None) -> tuple[BlockPencil, np.ndarray | None]:
    """Structure-preserving pencil for P from the stored templates.

    Returns the pencil (already multiplied by Q where the template uses one)
    and the block-diagonal sign matrix Q, or None.  ``X`` is the free symmetric
    assignment of templates that have one (identity by default).
    """
    name = _TEMPLATES.get((kind, m))
    if name is None:
        supported = ", ".join(f"{k} m={d}" for k, d in _TEMPLATES)
        raise UnsupportedTemplateError(f"no template for {kind} at m={m}; available: {supported}")
    fx = FIXTURES[name]
    pen = template_pencil(fx, P, {"X": X} if X is not None else None, structured=True)
    Q = None
    signs = fx.structure_Q or fx.Q
    if signs is not None:
        Q = np.kron(np.diag(signs), np.eye(P.n))
    return pen, Q
