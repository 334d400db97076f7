"""Exact non-commutative block expressions used as provenance tags.

An ``Expr`` is a finite sum ``sum c_w * w`` where each word ``w`` is a tuple of
symbol names (the empty word is the identity block) and ``c_w`` is an integer.
Symbols are coefficient names ``A0 .. Am``, assigned names such as ``X`` or
``Y1[0]``, and their inverses written with a ``^-1`` suffix.  Products
cancel adjacent ``S`` / ``S^-1`` pairs.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

__all__ = ["Expr", "inv_name", "base_name", "is_inverse", "coefficient_index", "parse_pencil_entry"]

INV = "^-1"


def is_inverse(name: str) -> bool:
    return name.endswith(INV)


def base_name(name: str) -> str:
    return name[: -len(INV)] if is_inverse(name) else name


def inv_name(name: str) -> str:
    return base_name(name) if is_inverse(name) else name + INV


def coefficient_index(name: str) -> int | None:
    """j for the symbols ``Aj`` and ``Aj^-1``, else None."""
    mt = re.fullmatch(r"A(\d+)", base_name(name))
    return int(mt.group(1)) if mt else None


def _simplify(word: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for s in word:
        if out and out[-1] == inv_name(s):
            out.pop()
        else:
            out.append(s)
    return tuple(out)


class Expr:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[str, ...], int] | None = None):
        clean: dict[tuple[str, ...], int] = {}
        for w, c in (terms or {}).items():
            w = _simplify(w)
            c = clean.get(w, 0) + c
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls) -> "Expr":
        return cls()

    @classmethod
    def identity(cls, coef: int = 1) -> "Expr":
        return cls({(): coef})

    @classmethod
    def sym(cls, name: str, coef: int = 1) -> "Expr":
        return cls({(name,): coef})

    # algebra
    def __add__(self, other: "Expr") -> "Expr":
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return Expr(t)

    def __neg__(self) -> "Expr":
        return Expr({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Expr") -> "Expr":
        return self + (-other)

    def __mul__(self, other: "Expr") -> "Expr":
        t: dict[tuple[str, ...], int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = _simplify(w1 + w2)
                t[w] = t.get(w, 0) + c1 * c2
        return Expr(t)

    def scale(self, c: int) -> "Expr":
        return Expr({w: c * v for w, v in self.terms.items()})

    def inverse(self) -> "Expr":
        """Inverse of a signed single word (the only case with a symbolic inverse)."""
        if len(self.terms) != 1:
            raise ValueError(f"no symbolic inverse for {self}")
        (w, c), = self.terms.items()
        if c not in (1, -1):
            raise ValueError(f"no symbolic inverse for {self}")
        return Expr({tuple(inv_name(s) for s in reversed(w)): c})

    def transpose(self, rule: Callable[[str], "Expr"]) -> "Expr":
        """Transpose, with ``rule(name)`` giving the transpose of a base symbol."""
        out = Expr()
        for w, c in self.terms.items():
            term = Expr.identity(c)
            for s in reversed(w):
                t = rule(base_name(s))
                term = term * (t.inverse() if is_inverse(s) else t)
            out = out + term
        return out

    def substitute(self, rule: Callable[[str], "Expr"]) -> "Expr":
        out = Expr()
        for w, c in self.terms.items():
            term = Expr.identity(c)
            for s in w:
                t = rule(base_name(s))
                term = term * (t.inverse() if is_inverse(s) else t)
            out = out + term
        return out

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_atomic(self) -> bool:
        """0, ±I, or a single signed symbol: the operation-free alphabet."""
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        (w, c), = self.terms.items()
        return c in (1, -1) and len(w) <= 1

    def symbols(self) -> set[str]:
        return {s for w in self.terms for s in w}

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            body = "*".join(w) if w else "I"
            if c == 1:
                parts.append(("+", body))
            elif c == -1:
                parts.append(("-", body))
            else:
                parts.append(("+" if c > 0 else "-", f"{abs(c)}{body}" if not w else f"{abs(c)}*{body}"))
        s = "".join(f" {sg} {b}" for sg, b in parts).strip()
        if s.startswith("+ "):
            s = s[2:]
        elif s.startswith("- "):
            s = "-" + s[2:]
        return s

    def __repr__(self) -> str:
        return f"Expr({self})"

    # numeric realization
    def evaluate(self, value: Callable[[str], np.ndarray], n: int, dtype=complex) -> np.ndarray:
        out = np.zeros((n, n), dtype=dtype)
        if dtype == object:
            out[...] = 0
        for w, c in self.terms.items():
            if not w:
                term = np.eye(n, dtype=dtype) if dtype != object else _eye_obj(n)
            else:
                term = value(w[0])
                for s in w[1:]:
                    term = term @ value(s)
            out = out + (Fraction(c) if dtype == object else c) * term
        return out

    @classmethod
    def parse(cls, text: str) -> "Expr":
        """Parse sums like ``-A2*A0^-1 - I``, ``2I`` or ``X``."""
        text = text.replace("−", "-").replace(" ", "")
        if text in ("", "0"):
            return cls()
        out = cls()
        for sign, body in re.findall(r"([+-]?)([^+-]+)", _protect(text)):
            body = body.replace("~", "^-1")
            c = -1 if sign == "-" else 1
            mt = re.match(r"^(\d+)\*?(.*)$", body)
            if mt:
                c *= int(mt.group(1))
                body = mt.group(2) or "I"
            factors = [f for f in body.split("*") if f]
            term = cls.identity(c)
            for f in factors:
                if f != "I":
                    term = term * cls.sym(f)
            out = out + term
        return out


def _protect(text: str) -> str:
    return text.replace("^-1", "~")


def _eye_obj(n: int) -> np.ndarray:
    e = np.empty((n, n), dtype=object)
    e[...] = Fraction(0)
    for k in range(n):
        e[k, k] = Fraction(1)
    return e


def parse_pencil_entry(text: str) -> tuple[Expr, Expr]:
    """Split a displayed pencil block like ``lam*A5 + A4`` into (L1, L0) with L = lam*L1 - L0."""
    text = text.replace("−", "-").replace(" ", "").replace("λ", "lam")
    if text in ("", "0"):
        return Expr(), Expr()
    l1, l0 = Expr(), Expr()
    for sign, body in re.findall(r"([+-]?)([^+-]+)", _protect(text)):
        term_text = (sign or "+") + body.replace("~", "^-1")
        if "lam" in body:
            cleaned = body.replace("lam*", "").replace("*lam", "").replace("lam", "I")
            l1 = l1 + Expr.parse((sign or "+") + cleaned.replace("~", "^-1"))
        else:
            l0 = l0 - Expr.parse(term_text)
    return l1, l0
