"""Index tuples over the signed block indices {±0, ±1, ..., ±m}.

A plus index k stands for the Fiedler factor at k, a minus index -k for the
factor at -k.  The two zeros are different: ``-0`` labels the inverse of the
factor at ``0``.  Plain integers cannot express this, so every entry is a
``SignedIndex``.

For minus-class tuples the successor of ``-s`` is ``-(s-1)``.  Internally both
classes are mapped to integer "values" (``k`` for plus, ``-k`` for minus with
``-0`` mapped to ``0``) so the successor is always ``value + 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

__all__ = [
    "SignedIndex",
    "IndexTuple",
    "consecutions",
    "inversions",
    "total_consecutions",
    "total_inversions",
    "satisfies_sip",
    "standard_form",
    "is_equivalent",
    "end_indices",
    "commute",
]


class SignedIndex(NamedTuple):
    negative: bool
    magnitude: int

    @classmethod
    def parse(cls, x: "IndexLike") -> "SignedIndex":
        if isinstance(x, SignedIndex):
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not indices")
        if isinstance(x, int):
            return cls(x < 0, abs(x))
        if isinstance(x, str):
            s = x.strip().replace("−", "-")
            if s.startswith("-"):
                return cls(True, int(s[1:]))
            return cls(False, int(s.lstrip("+")))
        raise TypeError(f"cannot read an index from {x!r}")

    @property
    def value(self) -> int:
        """Integer position on the successor line; -0 maps to 0."""
        return -self.magnitude if self.negative else self.magnitude

    def __neg__(self) -> "SignedIndex":
        return SignedIndex(not self.negative, self.magnitude)

    def __str__(self) -> str:
        return f"-{self.magnitude}" if self.negative else str(self.magnitude)

    def __repr__(self) -> str:
        return f"SignedIndex({self})"

    def to_json(self) -> Union[int, str]:
        if self.negative and self.magnitude == 0:
            return "-0"
        return self.value


IndexLike = Union[SignedIndex, int, str]


def _from_value(v: int, negative: bool) -> SignedIndex:
    if negative:
        if v > 0:
            raise ValueError(f"value {v} leaves the minus class")
        return SignedIndex(True, -v)
    if v < 0:
        raise ValueError(f"value {v} leaves the plus class")
    return SignedIndex(False, v)


@dataclass(frozen=True)
class IndexTuple:
    entries: tuple[SignedIndex, ...] = ()

    def __init__(self, entries: Iterable[IndexLike] = ()):
        if isinstance(entries, (str, int, SignedIndex)):
            entries = [entries]
        object.__setattr__(self, "entries", tuple(SignedIndex.parse(e) for e in entries))

    @classmethod
    def of(cls, *items: IndexLike) -> "IndexTuple":
        return cls(items)

    # sequence protocol
    def __iter__(self) -> Iterator[SignedIndex]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return IndexTuple(self.entries[k])
        return self.entries[k]

    def __contains__(self, x) -> bool:
        return SignedIndex.parse(x) in self.entries

    def __add__(self, other: "IndexTuple") -> "IndexTuple":
        return IndexTuple(self.entries + IndexTuple(other).entries)

    def __neg__(self) -> "IndexTuple":
        return IndexTuple(-e for e in self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.entries) + ")"

    def __repr__(self) -> str:
        return f"IndexTuple{self}"

    def rev(self) -> "IndexTuple":
        return IndexTuple(reversed(self.entries))

    def shift(self, q: int) -> "IndexTuple":
        """Add ``q`` to every value; the sign class of the result follows the values."""
        out = []
        for e in self.entries:
            v = e.value + q
            if v == 0:
                out.append(SignedIndex(e.negative and q == 0, 0))
            else:
                out.append(SignedIndex(v < 0, abs(v)))
        return IndexTuple(out)

    @property
    def sign_class(self) -> str | None:
        """'plus', 'minus', 'mixed', or None for the empty tuple."""
        kinds = {e.negative for e in self.entries}
        if not kinds:
            return None
        if len(kinds) == 2:
            return "mixed"
        return "minus" if kinds.pop() else "plus"

    def magnitudes(self) -> list[int]:
        return [e.magnitude for e in self.entries]

    def values(self) -> list[int]:
        return [e.value for e in self.entries]

    def restrict(self, keep: Iterable[IndexLike]) -> "IndexTuple":
        """Subtuple of the entries lying in ``keep``."""
        ks = {SignedIndex.parse(k) for k in keep}
        return IndexTuple(e for e in self.entries if e in ks)

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]

    @classmethod
    def from_json(cls, data: Union[str, Sequence]) -> "IndexTuple":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data)


def _single_class(alpha: IndexTuple) -> bool | None:
    """Return True for the minus class, False for plus, None for empty."""
    cls = alpha.sign_class
    if cls == "mixed":
        raise ValueError(f"mixed-sign tuple {alpha} has no successor order")
    if cls is None:
        return None
    return cls == "minus"


def _run_length(values: Sequence[int], start: int) -> int:
    """Largest p with (start, start+1, ..., start+p) a subsequence; -1 if absent."""
    want = start
    for v in values:
        if v == want:
            want += 1
    return want - start - 1


def consecutions(alpha: IndexTuple, t: IndexLike) -> int:
    """c_t(alpha)."""
    t = SignedIndex.parse(t)
    neg = _single_class(alpha)
    if neg is not None and neg != t.negative:
        raise ValueError(f"index {t} is not in the sign class of {alpha}")
    return _run_length(alpha.values(), t.value)


def inversions(alpha: IndexTuple, t: IndexLike) -> int:
    """i_t(alpha): same run read from the right."""
    return consecutions(alpha.rev(), t)


def _check_permutation(alpha: IndexTuple) -> int:
    if alpha.sign_class == "minus" or alpha.sign_class == "mixed":
        raise ValueError(f"{alpha} is not a permutation of {{0:m-1}}")
    m = len(alpha)
    if sorted(alpha.magnitudes()) != list(range(m)):
        raise ValueError(f"{alpha} is not a permutation of {{0:{m - 1}}}")
    return m


def total_consecutions(alpha: IndexTuple) -> int:
    m = _check_permutation(alpha)
    pos = {k: j for j, k in enumerate(alpha.magnitudes())}
    return sum(1 for k in range(m - 1) if pos[k] < pos[k + 1])


def total_inversions(alpha: IndexTuple) -> int:
    m = _check_permutation(alpha)
    return max(m - 1, 0) - total_consecutions(alpha)


def satisfies_sip(alpha: IndexTuple) -> bool:
    _single_class(alpha)
    vals = alpha.values()
    last: dict[int, int] = {}
    for b, v in enumerate(vals):
        a = last.get(v)
        if a is not None and (v + 1) not in vals[a + 1:b]:
            return False
        last[v] = b
    return True


def commute(a: SignedIndex, b: SignedIndex) -> bool:
    """Factors at a and b commute for any assignment when their magnitudes differ by more than one."""
    return abs(a.magnitude - b.magnitude) > 1


def _csf_values(vals: list[int]) -> list[int]:
    # Peel blocks off the right end.  The last entry of a csf is the smallest
    # element that can be moved to the end; each block then grows downward
    # while value-1 can also be moved to the end of what remains.
    rest = list(vals)

    def movable(x: int) -> int | None:
        idx = None
        for j in range(len(rest) - 1, -1, -1):
            if rest[j] == x:
                idx = j
                break
        if idx is None:
            return None
        if any(abs(y - x) <= 1 for y in rest[idx + 1:]):
            return None
        return idx

    blocks: list[list[int]] = []
    while rest:
        cands = [x for x in set(rest) if movable(x) is not None]
        b = min(cands)
        del rest[movable(b)]
        block = [b]
        x = b - 1
        while True:
            j = movable(x)
            if j is None:
                break
            del rest[j]
            block.insert(0, x)
            x -= 1
        blocks.append(block)
    out: list[int] = []
    for block in reversed(blocks):
        out.extend(block)
    return out


def standard_form(alpha: IndexTuple, kind: str = "column") -> IndexTuple:
    """Column (csf) or row (rsf) standard form of a SIP tuple."""
    if kind not in ("column", "row"):
        raise ValueError("kind must be 'column' or 'row'")
    if not satisfies_sip(alpha):
        raise ValueError(f"{alpha} violates the SIP; its standard form is not unique")
    neg = _single_class(alpha)
    if neg is None:
        return IndexTuple()
    vals = alpha.values()
    if kind == "row":
        return standard_form(alpha.rev(), "column").rev()
    out = _csf_values(vals)
    return IndexTuple(_from_value(v, neg) for v in out)


def is_equivalent(alpha: IndexTuple, beta: IndexTuple) -> bool:
    ca, cb = alpha.sign_class, beta.sign_class
    if ca is not None and cb is not None and ca != cb:
        raise ValueError("tuples from different sign classes")
    return standard_form(alpha) == standard_form(beta)


def end_indices(alpha: IndexTuple, m: int | None = None) -> set[SignedIndex]:
    """End indices of a sub-permutation of {0:m-1} or of {-m:-1}.

    Plus class: k != 0 with k-1 or k+1 absent.  Minus class: -t != -m with
    -(t-1) or -(t+1) absent; ``m`` defaults to the largest magnitude present.
    A -0 entry is ignored, so -1 is always an end index.
    """
    neg = _single_class(alpha)
    if neg is None:
        return set()
    mags = set(alpha.magnitudes())
    if not neg:
        return {SignedIndex(False, k) for k in mags
                if k != 0 and (k - 1 not in mags or k + 1 not in mags)}
    top = max(mags) if m is None else m
    mags.discard(0)
    return {SignedIndex(True, t) for t in mags
            if t != top and (t - 1 not in mags or t + 1 not in mags)}
