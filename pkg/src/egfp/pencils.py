"""Extended generalized Fiedler pencils (EGFPs) of matrix polynomials.

An EGFP is fixed by six index tuples and four assignments::

    L(lam) = M_tau1(Y1) M_sigma1(X1) (lam M^P_tau - M^P_sigma) M_sigma2(X2) M_tau2(Y2)

with (sigma, -tau) a permutation of {0:m}.  ``L1`` is the coefficient of lam
(built around M^P_tau) and ``L0`` the constant part (around M^P_sigma), so the
pencil is ``lam*L1 - L0``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

from .blockmat import (BlockMatrix, MatrixAssignment, MatrixPolynomial, SingularAssignmentError,
                       Valuation, _assemble, symbolic_blocks, trivial_label)
from .symbolic import Expr, coefficient_index
from .tuples import (IndexTuple, SignedIndex, consecutions, end_indices, inversions, satisfies_sip,
                     standard_form)

__all__ = [
    "EgfpSpec",
    "ValidationReport",
    "BlockPencil",
    "BandwidthPrediction",
    "end_index_hypothesis",
    "validate",
    "build",
    "build_core",
    "classify",
    "bandwidth",
    "predict_bandwidth",
    "bandwidth_agrees",
    "operation_free_hypothesis",
    "is_operation_free",
    "enumerate_specs",
    "random_spec",
    "InvalidSpecError",
]

DECORATIONS = ("sigma1", "sigma2", "tau1", "tau2")
ASSIGNMENT_OF = {"sigma1": "X1", "sigma2": "X2", "tau1": "Y1", "tau2": "Y2"}


class InvalidSpecError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EgfpSpec:
    m: int
    sigma: IndexTuple
    tau: IndexTuple
    sigma1: IndexTuple = IndexTuple()
    sigma2: IndexTuple = IndexTuple()
    tau1: IndexTuple = IndexTuple()
    tau2: IndexTuple = IndexTuple()
    X1: MatrixAssignment | None = None
    X2: MatrixAssignment | None = None
    Y1: MatrixAssignment | None = None
    Y2: MatrixAssignment | None = None

    def __post_init__(self):
        for name in ("sigma", "tau") + DECORATIONS:
            object.__setattr__(self, name, IndexTuple(getattr(self, name)))
        for dec, asg in ASSIGNMENT_OF.items():
            t = getattr(self, dec)
            if getattr(self, asg) is None:
                object.__setattr__(self, asg, MatrixAssignment.named(t, prefix=asg))

    # assignment helpers
    def assignments(self) -> dict[str, MatrixAssignment]:
        return {a: getattr(self, a) for a in ("X1", "X2", "Y1", "Y2")}

    def with_random_assignments(self, n: int, rng: np.random.Generator, complex_: bool = False) -> "EgfpSpec":
        kw = {asg: MatrixAssignment.random(getattr(self, dec), n, rng, prefix=asg, complex_=complex_)
              for dec, asg in ASSIGNMENT_OF.items()}
        return replace(self, **kw)

    def with_trivial_assignments(self) -> "EgfpSpec":
        kw = {asg: MatrixAssignment.trivial_for(getattr(self, dec), self.m) for dec, asg in ASSIGNMENT_OF.items()}
        return replace(self, **kw)

    def core(self) -> "EgfpSpec":
        """The generalized Fiedler core (no decorations)."""
        return EgfpSpec(self.m, self.sigma, self.tau)

    @property
    def omega(self) -> IndexTuple:
        return -self.tau

    def key(self) -> tuple:
        return tuple(tuple(e) for e in (self.sigma, self.tau) + tuple(getattr(self, d) for d in DECORATIONS))

    def __str__(self) -> str:
        parts = [f"m={self.m}", f"sigma={self.sigma}", f"tau={self.tau}"]
        parts += [f"{d}={getattr(self, d)}" for d in DECORATIONS if len(getattr(self, d))]
        return "EgfpSpec(" + ", ".join(parts) + ")"

    __repr__ = __str__


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    valid: bool
    violations: list[tuple[str, str]] = field(default_factory=list)
    operation_free_hypothesis: bool = False
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [{"clause": c, "message": msg} for c, msg in self.violations],
            "operation_free_hypothesis": self.operation_free_hypothesis,
            "notes": list(self.notes),
        }


def operation_free_hypothesis(spec: EgfpSpec) -> bool:
    """m-1 and m not both in sigma, and -1 and -0 not both in tau."""
    m = spec.m
    s = set(spec.sigma.magnitudes())
    t = set(spec.tau.magnitudes())
    return not ({m - 1, m} <= s) and not ({1, 0} <= t)


def validate(spec: EgfpSpec) -> ValidationReport:
    v: list[tuple[str, str]] = []
    notes: list[str] = []
    m = spec.m
    if m < 2:
        v.append(("degree", f"m = {m} must be at least 2"))
    tuples = {"sigma": spec.sigma, "tau": spec.tau, **{d: getattr(spec, d) for d in DECORATIONS}}
    for name, t in tuples.items():
        want_neg = name.startswith("tau")
        bad = [str(e) for e in t if e.negative != want_neg]
        if bad:
            v.append(("sign-class", f"{name} holds indices of the wrong sign: {', '.join(bad)}"))
        big = [str(e) for e in t if e.magnitude > m]
        if big:
            v.append(("range", f"{name} holds indices beyond m = {m}: {', '.join(big)}"))
    mags = spec.sigma.magnitudes() + spec.tau.magnitudes()
    if sorted(mags) != list(range(m + 1)):
        v.append(("permutation", f"(sigma, -tau) = {spec.sigma} + {-spec.tau} is not a permutation of {{0:{m}}}"))
    sig_ok = set(spec.sigma.entries) - {SignedIndex(False, m - 1), SignedIndex(False, m)}
    tau_ok = set(spec.tau.entries) - {SignedIndex(True, 1), SignedIndex(True, 0)}
    for d in ("sigma1", "sigma2"):
        bad = [str(e) for e in getattr(spec, d) if e not in sig_ok]
        if bad:
            v.append(("sigma-decorations", f"{d} may only use indices of sigma other than m-1, m; found {', '.join(bad)}"))
    for d in ("tau1", "tau2"):
        bad = [str(e) for e in getattr(spec, d) if e not in tau_ok]
        if bad:
            v.append(("tau-decorations", f"{d} may only use indices of tau other than -1, -0; found {', '.join(bad)}"))
    for label, parts in (("sigma-sip", (spec.sigma1, spec.sigma, spec.sigma2)),
                         ("tau-sip", (spec.tau1, spec.tau, spec.tau2))):
        whole = parts[0] + parts[1] + parts[2]
        try:
            ok = satisfies_sip(whole)
        except ValueError:
            ok = False
        if not ok:
            v.append((label, f"{whole} does not satisfy the SIP"))
    for dec, asg in ASSIGNMENT_OF.items():
        A = getattr(spec, asg)
        if A.tuple != getattr(spec, dec):
            v.append(("assignment-length", f"{asg} does not match {dec}"))
            continue
        for e, M in zip(A.tuple, A.mats):
            if M is None or e.magnitude not in (0, m):
                continue
            M = np.asarray(M)
            singular = (M.dtype != object and np.linalg.matrix_rank(M) < M.shape[0])
            if M.dtype == object:
                from .blockmat import exact_inverse
                try:
                    exact_inverse(M)
                except SingularAssignmentError:
                    singular = True
            if singular:
                v.append(("assignment-nonsingular", f"{asg} at index {e} must be nonsingular"))
    if not v:
        if SignedIndex(False, m) in spec.sigma.entries:
            notes.append("m in sigma: building needs A_m nonsingular")
        if SignedIndex(True, 0) in spec.tau.entries:
            notes.append("-0 in tau: building needs A_0 nonsingular")
    return ValidationReport(not v, v, operation_free_hypothesis(spec) if not v else False, notes)


# ---------------------------------------------------------------- building

@dataclass(frozen=True, eq=False)
class BlockPencil:
    """lam*L1 - L0 with both coefficients stored as tagged block matrices."""

    L1: BlockMatrix
    L0: BlockMatrix
    spec: EgfpSpec | None = None
    P: MatrixPolynomial | None = None

    @property
    def m(self) -> int:
        return self.L1.nb

    @property
    def n(self) -> int:
        return self.L1.n

    def __call__(self, lam) -> np.ndarray:
        return lam * self.L1.dense - self.L0.dense

    def tag_grid(self) -> list[list[str]]:
        """Blocks of lam*L1 - L0 written as strings."""
        out = []
        for r in range(self.m):
            row = []
            for c in range(self.m):
                a, b = self.L1.block(r, c), self.L0.block(r, c)
                row.append(_pencil_tag(a, b))
            out.append(row)
        return out

    def same_tags(self, other: "BlockPencil") -> bool:
        return self.L1.same_tags(other.L1) and self.L0.same_tags(other.L0)


def _pencil_tag(a: Expr, b: Expr) -> str:
    """lam*a - b written like the displays, e.g. 'lam*A5 + A4'."""
    out = ""
    if not a.is_zero():
        sa = str(a)
        if len(a.terms) > 1:
            sa = f"({sa})"
        out = f"-lam*{sa[1:]}" if sa.startswith("-") else f"lam*{sa}"
    if not b.is_zero():
        sb = str(-b)
        if not out:
            return sb
        out += f" - {sb[1:]}" if sb.startswith("-") and len(b.terms) == 1 else f" + {sb}"
    return out or "0"


def _core_factors(t: IndexTuple, m: int) -> list[tuple[SignedIndex, Expr]]:
    return [(e, trivial_label(e, m)) for e in t]


def _spec_valuation(spec: EgfpSpec, P: MatrixPolynomial) -> Valuation:
    val = Valuation.of_polynomial(P)
    for asg in spec.assignments().values():
        for lab, M in zip(asg.labels, asg.mats):
            (w, _c), = lab.terms.items()
            if coefficient_index(w[0]) is not None:
                continue
            if M is None:
                raise InvalidSpecError(f"assignment symbol {w[0]} has no matrix; "
                                       "use with_random_assignments or supply matrices")
            val.set(w[0].removesuffix("^-1"), M)
    return val


def _sides(spec: EgfpSpec, swap: bool):
    if swap:
        left = spec.X1.factors() + spec.Y1.factors()
        right = spec.Y2.factors() + spec.X2.factors()
    else:
        left = spec.Y1.factors() + spec.X1.factors()
        right = spec.X2.factors() + spec.Y2.factors()
    return left, right


def build(spec: EgfpSpec, P: MatrixPolynomial | None = None, *, swap: bool = False,
          check: bool = True) -> BlockPencil:
    """Assemble lam*L1 - L0.

    Without ``P`` only the symbolic tags are produced (``array`` is None and the
    block size is 1).  ``swap=True`` exchanges the sigma_j and tau_j factors,
    an experimental variant with no guarantees.
    """
    if check:
        rep = validate(spec)
        if not rep.valid:
            raise InvalidSpecError("; ".join(f"[{c}] {msg}" for c, msg in rep.violations))
    m = spec.m
    left, right = _sides(spec, swap)
    f1 = left + _core_factors(spec.tau, m) + right
    f0 = left + _core_factors(spec.sigma, m) + right
    if P is None:
        return BlockPencil(BlockMatrix(m, 1, symbolic_blocks(f1, m)),
                           BlockMatrix(m, 1, symbolic_blocks(f0, m)), spec, None)
    if P.m != m:
        raise InvalidSpecError(f"polynomial degree {P.m} differs from spec degree {m}")
    val = _spec_valuation(spec, P)
    return BlockPencil(_assemble(f1, m, val), _assemble(f0, m, val), spec, P)


def build_core(spec: EgfpSpec, P: MatrixPolynomial | None = None) -> BlockPencil:
    return build(spec.core(), P)


# ---------------------------------------------------------------- classification

def _is_perm_of(t: IndexTuple, values: set[int]) -> bool:
    return len(t) == len(values) and set(t.magnitudes()) == values


def classify(spec: EgfpSpec) -> set[str]:
    m = spec.m
    no_dec = all(len(getattr(spec, d)) == 0 for d in DECORATIONS)
    fam = set()
    if (_is_perm_of(spec.sigma, set(range(m))) and spec.tau == IndexTuple([-m]) and no_dec):
        fam.add("FP")
    if no_dec:
        fam.add("GFP")
    gfpr = False
    sig = set(spec.sigma.magnitudes())
    if sig and len(spec.sigma) == len(sig):
        h = max(sig)
        if h <= m - 1 and sig == set(range(h + 1)) and _is_perm_of(spec.tau, set(range(h + 1, m + 1))):
            gfpr = True
    if gfpr:
        fam.add("GFPR")
        if all(getattr(spec, a).trivial or len(getattr(spec, a)) == 0 for a in ("X1", "X2", "Y1", "Y2")):
            fam.add("FPR")
    return fam or {"EGFP-proper"}


# ---------------------------------------------------------------- bandwidth

def bandwidth(pencil: BlockPencil, tol: float = 1e-12) -> int:
    """max |row - col| over nonzero blocks of L0 and L1 (numeric when available)."""
    if pencil.L1.array is None:
        return max(pencil.L1.symbolic_bandwidth(), pencil.L0.symbolic_bandwidth())
    n, m = pencil.n, pencil.m
    best = 0
    for M in (pencil.L1.array, pencil.L0.array):
        A = np.abs(np.asarray(M, dtype=complex))
        thr = tol * max(1.0, A.max())
        B = A.reshape(m, n, m, n).max(axis=(1, 3)) > thr
        for r, c in zip(*np.nonzero(B)):
            best = max(best, abs(int(r) - int(c)))
    return best


@dataclass
class BandwidthPrediction:
    kind: str                 # tridiagonal | pentadiagonal | wider | not-applicable
    max_run: int              # largest c_t / i_t over 1 <= |t| <= m-1, diagonal factors dropped
    hypothesis: bool          # end-index hypothesis of the pentadiagonal characterization
    witness: str | None = None
    literal_run: int = -1     # same maximum with the factors at m and -0 kept

    def __str__(self) -> str:
        return self.kind


def _runs_of(a: IndexTuple, b: IndexTuple, m: int) -> tuple[int, str | None]:
    best, witness = -1, None
    for t in range(1, m):
        for name, val in ((f"c_{t}", consecutions(a, t) if len(a) else -1),
                          (f"i_{t}", inversions(a, t) if len(a) else -1),
                          (f"c_-{t}", consecutions(b, -t) if len(b) else -1),
                          (f"i_-{t}", inversions(b, -t) if len(b) else -1)):
            if val > best:
                best, witness = val, name
    return best, witness


def _max_run(spec: EgfpSpec, literal: bool = False) -> tuple[int, str | None]:
    """Largest consecution/inversion run at 1 <= |t| <= m-1.

    The factors at m and -0 are block diagonal, so a run ending in them does
    not widen the band; unless ``literal`` they are dropped before counting.
    """
    m = spec.m
    a = spec.sigma1 + spec.sigma + spec.sigma2
    b = spec.tau1 + spec.tau + spec.tau2
    if not literal:
        a = IndexTuple(e for e in a if e.magnitude != m)
        b = IndexTuple(e for e in b if e.magnitude != 0)
    return _runs_of(a, b, m)


def end_index_hypothesis(spec: EgfpSpec) -> bool:
    m = spec.m
    sig = spec.sigma.restrict(range(m))
    tau = IndexTuple(e for e in spec.tau if e.magnitude >= 1)
    es = end_indices(sig)
    et = end_indices(tau, m) if len(tau) else set()
    for d in ("sigma1", "sigma2"):
        if es & set(getattr(spec, d).entries):
            return False
    for d in ("tau1", "tau2"):
        if et & set(getattr(spec, d).entries):
            return False
    return True


def predict_bandwidth(spec: EgfpSpec) -> BandwidthPrediction:
    """Tridiagonal iff every run is <= 0; a run >= 2 forces bandwidth >= 3.

    Runs equal to 1 give a pentadiagonal pencil only under the end-index
    hypothesis; without it the answer is ``not-applicable``.
    """
    k, witness = _max_run(spec)
    lit, _ = _max_run(spec, literal=True)
    hyp = end_index_hypothesis(spec)
    if k <= 0:
        kind = "tridiagonal"
    elif k >= 2:
        kind = "wider"
    else:
        kind = "pentadiagonal" if hyp else "not-applicable"
    return BandwidthPrediction(kind, k, hyp, witness, lit)


def bandwidth_agrees(kind: str, measured: int) -> bool:
    """Whether a measured block bandwidth is consistent with a predicted class."""
    if kind == "tridiagonal":
        return measured <= 1
    if kind == "pentadiagonal":
        return measured == 2
    if kind == "wider":
        return measured >= 3
    return True


def is_operation_free(pencil: BlockPencil) -> bool:
    return pencil.L1.is_operation_free() and pencil.L0.is_operation_free()


# ---------------------------------------------------------------- enumeration

def _orientations(run: list[int]) -> Iterator[list[int]]:
    """All orderings of a run of consecutive values up to commutation.

    Each adjacent pair (k, k+1) is placed either k first or k+1 first; the
    emitted order is the lexicographically smallest linear extension.
    """
    if len(run) == 1:
        yield run[:]
        return
    for bits in itertools.product((0, 1), repeat=len(run) - 1):
        # bit 0: k before k+1 ; bit 1: k+1 before k
        order: list[int] = []
        placed = set()
        remaining = set(run)
        while remaining:
            for v in sorted(remaining):
                k = run.index(v)
                ok = True
                if k > 0 and bits[k - 1] == 0 and run[k - 1] not in placed:
                    ok = False
                if k < len(run) - 1 and bits[k] == 1 and run[k + 1] not in placed:
                    ok = False
                if ok:
                    order.append(v)
                    placed.add(v)
                    remaining.discard(v)
                    break
        yield order


def _runs(values: list[int]) -> list[list[int]]:
    runs: list[list[int]] = []
    for v in sorted(values):
        if runs and runs[-1][-1] == v - 1:
            runs[-1].append(v)
        else:
            runs.append([v])
    return runs


def _arrangements(values: list[int], distinct: bool) -> Iterator[list[int]]:
    if not values:
        yield []
        return
    if not distinct:
        for p in itertools.permutations(sorted(values)):
            yield list(p)
        return
    runs = _runs(values)
    for combo in itertools.product(*[list(_orientations(r)) for r in runs]):
        out: list[int] = []
        for part in reversed(combo):
            out.extend(part)
        yield out


def _decorations(pool: list[SignedIndex], cap: int, distinct: bool) -> list[IndexTuple]:
    out = [IndexTuple()]
    seen = {IndexTuple()}
    for length in range(1, cap + 1):
        for combo in itertools.product(pool, repeat=length):
            t = IndexTuple(combo)
            if distinct:
                try:
                    if not satisfies_sip(t):
                        # keep non-SIP decorations; SIP is checked on the concatenation
                        key = t
                    else:
                        key = standard_form(t)
                except ValueError:
                    key = t
                if key in seen:
                    continue
                seen.add(key)
            out.append(t)
    return out


def enumerate_specs(m: int, cap: int = 2, *, distinct: bool = False, bandwidth_class: str | None = None,
                    family: str | None = None, operation_free: bool | None = None,
                    decorated: bool = True) -> Iterator[EgfpSpec]:
    """All valid specs of degree m with each decoration of length <= cap, in a fixed order.

    ``distinct=True`` keeps one representative per commutation class of sigma,
    tau and each decoration (equivalent tuples give identical pencils).
    Filters: ``bandwidth_class`` compares with ``predict_bandwidth``, ``family``
    with ``classify``, ``operation_free`` with the operation-free hypothesis.
    """
    universe = list(range(m + 1))
    for size in range(m + 2):
        for chosen in itertools.combinations(universe, size):
            rest = [v for v in universe if v not in chosen]
            for sig in _arrangements(list(chosen), distinct):
                sigma = IndexTuple(sig)
                s_pool = [SignedIndex(False, v) for v in sorted(sig) if v not in (m - 1, m)]
                s_decs = _decorations(s_pool, cap if decorated else 0, distinct)
                for om in _arrangements(rest, distinct):
                    tau = IndexTuple(SignedIndex(True, v) for v in om)
                    t_pool = [SignedIndex(True, v) for v in sorted(om, reverse=True) if v not in (0, 1)]
                    t_decs = _decorations(t_pool, cap if decorated else 0, distinct)
                    s_pairs = [(a, b) for a in s_decs for b in s_decs if satisfies_sip(a + sigma + b)]
                    t_pairs = [(a, b) for a in t_decs for b in t_decs if satisfies_sip(a + tau + b)]
                    for s1, s2 in s_pairs:
                        for t1, t2 in t_pairs:
                            spec = EgfpSpec(m, sigma, tau, s1, s2, t1, t2)
                            if family is not None and family not in classify(spec):
                                continue
                            if operation_free is not None and operation_free_hypothesis(spec) != operation_free:
                                continue
                            if bandwidth_class is not None and predict_bandwidth(spec).kind != bandwidth_class:
                                continue
                            yield spec


def random_spec(m: int, rng: np.random.Generator, cap: int = 2, *, need_zero_in_sigma: bool = False,
                need_minus_m_in_tau: bool = False, max_tries: int = 1000) -> EgfpSpec:
    """Random valid spec (symbolic assignments) by rejection sampling."""
    for _ in range(max_tries):
        perm = list(rng.permutation(m + 1))
        cut = int(rng.integers(0, m + 2))
        sig, om = perm[:cut], perm[cut:]
        if need_zero_in_sigma and 0 not in sig:
            continue
        if need_minus_m_in_tau and m not in om:
            continue
        sigma = IndexTuple(int(v) for v in sig)
        tau = IndexTuple(SignedIndex(True, int(v)) for v in om)
        s_pool = [SignedIndex(False, int(v)) for v in sig if v not in (m - 1, m)]
        t_pool = [SignedIndex(True, int(v)) for v in om if v not in (0, 1)]

        def draw(pool):
            if not pool:
                return IndexTuple()
            k = int(rng.integers(0, cap + 1))
            return IndexTuple(pool[int(rng.integers(0, len(pool)))] for _ in range(k))

        for _ in range(20):
            spec = EgfpSpec(m, sigma, tau, draw(s_pool), draw(s_pool), draw(t_pool), draw(t_pool))
            if validate(spec).valid:
                return spec
    raise RuntimeError("could not draw a valid spec")
