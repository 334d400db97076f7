"""Named verification suites shared by ``egfp verify`` and the acceptance tests.

Each check returns a :class:`CheckResult`; a suite is a list of checks.
Every randomized check takes a seed, so results are reproducible.
"""
from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .blockmat import MatrixPolynomial, dense_product
from .golden import FIXTURES, compare_fixture, structure_holds, structured_tags
from .oracle import (Tolerances, companion_eigs, generalized_eigs, match_eigenvalues, minimal_indices,
                     minimal_indices_pencil, null_basis, subspace_angle, transfer_eval)
from .pencils import (EgfpSpec, bandwidth, bandwidth_agrees, build, enumerate_specs, is_operation_free,
                      operation_free_hypothesis, predict_bandwidth, random_spec)
from .rational import (build_rational, border_positions, check_minimality, random_realization, system_matrix)
from .recovery import (RecoveryWarning, left_selector, minimal_index_shift, recover_eigenvectors,
                       recover_infinite_eigenvectors, recover_minimal_bases, recover_minimal_indices,
                       recover_system, right_infinity_selector, left_infinity_selector, right_selector)
from .tuples import IndexTuple, SignedIndex, consecutions, inversions, satisfies_sip, standard_form

__all__ = ["CheckResult", "SUITES", "run_suite", "UnknownSuiteError",
           "check_golden", "check_spectra", "check_bandwidth", "check_operation_free", "check_recovery",
           "check_rational", "check_minimal_indices", "check_tuple_algebra", "singular_polynomial"]


class UnknownSuiteError(KeyError):
    pass


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    stats: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail} [{self.seconds:.2f}s]"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "stats": self.stats}


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*a, **kw) -> CheckResult:
        t0 = time.perf_counter()
        res = fn(*a, **kw)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------- golden displays

@_timed
def check_golden(max_seconds: float = 1.0) -> CheckResult:
    """Every stored display equals the assembled tags; structure and border checks hold."""
    t0 = time.perf_counter()
    problems = []
    for name, fx in FIXTURES.items():
        if fx.spec is not None:
            problems += [f"{name}: {d}" for d in compare_fixture(fx)]
        if fx.structure is not None:
            b1, b0 = structured_tags(fx)
            if not structure_holds(fx.structure, b1, b0, fx.m):
                problems.append(f"{name}: {fx.structure} structure fails")
        if fx.border is not None and border_positions(fx.spec()) != fx.border:
            problems.append(f"{name}: border at {border_positions(fx.spec())}, display {fx.border}")
    dt = time.perf_counter() - t0
    ok = not problems and dt < max_seconds
    detail = f"{len(FIXTURES)} fixtures, {len(problems)} differences, {dt:.3f}s (limit {max_seconds}s)"
    if problems:
        detail += "; first: " + problems[0]
    return CheckResult("golden fixtures", ok, detail, stats={"problems": problems})


# ---------------------------------------------------------------- spectra

def _rank_deficient(P: MatrixPolynomial, rank: int, rng) -> MatrixPolynomial:
    c = [np.array(A) for A in P.coeffs]
    U, s, Vt = np.linalg.svd(c[-1])
    s[rank:] = 0
    c[-1] = U @ np.diag(s) @ Vt
    return MatrixPolynomial(c)


@_timed
def check_spectra(n_poly: int = 200, n_spec: int = 20, seed: int = 0, tol: Tolerances | None = None) -> CheckResult:
    """Finite spectra against the companion form; infinite counts against the degree deficiency."""
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    worst, skipped, checked, bad, inf_checked = 0.0, 0, 0, [], 0
    for k in range(n_poly):
        deficient = k % 4 == 3
        # a nonzero singular leading coefficient needs n >= 2
        m, n = int(rng.integers(2, 6)), int(rng.integers(2 if deficient else 1, 5))
        P = MatrixPolynomial.random(m, n, rng)
        if deficient:
            P = _rank_deficient(P, n - 1, rng)
        ref = companion_eigs(P, tol)
        # generic rank-deficient leading coefficient: det P drops degree by n - rank(A_m)
        expect_inf = n - np.linalg.matrix_rank(np.asarray(P.coeffs[-1])) if deficient else 0
        for _ in range(n_spec):
            spec = random_spec(m, rng, need_minus_m_in_tau=deficient).with_random_assignments(n, rng)
            L = build(spec, P)
            ev = generalized_eigs(L.L0.dense, L.L1.dense, tol)
            if ev.n_infinite != expect_inf or ref.n_infinite != expect_inf:
                bad.append(f"{spec}: {ev.n_infinite} infinite, expected {expect_inf}")
            inf_checked += deficient
            if max(ev.max_cond, ref.max_cond) > tol.cond_skip:
                skipped += 1
                continue
            err, _, _ = match_eigenvalues(ev.finite, ref.finite)
            checked += 1
            worst = max(worst, err)
            if not err <= tol.eig_rel:
                bad.append(f"{spec}: eigenvalue error {err:.2e}")
    detail = (f"{checked} compared, {skipped} skipped (condition > {tol.cond_skip:g}), "
              f"worst relative error {worst:.2e} (tol {tol.eig_rel:g}), "
              f"{inf_checked} infinite-multiplicity checks, {len(bad)} failures")
    return CheckResult("strong-linearization spectra", not bad, detail,
                       stats={"worst": worst, "skipped": skipped, "checked": checked, "failures": bad[:20]})


# ---------------------------------------------------------------- exhaustive bandwidth and operation-free

@lru_cache(maxsize=None)
def _exhaustive_scan(m: int, n: int = 2, cap: int = 2, seed: int = 0) -> tuple:
    """(spec text, predicted kind, measured bandwidth, operation free, hypothesis) for every spec."""
    rng = np.random.default_rng(seed + m)
    P = MatrixPolynomial.random(m, n, rng)
    rows = []
    for spec in enumerate_specs(m, cap):
        pen = build(spec.with_random_assignments(n, rng), P, check=False)
        rows.append((str(spec), predict_bandwidth(spec).kind, bandwidth(pen),
                     is_operation_free(pen), operation_free_hypothesis(spec)))
    return tuple(rows)


def _band_ok(kind: str, bw: int) -> bool:
    # both directions: the class implies the bandwidth, and a bandwidth <= 1 implies the class
    if not bandwidth_agrees(kind, bw):
        return False
    return (bw <= 1) == (kind == "tridiagonal")


@_timed
def check_bandwidth(max_m: int = 5, n: int = 2, cap: int = 2, seed: int = 0) -> CheckResult:
    """Predicted bandwidth class against measured block bandwidth on every spec with m <= max_m."""
    total, bad, counts = 0, [], {}
    for m in range(2, max_m + 1):
        for text, kind, bw, _of, _h in _exhaustive_scan(m, n, cap, seed):
            total += 1
            key = f"{kind}/{min(bw, 3)}"
            counts[key] = counts.get(key, 0) + 1
            if not _band_ok(kind, bw):
                bad.append(f"{text}: predicted {kind}, measured {bw}")
    detail = f"{total} specs (m <= {max_m}, n = {n}, cap {cap}), {len(bad)} mismatches; " + \
             ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    return CheckResult(f"bandwidth classes m <= {max_m}", not bad, detail,
                       stats={"total": total, "counts": counts, "mismatches": bad[:20]})


@_timed
def check_operation_free(max_m: int = 5, n: int = 2, cap: int = 2, seed: int = 0) -> CheckResult:
    """Tag-level operation-free test against the index hypothesis, plus the known counterexample."""
    from .golden import FIXTURES as fx
    total, bad = 0, []
    for m in range(2, max_m + 1):
        for text, _k, _bw, of, hyp in _exhaustive_scan(m, n, cap, seed):
            total += 1
            if of != hyp:
                bad.append(f"{text}: operation free {of}, hypothesis {hyp}")
    nof = fx["not-operation-free-m3"].spec()
    flagged = not is_operation_free(build(nof)) and not operation_free_hypothesis(nof)
    detail = f"{total} specs, {len(bad)} mismatches; counterexample {nof} flagged: {flagged}"
    return CheckResult(f"operation-free m <= {max_m}", not bad and flagged, detail,
                       stats={"total": total, "mismatches": bad[:20]})


# ---------------------------------------------------------------- eigenvector recovery

def _scaled_residual(M: np.ndarray, X: np.ndarray, scale: float | None = None) -> float:
    """||M X|| / (scale ||X||); ``scale`` defaults to ||M||."""
    nx = np.linalg.norm(X)
    if nx == 0:
        return np.inf
    scale = np.linalg.norm(M, 2) if scale is None else scale
    return float(np.linalg.norm(M @ X) / (scale * nx))


def _poly_scale(coeffs, mu) -> float:
    """sum_i |mu|^i ||A_i||: the size of P at mu, nonzero even where P(mu) vanishes."""
    return float(sum(abs(mu) ** j * np.linalg.norm(np.asarray(c), 2) for j, c in enumerate(coeffs)))


# (fixture, expected right block, right premultiplier, expected left block, left premultiplier)
_WORKED = (
    ("recovery-m6", 4, None, 5, None),
    ("recovery-m5", 2, None, 5, None),
    ("not-operation-free-m3", 2, "A_m^-1", 3, None),
)


def _infinity_example() -> EgfpSpec:
    return EgfpSpec(5, IndexTuple.of(0, 2), IndexTuple.of(-4, -5, -3, -1), tau2=IndexTuple.of(-4))


def _best_eigenvalue(L, tol: Tolerances) -> complex:
    ev = generalized_eigs(L.L0.dense, L.L1.dense, tol)
    return complex(ev.finite[int(np.argmin(ev.cond))])


def _worked_examples(rng, tol: Tolerances) -> list[str]:
    bad = []
    for name, rb, rpre, lb, lpre in _WORKED:
        spec = FIXTURES[name].spec()
        rs, ls = right_selector(spec), left_selector(spec)
        if (rs.block, rs.premult, ls.block, ls.premult) != (rb, rpre, lb, lpre):
            bad.append(f"{name}: selectors {rs} / {ls}")
        n = 3
        P = MatrixPolynomial.random(spec.m, n, rng)
        L = build(spec.with_random_assignments(n, rng), P)
        mu = _best_eigenvalue(L, tol)
        for side in ("right", "left"):
            _Z, X = recover_eigenvectors(L, mu, side, tol=tol)
            Pm = P(mu) if side == "right" else P(mu).T
            r = _scaled_residual(Pm, X, _poly_scale(P.coeffs, mu))
            if not r <= tol.residual:
                bad.append(f"{name} {side}: residual {r:.2e}")
    spec = _infinity_example()
    rs, ls = right_infinity_selector(spec), left_infinity_selector(spec)
    if (rs.block, ls.block) != (2, 2):
        bad.append(f"infinity example: selectors {rs} / {ls}")
    n = 3
    P = _rank_deficient(MatrixPolynomial.random(5, n, rng), n - 1, rng)
    L = build(spec.with_random_assignments(n, rng), P)
    Am = np.asarray(P.coeffs[-1])
    for side in ("right", "left"):
        _Z, X = recover_infinite_eigenvectors(L, side, tol=tol)
        M = Am if side == "right" else Am.T
        # rev P at 0 is A_m; scale by ||A_m|| as for finite eigenvalues
        r = _scaled_residual(M, X) if X.shape[1] else np.inf
        if not r <= tol.residual:
            bad.append(f"infinity example {side}: residual {r:.2e}")
    return bad


@_timed
def check_recovery(n_random: int = 1000, seed: int = 0, tol: Tolerances | None = None) -> CheckResult:
    """Worked examples, random right/left recovery, and invariance under decorations."""
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("error", RecoveryWarning)
        bad = _worked_examples(rng, tol)
        worst_r, worst_a, n_inv = 0.0, 0.0, 0
        for _ in range(n_random):
            m, n = int(rng.integers(2, 6)), int(rng.integers(1, 4))
            P = MatrixPolynomial.random(m, n, rng)
            spec = random_spec(m, rng).with_random_assignments(n, rng)
            L = build(spec, P)
            mu = _best_eigenvalue(L, tol)
            core = build(spec.core(), P)
            for side in ("right", "left"):
                _Z, X = recover_eigenvectors(L, mu, side, tol=tol)
                Pm = P(mu) if side == "right" else P(mu).T
                r = _scaled_residual(Pm, X, _poly_scale(P.coeffs, mu))
                worst_r = max(worst_r, r)
                if not r <= tol.residual or X.shape[1] != 1:
                    bad.append(f"{spec} {side}: residual {r:.2e}, {X.shape[1]} vectors")
                    continue
                if any(len(getattr(spec, d)) for d in ("sigma1", "sigma2", "tau1", "tau2")):
                    _Zc, Xc = recover_eigenvectors(core, mu, side, tol=tol)
                    a = subspace_angle(X, Xc)
                    worst_a = max(worst_a, a)
                    n_inv += 1
                    if not a <= tol.angle:
                        bad.append(f"{spec} {side}: decoration changes the subspace by {a:.2e}")
    detail = (f"{len(_WORKED) + 1} worked examples, {n_random} random instances x 2 sides, "
              f"worst residual {worst_r:.2e} (tol {tol.residual:g}), {n_inv} invariance checks "
              f"worst angle {worst_a:.2e} (tol {tol.angle:g}), {len(bad)} failures")
    return CheckResult("eigenvector recovery", not bad, detail,
                       stats={"worst_residual": worst_r, "worst_angle": worst_a, "failures": bad[:20]})


# ---------------------------------------------------------------- rational pipeline

def _g_residual(real, mu, X, side: str) -> float:
    G = transfer_eval(real.P, real.A, real.E, real.B, real.C, mu)
    R = G @ X if side == "right" else G.T @ X
    scale = np.linalg.norm(real.P(mu), 2) + np.linalg.norm(real.C, 2) * np.linalg.norm(
        np.linalg.solve(mu * real.E - real.A, real.B), 2)
    return float(np.linalg.norm(R) / (scale * np.linalg.norm(X)))


@_timed
def check_rational(n_real: int = 100, seed: int = 0, tol: Tolerances | None = None) -> CheckResult:
    """Bordered pencils of minimal realizations: spectrum of S, S-vectors and G-vectors."""
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    worst_e, worst_s, worst_g, skipped, bad = 0.0, 0.0, 0.0, 0, []
    for _ in range(n_real):
        m, n, r = int(rng.integers(2, 5)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        real = random_realization(m, n, r, rng)
        if not check_minimality(real, rng).minimal:
            bad.append("generated realization not minimal")
            continue
        spec = random_spec(m, rng, need_zero_in_sigma=True, need_minus_m_in_tau=True).with_random_assignments(n, rng)
        bp = build_rational(spec, real)
        ev = generalized_eigs(bp.dense_L0(), bp.dense_L1(), tol)
        ref = companion_eigs(system_matrix(real).as_polynomial(), tol)
        if max(ev.max_cond, ref.max_cond) > tol.cond_skip:
            skipped += 1
            continue
        err, _, _ = match_eigenvalues(ev.finite, ref.finite)
        worst_e = max(worst_e, err)
        if not err <= tol.eig_rel:
            bad.append(f"{spec}: spectrum error {err:.2e}")
        poles = real.poles()
        for mu in ev.finite:
            for side in ("right", "left"):
                out = recover_system(bp, mu, side, tol=tol)
                S = system_matrix(real)(mu)
                rs = _scaled_residual(S if side == "right" else S.T, out["S"],
                                      _poly_scale(system_matrix(real).coefficients(), mu))
                worst_s = max(worst_s, rs)
                if not rs <= tol.residual:
                    bad.append(f"{spec} {side} mu={mu:.3g}: S residual {rs:.2e}")
                # G(mu) is only defined away from the poles
                if np.min(np.abs(poles - mu)) > 1e-6 * max(1.0, abs(mu)):
                    rg = _g_residual(real, mu, out["G"], side)
                    worst_g = max(worst_g, rg)
                    if not rg <= tol.residual:
                        bad.append(f"{spec} {side} mu={mu:.3g}: G residual {rg:.2e}")
    detail = (f"{n_real} realizations, {skipped} skipped, spectrum error {worst_e:.2e}, "
              f"S residual {worst_s:.2e}, G residual {worst_g:.2e} (tol {tol.residual:g}), {len(bad)} failures")
    return CheckResult("rational pipeline", not bad, detail,
                       stats={"spectrum": worst_e, "S": worst_s, "G": worst_g, "failures": bad[:20]})


# ---------------------------------------------------------------- minimal indices

def singular_polynomial(m: int, right: int, left: int, rng) -> MatrixPolynomial:
    """4 x 4 polynomial of degree m with one right index ``right`` and one left index ``left``.

    Direct sum of a 1 x 2 row f*[g1, g2], a 2 x 1 column h*[k1; k2] and a scalar
    regular part, with g1, g2 (k1, k2) coprime of the given degree, then mixed by
    constant nonsingular matrices on both sides.
    """
    def poly(d):  # ascending coefficients, exact degree d
        c = rng.standard_normal(d + 1)
        c[-1] = 1.0 + abs(c[-1])
        return c

    def pad(c):
        out = np.zeros(m + 1)
        out[:len(c)] = c
        return out

    f, h = poly(m - right), poly(m - left)
    g1, g2 = poly(right), (poly(right) if right else np.array([rng.standard_normal()]))
    k1, k2 = poly(left), (poly(left) if left else np.array([rng.standard_normal()]))
    row = [pad(np.convolve(f, g1)), pad(np.convolve(f, g2))]
    col = [pad(np.convolve(h, k1)), pad(np.convolve(h, k2))]
    reg = pad(poly(m))
    D = np.zeros((m + 1, 4, 4))
    D[:, 0, 0], D[:, 0, 1] = row
    D[:, 1, 2], D[:, 2, 2] = col
    D[:, 3, 3] = reg
    W, V = rng.standard_normal((4, 4)), rng.standard_normal((4, 4))
    return MatrixPolynomial([W @ D[j] @ V for j in range(m + 1)])


def _basis_ok(P: MatrixPolynomial, side: str, vecs: list[np.ndarray], degrees: list[int], rng) -> bool:
    if sorted(v.shape[0] - 1 for v in vecs) != sorted(degrees):
        return False
    coeffs = [np.asarray(c) if side == "right" else np.asarray(c).T for c in P.coeffs]
    for v in vecs:
        for z in rng.standard_normal(3):
            Pz = sum(c * z ** j for j, c in enumerate(coeffs))
            vz = sum(v[k] * z ** k for k in range(v.shape[0]))
            if np.linalg.norm(Pz @ vz) > 1e-7 * np.linalg.norm(Pz) * np.linalg.norm(vz):
                return False
    return True


@_timed
def check_minimal_indices(n_poly: int = 20, seed: int = 0) -> CheckResult:
    """Shift rule on pencils of singular polynomials with known indices."""
    rng = np.random.default_rng(seed)
    combos = [(r, l) for r in (0, 1, 2) for l in (0, 1, 2)]
    bad, done = [], 0
    for k in range(n_poly):
        m = 2 + k % 3
        right, left = combos[k % len(combos)]
        P = singular_polynomial(m, right, left, rng)
        truth = ([right], [left])
        oracle = minimal_indices(P)
        if oracle != truth:
            bad.append(f"oracle gives {oracle} for constructed {truth}")
        spec = random_spec(m, rng, need_zero_in_sigma=True, need_minus_m_in_tau=True).with_random_assignments(4, rng)
        L = build(spec, P)
        rl, ll = minimal_indices_pencil(np.asarray(L.L1.dense), np.asarray(L.L0.dense))
        got = recover_minimal_indices(spec, rl, ll)
        if got != truth:
            bad.append(f"{spec}: pencil indices {rl}/{ll}, shift {tuple(minimal_index_shift(spec))}, got {got}")
        for side, deg in (("right", [right]), ("left", [left])):
            if not _basis_ok(P, side, recover_minimal_bases(L, side), deg, rng):
                bad.append(f"{spec}: {side} minimal basis from the selected block is wrong")
        done += 1
    detail = f"{done} singular polynomials (indices 0, 1, 2), {len(bad)} failures"
    return CheckResult("minimal indices", not bad, detail, stats={"failures": bad[:20]})


# ---------------------------------------------------------------- tuple algebra

# run counts of (1,0,2,1,3,2,4,1,3,2,1) over {0:6}
RUN_TABLE = {("c", 0): 3, ("c", 3): 1, ("i", 0): 1, ("i", 1): 3, ("i", 3): 1, ("c", 5): -1, ("i", 5): -1}
RUN_TUPLE = (1, 0, 2, 1, 3, 2, 4, 1, 3, 2, 1)


def _integer_polynomial(m: int, rng) -> list[np.ndarray]:
    """Integer coefficients with unimodular A_0 and A_m, so every trivial factor is integral."""
    c = [rng.integers(-4, 5, size=(2, 2)).astype(float) for _ in range(m + 1)]
    c[0] = np.array([[1.0, float(rng.integers(-3, 4))], [0.0, 1.0]])
    c[m] = np.array([[1.0, 0.0], [float(rng.integers(-3, 4)), 1.0]])
    return c


def _trivial_matrix(e: SignedIndex, c: list[np.ndarray], m: int) -> np.ndarray:
    j = e.magnitude
    if not e.negative:
        return c[m] if j == m else -c[j]
    return -c[0] if j == 0 else c[j]


def _exact_product(t: IndexTuple, c, m: int) -> np.ndarray:
    M = dense_product([(e, _trivial_matrix(e, c, m)) for e in t], m, 2, complex)
    R = np.rint(M.real)
    if np.any(M.imag != 0) or np.any(R != M.real):
        raise ArithmeticError(f"product of {t} left the integers")
    return R.astype(np.int64)


@_timed
def check_tuple_algebra(max_m: int = 5, max_len: int = 6, seed: int = 0) -> CheckResult:
    """Standard forms and equivalence classes against exact products; the reference run table."""
    rng = np.random.default_rng(seed)
    bad, n_sip, n_classes = [], 0, 0
    alpha = IndexTuple(RUN_TUPLE)
    for (kind, t), want in RUN_TABLE.items():
        got = (consecutions if kind == "c" else inversions)(alpha, t)
        if got != want:
            bad.append(f"{kind}_{t}{RUN_TUPLE} = {got}, expected {want}")
    for m in range(2, max_m + 1):
        c = _integer_polynomial(m, rng)
        for negative in (False, True):
            letters = [SignedIndex(negative, j) for j in range(m + 1)]
            classes: dict[tuple, dict[IndexTuple, bytes]] = {}
            for k in range(1, max_len + 1):
                for word in itertools.product(letters, repeat=k):
                    t = IndexTuple(word)
                    if not satisfies_sip(t):
                        continue
                    n_sip += 1
                    csf, rsf = standard_form(t), standard_form(t, "row")
                    p = _exact_product(t, c, m)
                    for form in (csf, rsf):
                        if not np.array_equal(_exact_product(form, c, m), p):
                            bad.append(f"m={m}: product of {t} differs from its standard form {form}")
                    if not (satisfies_sip(csf) and satisfies_sip(rsf)):
                        bad.append(f"{t}: standard form violates the SIP")
                    group = classes.setdefault(tuple(sorted(e.value for e in t)), {})
                    key = p.tobytes()
                    if csf in group and group[csf] != key:
                        bad.append(f"{t}: equivalent tuples with different products")
                    group.setdefault(csf, key)
            for group in classes.values():
                n_classes += len(group)
                if len(set(group.values())) != len(group):
                    bad.append(f"m={m}: inequivalent tuples with equal products")
    detail = (f"{n_sip} SIP tuples (length <= {max_len}, m <= {max_m}), {n_classes} equivalence classes, "
              f"run table {len(RUN_TABLE)} entries, {len(bad)} failures")
    return CheckResult("tuple algebra", not bad, detail, stats={"failures": bad[:20]})


# ---------------------------------------------------------------- registry

SUITES: dict[str, list[Callable[[int], CheckResult]]] = {
    "golden-paper-examples": [lambda seed: check_golden()],
    "spectra": [lambda seed: check_spectra(seed=seed)],
    "bandwidth-m4": [lambda seed: check_bandwidth(4, seed=seed)],
    "bandwidth": [lambda seed: check_bandwidth(5, seed=seed)],
    "operation-free-m4": [lambda seed: check_operation_free(4, seed=seed)],
    "operation-free": [lambda seed: check_operation_free(5, seed=seed)],
    "recovery": [lambda seed: check_recovery(seed=seed)],
    "rational": [lambda seed: check_rational(seed=seed)],
    "minimal-indices": [lambda seed: check_minimal_indices(seed=seed)],
    "tuple-algebra": [lambda seed: check_tuple_algebra(seed=seed)],
    "quick": [lambda seed: check_golden(), lambda seed: check_bandwidth(4, seed=seed),
              lambda seed: check_operation_free(4, seed=seed), lambda seed: check_spectra(20, 5, seed),
              lambda seed: check_recovery(100, seed), lambda seed: check_rational(20, seed),
              lambda seed: check_minimal_indices(9, seed), lambda seed: check_tuple_algebra(4, 5, seed)],
}
SUITES["acceptance"] = [f for name in ("golden-paper-examples", "spectra", "bandwidth", "operation-free",
                                       "recovery", "rational", "minimal-indices", "tuple-algebra")
                        for f in SUITES[name]]


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise UnknownSuiteError(name)
    return [check(seed) for check in SUITES[name]]
