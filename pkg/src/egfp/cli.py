"""Command-line front end: ``egfp validate|build|solve|enumerate|verify``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input error.
"""
from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from .blockmat import MatrixAssignment, MatrixPolynomial
from .io import (FormatError, export_pencil, load_json, matrix_to_json, poly_from_json, realization_from_json,
                 spec_from_json, spec_to_json)
from .oracle import TOL_ENV, Tolerances, generalized_eigs, load_tolerances
from .pencils import (ASSIGNMENT_OF, EgfpSpec, InvalidSpecError, build, classify, enumerate_specs,
                      operation_free_hypothesis, predict_bandwidth, validate)
from .symbolic import coefficient_index

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _load_spec(path: str) -> EgfpSpec:
    try:
        return spec_from_json(load_json(path))
    except (FormatError, ValueError) as exc:
        raise InputError(f"spec {path}: {exc}") from exc


def _tolerances(tol: tuple[str, ...]) -> Tolerances:
    over = {}
    for item in tol:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--tol expects key=value, got {item!r}")
        over[key.strip()] = val
    try:
        return load_tolerances(**over)
    except (ValueError, TypeError, OSError) as exc:
        raise InputError(f"tolerances: {exc}") from exc


def _fill_assignments(spec: EgfpSpec, n: int, rng: np.random.Generator) -> EgfpSpec:
    """Random matrices (seeded) for every named symbol the spec file leaves open."""
    kw = {}
    for asg_name in ASSIGNMENT_OF.values():
        asg: MatrixAssignment = getattr(spec, asg_name)
        if asg.trivial or not len(asg):
            continue
        mats = []
        for lab, M in zip(asg.labels, asg.mats):
            (w, _c), = lab.terms.items()
            if M is None and coefficient_index(w[0]) is None:
                M = np.eye(n) + 0.5 * rng.standard_normal((n, n)) / max(1.0, np.sqrt(n))
            if M is not None and np.asarray(M).shape != (n, n):
                raise InputError(f"assignment {asg_name} holds a matrix of shape {np.asarray(M).shape}, need ({n}, {n})")
            mats.append(M)
        kw[asg_name] = MatrixAssignment(asg.tuple, asg.labels, tuple(mats))
    return replace(spec, **kw)


def _load_inputs(spec_path, poly, realization, seed):
    spec = _load_spec(spec_path)
    if poly and realization:
        raise InputError("give either --poly or --realization, not both")
    try:
        if poly:
            P, real = poly_from_json(load_json(poly)), None
        elif realization:
            real = realization_from_json(load_json(realization))
            P = real.P
        else:
            return spec, None, None
    except FormatError as exc:
        raise InputError(str(exc)) from exc
    if P.m != spec.m:
        raise InputError(f"polynomial degree {P.m} differs from spec degree {spec.m}")
    return _fill_assignments(spec, P.n, np.random.default_rng(seed)), P, real


def _build(spec, P, real):
    from .rational import build_rational

    try:
        if real is not None and real.r:
            return build_rational(spec, real)
        return build(spec, P)
    except (InvalidSpecError, ValueError) as exc:
        raise InputError(f"cannot build: {exc}") from exc


# ---------------------------------------------------------------- commands

@click.group()
@click.version_option(package_name="artifact")
def main():
    """Extended generalized Fiedler pencils: build, solve, enumerate and verify."""


@main.command("validate")
@click.option("--spec", "spec_path", required=True, type=click.Path(dir_okay=False), help="spec JSON file")
@click.option("--out", default=None, help="write the report here instead of stdout")
def cmd_validate(spec_path, out):
    """Check a spec against the construction rules."""
    spec = _load_spec(spec_path)
    rep = validate(spec)
    data = rep.to_json()
    if rep.valid:
        data["families"] = sorted(classify(spec))
        pred = predict_bandwidth(spec)
        data["bandwidth"] = {"kind": pred.kind, "max_run": pred.max_run, "hypothesis": pred.hypothesis}
    _dump(data, out)
    sys.exit(EXIT_OK if rep.valid else EXIT_FAIL)


@main.command("build")
@click.option("--spec", "spec_path", required=True, type=click.Path(dir_okay=False))
@click.option("--poly", type=click.Path(dir_okay=False), help="polynomial JSON {coeffs: [A0, ..., Am]}")
@click.option("--realization", type=click.Path(dir_okay=False), help="realization JSON {P, A, E, B, C}")
@click.option("--out", required=True, type=click.Path(file_okay=False), help="output directory")
@click.option("--format", "fmt", type=click.Choice(["mm", "json"]), default="mm", show_default=True)
@click.option("--seed", default=0, show_default=True, help="seed for unassigned decoration matrices")
def cmd_build(spec_path, poly, realization, out, fmt, seed):
    """Assemble the pencil lam*L1 - L0 and export it with its block tags."""
    spec, P, real = _load_inputs(spec_path, poly, realization, seed)
    if P is None:
        rep = validate(spec)
        if not rep.valid:
            raise InputError("invalid spec: " + "; ".join(m for _c, m in rep.violations))
        pen = build(spec)
        Path(out).mkdir(parents=True, exist_ok=True)
        _dump({"m": spec.m, "tags": pen.tag_grid(), "spec": spec_to_json(spec)}, str(Path(out) / "pencil_tags.json"))
        return
    pen = _build(spec, P, real)
    if fmt == "mm":
        for p in export_pencil(pen, out):
            click.echo(str(p))
        return
    bordered = not hasattr(pen, "L1")
    L1 = pen.dense_L1() if bordered else pen.L1.dense
    L0 = pen.dense_L0() if bordered else pen.L0.dense
    Path(out).mkdir(parents=True, exist_ok=True)
    path = Path(out) / "pencil.json"
    _dump({"convention": "L(lam) = lam*L1 - L0", "L1": matrix_to_json(L1), "L0": matrix_to_json(L0),
           "tags": pen.tag_grid(), "spec": spec_to_json(spec)}, str(path))
    click.echo(str(path))


def _poly_scale(coeffs, mu) -> float:
    return float(sum(abs(mu) ** j * np.linalg.norm(np.asarray(c), 2) for j, c in enumerate(coeffs)))


def _residual(coeffs, mu, X, side) -> float:
    M = sum(np.asarray(c) * mu ** j for j, c in enumerate(coeffs))
    if side == "left":
        M = M.T
    nx = np.linalg.norm(X)
    return float(np.linalg.norm(M @ X) / (_poly_scale(coeffs, mu) * nx)) if nx else float("inf")


def solve_report(spec: EgfpSpec, P: MatrixPolynomial, real=None, tol: Tolerances | None = None) -> dict:
    """Eigenvalues of the pencil with recovered eigenvectors and their residuals."""
    from .rational import system_matrix
    from .recovery import NotApplicableError, recover_eigenvectors, recover_infinite_eigenvectors, recover_system

    tol = tol or Tolerances()
    report = {"n": P.n, "m": P.m, "spec": spec_to_json(spec), "tolerances": tol.to_json(),
              "eigenvalues": [], "infinite": None, "max_residual": 0.0}
    pen = _build(spec, P, real)
    rational = real is not None and real.r > 0
    L1 = pen.dense_L1() if rational else pen.L1.dense
    L0 = pen.dense_L0() if rational else pen.L0.dense
    ev = generalized_eigs(L0, L1, tol)
    worst = 0.0
    S_coeffs = system_matrix(real).coefficients() if rational else None
    from .recovery import left_infinity_selector, left_selector, right_infinity_selector, right_selector

    for k in np.lexsort((ev.finite.imag, ev.finite.real)):
        mu = complex(ev.finite[k])
        entry = {"value": _cplx(mu), "condition": float(ev.cond[k])}
        for side in ("right", "left"):
            if rational:
                out = recover_system(pen, mu, side, tol=tol)
                X, res = out["G"], _residual(S_coeffs, mu, out["S"], side)
            else:
                _Z, X = recover_eigenvectors(pen, mu, side, tol=tol)
                res = _residual(P.coeffs, mu, X, side)
            worst = max(worst, res)
            sel = (right_selector if side == "right" else left_selector)(spec)
            entry[side] = {"residual": res, "dimension": int(X.shape[1]), "selector": str(sel), "case": sel.case,
                           "vectors": [[_cplx(v) for v in col] for col in X.T]}
        report["eigenvalues"].append(entry)
    if ev.n_infinite and not rational:
        inf = {"multiplicity": ev.n_infinite}
        Am = np.asarray(P.coeffs[-1])
        try:
            for side in ("right", "left"):
                _Z, X = recover_infinite_eigenvectors(pen, side, tol=tol)
                M = Am if side == "right" else Am.T
                res = float(np.linalg.norm(M @ X) / (np.linalg.norm(Am, 2) * np.linalg.norm(X))) if X.size else np.inf
                worst = max(worst, res)
                sel = (right_infinity_selector if side == "right" else left_infinity_selector)(spec)
                inf[side] = {"residual": res, "dimension": int(X.shape[1]), "selector": str(sel),
                             "vectors": [[_cplx(v) for v in col] for col in X.T]}
        except NotApplicableError as exc:
            inf["note"] = str(exc)
        report["infinite"] = inf
    report["max_residual"] = worst
    report["passed"] = bool(worst <= tol.residual)
    return report


@main.command("solve")
@click.option("--spec", "spec_path", required=True, type=click.Path(dir_okay=False))
@click.option("--poly", type=click.Path(dir_okay=False))
@click.option("--realization", type=click.Path(dir_okay=False))
@click.option("--out", default=None, help="report file (stdout by default)")
@click.option("--tol", multiple=True, help=f"tolerance override key=value; defaults from ${TOL_ENV}")
@click.option("--seed", default=0, show_default=True)
def cmd_solve(spec_path, poly, realization, out, tol, seed):
    """Solve through the pencil and recover eigenvectors of P (or G)."""
    if not poly and not realization:
        raise InputError("solve needs --poly or --realization")
    tols = _tolerances(tol)
    raw = load_json(poly or realization)
    coeffs = raw.get("coeffs", raw.get("P")) if isinstance(raw, dict) else raw
    if isinstance(coeffs, list) and coeffs and all(np.asarray(c).size == 0 for c in coeffs):
        # n = 0: nothing to solve
        spec = _load_spec(spec_path)
        _dump({"n": 0, "m": len(coeffs) - 1, "spec": spec_to_json(spec), "tolerances": tols.to_json(),
               "eigenvalues": [], "infinite": None, "max_residual": 0.0, "passed": True}, out)
        sys.exit(EXIT_OK)
    spec, P, real = _load_inputs(spec_path, poly, realization, seed)
    report = solve_report(spec, P, real, tols)
    _dump(report, out)
    sys.exit(EXIT_OK if report.get("passed", True) else EXIT_FAIL)


@main.command("enumerate")
@click.option("--m", "m", required=True, type=click.IntRange(2, 8))
@click.option("--cap", default=2, show_default=True, type=click.IntRange(0, 4), help="max decoration length")
@click.option("--distinct/--all", default=False, help="one spec per equivalence class")
@click.option("--bandwidth-class", type=click.Choice(["tridiagonal", "pentadiagonal", "wider", "not-applicable"]))
@click.option("--family", type=click.Choice(["FP", "GFP", "GFPR", "FPR", "EGFP-proper"]))
@click.option("--operation-free/--not-operation-free", default=None)
@click.option("--limit", type=int, default=None)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["jsonl"]), default="jsonl")
def cmd_enumerate(m, cap, distinct, bandwidth_class, family, operation_free, limit, out, fmt):
    """Stream valid specs as JSON lines with family and predicted bandwidth."""
    fh = open(out, "w") if out else sys.stdout
    try:
        for k, spec in enumerate(enumerate_specs(m, cap, distinct=distinct, bandwidth_class=bandwidth_class,
                                                 family=family, operation_free=operation_free)):
            if limit is not None and k >= limit:
                break
            pred = predict_bandwidth(spec)
            rec = {"spec": spec_to_json(spec), "families": sorted(classify(spec)), "bandwidth": pred.kind,
                   "max_run": pred.max_run, "operation_free": operation_free_hypothesis(spec)}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if out:
            fh.close()


@main.command("verify")
@click.option("--suite", required=True, help="suite name; 'list' prints the available suites")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, help="JSON report file")
def cmd_verify(suite, seed, out):
    """Run a named verification suite and print one PASS/FAIL line per check."""
    from .suites import SUITES, run_suite

    if suite == "list":
        for name in SUITES:
            click.echo(name)
        return
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; available: {', '.join(SUITES)}")
    results = run_suite(suite, seed)
    for r in results:
        click.echo(r.line())
    if out:
        _dump({"suite": suite, "seed": seed, "results": [r.to_json() for r in results]}, out)
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAIL)


if __name__ == "__main__":
    main()
