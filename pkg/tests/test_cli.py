import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from egfp.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def run():
    runner = CliRunner()

    def call(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return call


def test_validate_exit_codes(run, tmp_path):
    ok = run("validate", "--spec", DATA / "spec_m5.json")
    assert ok.exit_code == EXIT_OK
    rep = json.loads(ok.output)
    assert rep["valid"] and "bandwidth" in rep and "families" in rep
    bad = run("validate", "--spec", DATA / "spec_sip_violation.json")
    assert bad.exit_code == EXIT_FAIL
    assert any(v["clause"] == "sigma-sip" for v in json.loads(bad.output)["violations"])
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("validate", "--spec", junk).exit_code == EXIT_INPUT
    assert run("validate", "--spec", tmp_path / "absent.json").exit_code == EXIT_INPUT


def test_build_matrix_market(run, tmp_path):
    r = run("build", "--spec", DATA / "spec_m5.json", "--poly", DATA / "poly_m5_n2.json", "--out", tmp_path)
    assert r.exit_code == EXIT_OK
    assert {p.name for p in tmp_path.iterdir()} >= {"pencil_L1.mtx", "pencil_L0.mtx", "pencil_tags.json"}


def test_build_rational_records_border(run, tmp_path):
    r = run("build", "--spec", DATA / "spec_rational_m5.json", "--realization", DATA / "realization_m5.json",
            "--out", tmp_path)
    assert r.exit_code == EXIT_OK
    side = json.loads((tmp_path / "pencil_tags.json").read_text())
    assert side["border"]["r"] == 2 and side["border"]["offset"] == 10


def test_build_without_polynomial_writes_tags(run, tmp_path):
    r = run("build", "--spec", DATA / "spec_m5.json", "--out", tmp_path, "--format", "json")
    assert r.exit_code == EXIT_OK
    assert json.loads((tmp_path / "pencil_tags.json").read_text())["tags"][0][0]


def test_solve_polynomial_and_rational(run):
    r = run("solve", "--spec", DATA / "spec_m5.json", "--poly", DATA / "poly_m5_n2.json")
    assert r.exit_code == EXIT_OK
    rep = json.loads(r.output)
    assert rep["passed"] and len(rep["eigenvalues"]) == 10
    r = run("solve", "--spec", DATA / "spec_rational_m5.json", "--realization", DATA / "realization_m5.json")
    assert r.exit_code == EXIT_OK
    assert json.loads(r.output)["passed"]


def test_solve_is_deterministic(run, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        run("solve", "--spec", DATA / "spec_m5.json", "--poly", DATA / "poly_m5_n2.json", "--out", p)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_solve_rejects_bad_tolerance(run):
    r = run("solve", "--spec", DATA / "spec_m5.json", "--poly", DATA / "poly_m5_n2.json", "--tol", "bogus=1")
    assert r.exit_code == EXIT_INPUT


def test_enumerate_lines_and_filters(run):
    r = run("enumerate", "--m", 3)
    lines = r.output.strip().splitlines()
    assert r.exit_code == EXIT_OK and len(lines) == 444
    json.loads(lines[0])
    r = run("enumerate", "--m", 4, "--family", "FP")
    assert len(r.output.strip().splitlines()) == 24
    r = run("enumerate", "--m", 3, "--limit", 5)
    assert len(r.output.strip().splitlines()) == 5


def test_verify(run):
    assert "golden-paper-examples" in run("verify", "--suite", "list").output
    r = run("verify", "--suite", "golden-paper-examples")
    assert r.exit_code == EXIT_OK and r.output.startswith("PASS")
    assert run("verify", "--suite", "nope").exit_code == EXIT_INPUT
