import json
import subprocess
import sys

import pytest

from flatforge.catalog import pg
from flatforge.cli import build_parser, main
from flatforge.io import emit_matroid, parse_matroid


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fano_file(tmp_path):
    path = tmp_path / "pg2_2.txt"
    path.write_text(emit_matroid(pg(2, 2)))
    return path


@pytest.fixture
def pg3_file(tmp_path):
    path = tmp_path / "pg3_2.txt"
    path.write_text(emit_matroid(pg(3, 2)))
    return path


def test_catalog_emits_fano(capsys):
    code, out, _ = run(["catalog", "pg:2,2"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "2 3 7"
    M = parse_matroid(out)
    assert M.rank == 3 and M.n == 7 and M.is_simple()


def test_find_unavoidable_projective_line(pg3_file, capsys):
    code, out, _ = run(["find-unavoidable", str(pg3_file), "--k", "2", "--strategy", "direct"], capsys)
    assert code == 0
    claims = json.loads(out)["claims"]
    assert claims["found"] is True
    assert len(claims["elements"]) == 3
    assert "ProjectiveGeometry" in claims["tags"]


def test_find_unavoidable_not_found_exits_one(capsys):
    code, out, _ = run(["find-unavoidable", "reid:3", "--k", "3"], capsys)
    assert code == 1
    assert json.loads(out)["claims"]["found"] is False


def test_ramsey_report(capsys):
    code, out, _ = run(["ramsey", "--q", "2", "--t", "2", "--max-rank", "3"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["fails_at"] == 2 and rep["holds_at"] == 3
    fail = next(row for row in rep["rows"] if row["rank"] == 2)
    assert fail["witness"] is not None


@pytest.mark.parametrize("argv", [
    ["classify", "pg:3,2", "--k", "2"],
    ["find-unavoidable", "ag:3,2", "--k", "2", "--strategy", "proof"],
    ["cap", "pg:3,2", "--k", "2"],
    ["verify-lemma", "reid2", "pg:2,3", "--element", "2"],
    ["verify-lemma", "kelly", "reid:3", "--apex", "3"],
    ["verify-lemma", "kelly2", "pg:4,2", "--k", "3", "--t", "2", "--n", "3"],
    ["verify-lemma", "restriction", "free:5,2", "--k", "3", "--t", "2", "--n", "2"],
    ["verify-lemma", "affine", "ag:2,3", "--k", "2"],
])
def test_written_certificates_validate(argv, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, _ = run(argv + ["--out", str(cert)], capsys)
    assert code in (0, 1)
    ref = argv[1] if argv[0] != "verify-lemma" else argv[2]
    code, out, _ = run(["validate", str(cert), ref], capsys)
    assert (code, out) == (0, "valid\n")


def test_validate_rejects_other_matroid(tmp_path, pg3_file, fano_file, capsys):
    cert = tmp_path / "cert.json"
    run(["find-unavoidable", str(pg3_file), "--k", "2", "--out", str(cert)], capsys)
    code, out, _ = run(["validate", str(cert), str(fano_file)], capsys)
    assert code == 1
    assert out.startswith("invalid: ") and "hash" in out


def test_reid1_census(capsys):
    code, out, _ = run(["verify-lemma", "reid1", "--census", "2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["exceptions"] == []


def test_kelly2_precondition_failure_exits_one(capsys):
    code, out, _ = run(["verify-lemma", "kelly2", "pg:3,2", "--k", "2", "--t", "2", "--n", "4"], capsys)
    assert code == 1
    assert "precondition_failed" in json.loads(out)


@pytest.mark.parametrize("argv", [
    [],
    ["catalog"],
    ["classify", "pg:2,2"],
    ["ramsey", "--q", "x", "--t", "2", "--max-rank", "3"],
    ["catalog", "bogus:1"],
    ["classify", "no/such/file.txt", "--k", "1"],
    ["verify-lemma", "kelly2", "pg:3,2"],
    ["verify-lemma", "reid2", "--census", "2"],
])
def test_usage_errors_exit_two(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 2


def test_scale_refusal_exits_three(capsys):
    code, _, err = run(["cap", "pg:5,3", "--k", "2"], capsys)
    assert code == 3
    assert "too large" in err


def test_out_writes_file_not_stdout(tmp_path, capsys):
    target = tmp_path / "fano.txt"
    code, out, _ = run(["catalog", "pg:2,2", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text() == emit_matroid(pg(2, 2))


@pytest.mark.parametrize("argv", [
    ["enumerate-check", "--r", "3", "--k", "2"],
    ["ramsey", "--q", "2", "--t", "2", "--max-rank", "3", "--seed", "7"],
    ["enumerate-check", "--r", "5", "--k", "3", "--samples", "40", "--seed", "3"],
])
def test_output_independent_of_threads(argv, capsys):
    outs = {run(argv + ["--threads", str(t)], capsys)[1] for t in (1, 2)}
    assert len(outs) == 1


def test_threads_default_from_environment(monkeypatch):
    monkeypatch.setenv("FLATFORGE_THREADS", "3")
    args = build_parser().parse_args(["catalog", "pg:2,2"])
    assert args.threads == 3
    monkeypatch.setenv("FLATFORGE_THREADS", "junk")
    assert build_parser().parse_args(["catalog", "pg:2,2"]).threads == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flatforge.cli", "catalog", "ag:2,2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "2 3 4"
