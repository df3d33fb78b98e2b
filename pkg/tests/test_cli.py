import numpy as np
import pytest

from cfakit.cli import main
from conftest import make_matrix


@pytest.fixture
def matrix_csv(tmp_path):
    vals = np.random.default_rng(11).uniform(size=(8, 5))
    p = tmp_path / "m.csv"
    p.write_text(make_matrix(vals).to_csv())
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fuse_report(matrix_csv, tmp_path, capsys):
    code, out, _ = run(["fuse", matrix_csv], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1 + 104
    assert lines[0] == "subset,method,top_item,fused_value_of_top,fallback_flag"
    dest = tmp_path / "r.csv"
    assert run(["fuse", matrix_csv, "-o", dest], capsys)[0] == 0
    assert dest.read_text() == out


def test_fuse_flags(matrix_csv, capsys):
    code, out, _ = run(["fuse", matrix_csv, "--no-normalize", "--tie-policy", "first", "--min-size", "4"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 1 + 6 * 4


def test_diversity(matrix_csv, capsys):
    code, out, _ = run(["diversity", matrix_csv], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "system_a,system_b,cd" and len(lines) == 1 + 10 + 1 + 1 + 5


def test_rsf(matrix_csv, capsys):
    code, out, _ = run(["rsf", matrix_csv], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rank,A,B,C,D,E"
    assert lines[1] == "1,1.0,1.0,1.0,1.0,1.0"
    assert lines[-1] == "8,0.0,0.0,0.0,0.0,0.0"


def test_kemeny_graph(tmp_path, capsys):
    edges = tmp_path / "b3.tsv"
    code, out, _ = run(["kemeny", "--graph", 3, "--edges", edges], capsys)
    assert code == 0
    assert out.splitlines()[0] == "6 vertices, 2-regular, connected, connectivity 2"
    assert len(edges.read_text().splitlines()) == 6


def test_kemeny_weak_orders(capsys):
    code, out, _ = run(["kemeny", "--weak-orders", 3], capsys)
    assert code == 0 and out == "13 weak orders on 3 items (6 permutations)\n"


def test_kemeny_too_large(capsys):
    code, _, err = run(["kemeny", "--graph", 7], capsys)
    assert code == 1 and err.count("\n") == 1 and "capped" in err


def test_pipeline(tmp_path, capsys):
    code, out, _ = run(["pipeline", "--out-dir", tmp_path / "o"], capsys)
    assert code == 0
    assert out.startswith("10 questions")
    assert (tmp_path / "o" / "summary.csv").exists()
    assert len(list((tmp_path / "o" / "curves").iterdir())) == 20


def test_pipeline_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CFAKIT_OUTPUT_DIR", str(tmp_path / "env"))
    assert run(["pipeline"], capsys)[0] == 0
    assert (tmp_path / "env" / "summary.csv").exists()


def test_pipeline_needs_out_dir(capsys, monkeypatch):
    monkeypatch.delenv("CFAKIT_OUTPUT_DIR", raising=False)
    assert run(["pipeline"], capsys)[0] == 2


def test_pipeline_non_empty_out_dir(tmp_path, capsys):
    (tmp_path / "x").write_text("x")
    code, _, err = run(["pipeline", "--out-dir", tmp_path], capsys)
    assert code == 1 and "not empty" in err


def test_simulate(tmp_path, capsys):
    code, out, _ = run(["simulate", "--trials", 20], capsys)
    assert code == 0
    assert out.splitlines()[0] == "trial,method,hit,mean_cd"


@pytest.mark.parametrize(
    "argv",
    [["frobnicate"], [], ["fuse"], ["kemeny"], ["fuse", "x.csv", "--tie-policy", "bogus"]],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "usage" in err


def test_missing_input_is_usage_error(tmp_path, capsys):
    assert run(["fuse", tmp_path / "nope.csv"], capsys)[0] == 2


def test_bad_output_dir(matrix_csv, tmp_path, capsys):
    assert run(["fuse", matrix_csv, "-o", tmp_path / "no" / "r.csv"], capsys)[0] == 2


def test_data_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("item_id,A\nd1,nan\n")
    code, _, err = run(["fuse", bad], capsys)
    assert code == 1 and err.startswith("cfakit: error:")


def test_help(capsys):
    code, out, _ = run(["fuse", "--help"], capsys)
    assert code == 0 and out.startswith("usage: cfakit fuse")
