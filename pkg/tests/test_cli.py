import json
import subprocess
import sys

import pytest

from bnopt import LearnedNetwork, read_score_file
from bnopt.cli import (EXIT_INPUT, EXIT_MEMORY, EXIT_OK, EXIT_USAGE,
                       EXIT_VERIFY, emit_dot, main)
from bnopt.synth import random_dataset
from conftest import DATA_DIR, FIXTURE_CSV, OPT_SCORE

GOLDEN_SCORES = DATA_DIR / "fixture4.scores"
GOLDEN_DOT = DATA_DIR / "fixture4_dp.dot"


def write_csv(tmp_path, data, name="synth.csv"):
    p = tmp_path / name
    lines = [",".join(data.names)]
    lines += [",".join(str(v) for v in row) for row in data.rows]
    p.write_text("\n".join(lines) + "\n")
    return p


def test_score_golden_file(tmp_path, capsys):
    out = tmp_path / "f.scores"
    assert main(["score", str(FIXTURE_CSV), "--out", str(out)]) == EXIT_OK
    assert out.read_text() == GOLDEN_SCORES.read_text()


def test_score_stdout_matches_file(capsys):
    assert main(["score", str(FIXTURE_CSV)]) == EXIT_OK
    assert capsys.readouterr().out == GOLDEN_SCORES.read_text()


def test_score_max_parents_zero(tmp_path):
    out = tmp_path / "f.scores"
    assert main(["score", str(FIXTURE_CSV), "--max-parents", "0",
                 "--out", str(out)]) == EXIT_OK
    scores = read_score_file(out)
    assert all(len(t) == 1 and t.parent_sets == [0] for t in scores.tables)


def test_score_max_parents_upward_rejected(capsys):
    rc = main(["score", str(FIXTURE_CSV), "--max-parents", "6"])
    assert rc == EXIT_USAGE
    assert "limit 2" in capsys.readouterr().err


def test_learn_dp_fixture(tmp_path, capsys):
    dot = tmp_path / "net.dot"
    rc = main(["learn", str(FIXTURE_CSV), "--algorithm", "dp",
               "--dot", str(dot)])
    assert rc == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["total_score"] == OPT_SCORE
    assert report["dataset"] == {"n": 4, "N": 8, "names": ["A", "B", "C", "D"]}
    assert report["config"]["parent_limit"] == 2
    assert dot.read_text() == GOLDEN_DOT.read_text()


def test_learn_astar_dynamic(capsys):
    rc = main(["learn", str(FIXTURE_CSV), "--algorithm", "astar",
               "--heuristic", "dynamic", "--k", "3"])
    assert rc == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["total_score"] == pytest.approx(OPT_SCORE, rel=1e-9)
    assert report["stats"]["pdb_size"] >= 0
    assert report["config"]["k"] == 3


def test_learn_bfbnb_static(capsys):
    rc = main(["learn", str(FIXTURE_CSV), "--algorithm", "bfbnb",
               "--heuristic", "static", "--groups", "auto", "--seed", "5"])
    assert rc == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["total_score"] == pytest.approx(OPT_SCORE, rel=1e-9)


def test_learn_flag_coherence(capsys):
    assert main(["learn", str(FIXTURE_CSV), "--heuristic", "simple",
                 "--k", "3"]) == EXIT_USAGE
    assert main(["learn", str(FIXTURE_CSV), "--heuristic", "dynamic",
                 "--groups", "1-2,3-4"]) == EXIT_USAGE
    assert main(["learn", str(FIXTURE_CSV), "--heuristic", "dynamic",
                 "--k", "1"]) == EXIT_USAGE
    assert main(["learn", str(FIXTURE_CSV), "--heuristic", "static",
                 "--groups", "1-2"]) == EXIT_USAGE


def test_learn_from_score_file_matches_data(tmp_path, capsys):
    out = tmp_path / "f.scores"
    main(["score", str(FIXTURE_CSV), "--out", str(out)])
    capsys.readouterr()
    assert main(["learn", str(out), "--algorithm", "astar"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["total_score"] == pytest.approx(OPT_SCORE, rel=1e-9)
    assert report["dataset"]["N"] is None  # score files carry no record count


def test_learn_report_written_to_out(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["learn", str(FIXTURE_CSV), "--algorithm", "dp",
                 "--out", str(out)]) == EXIT_OK
    assert out.read_text() == capsys.readouterr().out


def test_verify_fixture_passes(capsys):
    assert main(["verify", str(FIXTURE_CSV)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert all(ln.startswith("PASS") for ln in lines if ln)


def test_verify_synthetic_dataset(tmp_path, capsys):
    data = random_dataset(6, 70, seed=33)
    csv = write_csv(tmp_path, data)
    assert main(["verify", str(csv)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert all(ln.startswith("PASS") for ln in lines if ln)


def test_verify_catches_unsorted_score_file(tmp_path, capsys):
    text = GOLDEN_SCORES.read_text().splitlines()
    a0 = text.index("var A 3")
    text[a0 + 1], text[a0 + 2] = text[a0 + 2], text[a0 + 1]
    bad = tmp_path / "bad.scores"
    bad.write_text("\n".join(text) + "\n")
    assert main(["verify", str(bad)]) == EXIT_VERIFY
    out = capsys.readouterr().out
    assert "cursor-equivalence" in out
    assert "candidates" in out  # counterexample names the failing pool


def test_verify_guard_on_large_n(tmp_path, capsys):
    lines = ["n 15"]
    for i in range(15):
        lines += [f"var X{i + 1} 1", "1.5 0"]
    p = tmp_path / "big.scores"
    p.write_text("\n".join(lines) + "\n")
    assert main(["verify", str(p)]) == EXIT_USAGE
    assert "--max-n" in capsys.readouterr().err
    assert main(["verify", str(p), "--max-n", "15"]) == EXIT_OK


def test_input_errors(tmp_path, capsys):
    assert main(["learn", str(tmp_path / "nope.csv")]) == EXIT_INPUT
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("a,b\n1\n")
    assert main(["score", str(ragged)]) == EXIT_INPUT
    assert "row 2" in capsys.readouterr().err


def test_memory_budget_exit(tmp_path, capsys):
    data = random_dataset(8, 60, seed=9)
    csv = write_csv(tmp_path, data)
    rc = main(["learn", str(csv), "--mem-budget", "1500"])
    assert rc == EXIT_MEMORY


def test_score_ingestion_flags(tmp_path, capsys):
    p = tmp_path / "odd.tsv"
    p.write_text("1\tNA\n2\t1\n3\t2\n4\t1\n")
    out = tmp_path / "odd.scores"
    rc = main(["score", str(p), "--delimiter", "\t", "--no-header",
               "--missing-token", "NA", "--out", str(out)])
    assert rc == EXIT_OK
    scores = read_score_file(out)
    assert scores.names == ["X1", "X2"]  # NA row dropped, 3 records remain


def test_emit_dot_shapes():
    assert emit_dot(LearnedNetwork([0, 0], 0.0), ["A", "B"]) == (
        'digraph bn {\n  "A";\n  "B";\n}\n')
    assert emit_dot(LearnedNetwork([0, 1], 0.0), ["A", "B"]) == (
        'digraph bn {\n  "A";\n  "B";\n  "A" -> "B";\n}\n')


def _run_cli(args):
    return subprocess.run([sys.executable, "-m", "bnopt", *args],
                          capture_output=True)


def test_cli_byte_identical_runs():
    args = ["learn", str(FIXTURE_CSV), "--algorithm", "astar",
            "--heuristic", "static", "--groups", "auto", "--seed", "3"]
    first = _run_cli(args)
    second = _run_cli(args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    score_first = _run_cli(["score", str(FIXTURE_CSV)])
    score_second = _run_cli(["score", str(FIXTURE_CSV)])
    assert score_first.stdout == score_second.stdout
