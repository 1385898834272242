from __future__ import annotations

import csv
import io
import json

import pytest

from qquery.cli import main, parse_values


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_coinchange(files, capsys):
    path = files("coins.json", '{"coins": [1, 5, 10, 20, 25], "target": 40}')
    code, out, _ = run(capsys, "run", "--algo", "coinchange", "--input", path, "--eps-inv", "1000", "--seed", "7")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"] == 2
    assert set(doc) == {"result", "charged_queries", "classical_peeks", "rounds", "seed"}
    assert doc["seed"] == 7


def test_run_is_byte_identical(files, capsys):
    path = files("coins.json", '{"coins": [1, 5, 10, 25], "target": 40}')
    first = run(capsys, "run", "--algo", "coinchange", "--input", path)
    second = run(capsys, "run", "--algo", "coinchange", "--input", path)
    assert first == second


def test_run_negative_cycle(files, capsys):
    path = files("g.txt", "3 3 directed weighted\n0 1 1\n1 2 -2\n2 1 1\n")
    code, out, _ = run(capsys, "run", "--algo", "spnw", "--input", path)
    assert code == 2
    assert json.loads(out)["result"] == "negative-cycle"


def test_run_graph_result(files, capsys):
    path = files("g.txt", "3 3 directed weighted\n0 1 4\n0 2 5\n1 2 -2\n")
    code, out, _ = run(capsys, "run", "--algo", "spnw", "--input", path, "--model", "matrix")
    assert code == 0
    assert json.loads(out)["result"]["dist"] == [0, 4, 2]


def test_run_findsol_false_exits_two(files, capsys):
    path = files("v.txt", "0 0 0 0\n")
    code, out, _ = run(capsys, "run", "--algo", "findsol", "--input", path)
    assert code == 2 and json.loads(out)["result"] == "no-solution"


def test_unknown_algorithm(files, capsys):
    path = files("v.txt", "1 2\n")
    code, _, err = run(capsys, "run", "--algo", "foo", "--input", path)
    assert code == 1 and "unknown algorithm" in err


def test_malformed_input_reports_line(files, capsys):
    path = files("g.txt", "2 1 directed weighted\n0 z 1\n")
    code, _, err = run(capsys, "run", "--algo", "bfs", "--input", path)
    assert code == 1 and "line 2" in err


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "run")[0] == 1
    assert run(capsys, "bench", "--algo", "bbht", "--trials", "0")[0] == 1
    assert run(capsys, "run", "--algo", "bfs", "--input", "x", "--eps-inv", "0.5")[0] == 1
    assert run(capsys, "run", "--algo", "bfs", "--input", "/no/such/file")[0] == 1


def test_bench_csv_and_fit(tmp_path, capsys):
    fit_path = tmp_path / "fit.json"
    code, out, _ = run(capsys, "bench", "--algo", "linear_scan", "--trials", "100",
                       "--sizes", "64,128,256", "--fit-output", str(fit_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["size"] for r in rows] == ["64", "128", "256"]
    assert set(json.loads(fit_path.read_text())) == {"slope", "intercept", "r2"}


def test_bench_svg(tmp_path, capsys):
    svg = tmp_path / "c.svg"
    code, _, _ = run(capsys, "bench", "--algo", "findsol", "--trials", "20", "--sizes", "64,128,256", "--svg", str(svg))
    assert code == 0 and svg.read_text().lstrip().startswith("<?xml")


def test_bench_unknown_param(capsys):
    assert run(capsys, "bench", "--algo", "bbht", "--param", "colour=red")[0] == 1


def test_analyze_bbht_includes_original_lambda(capsys):
    code, out, _ = run(capsys, "analyze-bbht", "--n", "256", "--trials", "200", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    lams = [r["lambda"] for r in doc["rows"]]
    assert any(abs(l - 8 / 7) < 1e-12 for l in lams) and 1.31 in lams
    assert doc["m0"] == pytest.approx(0.69 * 16)


def test_verify_filter_and_caveat(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "ftheta")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["criterion"] for r in rows} == {"ftheta"}
    code, out, _ = run(capsys, "verify", "--criteria", "table5", "--lambda", "1.99")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["criterion"] for r in rows} == {"table5"}
    assert any(r["check"] == "lambda_caveat" and r["status"] == "CAVEAT" for r in rows)
    assert code != 0


def test_verify_unknown_criterion(capsys):
    assert run(capsys, "verify", "--criteria", "nonsense")[0] == 1


def test_parse_values():
    assert parse_values("1 2\n# note\n3\n").tolist() == [1, 2, 3]
    with pytest.raises(ValueError, match="line 2"):
        parse_values("1\nx\n")
