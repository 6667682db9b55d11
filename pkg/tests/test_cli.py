import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest
from jsonschema import validate

from qudit_rac.cli import main, parse_range

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "cli-output.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, SCHEMA)
    return payload


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classical_text(capsys):
    code, out, _ = run(capsys, "classical", "--n", "2", "--d", "4")
    assert code == 0
    assert "5/8 = 0.625" in out


def test_classical_oracle(capsys):
    payload = run_json(capsys, "classical", "--n", "3", "--d", "2", "--oracle")
    assert payload["pC"] == 0.75
    assert payload["oracle"]["agrees"] is True


def test_classical_nine_symbols(capsys):
    payload = run_json(capsys, "classical", "--n", "9", "--d", "8")
    assert abs(payload["pC"] - 0.3118) < 5e-5


def test_classical_oracle_too_large(capsys):
    code, _, err = run(capsys, "classical", "--n", "3", "--d", "4", "--oracle")
    assert code == 2
    assert "exceeds" in err


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "d,pQ,pC,ratio"
    table = {int(r["d"]): r for r in rows(out)}
    assert sorted(table) == [2, 3, 4, 5, 7, 8]
    assert round(float(table[3]["pC"]), 3) == 0.593
    assert round(float(table[3]["ratio"]), 3) == 1.075
    assert round(float(table[5]["ratio"]), 4) == 1.0953
    assert round(float(table[2]["ratio"]), 3) == 1.052
    for r in rows(out):
        for key in ("pC", "ratio"):
            digits = r[key].replace(".", "").lstrip("0")
            assert len(digits) <= 6


def test_q2_single(capsys):
    payload = run_json(capsys, "q2", "--d", "6")
    (row,) = payload["rows"]
    assert abs(row["ratio"] - 1.2068) < 1e-3


def test_q2_range_argmax(capsys):
    code, out, _ = run(capsys, "q2", "--d-range", "2..40", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "d,pQ_avg,pQ_worst,pC,ratio"
    table = rows(out)
    assert len(table) == 39
    best = max(table, key=lambda r: float(r["ratio"]))
    assert best["d"] == "6"


def test_q3_thirteen(capsys):
    payload = run_json(capsys, "q3", "--d", "13")
    (row,) = payload["rows"]
    assert abs(row["ratio"] - 1.224) < 2e-3


def test_q3_flags_odd_composite(capsys):
    code, out, _ = run(capsys, "q3", "--d", "9")
    assert code == 0
    assert "not unbiased" in out


def test_seesaw_matches_closed_form(capsys):
    payload = run_json(capsys, "seesaw", "--n", "2", "--d", "3", "--restarts", "50", "--seed", "7")
    assert abs(payload["best"] - 0.5 * (1 + 1 / math.sqrt(3))) < 1e-3
    assert payload["trace"][-1] == payload["best"]


def test_seesaw_zero_iterations(capsys):
    payload = run_json(capsys, "seesaw", "--n", "2", "--d", "2", "--restarts", "1", "--iters", "0", "--seed", "1")
    assert 0 <= payload["best"] <= 1
    assert payload["iterations"] == 0


@pytest.mark.parametrize("argv", [
    ("seesaw", "--n", "2", "--d", "3", "--restarts", "5", "--seed", "4"),
    ("q3", "--d-range", "2..5", "--format", "csv"),
    ("experiment", "--format", "json"),
])
def test_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "csv", "classical", "--n", "2", "--d", "2")
    assert code == 0
    assert out.startswith("n,d,pC_exact,pC\n")


def test_experiment_default(capsys):
    payload = run_json(capsys, "experiment")
    assert abs(payload["mean"] - 0.754) < 5e-3
    assert payload["classical_violated"] is True
    code, out, _ = run(capsys, "experiment")
    assert "classical bound 0.625 violated: yes" in out


def test_experiment_truncated_file(capsys, tmp_path):
    from qudit_rac.experiment import dump_table2, load_table2

    path = tmp_path / "short.csv"
    path.write_text("\n".join(dump_table2(load_table2()).splitlines()[:8]))
    code, _, err = run(capsys, "experiment", "--data", str(path))
    assert code == 2
    assert "error" in err


def test_experiment_bad_value_line_number(capsys, tmp_path):
    from qudit_rac.experiment import dump_table2, load_table2

    path = tmp_path / "bad.csv"
    path.write_text(dump_table2(load_table2()).replace("0.747", "x", 1))
    code, _, err = run(capsys, "experiment", "--data", str(path))
    assert code == 2
    assert "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "experiment", "--data", str(tmp_path / "none.csv"))
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("classical", "--n", "0", "--d", "3"),
    ("classical", "--n", "2", "--d", "1"),
    ("q2", "--d", "65"),
    ("q3", "--d-range", "1..4"),
    ("seesaw", "--n", "2", "--d", "2", "--restarts", "0"),
])
def test_validation_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


@pytest.mark.parametrize("argv", [("classical", "--n", "x", "--d", "2"), ("bogus",), ("q2",)])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    assert info.value.code == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "t1.csv"
    code, out, _ = run(capsys, "table1", "--format", "csv", "--out", str(path))
    assert code == 0
    assert out == ""
    assert path.read_text().startswith("d,pQ,pC,ratio\n")


def test_parse_range():
    assert list(parse_range("2..4")) == [2, 3, 4]
    assert list(parse_range("7")) == [7]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qudit_rac", "classical", "--n", "2", "--d", "2"],
                          capture_output=True, text=True, check=True)
    assert "3/4" in proc.stdout
