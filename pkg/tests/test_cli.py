"""Command-line interface: subcommands, exit codes, determinism."""

import json

import pytest

from refinable.cli import run

COUNTER = {"field": {"n": 10, "k": 2}, "lambda": "t", "columns": ["1", "1/2*t"]}
MV = {"field": {"n": 10, "k": 2}, "lambda": "t",
      "columns": [["1", "0"], ["0", "1"], ["1/2*t", "0"], ["0", "1/2*t"]]}


@pytest.fixture()
def counter_file(tmp_path):
    path = tmp_path / "counter.json"
    path.write_text(json.dumps(COUNTER))
    return str(path)


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_counterexample_exact(capsys):
    code, data = run_json(capsys, ["counterexample"])
    assert code == 0
    assert data["exact_match"] is True
    assert len(data["translations"]) == 10
    assert data["translations"][:3] == ["0", "1", "1/2*t"]


def test_check_accept_and_reject(capsys, counter_file):
    code, data = run_json(capsys, ["check", "--instance", counter_file])
    assert code == 0 and data["report"]["verdict"] == "refinable"

    code, data = run_json(capsys, ["check", "--field", "2,2", "--lambda", "t",
                                   "--columns", "1;1"])
    assert code == 1 and data["report"]["verdict"] == "not_refinable"
    assert data["report"]["witness"] is not None


def test_mask_roundtrip_verify(capsys, tmp_path, counter_file):
    mask_path = tmp_path / "mask.json"
    code = run(["mask", "--instance", counter_file, "--out", str(mask_path)])
    assert code == 0
    capsys.readouterr()
    code, data = run_json(capsys, ["check", "--instance", counter_file,
                                   "--verify-mask", str(mask_path)])
    assert code == 0 and data["mask_identity"] is True


def test_lawton_exit_codes(capsys):
    code, data = run_json(capsys, ["lawton", "--p", "1", "--d", "0", "--m", "2"])
    assert code == 0 and data["result"]["quotient"] == ["1", "1"]
    assert run(["lawton", "--p", "1,0,1", "--d", "0", "--m", "2"]) == 1


def test_erdos_subcommand(capsys):
    code, data = run_json(capsys, ["erdos", "--lambda", "2", "--targets", "0",
                                   "--depth", "4", "--extra-n", "20"])
    assert code == 0
    assert data["g"] == 3 and data["c_default"] == "1/1440"
    assert data["verification"]["certified"] is True

    # inadmissible user constant is refused with a report
    code, data = run_json(capsys, ["erdos", "--lambda", "2", "--targets", "0",
                                   "--depth", "2", "--c", "1/4"])
    assert code == 1 and not all(data["admissibility"].values())

    # smaller admissible user constant works
    code, data = run_json(capsys, ["erdos", "--lambda", "2", "--targets", "0",
                                   "--depth", "2", "--c", "1/2000"])
    assert code == 0


def test_cascade_csv(tmp_path, counter_file):
    out = tmp_path / "grid.csv"
    code = run(["cascade", "--instance", counter_file, "--grid", "256",
                "--iters", "12", "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# a=") and lines[1] == "x,f"
    assert len(lines) == 2 + 256


def test_ftprobe(capsys, counter_file):
    code, data = run_json(capsys, ["ftprobe", "--instance", counter_file,
                                   "--J", "40", "--points", "40"])
    assert code == 0
    assert data["max_abs_deviation"] <= 1e-8


def test_decay_cli(capsys):
    code, data = run_json(capsys, ["decay", "--bspline", "0", "--m", "2",
                                   "--J", "30"])
    assert code == 0
    assert data["report"]["epsilon0_lower_bound"] > 0


def test_mvcheck_cli(capsys, tmp_path):
    path = tmp_path / "mv.json"
    path.write_text(json.dumps(MV))
    code, data = run_json(capsys, ["mvcheck", "--instance", str(path)])
    assert code == 0
    assert data["report"]["chains"]["cycles"] == [[0, 2], [1, 3]]


def test_factorize_cli(capsys, counter_file):
    code, data = run_json(capsys, ["factorize-check", "--instance", counter_file,
                                   "--grid", "1024", "--iters", "20"])
    assert code == 0
    assert data["report"]["sup_rel_distance"] <= 1e-2


def test_usage_errors(capsys):
    assert run(["nonsense"]) == 2
    assert run(["check"]) == 2  # no instance given
    assert run(["mask", "--field", "4,2", "--lambda", "t", "--columns", "1"]) == 2


def test_byte_identical_output(capsys, counter_file):
    run(["check", "--instance", counter_file, "--seed", "7"])
    first = capsys.readouterr().out
    run(["check", "--instance", counter_file, "--seed", "7"])
    second = capsys.readouterr().out
    assert first == second

    run(["decay", "--bspline", "0", "--m", "2", "--J", "25", "--seed", "3"])
    first = capsys.readouterr().out
    run(["decay", "--bspline", "0", "--m", "2", "--J", "25", "--seed", "3"])
    second = capsys.readouterr().out
    assert first == second


def test_text_format(capsys, counter_file):
    code = run(["counterexample", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "exact match: True" in out
