import json
import subprocess
import sys

import numpy as np
import pytest

from qseal import random_amplitudes, save_dense_scheme
from qseal.cli import main, parse_args
from qseal.report import read_report


def test_parse_sweep_example():
    inv = parse_args("sweep --n 4,8,16 --theta 0.3927 --alpha 0.25 --nu 0.5 --trials 100000 --seed 42 --out run.csv".split())
    assert inv.subcommand == "sweep"
    c = inv.config
    assert c.n_values == (4, 8, 16) and c.nu_grid == (0.5,) and c.trials == 100000 and c.seed == 42
    assert c.Theta == 0.3927 and c.out_path == "run.csv"


def test_theta_degrees():
    inv = parse_args(["scaling", "--theta-deg", "22.5"])
    assert inv.config.Theta == pytest.approx(np.pi / 8)


@pytest.mark.parametrize("argv, needle", [
    (["sweep", "--alpha", "0.7"], "alpha must lie in (0, 1/2)"),
    (["sweep", "--nu", "1.5"], "nu must lie in [0, 1]"),
    (["sweep", "--theta", "1.0"], "Theta must lie in (0, pi/4)"),
    (["sweep", "--bogus"], "unrecognized arguments"),
    (["sweep", "--n", "x"], "--n"),
    (["channel", "--n", "2,3"], "single n"),
    ([], "required"),
])
def test_usage_errors(capsys, argv, needle):
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 2
    assert needle in capsys.readouterr().err


def test_sweep_to_file_is_silent_and_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep", "--n", "2,3", "--nu", "0,0.5,1", "--trials", "1000", "--seed", "42", "--messages", "2"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2), "--workers", "3"]) == 0
    assert capsys.readouterr().out == ""
    assert out1.read_bytes() == out2.read_bytes()
    assert len(read_report(out1)) == 2 * 3 * 2


def test_scaling_stdout(capsys):
    assert main(["scaling", "--n", "4,8,16,32,64"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,epsilon,p_max_exact,p_max_asymptotic,log_ratio"
    assert len(lines) == 6


def test_channel_csv_and_jsonl(capsys):
    assert main(["channel", "--n", "2", "--nu", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "message,0,1,2,3" and len(lines) == 5
    assert main(["channel", "--n", "2", "--nu", "0.5", "--format", "jsonl"]) == 0
    records = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [r["message"] for r in records] == [0, 1, 2, 3]
    assert all(abs(sum(r["row"]) - 1) < 1e-10 for r in records)
    assert all(min(r["row"]) >= 1 / 8 - 1e-12 for r in records)


def test_attack_single_message(capsys):
    assert main(["attack", "--n", "4", "--nu", "0,0.5,1", "--message", "5", "--format", "jsonl"]) == 0
    records = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [r["nu"] for r in records] == [0.0, 0.5, 1.0]
    assert all(r["message"] == 5 for r in records)


def test_dense_scheme_input(tmp_path, capsys):
    path = tmp_path / "scheme.txt"
    save_dense_scheme(random_amplitudes(8, np.random.default_rng(1)), path)
    assert main(["sweep", "--scheme", f"dense:{path}", "--nu", "0.5", "--messages", "all"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 9
    assert lines[1].startswith("3,,,0.5,0,")


def test_runtime_failure_exit_code(tmp_path, capsys):
    assert main(["sweep", "--scheme", f"dense:{tmp_path / 'missing.txt'}"]) == 1
    err = capsys.readouterr().err
    assert "cannot read" in err


def test_out_of_range_attack_message(capsys):
    assert main(["attack", "--n", "2", "--message", "9"]) == 1
    assert "out of range" in capsys.readouterr().err


def test_entry_point_subprocess(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qseal.cli", "sweep", "--alpha", "0.9"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "alpha must lie in (0, 1/2)" in proc.stderr


def test_verify_subcommand(tmp_path, capsys):
    out = tmp_path / "verify.txt"
    assert main(["verify", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text().splitlines()
    assert lines[-1] == "10/10 checks passed"
    assert all(line.startswith("PASS") for line in lines[:-1])
