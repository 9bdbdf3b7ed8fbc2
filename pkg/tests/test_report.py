import io
import os

import numpy as np
import pytest

from qseal import (
    ExperimentConfig,
    emit_report,
    load_dense_scheme,
    random_amplitudes,
    read_report,
    run_experiment,
    save_dense_scheme,
    scaling_table,
)
from qseal.report import REPORT_FIELDS, SCALING_FIELDS, format_value

HEADER = "n,theta,alpha,nu,message,identify_p,bit_error,mi_bits,uniform_w,escape_p,coin_escape_p,trials,mc_identify,mc_stderr,max_z"


def test_header_is_fixed():
    assert ",".join(REPORT_FIELDS) == HEADER
    assert ",".join(SCALING_FIELDS) == "n,epsilon,p_max_exact,p_max_asymptotic,log_ratio"


def test_one_row_gives_two_lines(tmp_path):
    rows = run_experiment(ExperimentConfig(n_values=(2,), messages=[0]))
    path = tmp_path / "r.csv"
    emit_report(rows, "csv", path=path)
    data = path.read_bytes()
    assert data.count(b"\n") == 2 and b"\r" not in data
    assert data.decode().splitlines()[0] == HEADER


def test_twelve_significant_digits():
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value(None) == ""
    assert format_value(7) == "7"


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_round_trip(tmp_path, fmt):
    rows = run_experiment(ExperimentConfig(n_values=(2, 3), nu_grid=(0.0, 0.5), messages=2, trials=500, seed=4))
    path = tmp_path / f"r.{fmt}"
    emit_report(rows, fmt, path=path)
    back = read_report(path, fmt)
    assert len(back) == len(rows)
    for a, b in zip(rows, back):
        for f in REPORT_FIELDS:
            x, y = getattr(a, f), getattr(b, f)
            if x is None:
                assert y is None
            elif isinstance(x, int):
                assert x == y
            else:
                assert y == float(format_value(x))


def test_scaling_rows_emit():
    buf = io.StringIO()
    emit_report(scaling_table(0.3, 0.25, [4, 8]), "csv", stream=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,epsilon,p_max_exact,p_max_asymptotic,log_ratio"
    assert len(lines) == 3


def test_empty_rows_rejected():
    with pytest.raises(ValueError):
        emit_report([], "csv", stream=io.StringIO())


def test_failed_write_leaves_no_file(tmp_path):
    path = tmp_path / "out.csv"
    rows = run_experiment(ExperimentConfig(n_values=(2,), messages=[0]))
    with pytest.raises(ValueError):
        emit_report(rows, "xml", path=path)
    assert not path.exists()
    assert os.listdir(tmp_path) == []


def test_unwritable_path(tmp_path):
    rows = run_experiment(ExperimentConfig(n_values=(2,), messages=[0]))
    with pytest.raises(OSError):
        emit_report(rows, "csv", path=tmp_path / "missing" / "r.csv")


def test_dense_scheme_round_trip(tmp_path):
    amps = random_amplitudes(8, np.random.default_rng(0))
    path = tmp_path / "scheme.txt"
    save_dense_scheme(amps, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "8" and len(lines) == 9
    np.testing.assert_array_equal(load_dense_scheme(path).dense(), amps.dense())


@pytest.mark.parametrize("text, match", [
    ("2\n1 0\n0.5 0.5\n", "square-norm"),
    ("2\n1 0\n", "expected 2 rows"),
    ("1 0\n", "first line"),
])
def test_dense_scheme_validation(tmp_path, text, match):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ValueError, match=match):
        load_dense_scheme(path)


def test_dense_scheme_unreadable(tmp_path):
    with pytest.raises(ValueError, match="cannot read"):
        load_dense_scheme(tmp_path / "nope.txt")
