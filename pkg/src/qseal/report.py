"""Report rows, CSV / JSON-lines files and dense scheme files."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from contextlib import contextmanager
from dataclasses import astuple, dataclass, fields

import numpy as np

from .seal import AmplitudeMatrix

REPORT_FIELDS = (
    "n", "theta", "alpha", "nu", "message", "identify_p", "bit_error", "mi_bits",
    "uniform_w", "escape_p", "coin_escape_p", "trials", "mc_identify", "mc_stderr", "max_z",
)
SCALING_FIELDS = ("n", "epsilon", "p_max_exact", "p_max_asymptotic", "log_ratio")

_INT_FIELDS = {"n", "message", "trials"}


@dataclass(frozen=True)
class ReportRow:
    """One analysed point. ``theta`` holds the scheme constant Theta.

    Monte Carlo fields are ``None`` when no trials were run; scheme
    constants are ``None`` for dense schemes.
    """

    n: int
    theta: float | None
    alpha: float | None
    nu: float
    message: int
    identify_p: float | None
    bit_error: float | None
    mi_bits: float | None
    uniform_w: float | None
    escape_p: float | None
    coin_escape_p: float | None
    trials: int
    mc_identify: float | None = None
    mc_stderr: float | None = None
    max_z: float | None = None


@dataclass(frozen=True)
class ScalingRow:
    n: int
    epsilon: float
    p_max_exact: float
    p_max_asymptotic: float
    log_ratio: float


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _json_value(value):
    if value is None or isinstance(value, (int, np.integer)):
        return None if value is None else int(value)
    value = float(f"{float(value):.12g}")
    return value if math.isfinite(value) else str(value)


@contextmanager
def atomic_output(path):
    """Write to a sibling temporary file and move it into place on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qseal-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_rows(fh, rows, header, fmt: str = "csv") -> None:
    if fmt == "csv":
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    elif fmt == "jsonl":
        for row in rows:
            record = {k: _json_value(v) for k, v in zip(header, row)}
            fh.write(json.dumps(record) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'jsonl'")


def emit_report(rows, fmt: str = "csv", path=None, stream=None) -> None:
    """Write report or scaling rows as CSV or JSON lines.

    Exactly one of ``path`` (written atomically) or ``stream`` is used.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to emit: no rows")
    header = tuple(f.name for f in fields(rows[0]))
    tuples = [astuple(r) for r in rows]
    if path is not None:
        with atomic_output(path) as fh:
            write_rows(fh, tuples, header, fmt)
    else:
        write_rows(stream, tuples, header, fmt)


def _parse(name, text):
    if text == "":
        return None
    if name in _INT_FIELDS:
        return int(text)
    return float(text)


def read_report(path, fmt: str = "csv") -> list[ReportRow]:
    """Parse a file written by :func:`emit_report` back into report rows."""
    with open(path, newline="", encoding="utf-8") as fh:
        if fmt == "csv":
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != REPORT_FIELDS:
                raise ValueError(f"unexpected header {header}")
            return [ReportRow(*(_parse(k, v) for k, v in zip(header, line))) for line in reader]
        rows = []
        for line in fh:
            record = json.loads(line)
            rows.append(ReportRow(*(None if record[k] is None else
                                    (int(record[k]) if k in _INT_FIELDS else float(record[k]))
                                    for k in REPORT_FIELDS)))
        return rows


def load_dense_scheme(path) -> AmplitudeMatrix:
    """Read a dense scheme: first line ``N``, then N rows of N amplitudes."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ValueError(f"cannot read dense scheme {path}: {exc}") from exc
    if not lines or len(lines[0]) != 1:
        raise ValueError(f"{path}: first line must hold the dimension N")
    N = int(lines[0][0])
    body = lines[1:]
    if len(body) != N or any(len(r) != N for r in body):
        raise ValueError(f"{path}: expected {N} rows of {N} amplitudes")
    return AmplitudeMatrix(dense=np.array(body, dtype=float))


def save_dense_scheme(amps: AmplitudeMatrix, path) -> None:
    arr = amps.dense()
    with atomic_output(path) as fh:
        fh.write(f"{amps.N}\n")
        for row in arr:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")
