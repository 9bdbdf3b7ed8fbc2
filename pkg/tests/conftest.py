import math

import numpy as np
import pytest

from qseal import canonical_amplitudes, make_params

THETA = math.pi / 8
ALPHA = 0.25


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def canonical():
    def build(n, Theta=THETA, alpha=ALPHA):
        params = make_params(n, Theta, alpha)
        return params, canonical_amplitudes(params)

    return build


ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    def record(label, passed, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
