from functools import reduce

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def dense_kron(mats):
    """Full tensor product; oracle for the per-qubit routines."""
    return reduce(np.kron, mats)


@pytest.fixture
def acceptance_log():
    def log(criterion, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
