import numpy as np
import pytest

from qslasym.states import DensityMatrix, Hamiltonian

SQ2 = np.sqrt(2.0)


@pytest.fixture
def qubit_h():
    return Hamiltonian.diagonal([0.0, 1.0])


@pytest.fixture
def plus():
    return DensityMatrix.pure([1, 1])


@pytest.fixture
def minus():
    return DensityMatrix.pure([1, -1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rho_p(p):
    """(1 - p) I/2 + p |+><+|."""
    return DensityMatrix((1 - p) * np.eye(2) / 2 + p * np.full((2, 2), 0.5))


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
