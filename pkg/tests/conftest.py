import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def dense_single(u: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """I (x) ... (x) U (x) ... (x) I with U on ``qubit`` (qubit 0 least significant)."""
    out = np.eye(1)
    for q in reversed(range(num_qubits)):
        out = np.kron(out, u if q == qubit else np.eye(2))
    return out


def equal_first_half(n: int) -> np.ndarray:
    N = 1 << n
    v = np.zeros(2 * N)
    v[:N] = 1 / math.sqrt(N)
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
