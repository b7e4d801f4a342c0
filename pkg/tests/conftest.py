import numpy as np
import pytest

from cop.manifold_opt import OptimizerConfig
from cop.qcore import DensityOperator

PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
MINUS = np.array([1.0, -1.0]) / np.sqrt(2)


def plus_minus_mixture(p: float) -> DensityOperator:
    """p|+><+| + (1-p)|-><-|."""
    return DensityOperator(p * np.outer(PLUS, PLUS) + (1 - p) * np.outer(MINUS, MINUS))


@pytest.fixture
def fast_config():
    return OptimizerConfig(restarts=4, seed=3)


# one PASS/FAIL line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[str, str] = {}


def record_acceptance(key: str, passed: bool | None, text: str) -> str:
    status = "INFO" if passed is None else ("PASS" if passed else "FAIL")
    line = f"{status} {key}: {text}"
    ACCEPTANCE_LINES[key] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (len(k.split()[0]), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
