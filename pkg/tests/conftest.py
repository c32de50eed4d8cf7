import numpy as np
import pytest

from spinwalk.model import canonical_spin_state


@pytest.fixture
def y_plus():
    return canonical_spin_state("y_plus")


@pytest.fixture
def z_plus():
    return canonical_spin_state("z_plus")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
