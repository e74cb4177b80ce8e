import numpy as np
import pytest

from spinphase.phase_space import PhaseState, StateSampler
from spinphase.repspace import build_rep


@pytest.fixture(params=[0.5, 1], ids=["s1/2", "s1"])
def rep(request):
    return build_rep(request.param)


@pytest.fixture
def rep_half():
    return build_rep(0.5)


@pytest.fixture
def sampler(rep):
    return StateSampler(rep, seed=1234)


@pytest.fixture
def generic_state():
    """Pinned mixed s=1/2 state used for regression fixtures."""
    xi = np.array([0.6 + 0.1j, 0.2 - 0.3j, 0.5 + 0.2j, -0.1 + 0.4j])
    return PhaseState([0.1, 0.2, -0.3, 0.4], [1.3, 0.2, -0.1, 0.4], xi, lam=1.0)


def mixed_rest_state(m=1.0, lam=1.0):
    xi = np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2)
    return PhaseState(np.zeros(4), [m, 0, 0, 0], xi, lam=lam)


# --- acceptance summary -------------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, passed, detail)``; printed in the terminal summary."""

    def record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
