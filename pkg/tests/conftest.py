import numpy as np
import pytest

from bivelocity.state import FlowState, GasModel, Grid1D, TransportCoefficients

# acceptance results, one line per criterion, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def gas():
    return GasModel()


@pytest.fixture
def coeffs():
    return TransportCoefficients(mu=0.01, kappa_h=0.015, kappa_m=0.01, kappa_klim=0.01)


@pytest.fixture
def grid():
    return Grid1D(64, 1.0)


def smooth_state(grid, gas, seed=0, amp=0.15, v_ratio=False):
    rng = np.random.default_rng(seed)
    x = grid.x / grid.length

    def series(a):
        out = np.zeros_like(x)
        for m in range(1, 4):
            out += rng.uniform(-a, a) / m * np.sin(2 * np.pi * m * x + rng.uniform(0, 2 * np.pi))
        return out

    st = FlowState.from_density(1 + series(amp), series(0.2), gas.c_v * (1 + series(amp)), gas)
    if v_ratio:
        st = st.copy_with(v_bar=st.v_bar * (1 + series(0.05)))
    return st


@pytest.fixture
def make_state():
    return smooth_state


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
