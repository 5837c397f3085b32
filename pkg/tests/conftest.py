import time

import numpy as np
import pytest

from rindler_cavities import units
from rindler_cavities.experiments import sweep_acceleration, tune_length
from rindler_cavities.interaction import ProtocolParams

# Reference setting: 10 cm cavities, 100 ns switching, atom resonant with n = 1
L0_M = 0.1
W0 = 1e-7
L0 = units.length_to_natural(L0_M)
A_TUNE = units.accel_to_natural(8e33)

ACCEPTANCE_LINES = []


def ref_params(**changes):
    base = ProtocolParams(a=0.0, L=L0, W=W0)
    return base.with_(**changes) if changes else base


def _timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


@pytest.fixture(scope="session")
def accel_sweep_timed():
    aL = np.logspace(-2, 16, 40)
    return _timed(sweep_acceleration, ref_params(), aL / L0)


@pytest.fixture(scope="session")
def accel_sweep(accel_sweep_timed):
    return accel_sweep_timed[0]


@pytest.fixture(scope="session")
def tune_8e33_timed():
    return _timed(tune_length, ref_params(), A_TUNE)


@pytest.fixture(scope="session")
def tune_8e33(tune_8e33_timed):
    return tune_8e33_timed[0]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
