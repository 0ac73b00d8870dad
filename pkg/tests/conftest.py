import math

import numpy as np
import pytest

from qdsoliton.scattering import make_setup
from qdsoliton.units import NATURAL, Barrier, ParticleState


def setup_from_phases(k1a, k2a, a=None, k1=1.0, speed=None, above=True):
    """Natural-units setup with prescribed k1*a and k2*a.

    Either ``a`` or ``k1`` fixes the scale; the barrier height follows from k2.
    """
    if a is None:
        a = k1a / k1
    k1 = k1a / a
    k2 = k2a / a
    energy = 0.5 * k1**2
    height = energy - 0.5 * k2**2 if above else energy + 0.5 * k2**2
    c = k1 if speed is None else speed
    return make_setup(ParticleState(energy, c), Barrier(a, height), NATURAL)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def third_sixth():
    """k1 a = pi/3, k2 a = pi/6 with k1 = k3 = c = 1 (E = 0.5, V0 = 0.375)."""
    return setup_from_phases(math.pi / 3, math.pi / 6)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
