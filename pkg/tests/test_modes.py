import math

import numpy as np
import pytest

from rindler_cavities import units
from rindler_cavities.errors import DomainError
from rindler_cavities.modes import minkowski_mode, mode_frequency, rindler_mode


def test_minkowski_examples():
    L, x1 = 0.7, 2.0
    for t in (0.0, 1.3, -4.0):
        assert minkowski_mode(1, t, x1, L, x1) == 0
        assert abs(minkowski_mode(1, t, x1 + L, L, x1)) < 1e-15
        assert abs(minkowski_mode(2, t, x1 + L / 2, L, x1)) < 1e-15
    assert minkowski_mode(1, 0.0, x1 + L / 2, L, x1) == pytest.approx(1 / math.sqrt(math.pi))


def test_rindler_examples():
    Lp = 0.4
    assert rindler_mode(3, 1.7, 0.0, Lp) == 0
    assert rindler_mode(1, 0.0, Lp / 2, Lp) == pytest.approx(1 / math.sqrt(math.pi))
    quarter = rindler_mode(1, Lp / 2, Lp / 2, Lp)
    assert quarter == pytest.approx(-1j / math.sqrt(math.pi), abs=1e-15)


def test_mode_frequency_examples():
    assert mode_frequency(1, math.pi) == pytest.approx(1.0)
    assert mode_frequency(5, 1.0) == pytest.approx(5 * math.pi)
    assert mode_frequency(1, units.length_to_natural(0.1)) == pytest.approx(9.42e9, rel=1e-3)


def test_domain_errors():
    with pytest.raises(DomainError):
        minkowski_mode(1, 0.0, 2.8, 0.7, 2.0)
    with pytest.raises(DomainError):
        rindler_mode(1, 0.0, -0.01, 1.0)
    with pytest.raises(DomainError):
        mode_frequency(0, 1.0)
    with pytest.raises(DomainError):
        mode_frequency(1.5, 1.0)
    with pytest.raises(DomainError):
        mode_frequency(2, -1.0)


@pytest.mark.parametrize("which", ["minkowski", "rindler"])
def test_discrete_orthonormality(which):
    L, x1, N = 0.9, 0.3, 10_000
    pos = x1 + (np.arange(N) + 0.5) * L / N if which == "minkowski" else (np.arange(N) + 0.5) * L / N
    n = np.arange(1, 11)
    if which == "minkowski":
        u = np.array([minkowski_mode(k, 0.0, pos, L, x1) for k in n])
    else:
        u = np.array([rindler_mode(k, 0.0, pos, L) for k in n])
    # strip the (n pi)^-1/2 prefactor to recover the bare sines
    s = (u * np.sqrt(n * np.pi)[:, None]).real
    gram = (2 / L) * (s @ s.T) * (L / N)
    assert np.max(np.abs(gram - np.eye(10))) < 1e-6


def test_time_dependence_is_phase_only():
    L, x1 = 1.1, 0.0
    x = np.linspace(0, L, 33)
    for n in (1, 4, 9):
        ref = np.abs(minkowski_mode(n, 0.0, x, L, x1))
        for t in (0.3, 17.0, -2.5):
            assert np.max(np.abs(np.abs(minkowski_mode(n, t, x, L, x1)) - ref)) < 1e-13
            assert np.max(np.abs(np.abs(rindler_mode(n, t, x, L)) - ref)) < 1e-13
