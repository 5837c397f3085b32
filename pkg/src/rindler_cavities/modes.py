"""Dirichlet cavity modes in the inertial (u_n) and Rindler (v_n) frames.

Normalisation keeps the bare (n pi)^(-1/2) prefactor; no 1/sqrt(L) factor.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def _check_index(n):
    n_arr = np.asarray(n)
    if not np.issubdtype(n_arr.dtype, np.integer) or np.any(n_arr < 1):
        raise DomainError(f"mode index must be an integer >= 1, got {n!r}")
    return n_arr


def mode_frequency(n, length):
    """Angular frequency n*pi/length."""
    _check_index(n)
    if not np.all(np.asarray(length) > 0):
        raise DomainError("cavity length must be positive")
    return n * np.pi / length


def _mode(n, time, pos, length):
    n = _check_index(n)
    k = n * np.pi / length
    return np.sin(k * pos) * np.exp(-1j * k * time) / np.sqrt(n * np.pi)


def minkowski_mode(n, t, x, L, x1):
    """Inertial cavity mode u_n(t, x) for mirrors at ``x1`` and ``x1 + L``."""
    rel = np.asarray(x, dtype=float) - x1
    # x - x1 can overshoot the mirror by rounding when x1 >> L
    slack = 8 * np.finfo(float).eps * max(abs(x1), L)
    if np.any(rel < -slack) or np.any(rel > L + slack):
        raise DomainError("x lies outside the inertial cavity [x1, x1 + L]")
    return _mode(n, t, np.clip(rel, 0.0, L), L)


def rindler_mode(n, eta, xi, Lp):
    """Accelerated cavity mode v_n(eta, xi) for mirrors at xi = 0 and xi = Lp."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0) or np.any(xi_arr > Lp):
        raise DomainError("xi lies outside the Rindler cavity [0, Lp]")
    return _mode(n, eta, xi_arr, Lp)
