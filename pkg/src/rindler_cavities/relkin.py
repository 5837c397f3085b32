"""
Relativistic kinematics for the inertial/accelerated cavity pair.

Conventions
-----------
Natural units with c = 1: times in seconds, lengths in light-seconds,
proper accelerations in 1/s.  Rob's inner mirror sits at Rindler position
xi = 0, so its proper acceleration equals the coordinate parameter ``a``.

Every quantity that involves ``1/a`` at large acceleration is assembled from
the dimensionless groups ``aL``, ``aX = 1 + aL/2`` and ``a*t_a`` so nothing
underflows or cancels catastrophically when ``aL`` spans 1e-8 .. 1e16.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HorizonError


@dataclass(frozen=True)
class MinkowskiEvent:
    t: float
    x: float


@dataclass(frozen=True)
class RindlerEvent:
    eta: float
    xi: float


@dataclass(frozen=True)
class CavityGeometry:
    """Derived geometry of Rob's cavity and the atom crossing it.

    For ``a == 0`` the geometry is inertial: ``Lp == L`` and the diverging
    fields (apexes, ``t_a``) hold ``inf`` with ``inertial`` set.  Code paths
    branch on ``inertial`` and never do arithmetic with those infinities.
    """

    a: float
    L: float
    X1: float
    X2: float
    X: float
    Lp: float
    t_a: float
    inertial: bool = False

    @property
    def aL(self) -> float:
        return self.a * self.L

    @property
    def aX(self) -> float:
        """Dimensionless atom position a*X = 1 + aL/2."""
        return 1.0 + 0.5 * self.aL

    @property
    def a_ta_sq(self) -> float:
        """(a t_a)^2 = aL + (aL)^2/4 = (aX)^2 - 1, without cancellation."""
        aL = self.aL
        return aL + 0.25 * aL * aL

    @property
    def log1p_aL(self) -> float:
        """ln(1 + aL) = a*Lp."""
        return math.log1p(self.aL)

    @property
    def one_minus_ta_over_X(self) -> float:
        """1 - t_a/X, from 1 - r^2 = 1/(aX)^2 so it survives aL ~ 1e16."""
        aX = self.aX
        r = math.sqrt(self.a_ta_sq) / aX
        return 1.0 / (aX * aX) / (1.0 + r)


def make_geometry(a: float, L: float) -> CavityGeometry:
    """Build the cavity geometry for acceleration ``a`` and rest length ``L``."""
    if not L > 0:
        raise DomainError(f"cavity length must be positive, got L={L!r}")
    if not a >= 0 or not math.isfinite(a):
        raise DomainError(f"acceleration must be finite and >= 0, got a={a!r}")
    if a == 0:
        inf = math.inf
        return CavityGeometry(a=0.0, L=L, X1=inf, X2=inf, X=inf, Lp=L,
                              t_a=inf, inertial=True)
    aL = a * L
    X1 = 1.0 / a
    # t_a = sqrt(L/a + L^2/4) written as L*sqrt(1/aL + 1/4)
    t_a = L * math.sqrt(1.0 / aL + 0.25)
    return CavityGeometry(
        a=a,
        L=L,
        X1=X1,
        X2=X1 + L,
        X=X1 + 0.5 * L,
        Lp=math.log1p(aL) / a,
        t_a=t_a,
    )


def to_minkowski(p: RindlerEvent, a: float) -> MinkowskiEvent:
    if not a > 0:
        raise DomainError(f"Rindler chart needs a > 0, got a={a!r}")
    r = math.exp(a * p.xi) / a
    return MinkowskiEvent(t=r * math.sinh(a * p.eta), x=r * math.cosh(a * p.eta))


def to_rindler(p: MinkowskiEvent, a: float) -> RindlerEvent:
    if not a > 0:
        raise DomainError(f"Rindler chart needs a > 0, got a={a!r}")
    if not p.x > abs(p.t):
        raise HorizonError(
            f"event (t={p.t!r}, x={p.x!r}) is not inside the right Rindler "
            "wedge x > |t|; it lies on or beyond the horizon")
    # x^2 - t^2 factored to avoid cancellation near the horizon
    interval = math.sqrt((p.x - p.t) * (p.x + p.t))
    return RindlerEvent(eta=math.atanh(p.t / p.x) / a,
                        xi=math.log(a * interval) / a)


def rob_mirror_position(t, apex):
    """Minkowski position sqrt(t^2 + apex^2) of a mirror with turning point ``apex``."""
    if np.any(np.asarray(apex) <= 0):
        raise DomainError("mirror apex must be positive")
    return np.hypot(t, apex)


def atom_trajectory_rindler(tau, geom: CavityGeometry):
    """Rindler coordinates (eta, xi) of the inertial atom at proper time ``tau``.

    Works on scalars or arrays.  ``xi`` uses
    a^2 (X^2 - tau^2) = 1 + a^2 (t_a - |tau|)(t_a + |tau|)
    so that ``xi(+-t_a)`` is exactly zero.
    """
    if geom.inertial:
        raise DomainError("the inertial geometry has no Rindler chart")
    tau_arr = np.asarray(tau, dtype=float)
    a = geom.a
    abs_tau = np.abs(tau_arr)
    # 1 - |tau|/X = (1 - z) + z (1 - t_a/X) with z = |tau|/t_a; at large aL
    # t_a and X coincide in floating point, so the window edge is tested via z
    z = abs_tau / geom.t_a
    one_minus = (1.0 - z) + z * geom.one_minus_ta_over_X
    if np.any(one_minus <= 0):
        raise DomainError("atom proper time must satisfy |tau| < X")
    xi = np.log1p(a * a * (geom.t_a - abs_tau) * (geom.t_a + abs_tau)) / (2.0 * a)
    u = z * (1.0 - geom.one_minus_ta_over_X)
    eta = np.sign(tau_arr) * 0.5 * np.log1p(2.0 * u / one_minus) / a
    if np.ndim(tau) == 0:
        return RindlerEvent(eta=float(eta), xi=float(xi))
    return RindlerEvent(eta=eta, xi=xi)
