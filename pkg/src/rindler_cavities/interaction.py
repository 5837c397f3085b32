"""
Unruh-DeWitt atom coupled to both cavities, to first order.

The atom (gap ``Omega``) crosses Alice's inertial cavity with a Gaussian
coupling envelope centred on ``t_A`` and crosses Rob's accelerated cavity
around tau = 0, where the envelope is squeezed into the alignment window
(-t_a, t_a).  Projecting the atom onto its ground state leaves the field in

    sum_n  I_A(n) a_n^dag |0>  +  I_R(n) b_n^dag |0>,

with I_A in closed form and I_R a window integral evaluated by ``quad``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, QuadratureError
from .quad import QuadResult, integrate_window
from .relkin import CavityGeometry, make_geometry

log = logging.getLogger(__name__)

ESCALATION_THRESHOLD = 1e-8
DEFAULT_MODE_CAP = 4096
BLOCK_SIZE = 64
EVAL_BUDGET = 1_000_000
EVAL_BUDGET_CEILING = 16_000_000


@dataclass(frozen=True)
class ProtocolParams:
    """Physical inputs in natural units (c = 1, seconds).

    ``Omega`` defaults to pi/L (resonance with Alice's fundamental) and
    ``t_A`` to -3W so the two coupling windows barely overlap.
    """

    a: float
    L: float
    W: float
    Omega: float | None = None
    eps: float = 1e-3
    t_A: float | None = None
    n_max: int = 8
    tol: float = 1e-8
    n_cap: int = DEFAULT_MODE_CAP

    def __post_init__(self):
        if self.Omega is None:
            object.__setattr__(self, "Omega", math.pi / self.L if self.L > 0 else None)
        if self.t_A is None:
            object.__setattr__(self, "t_A", -3.0 * self.W)
        checks = [
            (self.L > 0, "L must be positive"),
            (self.W > 0, "W must be positive"),
            (self.Omega is not None and self.Omega > 0, "Omega must be positive"),
            (self.eps > 0, "eps must be positive"),
            (self.a >= 0 and math.isfinite(self.a), "a must be finite and >= 0"),
            (int(self.n_max) == self.n_max and self.n_max >= 1, "n_max must be an integer >= 1"),
            (self.n_cap >= self.n_max, "n_cap must be >= n_max"),
            (0 < self.tol < 1e-2, "tol must lie in (0, 1e-2)"),
        ]
        for ok, msg in checks:
            if not ok:
                raise DomainError(msg)

    def with_(self, **changes) -> ProtocolParams:
        return replace(self, **changes)

    @property
    def geometry(self) -> CavityGeometry:
        return make_geometry(self.a, self.L)


def detuning(n, params: ProtocolParams):
    """Delta = n pi / L - Omega."""
    return n * np.pi / params.L - params.Omega


def _sin_half_pi(n):
    """sin(n pi / 2) exactly: 0, 1, 0, -1 by n mod 4."""
    return np.array([0.0, 1.0, 0.0, -1.0])[np.asarray(n) % 4]


def switching_alice(tau, params: ProtocolParams):
    return params.eps * np.exp(-((tau - params.t_A) / params.W) ** 2)


def _artanh_ratio(abs_z, one_minus):
    """artanh(|z|) = log1p(2|z| / (1 - |z|)) / 2 with 1 - |z| supplied separately."""
    with np.errstate(divide="ignore"):
        return 0.5 * np.log1p(2.0 * abs_z / one_minus)


def switching_rob(tau, geom: CavityGeometry, params: ProtocolParams):
    """eps * exp(-(t_a artanh(tau/t_a))^2 / W^2), zero outside (-t_a, t_a).

    For the inertial geometry this is the plain Gaussian eps*exp(-tau^2/W^2).
    """
    tau = np.asarray(tau, dtype=float)
    if geom.inertial:
        return params.eps * np.exp(-(tau / params.W) ** 2)
    z = np.abs(tau) / geom.t_a
    inside = z < 1.0
    zc = np.where(inside, z, 0.0)
    stretched = geom.t_a * _artanh_ratio(zc, 1.0 - zc)
    out = params.eps * np.exp(-(stretched / params.W) ** 2)
    return np.where(inside, out, 0.0)


def amplitude_alice(n, params: ProtocolParams):
    """Closed-form emission amplitude into Alice's mode ``n`` (array-friendly)."""
    n = np.asarray(n)
    delta = detuning(n, params)
    W = params.W
    return (-1j * params.eps * W / np.sqrt(n) * _sin_half_pi(n)
            * np.exp(-(delta * W) ** 2 / 4.0 + 1j * delta * params.t_A))


def _inertial_rob(n, params: ProtocolParams):
    # Gaussian centred on tau = 0: Alice's closed form with t_A = 0
    return amplitude_alice(n, replace(params, t_A=0.0))


def rob_integrand(tau, n, geom: CavityGeometry, params: ProtocolParams):
    """Integrand of Rob's amplitude (without the -i eps / sqrt(n pi) prefactor).

    ``n`` may be an array of mode numbers; the result then has shape
    ``(len(n), len(tau))``.  All phases are built from dimensionless groups:

        n pi xi / Lp  = n pi * log1p((a t_a)^2 (1 - z)(1 + z)) / (2 ln(1 + aL))
        n pi eta / Lp = n pi * artanh(tau / X) / ln(1 + aL)

    with z = |tau| / t_a, so the integrand is exactly zero at tau = +-t_a.
    """
    if geom.inertial:
        raise DomainError("rob_integrand needs a > 0; the a = 0 case is closed form")
    tau = np.asarray(tau, dtype=float)
    z = np.abs(tau) / geom.t_a
    if np.any(z > 1.0):
        raise DomainError("tau lies outside the alignment window [-t_a, t_a]")
    one_m_z = 1.0 - z
    lp = geom.log1p_aL

    xi_phase = np.log1p(geom.a_ta_sq * one_m_z * (1.0 + z)) / (2.0 * lp)

    # |tau|/X = z * (t_a/X);  1 - |tau|/X = (1 - z) + z (1 - t_a/X)
    r_c = geom.one_minus_ta_over_X
    u = z * (1.0 - r_c)
    eta_phase = np.sign(tau) * _artanh_ratio(u, one_m_z + z * r_c) / lp

    with np.errstate(invalid="ignore"):
        stretched = (geom.t_a / params.W) * _artanh_ratio(z, one_m_z)
        envelope = np.exp(-stretched ** 2 - 1j * params.Omega * tau)
    envelope = np.where(z < 1.0, envelope, 0.0)

    n_arr = np.asarray(n)
    if n_arr.ndim and n_arr.size > 2 and np.all(np.diff(n_arr) == 1):
        return _consecutive_modes(int(n_arr[0]), n_arr.size, xi_phase, eta_phase) * envelope
    if n_arr.ndim:
        n_arr = n_arr[:, None]
    k = n_arr * np.pi
    return np.sin(k * xi_phase) * np.exp(1j * k * eta_phase) * envelope


def _consecutive_modes(n0, count, xi_phase, eta_phase):
    """sin(n pi xi/Lp) exp(i n pi eta/Lp) for n = n0 .. n0+count-1.

    Uses sin(x) e^{iy} = (e^{i(y+x)} - e^{i(y-x)}) / 2i and advances both
    phasors by repeated multiplication instead of one exp per mode.
    """
    step_p = np.exp(1j * np.pi * (eta_phase + xi_phase))
    step_m = np.exp(1j * np.pi * (eta_phase - xi_phase))
    cur_p = np.exp(1j * np.pi * n0 * (eta_phase + xi_phase))
    cur_m = np.exp(1j * np.pi * n0 * (eta_phase - xi_phase))
    out = np.empty((count,) + np.shape(xi_phase), complex)
    for j in range(count):
        out[j] = cur_p - cur_m
        cur_p = cur_p * step_p
        cur_m = cur_m * step_m
    return out * -0.5j


def rob_window_integral(n, geom: CavityGeometry, params: ProtocolParams,
                        *, floor: float | None = None,
                        max_evals: int = EVAL_BUDGET) -> QuadResult:
    """Adaptive window integral of ``rob_integrand`` for one mode or a block."""
    kwargs = {} if floor is None else {"floor": floor}
    return integrate_window(lambda tau: rob_integrand(tau, n, geom, params),
                            geom.t_a, params.W, params.tol,
                            max_evals=max_evals, **kwargs)


def _escalating_integral(n, geom, params, floor=None):
    """Retry with a 4x larger evaluation budget until converged or the ceiling."""
    budget = EVAL_BUDGET
    while True:
        res = rob_window_integral(n, geom, params, floor=floor, max_evals=budget)
        if res.converged or budget >= EVAL_BUDGET_CEILING:
            return res
        budget *= 4


def amplitude_rob(n, geom: CavityGeometry, params: ProtocolParams):
    """Emission amplitude into Rob's mode ``n`` (scalar or array of modes)."""
    n = np.asarray(n)
    if geom.inertial:
        return _inertial_rob(n, params)
    res = _escalating_integral(n, geom, params)
    if not res.converged:
        raise QuadratureError(
            f"window quadrature missed tol={params.tol:g}: "
            f"err~{res.err_estimate:.3e}, |Q|~{res.magnitude:.3e}",
            err_estimate=res.err_estimate, evaluations=res.evaluations)
    return -1j * params.eps / np.sqrt(n * np.pi) * res.value


@dataclass
class ModeAmplitudes:
    """Amplitudes I_A(n), I_R(n) for n = 1..n_max plus bookkeeping.

    ``truncation_error`` is the weight of the top tenth of retained modes as a
    fraction of the total weight; ``quad_err`` the worst relative error
    estimate of the Rob window integrals; ``converged`` is False if any block
    missed its tolerance.
    """

    I_A: np.ndarray
    I_R: np.ndarray
    params: ProtocolParams
    geometry: CavityGeometry
    truncation_error: float
    quad_err: float = 0.0
    converged: bool = True
    truncated: bool = False
    evaluations: int = 0
    block_results: list = field(default_factory=list, repr=False)

    @property
    def n_max(self) -> int:
        return self.I_A.size

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1)


def _tail_fraction(I_A, I_R):
    weight = np.abs(I_A) ** 2 + np.abs(I_R) ** 2
    total = weight.sum()
    if total == 0:
        return 0.0
    # at least two modes so an odd/even pair is always sampled
    top = min(weight.size, max(2, math.ceil(weight.size / 10)))
    return float(weight[-top:].sum() / total)


def compute_amplitudes(params: ProtocolParams) -> ModeAmplitudes:
    """Fill I_A and I_R, doubling the mode count until the top tenth of modes
    carries less than 1e-8 of the total weight (or ``params.n_cap`` is hit)."""
    geom = params.geometry
    I_A = np.zeros(0, complex)
    I_R = np.zeros(0, complex)
    state = {"quad_err": 0.0, "converged": True, "evals": 0, "scale": None}
    results = []

    def extend(n_lo, n_hi):
        n = np.arange(n_lo, n_hi + 1)
        ia = amplitude_alice(n, params)
        if geom.inertial:
            return ia, _inertial_rob(n, params)
        out = []
        for start in range(0, n.size, BLOCK_SIZE):
            block = n[start:start + BLOCK_SIZE]
            # later blocks are judged against the scale of the leading modes
            res = _escalating_integral(block, geom, params, floor=state["scale"])
            if state["scale"] is None:
                state["scale"] = max(res.magnitude, 1e-30)
            results.append(res)
            state["evals"] += res.evaluations
            state["converged"] &= res.converged
            state["quad_err"] = max(state["quad_err"],
                                    res.err_estimate / max(res.magnitude, state["scale"]))
            out.append(-1j * params.eps / np.sqrt(block * np.pi) * res.value)
        return ia, np.concatenate(out)

    n_max = int(params.n_max)
    I_A, I_R = extend(1, n_max)
    truncated = False
    while True:
        tail = _tail_fraction(I_A, I_R)
        if tail < ESCALATION_THRESHOLD:
            break
        if 2 * n_max > params.n_cap:
            truncated = True
            log.warning("mode cap %d reached with tail weight %.3e", params.n_cap, tail)
            break
        ia, ir = extend(n_max + 1, 2 * n_max)
        I_A = np.concatenate([I_A, ia])
        I_R = np.concatenate([I_R, ir])
        n_max *= 2

    return ModeAmplitudes(
        I_A=I_A,
        I_R=I_R,
        params=params,
        geometry=geom,
        truncation_error=tail,
        quad_err=state["quad_err"],
        converged=state["converged"],
        truncated=truncated,
        evaluations=state["evals"],
        block_results=results,
    )
