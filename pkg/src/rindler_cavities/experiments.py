"""
Entanglement sweeps over Rob's acceleration and the cavity length, and the
length tuner that restores maximal entanglement at fixed acceleration.

The atom gap ``Omega`` is a property of the atom, so it stays at the baseline
value while the cavity length is varied.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import units
from .entangle import build_state, entropy, schmidt, success_probability
from .errors import BracketError, DomainError
from .interaction import ModeAmplitudes, ProtocolParams, compute_amplitudes

log = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
UNIMODAL_SLACK = 1e-9


@dataclass
class SweepRow:
    value: float
    entropy_bits: float
    p_alice: float
    p_rob: float
    p_success: float
    n_modes: int
    quad_err: float
    flag: str = ""
    a: float = 0.0
    L: float = 0.0

    @property
    def aL(self) -> float:
        return self.a * self.L

    @property
    def a_si(self) -> float:
        return units.accel_to_si(self.a)

    @property
    def L_si(self) -> float:
        return units.length_to_si(self.L)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(aL=self.aL, a_si=self.a_si, L_si=self.L_si)
        return d


@dataclass
class SweepResult:
    rows: list[SweepRow]
    metadata: dict = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        return any("nonconverged" in r.flag for r in self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


@dataclass
class TuneResult:
    L_star: float
    entropy_at_L_star: float
    iterations: int
    bracket: tuple[float, float]
    p_alice: float = 0.5
    method: str = ""
    diagnostic: str = ""
    scan: list = field(default_factory=list)


def evaluate(params: ProtocolParams) -> tuple[SweepRow, ModeAmplitudes]:
    """Run the full pipeline (amplitudes, state, Schmidt split, entropy) once."""
    amps = compute_amplitudes(params)
    state = build_state(amps)
    split = schmidt(state)
    flags = []
    if not amps.converged:
        flags.append("nonconverged")
    if amps.truncated:
        flags.append("truncated")
    row = SweepRow(
        value=float("nan"),
        entropy_bits=entropy(split),
        p_alice=split.p_A,
        p_rob=split.p_R,
        p_success=success_probability(state),
        n_modes=amps.n_max,
        quad_err=amps.quad_err,
        flag="|".join(flags),
        a=params.a,
        L=params.L,
    )
    return row, amps


def _row(params: ProtocolParams) -> SweepRow:
    return evaluate(params)[0]


def _run_rows(param_list, workers):
    if workers and workers > 1 and len(param_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row, param_list))
    return [_row(p) for p in param_list]


def _check_grid(grid, name):
    grid = [float(g) for g in grid]
    if not grid:
        raise DomainError(f"{name} grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"{name} grid must be strictly increasing")
    return grid


def _params_meta(p: ProtocolParams) -> dict:
    return {k: v for k, v in asdict(p).items()}


def sweep_acceleration(baseline: ProtocolParams, a_grid, *, workers: int = 1) -> SweepResult:
    """Entanglement versus Rob's proper acceleration (natural units, 1/s)."""
    a_grid = _check_grid(a_grid, "acceleration")
    if a_grid[0] < 0:
        raise DomainError("accelerations must be >= 0")
    rows = _run_rows([baseline.with_(a=a) for a in a_grid], workers)
    for r, a in zip(rows, a_grid):
        r.value = a
    meta = {"axis": "a", "axis_units": "1/s", "baseline": _params_meta(baseline)}
    result = SweepResult(rows, meta)
    meta["partial"] = result.partial
    return result


def sweep_length(baseline: ProtocolParams, a_fixed: float, L_grid, *,
                 workers: int = 1) -> SweepResult:
    """Entanglement versus the common cavity length at fixed acceleration.

    ``Omega`` and ``t_A`` keep their baseline values for every L.
    """
    L_grid = _check_grid(L_grid, "length")
    rows = _run_rows([baseline.with_(a=a_fixed, L=L) for L in L_grid], workers)
    for r, L in zip(rows, L_grid):
        r.value = L
    meta = {
        "axis": "L",
        "axis_units": "light-seconds",
        "a_fixed": a_fixed,
        "omega_policy": "fixed at baseline Omega",
        "baseline": _params_meta(baseline),
    }
    result = SweepResult(rows, meta)
    meta["partial"] = result.partial
    return result


def _is_unimodal(values, slack=UNIMODAL_SLACK) -> bool:
    k = int(np.argmax(values))
    rising = np.diff(values[:k + 1])
    falling = np.diff(values[k:])
    return bool(np.all(rising >= -slack) and np.all(falling <= slack))


def tune_length(baseline: ProtocolParams, a_fixed: float, L_bracket=None, *,
                scan_points: int = 16, rel_width: float = 1e-4,
                root_rtol: float = 1e-13, workers: int = 1) -> TuneResult:
    """Find the cavity length that maximises entanglement at acceleration ``a_fixed``.

    A coarse scan of the bracket must show a single entropy peak.  If
    p_A - 1/2 changes sign between scan points the root is bisected (the
    entropy is exactly one bit there); otherwise the peak is refined by
    golden-section search to a relative bracket width ``rel_width``.
    """
    if a_fixed == 0:
        row = _row(baseline.with_(a=0.0))
        return TuneResult(baseline.L, row.entropy_bits, 0, (baseline.L, baseline.L),
                          p_alice=row.p_alice, method="inertial",
                          diagnostic="a = 0: both cavities are equivalent, entropy is already maximal")

    lo, hi = L_bracket if L_bracket is not None else (baseline.L, 2.0 * baseline.L)
    if not 0 < lo < hi:
        raise DomainError("L bracket must satisfy 0 < L_lo < L_hi")

    def at(L):
        return _row(baseline.with_(a=a_fixed, L=L))

    grid = np.linspace(lo, hi, scan_points)
    scan_rows = _run_rows([baseline.with_(a=a_fixed, L=L) for L in grid], workers)
    E = np.array([r.entropy_bits for r in scan_rows])
    g = np.array([r.p_alice - 0.5 for r in scan_rows])
    scan = [(float(L), r.entropy_bits, r.p_alice) for L, r in zip(grid, scan_rows)]
    if not _is_unimodal(E):
        raise BracketError("entropy is not unimodal on the L bracket; narrow it", scan=scan)

    sign_change = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) <= 0)[0]
    if sign_change.size:
        i = int(sign_change[0])
        return _bisect_balance(at, grid[i], grid[i + 1], scan_rows[i], scan_rows[i + 1],
                               root_rtol, scan)

    k = int(np.argmax(E))
    if k in (0, scan_points - 1):
        r = scan_rows[k]
        return TuneResult(float(grid[k]), r.entropy_bits, 0, (float(grid[k]), float(grid[k])),
                          p_alice=r.p_alice, method="endpoint",
                          diagnostic="entropy peaks at the bracket edge and p_A - 1/2 keeps "
                                     "its sign; widen the bracket", scan=scan)
    return _golden(at, grid[k - 1], grid[k + 1], rel_width, scan)


def _bisect_balance(at, lo, hi, row_lo, row_hi, rtol, scan) -> TuneResult:
    g_lo = row_lo.p_alice - 0.5
    best = max((row_lo, lo), (row_hi, hi), key=lambda t: t[0].entropy_bits)
    iterations = 0
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        r = at(mid)
        iterations += 1
        if r.entropy_bits >= best[0].entropy_bits:
            best = (r, mid)
        g_mid = r.p_alice - 0.5
        if g_mid == 0:
            lo = hi = mid
            break
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    r, L_star = best
    return TuneResult(float(L_star), r.entropy_bits, iterations, (float(lo), float(hi)),
                      p_alice=r.p_alice, method="bisection",
                      diagnostic="p_A - 1/2 changes sign; root located", scan=scan)


def _golden(at, lo, hi, rel_width, scan) -> TuneResult:
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    rc, rd = at(c), at(d)
    iterations = 2
    while hi - lo > rel_width * 0.5 * (hi + lo):
        if rc.entropy_bits >= rd.entropy_bits:
            hi, d, rd = d, c, rc
            c = hi - GOLDEN * (hi - lo)
            rc = at(c)
        else:
            lo, c, rc = c, d, rd
            d = lo + GOLDEN * (hi - lo)
            rd = at(d)
        iterations += 1
    r, L_star = max((rc, c), (rd, d), key=lambda t: t[0].entropy_bits)
    return TuneResult(float(L_star), r.entropy_bits, iterations, (float(lo), float(hi)),
                      p_alice=r.p_alice, method="golden",
                      diagnostic="interior entropy maximum refined", scan=scan)
