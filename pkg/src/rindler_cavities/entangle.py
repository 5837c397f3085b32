"""
Single-excitation two-cavity states and their entanglement.

After the atom is found in its ground state the field holds one quantum,
shared between Alice's modes and Rob's modes:

    |Phi> = sum_n c_A(n) |1_n>_A |0>_R + c_R(n) |0>_A |1_n>_R

Each branch's excited part is orthogonal to the vacuum, so either reduced
density matrix has exactly two non-zero eigenvalues, p_A = sum |c_A|^2 and
p_R = sum |c_R|^2.  The entropy follows without diagonalising anything.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError

PERTURBATIVE_LIMIT = 0.1


class PerturbativeWarning(UserWarning):
    """First-order success probability is too large to trust."""


@dataclass(frozen=True)
class SingleExcitationState:
    c_A: np.ndarray
    c_R: np.ndarray
    norm_raw: float

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.c_A) ** 2) + np.sum(np.abs(self.c_R) ** 2))


@dataclass(frozen=True)
class SchmidtSplit:
    p_A: float
    p_R: float


def state_from_arrays(I_A, I_R) -> SingleExcitationState:
    I_A = np.atleast_1d(np.asarray(I_A, dtype=complex))
    I_R = np.atleast_1d(np.asarray(I_R, dtype=complex))
    # rescale before squaring so tiny eps*W amplitudes cannot underflow
    scale = max(np.max(np.abs(I_A), initial=0.0), np.max(np.abs(I_R), initial=0.0))
    if scale == 0 or not np.isfinite(scale):
        raise DegenerateStateError("all emission amplitudes vanish; no state to normalise")
    # exact power-of-two rescale; complex division by a subnormal overflows
    shift = -math.frexp(scale)[1]
    a = np.ldexp(I_A.real, shift) + 1j * np.ldexp(I_A.imag, shift)
    r = np.ldexp(I_R.real, shift) + 1j * np.ldexp(I_R.imag, shift)
    rel = float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(r) ** 2))
    root = np.sqrt(rel)
    return SingleExcitationState(c_A=a / root, c_R=r / root, norm_raw=math.ldexp(rel, -2 * shift))


def build_state(amps) -> SingleExcitationState:
    """Normalised state from a ``ModeAmplitudes`` (anything with I_A, I_R)."""
    return state_from_arrays(amps.I_A, amps.I_R)


def bell_state(n_alice: int, n_rob: int, modes: int | None = None) -> SingleExcitationState:
    """(|1_m>_A|0>_R + |0>_A|1_n>_R)/sqrt(2) over ``modes`` modes per cavity."""
    size = modes or max(n_alice, n_rob)
    c_A = np.zeros(size, complex)
    c_R = np.zeros(size, complex)
    c_A[n_alice - 1] = c_R[n_rob - 1] = 1 / np.sqrt(2)
    return SingleExcitationState(c_A, c_R, norm_raw=1.0)


def schmidt(state: SingleExcitationState) -> SchmidtSplit:
    p_A = float(np.sum(np.abs(state.c_A) ** 2))
    p_R = float(np.sum(np.abs(state.c_R) ** 2))
    total = p_A + p_R
    return SchmidtSplit(p_A / total, p_R / total)


def entropy(split: SchmidtSplit) -> float:
    """Von Neumann entropy in bits, with 0 log 0 = 0."""
    probs = np.array([split.p_A, split.p_R])
    probs = probs[probs > 0]
    return float(max(0.0, -np.sum(probs * np.log2(probs))))


def success_probability(state: SingleExcitationState) -> float:
    """Probability (first order) that the atom is found de-excited."""
    p = state.norm_raw
    if p > PERTURBATIVE_LIMIT:
        warnings.warn(
            f"success probability {p:.3g} exceeds {PERTURBATIVE_LIMIT}; "
            "first-order perturbation theory is unreliable here",
            PerturbativeWarning, stacklevel=2)
    return p


def evolve_free(state: SingleExcitationState, dt_alice: float, deta_rob: float,
                L: float, Lp: float) -> SingleExcitationState:
    """Evolve each cavity with its own Hamiltonian: Alice for Minkowski time
    ``dt_alice``, Rob for Rindler time ``deta_rob``."""
    n_A = np.arange(1, state.c_A.size + 1)
    n_R = np.arange(1, state.c_R.size + 1)
    c_A = state.c_A * np.exp(-1j * n_A * np.pi / L * dt_alice)
    c_R = state.c_R * np.exp(-1j * n_R * np.pi / Lp * deta_rob)
    return SingleExcitationState(c_A, c_R, state.norm_raw)
