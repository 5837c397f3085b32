"""Photon entanglement between an inertial and a uniformly accelerated cavity."""

from .entangle import (
    SchmidtSplit,
    SingleExcitationState,
    bell_state,
    build_state,
    entropy,
    evolve_free,
    schmidt,
    success_probability,
)
from .errors import BracketError, DegenerateStateError, DomainError, HorizonError, QuadratureError
from .experiments import SweepResult, SweepRow, TuneResult, sweep_acceleration, sweep_length, tune_length
from .interaction import ModeAmplitudes, ProtocolParams, amplitude_alice, amplitude_rob, compute_amplitudes
from .quad import QuadResult, integrate_window, oracle_integrate
from .relkin import CavityGeometry, MinkowskiEvent, RindlerEvent, make_geometry, to_minkowski, to_rindler

__version__ = "0.1.0"
