"""Design and verification toolkit for two-qubit Rydberg entangling gates
built on quantum interference of detuned Rabi cycles."""

__version__ = "0.1.0"

from .model import InteractionParams, LaserParams, LeakageSpec  # noqa: F401
from .design_u1 import GateDesignU1, design_from_mhz, search_u1  # noqa: F401
from .design_u2 import GateDesignU2, design_u2_from_mhz, \
    pedersen_error, search_u2  # noqa: F401
from .synth import CZ, compose_cz_u1, compose_cz_u2, \
    gate_distance  # noqa: F401
from .noise import ENHANCED_PHASE_NOISE, NoiseScenario, \
    TrapConfig, noisy_gate_fidelity  # noqa: F401
