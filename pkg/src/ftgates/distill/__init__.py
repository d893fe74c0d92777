"""15-to-1 magic state distillation: circuits, noise, Monte Carlo and oracle."""

from .circuit import DistillationCircuit, build_distillation_circuit, build_t_gadget, execute
from .encoder import DATA_QUBIT, FLAG, OUT, PIVOTS, encoder_structure, synthesize_encoder
from .montecarlo import MCSummary, ShotResult, monte_carlo, run_shot
from .noise import NoiseEvent, NoiseModel, fidelity_to_p, noise_events, sample_noise
from .oracle import OracleResult, first_order_oracle

__all__ = [
    "DATA_QUBIT",
    "FLAG",
    "OUT",
    "PIVOTS",
    "DistillationCircuit",
    "MCSummary",
    "NoiseEvent",
    "NoiseModel",
    "OracleResult",
    "ShotResult",
    "build_distillation_circuit",
    "build_t_gadget",
    "encoder_structure",
    "execute",
    "fidelity_to_p",
    "first_order_oracle",
    "monte_carlo",
    "noise_events",
    "run_shot",
    "sample_noise",
    "synthesize_encoder",
]
