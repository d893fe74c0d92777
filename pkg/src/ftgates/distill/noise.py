"""Independent Pauli noise on two-qubit gates and input ancillae."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..pauli import NoisyGateSite, PhaseGate, Prepare

NOISE_STREAM = 0
MEASURE_STREAM = 1
KINDS = ("key", "other", "input")


def fidelity_to_p(fidelity: float) -> float:
    """Per-qubit error probability ``p`` of a gate with Choi fidelity ``(1 - p)^2``."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
    return 1.0 - math.sqrt(fidelity)


@dataclass(frozen=True)
class NoiseModel:
    """Error probabilities for one distillation round.

    A noisy CNOT suffers Z on its control and X on its target, each
    independently with probability ``p_key`` (key sites) or ``p_other``.
    Every input ancilla independently carries Z with probability ``eps_in``.
    """

    p_other: float = 0.0
    p_key: float = 0.0
    eps_in: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("p_other", "p_key", "eps_in"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0 or math.isnan(v):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def from_fidelities(
        cls,
        gate_fidelity: float | None = None,
        key_fidelity: float | None = None,
        other_fidelity: float | None = None,
        eps_in: float = 0.0,
        seed: int = 0,
    ) -> NoiseModel:
        """Build a model from Choi fidelities; specific values override ``gate_fidelity``."""
        base = 1.0 if gate_fidelity is None else gate_fidelity
        kf = base if key_fidelity is None else key_fidelity
        of = base if other_fidelity is None else other_fidelity
        return cls(fidelity_to_p(of), fidelity_to_p(kf), eps_in, seed)

    @property
    def key_fidelity(self) -> float:
        return (1.0 - self.p_key) ** 2

    @property
    def other_fidelity(self) -> float:
        return (1.0 - self.p_other) ** 2

    def probability(self, kind: str) -> float:
        if kind == "key":
            return self.p_key
        if kind == "other":
            return self.p_other
        if kind == "input":
            return self.eps_in
        raise ValueError(f"unknown event kind {kind!r}")

    def is_noiseless(self) -> bool:
        return self.p_other == 0.0 and self.p_key == 0.0 and self.eps_in == 0.0


@dataclass(frozen=True)
class NoiseEvent:
    """A single possible Pauli error, applied right after element ``index``."""

    index: int
    site: str
    label: object
    letter: str
    kind: str


def noise_events(dc) -> list[NoiseEvent]:
    """All error events of a distillation circuit, in circuit order."""
    cached = dc.cache.get("events")
    if cached is not None:
        return cached
    events = []
    for i, e in enumerate(dc.circuit.elements):
        if isinstance(e, NoisyGateSite):
            kind = "key" if e.site in dc.key_sites else "other"
            if e.name == "CNOT":
                c, t = e.qubits
                events.append(NoiseEvent(i, e.site, c, "Z", kind))
                events.append(NoiseEvent(i, e.site, t, "X", kind))
            else:
                for q in e.qubits:
                    events.append(NoiseEvent(i, e.site, q, "Z", kind))
        elif isinstance(e, (Prepare, PhaseGate)) and e.site is not None:
            events.append(NoiseEvent(i, e.site, e.qubit, "Z", "input"))
    dc.cache["events"] = events
    return events


def event_probabilities(dc, model: NoiseModel) -> np.ndarray:
    return np.array([model.probability(ev.kind) for ev in noise_events(dc)], dtype=float)


def shot_stream(seed: int, shot_index: int, stream: int) -> np.random.Generator:
    """Counter-based generator for one (seed, shot, stream) triple.

    The Philox key is the seed; the shot index and stream id occupy the two
    high counter words, so streams never overlap and any shot can be
    regenerated without replaying the ones before it.
    """
    bg = np.random.Philox(key=int(seed), counter=[0, 0, int(shot_index), int(stream)])
    return np.random.Generator(bg)


def sample_noise(dc, model: NoiseModel, shot_index: int) -> tuple[int, ...]:
    """Indices into :func:`noise_events` of the errors that fire in this shot.

    One uniform variate is drawn per event, so the draw for a given event
    depends only on (seed, shot_index, event position).
    """
    probs = event_probabilities(dc, model)
    u = shot_stream(model.seed, shot_index, NOISE_STREAM).random(len(probs))
    return tuple(int(i) for i in np.nonzero(u < probs)[0])


def errors_by_index(dc, fired) -> dict:
    """Group fired events as ``{element index: [(label, letter), ...]}``."""
    events = noise_events(dc)
    out: dict = {}
    for j in fired:
        ev = events[j]
        out.setdefault(ev.index, []).append((ev.label, ev.letter))
    return out
