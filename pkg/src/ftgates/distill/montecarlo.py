"""Monte Carlo shots of the distillation round on the statevector engine."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..pauli import conjugate_through
from .circuit import DistillationCircuit, build_distillation_circuit, execute
from .encoder import FLAG
from .noise import (
    MEASURE_STREAM,
    NoiseModel,
    errors_by_index,
    noise_events,
    sample_noise,
    shot_stream,
)

DISCARD_REASONS = ("x_stabilizer", "flag", "none")
CHUNK = 1000


@dataclass(frozen=True)
class ShotResult:
    accepted: bool
    output_infidelity: float | None
    discard_reason: str = "none"
    fired: tuple = ()
    peak_qubits: int = 0

    def __post_init__(self):
        if self.accepted and self.discard_reason != "none":
            raise ValueError("an accepted shot cannot carry a discard reason")
        if self.discard_reason not in DISCARD_REASONS:
            raise ValueError(f"unknown discard reason {self.discard_reason!r}")


@dataclass(frozen=True)
class MCSummary:
    shots: int
    accepted: int
    success_rate: float
    success_rate_stderr: float
    output_error: float
    output_error_stderr: float
    discards: dict = field(default_factory=dict)

    @classmethod
    def from_results(cls, accepted_flags, infidelities, reasons) -> MCSummary:
        shots = len(accepted_flags)
        if shots == 0:
            raise ValueError("need at least one shot")
        acc = int(sum(accepted_flags))
        rate = acc / shots
        rate_se = math.sqrt(rate * (1.0 - rate) / shots)
        vals = [v for a, v in zip(accepted_flags, infidelities) if a]
        if acc:
            mean = math.fsum(vals) / acc
            if acc > 1:
                var = max(math.fsum((v - mean) ** 2 for v in vals) / (acc - 1), 0.0)
                err_se = math.sqrt(var / acc)
            else:
                err_se = 0.0
            mean = min(max(mean, 0.0), 1.0)
        else:
            mean, err_se = float("nan"), float("nan")
        discards = {r: 0 for r in DISCARD_REASONS if r != "none"}
        for r in reasons:
            if r != "none":
                discards[r] += 1
        return cls(shots, acc, rate, rate_se, mean, err_se, discards)


# ---------------------------------------------------------------------------
# Fast path: reuse the noiseless encoder state
# ---------------------------------------------------------------------------


@dataclass
class _Prefix:
    state: object
    resume: int
    # per event: (x mask, z mask, flips flag) for encoder events, None otherwise
    masks: list


def _prefix(dc: DistillationCircuit, backend: str | None) -> _Prefix:
    key = ("prefix", backend)
    if key in dc.cache:
        return dc.cache[key]
    c = dc.circuit
    stop = dc.encoder_stop
    state = execute(c, stop=stop, backend=backend).state
    if dc.flag_enabled:
        state.remove_measured(FLAG)
        resume = stop + 2
    else:
        resume = stop
    masks = []
    for ev in noise_events(dc):
        if ev.index >= stop:
            masks.append(None)
            continue
        p = conjugate_through(c, c.pauli({ev.label: ev.letter}), ev.index + 1, stop)
        xm = zm = 0
        flip = False
        for pos in range(1, c.n + 1):
            x, z = p.x_bits[pos - 1], p.z_bits[pos - 1]
            if not (x or z):
                continue
            label = c.qubits[pos - 1]
            if label == FLAG:
                flip = bool(x)
                continue
            b = 1 << state.bit(label)
            if x:
                xm |= b
            if z:
                zm |= b
        masks.append((xm, zm, flip))
    pre = _Prefix(state, resume, masks)
    dc.cache[key] = pre
    return pre


def _finish(dc, traj, fired) -> ShotResult:
    if traj.discard_reason is not None:
        return ShotResult(False, None, traj.discard_reason, fired, traj.state.peak)
    f = abs(np.vdot(dc.target, traj.state.single_qubit_vector())) ** 2
    return ShotResult(True, min(max(1.0 - float(f), 0.0), 1.0), "none", fired, traj.state.peak)


def run_shot(
    dc: DistillationCircuit,
    model: NoiseModel,
    shot_index: int,
    method: str = "fast",
    backend: str | None = None,
) -> ShotResult:
    """Simulate one noisy round.

    ``method="direct"`` executes every element from an empty register.
    ``method="fast"`` starts from the cached noiseless encoder output and
    applies the encoder errors as a single propagated Pauli; both draw the
    same random numbers in the same order and agree shot by shot. A shot in
    which nothing fires is accepted with zero infidelity without simulation.
    """
    fired = sample_noise(dc, model, shot_index)
    meas = shot_stream(model.seed, shot_index, MEASURE_STREAM)
    if method == "direct":
        traj = execute(dc.circuit, errors_by_index(dc, fired), meas, backend=backend)
        return _finish(dc, traj, fired)
    if method != "fast":
        raise ValueError(f"method must be 'fast' or 'direct', got {method!r}")
    pre = _prefix(dc, backend)
    if not fired:
        return ShotResult(True, 0.0, "none", fired, pre.state.peak)
    xm = zm = 0
    flip = False
    late = []
    for j in fired:
        m = pre.masks[j]
        if m is None:
            late.append(j)
            continue
        xm ^= m[0]
        zm ^= m[1]
        flip ^= m[2]
    if dc.flag_enabled:
        meas.random()  # the flag readout is deterministic but still draws
        if flip:
            return ShotResult(False, None, "flag", fired, pre.state.peak)
    state = pre.state.copy()
    state.apply_pauli_masks(xm, zm)
    traj = execute(
        dc.circuit, errors_by_index(dc, late), meas, start=pre.resume, state=state, backend=backend
    )
    return _finish(dc, traj, fired)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


def _run_chunk(args):
    flag, mode, model, start, stop, method, backend = args
    dc = build_distillation_circuit(flag, mode)
    acc, inf, why = [], [], []
    for s in range(start, stop):
        r = run_shot(dc, model, s, method=method, backend=backend)
        acc.append(r.accepted)
        inf.append(r.output_infidelity if r.accepted else 0.0)
        why.append(r.discard_reason)
    return acc, inf, why


def monte_carlo(
    model: NoiseModel,
    shots: int,
    flag: bool = False,
    mode: str = "faithful",
    workers: int = 1,
    method: str = "fast",
    backend: str | None = None,
) -> MCSummary:
    """Aggregate ``shots`` independent rounds with shot indices ``0..shots-1``.

    Shots are split into fixed-size chunks whose results are concatenated in
    index order before summation, so the summary is bit-identical for any
    ``workers`` value. ``workers=0`` uses every available CPU.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if workers == 0:
        workers = os.cpu_count() or 1
    tasks = [
        (bool(flag), mode, model, s, min(s + CHUNK, shots), method, backend)
        for s in range(0, shots, CHUNK)
    ]
    if workers <= 1 or len(tasks) == 1:
        parts = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, tasks))
    acc, inf, why = [], [], []
    for a, i, w in parts:
        acc.extend(a)
        inf.extend(i)
        why.extend(w)
    return MCSummary.from_results(acc, inf, why)
