"""Analytic first-order error enumeration for the distillation round.

Every single error event is pushed symbolically through the encoder and
mapped onto an operator acting just before the transversal X readout. The
effect of that operator on acceptance and output fidelity is then evaluated
exactly by summing over the code words and the accepted readout patterns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import gf2
from ..codes import QRM15
from ..pauli import conjugate_through
from .circuit import DistillationCircuit, ancilla_label
from .encoder import FLAG, OUT
from .noise import noise_events

CATEGORIES = {
    # name: (acceptance, fidelity)
    "detected": (0.0, None),
    "benign": (1.0, 1.0),
    "output_Z": (1.0, 0.0),
    "output_S": (1.0, 0.5),
    "half_detected": (0.5, 1.0),
}
TOL = 1e-9
W8 = np.exp(1j * np.pi / 4)


@dataclass(frozen=True)
class Residue:
    """Operator before readout: ``Z_out^e`` and, on the code, ``T^dag`` layer
    preceded by ``X^x Z^z`` and followed by ``S^s`` (powers mod 4)."""

    out_z: int
    x: tuple
    z: tuple
    s: tuple


@dataclass(frozen=True)
class EventClass:
    site: str
    label: object
    letter: str
    kind: str
    category: str
    acceptance: float
    fidelity: float | None

    @property
    def infidelity_weight(self) -> float:
        if self.fidelity is None:
            return 0.0
        return self.acceptance * (1.0 - self.fidelity)

    @property
    def rate_weight(self) -> float:
        return 1.0 - self.acceptance


@dataclass(frozen=True)
class OracleResult:
    slope_key: float
    slope_other: float
    slope_input: float
    rate_slope_key: float
    rate_slope_other: float
    rate_slope_input: float
    events: tuple

    def by_category(self) -> dict:
        out: dict = {}
        for e in self.events:
            out.setdefault(e.category, []).append(e)
        return out


class _Evaluator:
    """Exact acceptance and fidelity of a :class:`Residue`."""

    def __init__(self, target: np.ndarray):
        hx = QRM15.hx
        n = QRM15.n
        self.n = n
        self.words = gf2.span(hx).astype(np.int64)  # 16 x 15
        accepted = gf2.nullspace(hx)  # readout patterns passing every X check
        self.outcomes = gf2.span(accepted).astype(np.int64)  # 2048 x 15
        self.target = np.asarray(target, dtype=complex)
        self.norm = 1.0 / np.sqrt(2.0) / np.sqrt(len(self.words)) / np.sqrt(2.0**n)

    def __call__(self, r: Residue) -> tuple[float, float]:
        x = np.array(r.x, np.int64)
        z = np.array(r.z, np.int64)
        s = np.array(r.s, np.int64)
        ones = np.ones(self.n, np.int64)
        amps = np.zeros((len(self.outcomes), 2), dtype=complex)
        for c in (0, 1):
            pre = (self.words + c * ones) % 2  # encoded support before the error
            sign = (-1.0) ** ((pre @ z) % 2) * (-1.0) ** (c * r.out_z)
            v = (pre + x) % 2  # after X, before T^dag
            phase = W8 ** (-v.sum(axis=1)) * (1j) ** ((v * s).sum(axis=1) % 4)
            coeff = sign * phase  # one entry per code word
            readout = (-1.0) ** ((self.outcomes @ v.T) % 2)  # outcomes x words
            amps[:, c] = self.norm * (readout @ coeff)
        odd = self.outcomes.sum(axis=1) % 2 == 1
        amps[odd, 1] *= -1.0  # conditional Z on the output
        probs = (np.abs(amps) ** 2).sum(axis=1)
        p_acc = float(probs.sum())
        if p_acc < TOL:
            return 0.0, float("nan")
        overlap = np.abs(amps @ self.target.conj()) ** 2
        return p_acc, float(overlap.sum() / p_acc)


def _snap(p_acc: float, fid: float, what: str) -> tuple[str, float, float | None]:
    for name, (a, f) in CATEGORIES.items():
        if abs(p_acc - a) > TOL:
            continue
        if f is None:
            return name, a, None
        if abs(fid - f) <= TOL:
            return name, a, f
    raise ValueError(f"unclassifiable residue for {what}: acceptance {p_acc:.6g}, fidelity {fid:.6g}")


def residue_of(dc: DistillationCircuit, event) -> Residue | None:
    """Map one error event to its readout residue; ``None`` if the flag catches it."""
    c = dc.circuit
    n = QRM15.n
    x = [0] * n
    z = [0] * n
    s = [0] * n
    if event.index < dc.encoder_stop:
        p = conjugate_through(c, c.pauli({event.label: event.letter}), event.index + 1, dc.encoder_stop)
        out_z = 0
        for pos in range(1, c.n + 1):
            xb, zb = int(p.x_bits[pos - 1]), int(p.z_bits[pos - 1])
            label = c.qubits[pos - 1]
            if label == FLAG:
                if xb:
                    return None
            elif label == OUT:
                if xb:
                    raise ValueError(f"X reached the output qubit from {event}")
                out_z = zb
            elif isinstance(label, int):
                x[label - 1] = xb
                z[label - 1] = zb
            elif xb or zb:
                raise ValueError(f"error from {event} reached idle qubit {label!r}")
        return Residue(out_z, tuple(x), tuple(z), tuple(s))
    # transversal layer: sites are gadget<q> and in<q>
    q = int("".join(ch for ch in event.site if ch.isdigit()))
    if event.label not in (q, ancilla_label(q)):
        raise ValueError(f"event {event} is not on code qubit {q}")
    if event.letter == "Z":
        # Z on the ancilla (or on the qubit after an ideal T^dag) commutes to the readout
        z[q - 1] = 1
    elif event.letter == "X" and event.label == q:
        # flips the gadget outcome: the wrong correction leaves S (up to a trailing X)
        s[q - 1] = 1
    else:
        raise ValueError(f"unexpected transversal-layer event {event}")
    return Residue(0, tuple(x), tuple(z), tuple(s))


def first_order_oracle(dc: DistillationCircuit) -> OracleResult:
    """Classify every single error event and sum the first-order coefficients.

    Slopes are derivatives at zero noise: ``slope_*`` of the output error and
    ``rate_slope_*`` of the rejection rate, per unit error probability of the
    corresponding event kind (key gates, other gates, input ancillae).
    """
    ev = _Evaluator(dc.target)
    classes = []
    for event in noise_events(dc):
        r = residue_of(dc, event)
        what = f"{event.letter} on {event.label!r} at {event.site}"
        if r is None:
            cat, a, f = "detected", 0.0, None
        else:
            cat, a, f = _snap(*ev(r), what)
        classes.append(EventClass(event.site, event.label, event.letter, event.kind, cat, a, f))
    sums = {k: [0.0, 0.0] for k in ("key", "other", "input")}
    for e in classes:
        sums[e.kind][0] += e.infidelity_weight
        sums[e.kind][1] += e.rate_weight
    return OracleResult(
        sums["key"][0],
        sums["other"][0],
        sums["input"][0],
        sums["key"][1],
        sums["other"][1],
        sums["input"][1],
        tuple(classes),
    )
