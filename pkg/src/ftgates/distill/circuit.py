"""Distillation circuits and a statevector executor for them."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from ..codes import QRM15
from ..pauli import (
    CliffordCircuit,
    ConditionalPauli,
    Gate,
    Measure,
    NoisyGateSite,
    PhaseGate,
    Postselect,
    Prepare,
    Relabel,
)
from ..statevec import StateVector
from .encoder import DATA_QUBIT, FLAG, OUT, PIVOTS, key_site_name, synthesize_encoder

MODES = ("faithful", "fast")


def ancilla_label(q) -> str:
    return f"a{q}"


def build_t_gadget(code_qubit, ancilla_kind: str = "TDG", site: str | None = None) -> list:
    """Teleport a T (``"T"``) or T-dagger (``"TDG"``) onto ``code_qubit``.

    The ancilla is prepared in ``T|+>`` or ``T^dagger|+>``, acts as CNOT
    control onto the code qubit, which is then measured in Z and dropped.
    On outcome -1 the ancilla receives ``S X`` (``S^dagger X`` for the
    dagger kind) and takes over the code qubit's label.

    ``site`` names the noisy gadget CNOT; the ancilla preparation carries the
    input-error site ``in<q>``.
    """
    kind = ancilla_kind.upper().replace("†", "DG")
    if kind not in ("T", "TDG"):
        raise ValueError(f"ancilla kind must be T or TDG, got {ancilla_kind!r}")
    a = ancilla_label(code_qubit)
    record = f"m{code_qubit}"
    fix = "S" if kind == "T" else "SDG"
    cnot = Gate("CNOT", (a, code_qubit))
    return [
        Prepare(a, kind, site=f"in{code_qubit}"),
        NoisyGateSite(cnot, site) if site else cnot,
        Measure(code_qubit, "Z", record),
        ConditionalPauli(a, ("X", fix), (record,)),
        Relabel(a, code_qubit),
    ]


@dataclass
class DistillationCircuit:
    """A complete 15-to-1 distillation round.

    ``encoder_stop`` is the index of the first element after the unitary
    encoder. ``target`` is the single-qubit output of the noiseless circuit.
    """

    circuit: CliffordCircuit
    key_sites: frozenset
    flag_enabled: bool
    mode: str
    encoder_stop: int
    target: np.ndarray = field(default=None, repr=False)
    stabilizer_records: tuple = ()
    logical_records: tuple = ()
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def sites(self) -> list[str]:
        return [e.site for _, e in self.circuit.sites()]


def build_distillation_circuit(flag: bool = False, mode: str = "faithful") -> DistillationCircuit:
    """Assemble encoder, transversal T-dagger layer, X readout and postselection.

    Each code qubit is processed to completion (gadget, then X measurement)
    before the next; the operations on different code qubits commute, so this
    order is equivalent to applying all gadgets first and keeps the register
    small. In ``fast`` mode the gadget is replaced by an ideal T-dagger gate
    whose input-error site stands in for a noisy ancilla.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    return _build(bool(flag), mode)


@functools.lru_cache(maxsize=None)
def _build(flag: bool, mode: str) -> DistillationCircuit:
    enc = synthesize_encoder(flag=flag)
    n = QRM15.n
    labels = list(enc.qubits)
    if mode == "faithful":
        labels += [ancilla_label(q) for q in range(1, n + 1)]
    c = CliffordCircuit(labels, list(enc.elements))
    encoder_stop = len(c)
    if flag:
        c.append(Measure(FLAG, "Z", "flag"))
        c.append(Postselect(("flag",), "flag"))
    for q in range(1, n + 1):
        if mode == "faithful":
            c.extend(build_t_gadget(q, "TDG", site=f"gadget{q}"))
        else:
            c.append(PhaseGate(q, "TDG", site=f"in{q}"))
        c.append(Measure(q, "X", f"x{q}"))
    stab_records = tuple(
        tuple(f"x{q + 1}" for q in np.nonzero(row)[0]) for row in QRM15.hx
    )
    for recs in stab_records:
        c.append(Postselect(recs, "x_stabilizer"))
    logical = tuple(f"x{q}" for q in range(1, n + 1))
    c.append(ConditionalPauli(OUT, ("Z",), logical))
    c.validate()

    if flag:
        key = frozenset({"epr", "flag_in"})
    else:
        key = frozenset({"epr"} | {key_site_name(p) for p in PIVOTS})
    dc = DistillationCircuit(c, key, flag, mode, encoder_stop, None, stab_records, logical)
    traj = execute(c, rng=np.random.default_rng(0))
    if traj.discard_reason is not None:
        raise RuntimeError("noiseless distillation circuit rejected its own output")
    dc.target = traj.state.single_qubit_vector()
    return dc


# ---------------------------------------------------------------------------
# Executor
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    state: StateVector
    records: dict
    discard_reason: str | None = None


def _parity(records: dict, names) -> int:
    p = 0
    for r in names:
        p ^= records[r]
    return p


def execute(
    circuit: CliffordCircuit,
    errors: dict | None = None,
    rng=None,
    start: int = 0,
    state: StateVector | None = None,
    records: dict | None = None,
    backend: str | None = None,
    stop: int | None = None,
) -> Trajectory:
    """Run ``circuit`` from element ``start`` on a statevector.

    Args:
        errors: maps an element index to ``(label, letter)`` Pauli errors
            applied right after that element.
        rng: measurement stream; one uniform variate per measurement.
        state: register to continue from (default: empty register).
        stop: index one past the last element to run (default: the end).

    Measurements are destructive; records hold 0 for +1 and 1 for -1. A
    failing :class:`Postselect` stops the run and sets ``discard_reason``.
    """
    errors = errors or {}
    records = {} if records is None else records
    sv = StateVector(backend=backend) if state is None else state
    if rng is None:
        rng = np.random.default_rng()
    elements = circuit.elements
    stop = len(elements) if stop is None else stop
    for i in range(start, stop):
        e = elements[i]
        if isinstance(e, (Gate, NoisyGateSite)):
            sv.apply_gate(e.name, *e.qubits)
        elif isinstance(e, Prepare):
            sv.add_qubit(e.qubit, e.state)
        elif isinstance(e, PhaseGate):
            sv.apply_gate(e.name, e.qubit)
        elif isinstance(e, Measure):
            records[e.record] = 1 if sv.measure_and_remove(e.qubit, e.basis, rng) == -1 else 0
        elif isinstance(e, ConditionalPauli):
            if _parity(records, e.records):
                for g in e.gates:
                    sv.apply_gate(g, e.qubit)
        elif isinstance(e, Postselect):
            if _parity(records, e.records):
                return Trajectory(sv, records, e.reason)
        elif isinstance(e, Relabel):
            sv.relabel(e.old, e.new)
        else:  # pragma: no cover - guarded by CliffordCircuit typing
            raise TypeError(f"unsupported element {e!r}")
        for label, letter in errors.get(i, ()):
            sv.apply_gate(letter, label)
    return Trajectory(sv, records, None)


__all__ = [
    "DATA_QUBIT",
    "FLAG",
    "OUT",
    "DistillationCircuit",
    "Trajectory",
    "build_distillation_circuit",
    "build_t_gadget",
    "execute",
]
