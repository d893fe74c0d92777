"""Motion planning and timing for a 7x15 concatenated Steane/QRM atom array.

Each row of the array holds one 15-qubit block; the seven rows together form
the 7-qubit outer code. Rows and columns are moved by mobile tweezers after a
transfer from the static array, entangled by a global CZ pulse, and returned.

Positions are grid coordinates in units of the atom pitch, 1-based, so a move
from position 6 to 1 spans five pitches. Durations are microseconds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .codes import QRM15, STEANE7, StabilizerCode
from .statevec import StateVector, logical_state

ROW = "ROW"
COL = "COL"


@dataclass(frozen=True)
class ConcatLayout:
    rows: int = 7
    cols: int = 15
    atom_pitch: float = 10.0  # um
    handoff_offset: float = 2.0  # um, perpendicular to the direction of travel

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("layout needs at least one row and one column")
        if not self.atom_pitch > 0 or not self.handoff_offset > 0:
            raise ValueError("pitch and handoff offset must be positive")
        if self.handoff_offset >= self.atom_pitch:
            raise ValueError("handoff offset must be smaller than the atom pitch")

    def extent(self, axis: str) -> int:
        return self.rows if axis == ROW else self.cols


@dataclass(frozen=True)
class CostModel:
    """Timing parameters.

    ``count_pulses`` adds ``cz_pulse`` per CZ pulse. It is off by default
    because the pulse is three orders of magnitude shorter than any move.
    """

    move_speed: float = 0.5  # m/s, numerically equal to um/us
    cz_pulse: float = 0.2  # us
    transfer_time: float = 150.0  # us
    acceleration_overhead: float = 0.0  # us per move
    count_pulses: bool = False

    TRANSFER_RANGE = (100.0, 200.0)

    def __post_init__(self):
        if not self.move_speed > 0 or not self.cz_pulse > 0:
            raise ValueError("move speed and pulse duration must be positive")
        lo, hi = self.TRANSFER_RANGE
        if not lo <= self.transfer_time <= hi:
            raise ValueError(f"transfer time {self.transfer_time} us outside [{lo}, {hi}] us")
        if self.acceleration_overhead < 0:
            raise ValueError("acceleration overhead cannot be negative")


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Group:
    axis: str
    index: int

    def __post_init__(self):
        if self.axis not in (ROW, COL):
            raise ValueError(f"axis must be ROW or COL, got {self.axis!r}")

    def __str__(self) -> str:
        return f"{self.axis} {self.index}"


@dataclass(frozen=True)
class Transfer:
    group: Group
    direction: str  # OUT: static -> mobile, IN: mobile -> static

    def __post_init__(self):
        if self.direction not in ("OUT", "IN"):
            raise ValueError(f"direction must be OUT or IN, got {self.direction!r}")


@dataclass(frozen=True)
class Move:
    group: Group
    from_position: float
    to_position: float


@dataclass(frozen=True)
class ParallelPulse:
    """``CZ`` for the global entangling pulse, ``LOCAL <gate>`` for a 1-qubit layer."""

    kind: str = "CZ"


class PlanError(ValueError):
    pass


@dataclass
class MotionPlan:
    steps: list = field(default_factory=list)
    layout: ConcatLayout = field(default_factory=ConcatLayout)

    def __add__(self, other: MotionPlan) -> MotionPlan:
        if other.layout != self.layout:
            raise ValueError("cannot join plans on different layouts")
        return MotionPlan(self.steps + other.steps, self.layout)

    def reversed(self) -> MotionPlan:
        """Undo the plan: steps in reverse order, moves and transfers inverted."""
        out = []
        for s in reversed(self.steps):
            if isinstance(s, Move):
                out.append(Move(s.group, s.to_position, s.from_position))
            elif isinstance(s, Transfer):
                out.append(Transfer(s.group, "IN" if s.direction == "OUT" else "OUT"))
            else:
                out.append(s)
        return MotionPlan(out, self.layout)

    def moves(self) -> list[Move]:
        return [s for s in self.steps if isinstance(s, Move)]

    def transfers(self) -> list[Transfer]:
        return [s for s in self.steps if isinstance(s, Transfer)]

    def pulses(self, kind: str | None = "CZ") -> list[ParallelPulse]:
        return [s for s in self.steps if isinstance(s, ParallelPulse) and (kind is None or s.kind == kind)]

    def validate(self, strict: bool = False) -> None:
        """Check the transfer/move ordering.

        A group must be mobile to move, and each move must start where the
        group currently is. Pickups nest: only the most recently picked-up
        group may be returned. With ``strict`` at most one group is mobile at
        a time. Every group must be back in the static array at the end.
        """
        mobile: list[Group] = []
        where: dict[Group, float] = {}
        for n, s in enumerate(self.steps, 1):
            if isinstance(s, (Transfer, Move)):
                g = s.group
                if not 1 <= g.index <= self.layout.extent(g.axis):
                    raise PlanError(f"step {n}: {g} is outside the array")
            if isinstance(s, Transfer):
                if s.direction == "OUT":
                    if g in mobile:
                        raise PlanError(f"step {n}: {g} is already mobile")
                    if strict and mobile:
                        raise PlanError(f"step {n}: {mobile[-1]} still mobile when picking up {g}")
                    mobile.append(g)
                else:
                    if not mobile or mobile[-1] != g:
                        raise PlanError(f"step {n}: {g} is not the most recent pickup")
                    mobile.pop()
            elif isinstance(s, Move):
                if g not in mobile:
                    raise PlanError(f"step {n}: {g} moved while held by the static array")
                here = where.get(g, float(g.index))
                if not np.isclose(here, s.from_position):
                    raise PlanError(f"step {n}: {g} is at {here:g}, not {s.from_position:g}")
                if not 1 <= s.to_position <= self.layout.extent(g.axis):
                    raise PlanError(f"step {n}: target {s.to_position:g} outside the array")
                where[g] = float(s.to_position)
            elif not isinstance(s, ParallelPulse):
                raise PlanError(f"step {n}: unknown step {s!r}")
        if mobile:
            raise PlanError(f"plan ends with {', '.join(map(str, mobile))} still mobile")


def move_distance(step: Move, layout: ConcatLayout) -> float:
    return abs(step.to_position - step.from_position) * layout.atom_pitch


def cost(plan: MotionPlan, model: CostModel = CostModel(), include_transfers: bool = True) -> float:
    """Total duration in microseconds; the plan is validated first."""
    plan.validate()
    return sum(cost_breakdown(plan, model, include_transfers).values())


def cost_breakdown(plan: MotionPlan, model: CostModel = CostModel(), include_transfers: bool = True) -> dict:
    moving = 0.0
    for m in plan.moves():
        moving += move_distance(m, plan.layout) / model.move_speed + model.acceleration_overhead
    transfer = len(plan.transfers()) * model.transfer_time if include_transfers else 0.0
    pulses = len(plan.pulses()) * model.cz_pulse if model.count_pulses else 0.0
    return {"moving": moving, "transfer": transfer, "pulse": pulses}


# ---------------------------------------------------------------------------
# Planners
# ---------------------------------------------------------------------------


def _check_index(layout: ConcatLayout, axis: str, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= layout.extent(axis):
            raise ValueError(f"{axis} {i} outside 1..{layout.extent(axis)}")


def _cnot_layer(target: Group) -> list:
    return [
        ParallelPulse(f"LOCAL H {target}"),
        ParallelPulse("CZ"),
        ParallelPulse(f"LOCAL H {target}"),
    ]


def plan_transversal_pair(layout: ConcatLayout, kind: str, a: int, b: int) -> MotionPlan:
    """Transversal CNOT between two rows or two columns, ``a`` moving onto ``b``.

    Group ``a`` is the control; it is carried next to ``b`` (offset sideways by
    the handoff distance), the target group gets Hadamards around the CZ
    pulse, and ``a`` is carried back.
    """
    axis = {"row": ROW, "column": COL, "col": COL}.get(kind.lower())
    if axis is None:
        raise ValueError(f"kind must be 'row' or 'column', got {kind!r}")
    if a == b:
        raise ValueError("a transversal pair needs two distinct groups")
    _check_index(layout, axis, a, b)
    g = Group(axis, a)
    steps = [Transfer(g, "OUT"), Move(g, a, b)]
    steps += _cnot_layer(Group(axis, b))
    steps += [Move(g, b, a), Transfer(g, "IN")]
    return MotionPlan(steps, layout)


def plan_logical_T(layout: ConcatLayout = ConcatLayout(), model: CostModel | None = None) -> MotionPlan:
    """Four CNOT cycles on rows 7, 6 and 1 around a transversal T layer.

    Row 7 is carried onto row 6, row 6 (with row 7 still in tow of its own
    tweezers) visits row 1 and comes back, then row 7 returns home. Only the
    two pickups and two drop-offs are transfers.
    """
    if layout.rows < 7:
        raise ValueError("logical T plan needs seven rows")
    r7, r6, r1 = Group(ROW, 7), Group(ROW, 6), Group(ROW, 1)
    steps = [Transfer(r7, "OUT"), Move(r7, 7, 6)]
    steps += _cnot_layer(r6)
    steps += [Transfer(r6, "OUT"), Move(r6, 6, 1)]
    steps += _cnot_layer(r1)
    steps += [ParallelPulse(f"LOCAL T {r1}")]
    steps += _cnot_layer(r1)
    steps += [Move(r6, 1, 6), Transfer(r6, "IN")]
    steps += _cnot_layer(r6)
    steps += [Move(r7, 6, 7), Transfer(r7, "IN")]
    return MotionPlan(steps, layout)


H_CYCLES = 8
H_WORST_CASE_LEG = 4.25  # pitches per leg of the worst-case round trip


def plan_logical_H(
    layout: ConcatLayout = ConcatLayout(), model: CostModel | None = None, worst_case: bool = True
) -> MotionPlan:
    """Eight CNOT cycles between columns.

    Every cycle picks up one column, carries it ``H_WORST_CASE_LEG`` pitches
    to its partner, pulses and drops it. In the worst case the column is
    first carried back to where it started; otherwise it stays at the
    partner site, which halves the move time.
    """
    if layout.cols < 15:
        raise ValueError("logical H plan needs fifteen columns")
    steps = []
    where = {}
    for cycle in range(H_CYCLES):
        c = 1 + cycle
        g = Group(COL, c)
        start = where.get(g, float(c))
        dest = start + H_WORST_CASE_LEG
        steps += [Transfer(g, "OUT"), Move(g, start, dest)]
        steps += _cnot_layer(Group(COL, int(round(dest))))
        if worst_case:
            steps.append(Move(g, dest, start))
        else:
            where[g] = dest
        steps.append(Transfer(g, "IN"))
    return MotionPlan(steps, layout)


@dataclass(frozen=True)
class GateSchedule:
    name: str
    cycles: tuple  # one entry per interaction cycle: ((group_a, group_b), ...)

    @property
    def entangling_cycles(self) -> int:
        return len(self.cycles)


def schedule_of(plan: MotionPlan, name: str) -> GateSchedule:
    """Group-pair interactions per CZ pulse, read off the plan."""
    where: dict[Group, float] = {}
    cycles = []
    for s in plan.steps:
        if isinstance(s, Move):
            where[s.group] = s.to_position
        elif isinstance(s, ParallelPulse) and s.kind == "CZ":
            pairs = []
            for g, pos in where.items():
                home = Group(g.axis, int(round(pos)))
                if np.isclose(pos, round(pos)) and home != g:
                    pairs.append((g, home))
            cycles.append(tuple(pairs))
    return GateSchedule(name, tuple(cycles))


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _fmt_pos(x: float) -> str:
    return f"{x:g}"


def dumps_plan(plan: MotionPlan) -> str:
    lines = []
    for s in plan.steps:
        if isinstance(s, Transfer):
            lines.append(f"XFER {s.group} {s.direction}")
        elif isinstance(s, Move):
            lines.append(f"MOVE {s.group} FROM {_fmt_pos(s.from_position)} TO {_fmt_pos(s.to_position)}")
        else:
            lines.append(f"PULSE {s.kind}")
    return "\n".join(lines) + ("\n" if lines else "")


def loads_plan(text: str, layout: ConcatLayout = ConcatLayout()) -> MotionPlan:
    steps = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "XFER" and len(tok) == 4:
                steps.append(Transfer(Group(tok[1], int(tok[2])), tok[3]))
            elif tok[0] == "MOVE" and len(tok) == 7 and tok[3] == "FROM" and tok[5] == "TO":
                steps.append(Move(Group(tok[1], int(tok[2])), float(tok[4]), float(tok[6])))
            elif tok[0] == "PULSE" and len(tok) >= 2:
                steps.append(ParallelPulse(" ".join(tok[1:])))
            else:
                raise ValueError("unrecognized step")
        except ValueError as exc:
            raise ValueError(f"line {n}: {raw.strip()!r}: {exc}") from None
    return MotionPlan(steps, layout)


def report(plan: MotionPlan, model: CostModel = CostModel(), as_json: bool = False) -> str:
    parts = cost_breakdown(plan, model)
    total = sum(parts.values())
    if as_json:
        return json.dumps(
            {
                "moves": len(plan.moves()),
                "transfers": len(plan.transfers()),
                "cz_pulses": len(plan.pulses()),
                "moving_us": round(parts["moving"], 3),
                "transfer_us": round(parts["transfer"], 3),
                "pulse_us": round(parts["pulse"], 3),
                "total_us": round(total, 3),
            },
            sort_keys=True,
        )
    return (
        f"moves {len(plan.moves())}, transfers {len(plan.transfers())}, "
        f"CZ pulses {len(plan.pulses())}\n"
        f"moving   {parts['moving']:.3f} us\n"
        f"transfer {parts['transfer']:.3f} us\n"
        f"pulse    {parts['pulse']:.3f} us\n"
        f"total    {total:.3f} us"
    )


# ---------------------------------------------------------------------------
# Transversal gate checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    error: float


def _block(code: StabilizerCode, bit: int, prefix: str = "") -> StateVector:
    labels = [f"{prefix}{q}" for q in range(1, code.n + 1)]
    return StateVector(labels, logical_state(code, [bit]))


def _transversal(code: StabilizerCode, gate: str, bit: int) -> np.ndarray:
    sv = _block(code, bit)
    for q in sv.live_qubits:
        sv.apply_gate(gate, q)
    return sv.amplitudes


def _logical_action_error(code: StabilizerCode, gate: str, logical: np.ndarray) -> float:
    """Max amplitude error of ``gate^n`` against a 2x2 logical matrix, exact phase."""
    basis = [logical_state(code, [b]) for b in (0, 1)]
    err = 0.0
    for b in (0, 1):
        want = logical[0, b] * basis[0] + logical[1, b] * basis[1]
        err = max(err, float(np.max(np.abs(_transversal(code, gate, b) - want))))
    return err


def transversal_cnot_error(code: StabilizerCode = STEANE7) -> float:
    """Qubit-wise CNOT between two blocks against logical CNOT on all four inputs."""
    n = code.n
    err = 0.0
    for a in (0, 1):
        for b in (0, 1):
            amp = np.kron(logical_state(code, [a]), logical_state(code, [b]))
            labels = [f"a{q}" for q in range(1, n + 1)] + [f"b{q}" for q in range(1, n + 1)]
            sv = StateVector(labels, amp)
            for q in range(1, n + 1):
                sv.apply_gate("CNOT", f"a{q}", f"b{q}")
            want = np.kron(logical_state(code, [a]), logical_state(code, [a ^ b]))
            err = max(err, float(np.max(np.abs(sv.amplitudes - want))))
    return err


W8 = np.exp(1j * np.pi / 4)
S_BAR = np.diag([1, 1j])
SDG_BAR = np.diag([1, -1j])
T_BAR = np.diag([1, W8])
H_BAR = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def verify_transversal_claims(tol: float = 1e-9) -> list[Check]:
    """Statevector checks of the transversal gates both codes contribute."""
    items = [
        ("QRM15: S^15 is logical S^dagger", _logical_action_error(QRM15, "S", SDG_BAR)),
        ("QRM15: T^dagger^15 is logical T", _logical_action_error(QRM15, "TDG", T_BAR)),
        ("Steane7: S^dagger^7 is logical S", _logical_action_error(STEANE7, "SDG", S_BAR)),
        ("Steane7: H^7 is logical H", _logical_action_error(STEANE7, "H", H_BAR)),
        ("Steane7 x Steane7: CNOT^7 is logical CNOT", transversal_cnot_error(STEANE7)),
    ]
    return [Check(name, err <= tol, err) for name, err in items]
