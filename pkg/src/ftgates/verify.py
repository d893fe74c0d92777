"""Verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import concat, cupz
from .codes import QRM15, min_weight_logical_at_most
from .distill import build_distillation_circuit, first_order_oracle, synthesize_encoder
from .distill.circuit import build_t_gadget, execute
from .distill.encoder import DATA_QUBIT, PIVOTS
from .pauli import CliffordCircuit, Prepare, conjugate_through
from .statevec import W8, StateVector, logical_state, single_qubit_state

TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: str = ""


class FixedUniform:
    """Stand-in measurement stream that always returns ``u`` (0 forces -1, ~1 forces +1)."""

    def __init__(self, u: float):
        self.u = u

    def random(self):
        return self.u


FORCE_MINUS = FixedUniform(0.0)
FORCE_PLUS = FixedUniform(1.0 - 1e-12)


# ---------------------------------------------------------------------------


def suite_qrm() -> list[Check]:
    problems = QRM15.check()
    comm = (QRM15.hx.astype(int) @ QRM15.hz.T.astype(int) % 2).any()
    low = min_weight_logical_at_most(QRM15, 2)
    phases = []
    for b in (0, 1):
        psi = logical_state(QRM15, [b])
        sv = StateVector(list(range(1, 16)), psi)
        for q in range(1, 16):
            sv.apply_gate("TDG", q)
        phases.append(np.vdot(psi, sv.amplitudes))
    err = max(abs(phases[0] - 1), abs(phases[1] - W8))
    return [
        Check("CSS commutation H_X H_Z^T = 0", not comm and not problems, "; ".join(problems) or "ok"),
        Check("one logical qubit", QRM15.k == 1, f"k={QRM15.k}"),
        Check("no logical operator of weight <= 2", not low, "distance >= 3" if not low else "found"),
        Check(
            "T^dagger^15 eigenphases 1, e^{i pi/4}",
            err <= TOL,
            f"<0|U|0>={phases[0]:.12f}, <1|U|1>={phases[1]:.12f}, err={err:.2e}",
        ),
    ]


def _encoder_overlaps() -> list[float]:
    out = []
    for b in (0, 1):
        sv = execute(synthesize_encoder(data=b)).state
        out.append(abs(np.vdot(logical_state(QRM15, [b]), sv.amplitudes)) ** 2)
    sv = execute(synthesize_encoder()).state
    epr = (
        np.kron([1, 0], logical_state(QRM15, [0])) + np.kron([0, 1], logical_state(QRM15, [1]))
    ) / np.sqrt(2)
    out.append(abs(np.vdot(epr, sv.amplitudes)) ** 2)
    return out


def spread(circuit: CliffordCircuit, letter: str, insertion: int) -> set:
    p = conjugate_through(circuit, circuit.pauli({DATA_QUBIT: letter}), insertion)
    support = p.x_support() if letter == "X" else p.z_support()
    return circuit.labels_of(support)


def encoder_spreads(flag: bool = False) -> tuple[set, set]:
    """X inserted on qubit 1 after the key CNOTs, Z inserted just after the EPR CNOT."""
    c = synthesize_encoder(flag=flag)
    last_key = max(c.index_of_site(f"key{p}") for p in PIVOTS)
    x = spread(c, "X", last_key + 1)
    z = spread(c, "Z", c.index_of_site("epr") + 1)
    return x, z


def spread_s_error() -> float:
    x_set, _ = encoder_spreads()
    err = 0.0
    for b, want in ((0, 1.0), (1, -1j)):
        psi = logical_state(QRM15, [b])
        sv = StateVector(list(range(1, 16)), psi)
        for q in sorted(x_set):
            sv.apply_gate("S", q)
        err = max(err, float(np.max(np.abs(sv.amplitudes - want * psi))))
    return err


def _code(labels) -> set:
    return {q for q in labels if isinstance(q, int)}


def suite_encoder() -> list[Check]:
    ov = _encoder_overlaps()
    x, z = encoder_spreads()
    fx, fz = encoder_spreads(flag=True)
    s_err = spread_s_error()
    want_x = {1, 2, 3, 12, 13, 14, 15}
    want_z = {1, 5, 7, 8, 11}
    return [
        Check("data 0 encodes to |0>_L", ov[0] >= 1 - TOL, f"overlap={ov[0]:.12f}"),
        Check("data 1 encodes to |1>_L", ov[1] >= 1 - TOL, f"overlap={ov[1]:.12f}"),
        Check("output qubit forms an encoded Bell pair", ov[2] >= 1 - TOL, f"overlap={ov[2]:.12f}"),
        Check("X on qubit 1 after key CNOTs spreads to {1,2,3,12,13,14,15}", x == want_x, str(sorted(x))),
        Check("Z on qubit 1 before pivot CNOTs spreads to {1,5,7,8,11}", _code(z) == want_z, str(sorted(_code(z)))),
        Check(
            "flagged encoder keeps both spreads on the code",
            _code(fx) == want_x and _code(fz) == want_z,
            f"{sorted(_code(fx))}, {sorted(_code(fz))}",
        ),
        Check("S on the X-spread set is logical S^dagger", s_err <= TOL, f"err={s_err:.2e}"),
    ]


def gadget_fidelity(kind: str, force, ancilla_z: bool = False) -> float:
    """Teleport onto |+> through one gadget and compare with the ideal output."""
    seg = build_t_gadget(1, kind)
    c = CliffordCircuit([1, "a1"], [Prepare(1, "+")] + seg)
    errors = {1: [("a1", "Z")]} if ancilla_z else None
    sv = execute(c, errors=errors, rng=force).state
    plus = single_qubit_state("+")
    phase = W8 if kind == "T" else np.conj(W8)
    want = np.array([plus[0], phase * plus[1]])
    if ancilla_z:
        want = want * np.array([1, -1])
    return float(abs(np.vdot(want, sv.single_qubit_vector())) ** 2)


def suite_gadget() -> list[Check]:
    out = []
    for kind in ("T", "TDG"):
        for name, force in (("+1", FORCE_PLUS), ("-1", FORCE_MINUS)):
            f = gadget_fidelity(kind, force)
            out.append(Check(f"{kind} gadget, outcome {name}", f >= 1 - TOL, f"fidelity={f:.12f}"))
    f = gadget_fidelity("TDG", FORCE_MINUS, ancilla_z=True)
    out.append(Check("ancilla Z error leaves Z on the output", f >= 1 - TOL, f"fidelity={f:.12f}"))
    return out


def suite_oracle() -> list[Check]:
    plain = first_order_oracle(build_distillation_circuit(False))
    flagged = first_order_oracle(build_distillation_circuit(True))
    return [
        Check("plain slope_key = 3.5", plain.slope_key == 3.5, f"{plain.slope_key:g}"),
        Check("flagged slope_key = 2.5", flagged.slope_key == 2.5, f"{flagged.slope_key:g}"),
        Check(
            "slope_other = 0",
            plain.slope_other == 0 and flagged.slope_other == 0,
            f"{plain.slope_other:g}, {flagged.slope_other:g}",
        ),
        Check(
            "rate_slope_other > 0",
            plain.rate_slope_other > 0,
            f"{plain.rate_slope_other:g}",
        ),
    ]


def concat_costs(transfer: float = 150.0) -> dict:
    model = concat.CostModel(transfer_time=transfer)
    t = concat.plan_logical_T()
    h = concat.plan_logical_H(worst_case=True)
    return {
        "T_moving": concat.cost(t, model, include_transfers=False),
        "T_total": concat.cost(t, model),
        "H_worst": concat.cost(h, model),
    }


def suite_concat() -> list[Check]:
    c = concat_costs()
    lo, hi = concat_costs(100.0), concat_costs(200.0)
    slope_t = (hi["T_total"] - lo["T_total"]) / 100.0
    slope_h = (hi["H_worst"] - lo["H_worst"]) / 100.0
    out = [
        Check("logical T moving only = 240 us", c["T_moving"] == 240.0, f"{c['T_moving']:.3f} us"),
        Check("logical T with transfers = 840 us", c["T_total"] == 840.0, f"{c['T_total']:.3f} us"),
        Check("logical H worst case = 3760 us", c["H_worst"] == 3760.0, f"{c['H_worst']:.3f} us"),
        Check("T cost slope in transfer time = 4", slope_t == 4.0, f"{slope_t:g}"),
        Check("H cost slope in transfer time = 16", slope_h == 16.0, f"{slope_h:g}"),
    ]
    for chk in concat.verify_transversal_claims(TOL):
        out.append(Check(chk.name, chk.passed, f"err={chk.error:.2e}"))
    return out


def suite_cupz2d() -> list[Check]:
    system = cupz.LayeredSystem(cupz.TorusLattice(2, 2), 2)
    P = cupz.build_logical_CZ(system)
    rep = cupz.statevector_codespace_check(system, P)
    nontrivial = rep.bilinear is not None and rep.bilinear.any()
    agree = rep.preserved and rep.phases == cupz.predicted_phases(system, P)
    ident = cupz.verify_conjugation_identity(2, 2)
    return [
        Check("CZ polynomial preserves the codespace", rep.preserved, "16 basis states"),
        Check(
            "nontrivial inter-layer logical CZ",
            bool(nontrivial),
            "B=" + (json.dumps(rep.bilinear.tolist()) if rep.bilinear is not None else "none"),
        ),
        Check("statevector phases match the polynomial", agree, "ok" if agree else "mismatch"),
        Check(
            "CZ X_2 CZ = X_2 Z_1",
            ident.classification in ("exact", "stabilizer_equivalent"),
            ident.classification,
        ),
    ]


def suite_cupz3d() -> list[Check]:
    ident = cupz.verify_conjugation_identity(3, 2)
    system = cupz.LayeredSystem(cupz.TorusLattice(3, 2), 3)
    ctrl = cupz.verify_conjugation_identity(3, 2, flip=cupz.star_flip(system, 3))
    return [
        Check(
            "CCZ X_3 CCZ = X_3 CZ_12",
            ident.classification in ("exact", "stabilizer_equivalent"),
            f"{ident.classification} ({ident.method})",
        ),
        Check(
            "contractible flip has no logical content",
            ctrl.classification in ("exact", "stabilizer_equivalent"),
            f"{ctrl.classification} ({ctrl.method})",
        ),
    ]


SUITES = {
    "qrm": suite_qrm,
    "encoder": suite_encoder,
    "gadget": suite_gadget,
    "oracle": suite_oracle,
    "concat": suite_concat,
    "cupz2d": suite_cupz2d,
    "cupz3d": suite_cupz3d,
}


def run_suite(name: str) -> list[tuple[str, Check]]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}")
        out.extend((n, c) for c in SUITES[n]())
    return out
