"""Dense statevector simulator with qubit recycling.

Amplitude layout: the live-label list is ordered oldest first, and the most
recently added label is the fastest-varying index bit. With labels
``[a, b, c]`` the amplitude of ``|a b c>`` sits at index ``4a + 2b + c``.
"""

from __future__ import annotations

import cmath
import math
from typing import Hashable, Sequence

import numpy as np

from .. import gf2
from . import kernels as _kernels

DEFAULT_CAP = 20
SQRT1_2 = 1 / math.sqrt(2)
W8 = cmath.exp(1j * math.pi / 4)

_ONE_QUBIT = {
    "H": (SQRT1_2, SQRT1_2, SQRT1_2, -SQRT1_2),
    "X": (0, 1, 1, 0),
    "Y": (0, -1j, 1j, 0),
    "SX": (0, 1, 1j, 0),  # S·X
    "SDGX": (0, 1, -1j, 0),  # S^dagger·X
}
_DIAG = {"Z": -1, "S": 1j, "SDG": -1j, "T": W8, "TDG": W8.conjugate()}
_INVERSE = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T", "SX": "XSDG", "SDGX": "XS"}

SINGLE_STATES = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (SQRT1_2, SQRT1_2),
    "-": (SQRT1_2, -SQRT1_2),
    "T": (SQRT1_2, SQRT1_2 * W8),
    "TDG": (SQRT1_2, SQRT1_2 * W8.conjugate()),
}


class StateError(ValueError):
    pass


def single_qubit_state(spec) -> np.ndarray:
    if isinstance(spec, str):
        key = spec.upper().replace("†", "DG")
        if key not in SINGLE_STATES:
            raise StateError(f"unknown single-qubit state {spec!r}")
        return np.array(SINGLE_STATES[key], dtype=np.complex128)
    v = np.asarray(spec, dtype=np.complex128).reshape(2)
    return v / np.linalg.norm(v)


def gate_inverse(name: str) -> str:
    return _INVERSE.get(name, name)


class StateVector:
    """A pure state on an ordered list of labelled qubits."""

    def __init__(
        self,
        labels: Sequence[Hashable] = (),
        amplitudes=None,
        cap: int = DEFAULT_CAP,
        backend: str | None = None,
    ):
        self.cap = cap
        self.k = _kernels.get(backend)
        self.live_qubits: list = list(labels)
        if len(set(self.live_qubits)) != len(self.live_qubits):
            raise StateError("duplicate labels")
        if len(self.live_qubits) > cap:
            raise StateError(f"{len(self.live_qubits)} qubits exceed cap {cap}")
        n = len(self.live_qubits)
        if amplitudes is None:
            amp = np.zeros(1 << n, dtype=np.complex128)
            amp[0] = 1.0
        else:
            amp = np.array(amplitudes, dtype=np.complex128).reshape(-1)
            if amp.shape[0] != 1 << n:
                raise StateError(f"need {1 << n} amplitudes for {n} qubits")
        self.amplitudes = amp
        self.peak = n

    # -- bookkeeping --------------------------------------------------------
    @property
    def num_qubits(self) -> int:
        return len(self.live_qubits)

    def bit(self, label) -> int:
        try:
            i = self.live_qubits.index(label)
        except ValueError:
            raise StateError(f"qubit {label!r} is not live") from None
        return self.num_qubits - 1 - i

    def copy(self) -> StateVector:
        out = StateVector.__new__(StateVector)
        out.cap = self.cap
        out.k = self.k
        out.live_qubits = list(self.live_qubits)
        out.amplitudes = self.amplitudes.copy()
        out.peak = self.peak
        return out

    def norm(self) -> float:
        return math.sqrt(self.k.norm_sq(self.amplitudes))

    def relabel(self, old, new) -> StateVector:
        if new in self.live_qubits:
            raise StateError(f"label {new!r} already live")
        i = self.num_qubits - 1 - self.bit(old)
        self.live_qubits[i] = new
        return self

    # -- gates --------------------------------------------------------------
    def apply_gate(self, name: str, *labels) -> StateVector:
        """Apply a named gate in place and return ``self``.

        One-qubit names: H, X, Y, Z, S, SDG, T, TDG, SX (S after X), SDGX.
        Multi-qubit: CNOT (control, target), CZ, CCZ and MCZ (any arity).
        """
        name = name.upper().replace("†", "DG")
        if len(set(labels)) != len(labels):
            raise StateError(f"duplicate labels {labels}")
        bits = [self.bit(q) for q in labels]
        k = self.k
        psi = self.amplitudes
        if name in _DIAG:
            self._arity(name, bits, 1)
            k.apply_diag_mask(psi, 1 << bits[0], _DIAG[name])
        elif name in _ONE_QUBIT:
            self._arity(name, bits, 1)
            k.apply_1q(psi, bits[0], *_ONE_QUBIT[name])
        elif name in ("XS", "XSDG"):
            self._arity(name, bits, 1)
            self.apply_gate(name[1:], *labels)
            self.apply_gate("X", *labels)
        elif name == "CNOT" or name == "CX":
            self._arity(name, bits, 2)
            k.apply_cnot(psi, bits[0], bits[1])
        elif name in ("CZ", "CCZ", "MCZ"):
            want = {"CZ": 2, "CCZ": 3}.get(name)
            if want is not None:
                self._arity(name, bits, want)
            elif not bits:
                raise StateError("MCZ needs at least one qubit")
            mask = 0
            for b in bits:
                mask |= 1 << b
            k.apply_diag_mask(psi, mask, -1.0)
        else:
            raise StateError(f"unknown gate {name!r}")
        return self

    @staticmethod
    def _arity(name, bits, n):
        if len(bits) != n:
            raise StateError(f"{name} takes {n} qubit(s), got {len(bits)}")

    def apply_matrix(self, label, m) -> StateVector:
        m = np.asarray(m, dtype=np.complex128)
        self.k.apply_1q(self.amplitudes, self.bit(label), m[0, 0], m[0, 1], m[1, 0], m[1, 1])
        return self

    def apply_pauli_masks(self, xmask: int, zmask: int) -> StateVector:
        """Apply ``X^x Z^z`` given index bit masks (see :meth:`mask`)."""
        if xmask or zmask:
            self.amplitudes = self.k.apply_pauli(self.amplitudes, xmask, zmask)
        return self

    def mask(self, labels) -> int:
        m = 0
        for q in labels:
            m |= 1 << self.bit(q)
        return m

    # -- measurement and recycling -----------------------------------------
    def probability_one(self, label) -> float:
        return self.k.prob_one(self.amplitudes, self.bit(label))

    def measure(self, label, basis: str, rng) -> int:
        """Projective measurement; returns +1 or -1 and collapses in place.

        ``rng`` is a ``numpy.random.Generator``; exactly one uniform variate
        is consumed per call, whatever the outcome probabilities.
        """
        b = self.bit(label)
        if basis == "X":
            self.k.apply_1q(self.amplitudes, b, *_ONE_QUBIT["H"])
        elif basis != "Z":
            raise StateError(f"basis must be X or Z, got {basis!r}")
        p1 = min(max(self.k.prob_one(self.amplitudes, b), 0.0), 1.0)
        u = rng.random()
        bit = 1 if u < p1 else 0
        p = p1 if bit else 1.0 - p1
        # zero the other branch by collapsing and re-expanding
        kept = self.k.collapse(self.amplitudes, b, bit, 1.0 / math.sqrt(p))
        self.amplitudes = _reinsert(kept, b, bit)
        if basis == "X":
            self.k.apply_1q(self.amplitudes, b, *_ONE_QUBIT["H"])
        return -1 if bit else 1

    def measure_and_remove(self, label, basis: str, rng) -> int:
        """Measure then drop the qubit in one pass (no re-expansion)."""
        b = self.bit(label)
        if basis == "X":
            self.k.apply_1q(self.amplitudes, b, *_ONE_QUBIT["H"])
        elif basis != "Z":
            raise StateError(f"basis must be X or Z, got {basis!r}")
        p1 = min(max(self.k.prob_one(self.amplitudes, b), 0.0), 1.0)
        u = rng.random()
        bit = 1 if u < p1 else 0
        p = p1 if bit else 1.0 - p1
        self.amplitudes = self.k.collapse(self.amplitudes, b, bit, 1.0 / math.sqrt(p))
        self.live_qubits.remove(label)
        return -1 if bit else 1

    def add_qubit(self, label, initial="0") -> StateVector:
        if label in self.live_qubits:
            raise StateError(f"qubit {label!r} is already live")
        if self.num_qubits + 1 > self.cap:
            raise StateError(f"adding {label!r} would exceed the {self.cap}-qubit cap")
        a0, a1 = single_qubit_state(initial)
        self.amplitudes = self.k.append_qubit(self.amplitudes, a0, a1)
        self.live_qubits.append(label)
        self.peak = max(self.peak, self.num_qubits)
        return self

    def remove_measured(self, label, tol: float = 1e-10) -> StateVector:
        """Drop a qubit that is in a computational basis state."""
        b = self.bit(label)
        p1 = self.k.prob_one(self.amplitudes, b)
        if tol < p1 < 1 - tol:
            raise StateError(
                f"qubit {label!r} is not in a basis state (P(1) = {p1:.3g}); measure it first"
            )
        bit = 1 if p1 >= 0.5 else 0
        self.amplitudes = self.k.collapse(self.amplitudes, b, bit, 1.0)
        self.live_qubits.remove(label)
        return self

    # -- readout ------------------------------------------------------------
    def single_qubit_vector(self) -> np.ndarray:
        if self.num_qubits != 1:
            raise StateError(f"expected one live qubit, have {self.num_qubits}")
        return self.amplitudes.copy()

    def fidelity(self, target) -> float:
        """``|<target|psi>|^2`` for a one-qubit state."""
        v = self.single_qubit_vector()
        t = single_qubit_state(target)
        return float(abs(np.vdot(t, v)) ** 2)

    def dumps(self) -> str:
        """Debug dump: label header then one ``re im`` pair per amplitude."""
        lines = ["# labels (slowest first): " + " ".join(map(str, self.live_qubits))]
        lines.extend(f"{a.real:.17g} {a.imag:.17g}" for a in self.amplitudes)
        return "\n".join(lines) + "\n"


def _reinsert(kept: np.ndarray, b: int, bit: int) -> np.ndarray:
    out = np.zeros(kept.shape[0] * 2, dtype=np.complex128)
    v = out.reshape(-1, 2, 1 << b)
    v[:, bit, :] = kept.reshape(-1, 1 << b)
    return out


# ---------------------------------------------------------------------------
# Code states
# ---------------------------------------------------------------------------


def bits_to_index(bits) -> int:
    """Index of a computational basis state; the first bit is most significant."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def css_state(hx, offset=None) -> np.ndarray:
    """Normalized ``sum_{s in rowspace(hx)} |s + offset>`` over ``hx.shape[1]`` qubits.

    This is the projector construction ``prod_i (I + S_X^i)/sqrt(2) |offset>``
    up to normalization, for any offset in the Z-codespace.
    """
    hx = gf2.as_bits(hx)
    n = hx.shape[1]
    if n > DEFAULT_CAP:
        raise StateError(f"{n} qubits exceed cap {DEFAULT_CAP}")
    words = gf2.span(hx)
    if offset is not None:
        words = words ^ gf2.as_bits(offset)[None, :]
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    idx = np.unique(words.astype(np.int64) @ weights)
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[idx] = 1.0 / math.sqrt(idx.shape[0])
    return psi


def logical_state(code, bits) -> np.ndarray:
    """Logical computational basis state ``|b_1 ... b_k>`` of a CSS code."""
    offset = np.zeros(code.n, np.uint8)
    for b, lx in zip(bits, code.logical_x):
        if b:
            offset ^= lx.x_bits
    return css_state(code.hx, offset)


def overlap(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))
