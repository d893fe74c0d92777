"""Binary-symplectic Pauli algebra and Clifford circuits.

A :class:`PauliOperator` on ``n`` qubits is stored as ``i**k * X^x Z^z`` where
``x`` and ``z`` are bit vectors and ``X^x Z^z`` puts every X factor to the left
of every Z factor. With this ordering a single-qubit ``Y = iXZ`` is stored as
``k = 1, x = z = 1``. Qubit positions are 1-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence, Union

import numpy as np

Label = Hashable

_PHASE_NAMES = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_PARSE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


def _frozen_bits(bits, n: int | None = None) -> np.ndarray:
    a = np.array(bits, dtype=np.uint8).reshape(-1) & 1
    if n is not None and a.shape[0] != n:
        raise ValueError(f"expected {n} bits, got {a.shape[0]}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """An n-qubit Pauli operator ``i**phase_exp * X^x_bits Z^z_bits``."""

    x_bits: np.ndarray
    z_bits: np.ndarray
    phase_exp: int = 0

    def __post_init__(self):
        x = _frozen_bits(self.x_bits)
        z = _frozen_bits(self.z_bits)
        if x.shape != z.shape:
            raise ValueError("x_bits and z_bits must have the same length")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_support(
        cls, n: int, x: Iterable[int] = (), z: Iterable[int] = (), phase_exp: int = 0
    ) -> PauliOperator:
        """Build from 1-based X and Z supports (a qubit in both carries XZ)."""
        xb = np.zeros(n, np.uint8)
        zb = np.zeros(n, np.uint8)
        for q in x:
            _check_pos(q, n)
            xb[q - 1] ^= 1
        for q in z:
            _check_pos(q, n)
            zb[q - 1] ^= 1
        return cls(xb, zb, phase_exp)

    @classmethod
    def from_label(cls, label: str) -> PauliOperator:
        """Parse strings such as ``"XIZ"``, ``"-iYY"`` or ``"+XZ"``."""
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PHASE_PARSE:
            raise ValueError(f"bad phase prefix {prefix!r}")
        k = _PHASE_PARSE[prefix]
        x = np.zeros(len(body), np.uint8)
        z = np.zeros(len(body), np.uint8)
        for i, ch in enumerate(body.upper()):
            if ch == "X":
                x[i] = 1
            elif ch == "Z":
                z[i] = 1
            elif ch == "Y":
                x[i] = z[i] = 1
                k += 1
            elif ch not in "I_":
                raise ValueError(f"bad Pauli character {ch!r}")
        return cls(x, z, k)

    # -- views --------------------------------------------------------------
    @property
    def n(self) -> int:
        return int(self.x_bits.shape[0])

    @property
    def num_y(self) -> int:
        return int(np.count_nonzero(self.x_bits & self.z_bits))

    @property
    def phase(self) -> complex:
        """Coefficient in front of the Hermitian Pauli string (X, Y, Z letters)."""
        return 1j ** ((self.phase_exp - self.num_y) % 4)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    def x_support(self) -> set[int]:
        return {int(i) + 1 for i in np.nonzero(self.x_bits)[0]}

    def z_support(self) -> set[int]:
        return {int(i) + 1 for i in np.nonzero(self.z_bits)[0]}

    def support(self) -> set[int]:
        return self.x_support() | self.z_support()

    def is_identity(self, up_to_phase: bool = False) -> bool:
        trivial = not self.x_bits.any() and not self.z_bits.any()
        return trivial and (up_to_phase or self.phase_exp == 0)

    def letters(self) -> str:
        table = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        return "".join(table[(int(a), int(b))] for a, b in zip(self.x_bits, self.z_bits))

    def unsigned(self) -> PauliOperator:
        """Same bits with the Hermitian-string coefficient set to +1."""
        return PauliOperator(self.x_bits, self.z_bits, self.num_y)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; qubit 1 is the most significant tensor factor."""
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1.0 + 0j]])
        for a, b in zip(self.x_bits, self.z_bits):
            f = np.eye(2, dtype=complex)
            if a:
                f = f @ X
            if b:
                f = f @ Z
            out = np.kron(out, f)
        return (1j**self.phase_exp) * out

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.x_bits, self.z_bits, self.phase_exp + 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.phase_exp == other.phase_exp
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.x_bits.tobytes(), self.z_bits.tobytes(), self.phase_exp))

    def __repr__(self) -> str:
        k = (self.phase_exp - self.num_y) % 4
        return f"PauliOperator('{_PHASE_NAMES[k]}{self.letters()}')"


def _check_pos(q: int, n: int) -> None:
    if not 1 <= q <= n:
        raise IndexError(f"qubit {q} outside 1..{n}")


def _check_same_n(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Operator product ``a @ b`` with exact phase."""
    _check_same_n(a, b)
    # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
    swap = int(np.count_nonzero(a.z_bits & b.x_bits))
    return PauliOperator(
        a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, a.phase_exp + b.phase_exp + 2 * swap
    )


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    _check_same_n(a, b)
    return int(np.count_nonzero(a.x_bits & b.z_bits) + np.count_nonzero(a.z_bits & b.x_bits)) % 2


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return symplectic_product(a, b) == 0


# ---------------------------------------------------------------------------
# Circuit elements
# ---------------------------------------------------------------------------

CLIFFORD_1Q = ("H", "S", "SDG", "X", "Y", "Z")
CLIFFORD_2Q = ("CNOT", "CZ")
PREP_STATES = ("0", "1", "+", "T", "TDG")


@dataclass(frozen=True)
class Gate:
    """A named Clifford gate on circuit labels. For CNOT the order is (control, target)."""

    name: str
    qubits: tuple

    def __post_init__(self):
        name = self.name.upper().replace("†", "DG")
        if name == "CX":
            name = "CNOT"
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if name in CLIFFORD_1Q:
            if len(self.qubits) != 1:
                raise ValueError(f"{name} acts on one qubit")
        elif name in CLIFFORD_2Q:
            if len(self.qubits) != 2:
                raise ValueError(f"{name} acts on two qubits")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{name} needs distinct qubits, got {self.qubits}")
        else:
            raise ValueError(f"unknown Clifford gate {self.name!r}")

    def __str__(self) -> str:
        return f"{self.name}({','.join(map(str, self.qubits))})"


@dataclass(frozen=True)
class NoisyGateSite:
    """A two-qubit gate that carries an independent error location."""

    gate: Gate
    site: str

    @property
    def name(self) -> str:
        return self.gate.name

    @property
    def qubits(self) -> tuple:
        return self.gate.qubits


@dataclass(frozen=True)
class Prepare:
    """Bring a fresh qubit into the register in one of ``PREP_STATES``."""

    qubit: Label
    state: str = "0"
    site: str | None = None

    def __post_init__(self):
        if self.state not in PREP_STATES:
            raise ValueError(f"unknown preparation {self.state!r}")


@dataclass(frozen=True)
class Measure:
    """Destructive single-qubit measurement; the qubit leaves the register."""

    qubit: Label
    basis: str
    record: str

    def __post_init__(self):
        if self.basis not in ("X", "Z"):
            raise ValueError(f"basis must be X or Z, got {self.basis!r}")


@dataclass(frozen=True)
class ConditionalPauli:
    """Apply ``gates`` when the XOR of the listed records reads -1.

    The classical condition is always a parity of earlier outcomes; the
    corrections used here are a Pauli or a Pauli followed by ``S``/``S^dagger``.
    """

    qubit: Label
    gates: tuple[str, ...]
    records: tuple[str, ...]


@dataclass(frozen=True)
class Postselect:
    """Abort the shot unless the XOR of ``records`` reads +1."""

    records: tuple[str, ...]
    reason: str


@dataclass(frozen=True)
class PhaseGate:
    """Non-Clifford diagonal gate (T or TDG) with an optional input-error site."""

    qubit: Label
    name: str = "TDG"
    site: str | None = None


@dataclass(frozen=True)
class Relabel:
    old: Label
    new: Label


Element = Union[
    Gate, NoisyGateSite, Prepare, Measure, ConditionalPauli, Postselect, PhaseGate, Relabel
]


@dataclass
class CliffordCircuit:
    """Ordered list of circuit elements over hashable qubit labels.

    ``qubits`` fixes the positional order used when a Pauli operator is
    attached to the circuit: label ``qubits[i]`` is Pauli position ``i + 1``.
    """

    qubits: list
    elements: list = field(default_factory=list)

    def __post_init__(self):
        self.qubits = list(self.qubits)
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("duplicate qubit labels")
        self._pos = {q: i + 1 for i, q in enumerate(self.qubits)}

    @property
    def n(self) -> int:
        return len(self.qubits)

    def position(self, label: Label) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise KeyError(f"unknown qubit label {label!r}") from None

    def append(self, element: Element) -> int:
        for q in _element_qubits(element):
            self.position(q)
        self.elements.append(element)
        return len(self.elements) - 1

    def extend(self, elements: Iterable[Element]) -> None:
        for e in elements:
            self.append(e)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def pauli(self, spec: dict | None = None, **kw) -> PauliOperator:
        """Pauli from a ``{label: 'X'|'Y'|'Z'}`` mapping."""
        spec = dict(spec or {}, **kw)
        x = np.zeros(self.n, np.uint8)
        z = np.zeros(self.n, np.uint8)
        k = 0
        for label, letter in spec.items():
            i = self.position(label) - 1
            letter = letter.upper()
            if letter in "XY":
                x[i] = 1
            if letter in "ZY":
                z[i] = 1
            if letter == "Y":
                k += 1
        return PauliOperator(x, z, k)

    def labels_of(self, positions: Iterable[int]) -> set:
        return {self.qubits[p - 1] for p in positions}

    def index_of_site(self, site: str) -> int:
        for i, e in enumerate(self.elements):
            if isinstance(e, NoisyGateSite) and e.site == site:
                return i
        raise KeyError(f"no noisy site {site!r}")

    def sites(self) -> list[tuple[int, NoisyGateSite]]:
        return [(i, e) for i, e in enumerate(self.elements) if isinstance(e, NoisyGateSite)]

    def validate(self) -> None:
        """Check record ordering: conditions only read earlier measurements."""
        seen: set[str] = set()
        for e in self.elements:
            if isinstance(e, Measure):
                if e.record in seen:
                    raise ValueError(f"record {e.record!r} produced twice")
                seen.add(e.record)
            elif isinstance(e, (ConditionalPauli, Postselect)):
                missing = set(e.records) - seen
                if missing:
                    raise ValueError(f"records {sorted(missing)} used before measurement")


def _element_qubits(e: Element) -> tuple:
    if isinstance(e, (Gate, NoisyGateSite)):
        return e.qubits
    if isinstance(e, (Prepare, Measure, ConditionalPauli, PhaseGate)):
        return (e.qubit,)
    if isinstance(e, Relabel):
        return (e.old, e.new)
    return ()


# ---------------------------------------------------------------------------
# Clifford conjugation
# ---------------------------------------------------------------------------


def conjugate_gate(pauli: PauliOperator, name: str, positions: Sequence[int]) -> PauliOperator:
    """Return ``G P G^dagger`` for a Clifford gate on 1-based ``positions``."""
    x = pauli.x_bits.copy()
    z = pauli.z_bits.copy()
    k = pauli.phase_exp
    if name in CLIFFORD_1Q:
        (q,) = positions
        i = q - 1
        xi, zi = int(x[i]), int(z[i])
        if name == "H":
            x[i], z[i] = zi, xi
            k += 2 * xi * zi
        elif name == "S":
            k += xi
            z[i] = zi ^ xi
        elif name == "SDG":
            k += 3 * xi
            z[i] = zi ^ xi
        elif name == "X":
            k += 2 * zi
        elif name == "Z":
            k += 2 * xi
        elif name == "Y":
            k += 2 * (xi ^ zi)
    elif name == "CNOT":
        c, t = (p - 1 for p in positions)
        x[t] ^= x[c]
        z[c] ^= z[t]
    elif name == "CZ":
        a, b = (p - 1 for p in positions)
        k += 2 * int(x[a]) * int(x[b])
        z[a] ^= x[b]
        z[b] ^= x[a]
    else:
        raise ValueError(f"cannot conjugate through {name!r}")
    return PauliOperator(x, z, k)


def conjugate_through(
    circuit: CliffordCircuit,
    pauli: PauliOperator,
    insertion_index: int = 0,
    stop: int | None = None,
) -> PauliOperator:
    """Push ``pauli``, inserted just before element ``insertion_index``, to ``stop``.

    Only unitary Clifford elements may lie in the window; anything else
    (measurement, preparation, classical control) raises ``ValueError``.
    """
    if pauli.n != circuit.n:
        raise ValueError(f"Pauli has {pauli.n} qubits, circuit has {circuit.n}")
    stop = len(circuit.elements) if stop is None else stop
    if not 0 <= insertion_index <= stop <= len(circuit.elements):
        raise IndexError(f"bad window [{insertion_index}, {stop})")
    p = pauli
    for e in circuit.elements[insertion_index:stop]:
        if isinstance(e, NoisyGateSite):
            e = e.gate
        if not isinstance(e, Gate):
            raise ValueError(f"non-Clifford element {e!r} after insertion point")
        p = conjugate_gate(p, e.name, [circuit.position(q) for q in e.qubits])
    return p
