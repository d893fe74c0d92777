"""CSS stabilizer codes: the [[15,1,3]] Reed-Muller code, Steane, and helpers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import gf2
from .pauli import PauliOperator, commutes


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """A CSS code given by check matrices and paired logical representatives."""

    hx: np.ndarray
    hz: np.ndarray
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    name: str = ""

    def __post_init__(self):
        hx = gf2.as_bits(self.hx)
        hz = gf2.as_bits(self.hz)
        if hx.ndim != 2 or hz.ndim != 2 or hx.shape[1] != hz.shape[1]:
            raise ValueError("hx and hz must be 2-D with equal column counts")
        hx.setflags(write=False)
        hz.setflags(write=False)
        object.__setattr__(self, "hx", hx)
        object.__setattr__(self, "hz", hz)
        object.__setattr__(self, "logical_x", tuple(self.logical_x))
        object.__setattr__(self, "logical_z", tuple(self.logical_z))
        if len(self.logical_x) != len(self.logical_z):
            raise ValueError("logical_x and logical_z must pair up")

    @property
    def n(self) -> int:
        return int(self.hx.shape[1])

    @property
    def k(self) -> int:
        return self.n - gf2.rank(self.hx) - gf2.rank(self.hz)

    def x_stabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(row, np.zeros(self.n, np.uint8)) for row in self.hx]

    def z_stabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(np.zeros(self.n, np.uint8), row) for row in self.hz]

    def stabilizers(self) -> list[PauliOperator]:
        return self.x_stabilizers() + self.z_stabilizers()

    def symplectic_stabilizers(self) -> np.ndarray:
        """Generator matrix in (x | z) layout."""
        zx = np.zeros_like(self.hx)
        zz = np.zeros_like(self.hz)
        return np.vstack([np.hstack([self.hx, zx]), np.hstack([zz, self.hz])])

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        """Membership up to phase, decided by GF(2) elimination."""
        v = np.concatenate([p.x_bits, p.z_bits])
        return gf2.in_rowspace(self.symplectic_stabilizers(), v)

    def is_logical(self, p: PauliOperator) -> bool:
        """True when ``p`` commutes with every stabilizer but is not one."""
        return all(commutes(p, s) for s in self.stabilizers()) and not self.in_stabilizer_group(p)

    def check(self) -> list[str]:
        """Return a list of violated code invariants (empty if consistent)."""
        problems = []
        if (self.hx.astype(int) @ self.hz.T.astype(int) % 2).any():
            problems.append("hx and hz rows do not all overlap evenly")
        stabs = self.stabilizers()
        for i, (lx, lz) in enumerate(zip(self.logical_x, self.logical_z)):
            for name, op in (("X", lx), ("Z", lz)):
                if not all(commutes(op, s) for s in stabs):
                    problems.append(f"logical {name}{i} fails to commute with a stabilizer")
            for j, lz2 in enumerate(self.logical_z):
                want = i != j
                if commutes(lx, lz2) != want:
                    problems.append(f"logical X{i} / Z{j} commutation is wrong")
        return problems

    def x_codewords(self) -> np.ndarray:
        """All 2^r elements of the X-stabilizer row space as bit rows."""
        return gf2.span(self.hx)


def syndrome(code: StabilizerCode, error: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
    """Syndrome bits: ``x_syndrome[i]`` flags anticommutation with X-check ``i``."""
    if error.n != code.n:
        raise ValueError(f"error has {error.n} qubits, code has {code.n}")
    xs = (code.hx.astype(int) @ error.z_bits.astype(int)) % 2
    zs = (code.hz.astype(int) @ error.x_bits.astype(int)) % 2
    return xs.astype(np.uint8), zs.astype(np.uint8)


def min_weight_logical_at_most(code: StabilizerCode, w: int, max_candidates: int = 5_000_000) -> bool:
    """Exhaustively look for a nontrivial logical Pauli of weight <= ``w``."""
    n = code.n
    total = sum(_comb(n, k) * 3**k for k in range(1, w + 1))
    if total > max_candidates:
        raise ValueError(f"{total} candidates exceed the enumeration cap {max_candidates}")
    stab = code.symplectic_stabilizers().astype(np.int64)
    base_rank = gf2.rank(stab)
    # symplectic products against all generators at once
    for k in range(1, w + 1):
        for qs in itertools.combinations(range(n), k):
            for letters in itertools.product((1, 2, 3), repeat=k):
                v = np.zeros(2 * n, np.uint8)
                for q, l in zip(qs, letters):
                    v[q] = l & 1
                    v[n + q] = l >> 1
                comm = (stab[:, :n] @ v[n:] + stab[:, n:] @ v[:n]) % 2
                if comm.any():
                    continue
                if gf2.rank(np.vstack([stab, v[None, :]])) > base_rank:
                    return True
    return False


def _comb(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


# ---------------------------------------------------------------------------
# Built-in codes
# ---------------------------------------------------------------------------

_RM_HX = np.array(
    [
        [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    ],
    dtype=np.uint8,
)

_RM_HZ = np.vstack(
    [
        _RM_HX,
        np.array(
            [
                [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
                [0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1],
                [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1],
                [0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1],
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
            ],
            dtype=np.uint8,
        ),
    ]
)

_HAMMING = np.array(
    [
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ],
    dtype=np.uint8,
)


def _all_ones(n: int, kind: str) -> PauliOperator:
    ones = np.ones(n, np.uint8)
    zeros = np.zeros(n, np.uint8)
    return PauliOperator(ones, zeros) if kind == "X" else PauliOperator(zeros, ones)


QRM15 = StabilizerCode(
    _RM_HX, _RM_HZ, (_all_ones(15, "X"),), (_all_ones(15, "Z"),), name="QRM15"
)
STEANE7 = StabilizerCode(
    _HAMMING, _HAMMING, (_all_ones(7, "X"),), (_all_ones(7, "Z"),), name="Steane7"
)


# ---------------------------------------------------------------------------
# Plain-text check-matrix format
# ---------------------------------------------------------------------------


def dumps_checks(code: StabilizerCode) -> str:
    """Serialize check matrices: ``HX``/``HZ`` section headers, one 0/1 row per line."""
    lines = [f"# {code.name or 'code'} n={code.n}; columns are qubits 1..n"]
    for title, m in (("HX", code.hx), ("HZ", code.hz)):
        lines.append(title)
        lines.extend("".join(str(int(b)) for b in row) for row in m)
    return "\n".join(lines) + "\n"


def loads_checks(text: str, name: str = "") -> StabilizerCode:
    sections: dict[str, list[list[int]]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.upper() in ("HX", "HZ"):
            current = line.upper()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ValueError("row appears before an HX/HZ header")
        if set(line) - {"0", "1"}:
            raise ValueError(f"bad check-matrix row {line!r}")
        sections[current].append([int(c) for c in line])
    if "HX" not in sections or "HZ" not in sections:
        raise ValueError("need both HX and HZ sections")
    widths = {len(r) for rows in sections.values() for r in rows}
    if len(widths) != 1:
        raise ValueError(f"inconsistent row widths {sorted(widths)}")
    return StabilizerCode(np.array(sections["HX"]), np.array(sections["HZ"]), name=name)


def load_checks(path: str | Path) -> StabilizerCode:
    p = Path(path)
    return loads_checks(p.read_text(), name=p.stem)
