"""Cup-product multi-controlled-Z gates on stacked D-dimensional toric codes.

Qubits sit on the edges of a periodic cubic lattice. Z-basis states of one
layer's codespace are closed 1-cochains (cocycles): every face has even
parity. A diagonal gate ``(-1)^{P(x)}`` with ``P`` a sum over cells of
path products across layers evaluates a cup product of the layers' cochains,
which depends only on their cohomology classes and so acts logically.

Variables are integers ``(layer - 1) * E + edge``; layers are 1-based,
directions and coordinates 0-based.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf2
from .codes import StabilizerCode
from .pauli import PauliOperator
from .statevec import StateVector, logical_state

Vertex = tuple


@dataclass(frozen=True)
class TorusLattice:
    D: int
    L: int

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("dimension must be at least 2")
        if self.L < 2:
            raise ValueError("linear size must be at least 2")

    @property
    def num_vertices(self) -> int:
        return self.L**self.D

    @property
    def num_edges(self) -> int:
        return self.D * self.num_vertices

    def vertices(self) -> list[Vertex]:
        return list(itertools.product(range(self.L), repeat=self.D))

    def vertex_index(self, v: Vertex) -> int:
        i = 0
        for c in v:
            i = i * self.L + c % self.L
        return i

    def shift(self, v: Vertex, d: int, step: int = 1) -> Vertex:
        w = list(v)
        w[d] = (w[d] + step) % self.L
        return tuple(w)

    def edge(self, v: Vertex, d: int) -> int:
        """Index of the edge from ``v`` to ``v + e_d``."""
        return self.vertex_index(v) * self.D + d

    def edge_of(self, index: int) -> tuple[Vertex, int]:
        vi, d = divmod(index, self.D)
        v = []
        for _ in range(self.D):
            vi, c = divmod(vi, self.L)
            v.append(c)
        return tuple(reversed(v)), d

    def cells(self, k: int, directions=None, fixed: dict | None = None) -> list[tuple[Vertex, tuple]]:
        """k-cells as ``(base vertex, sorted directions)``.

        ``directions`` restricts the allowed directions; ``fixed`` pins
        coordinates of the base vertex (e.g. ``{2: 0}`` for the plane z = 0).
        """
        dirs = range(self.D) if directions is None else directions
        out = []
        for v in self.vertices():
            if fixed and any(v[a] != b for a, b in fixed.items()):
                continue
            for ds in itertools.combinations(sorted(dirs), k):
                out.append((v, ds))
        return out

    def face_edges(self, v: Vertex, d1: int, d2: int) -> list[int]:
        return [
            self.edge(v, d1),
            self.edge(v, d2),
            self.edge(self.shift(v, d1), d2),
            self.edge(self.shift(v, d2), d1),
        ]

    def star_edges(self, v: Vertex) -> list[int]:
        return [self.edge(v, d) for d in range(self.D)] + [
            self.edge(self.shift(v, d, -1), d) for d in range(self.D)
        ]

    @cached_property
    def face_matrix(self) -> np.ndarray:
        faces = self.cells(2)
        m = np.zeros((len(faces), self.num_edges), np.uint8)
        for i, (v, (a, b)) in enumerate(faces):
            m[i, self.face_edges(v, a, b)] = 1
        return m

    @cached_property
    def star_matrix(self) -> np.ndarray:
        vs = self.vertices()
        m = np.zeros((len(vs), self.num_edges), np.uint8)
        for i, v in enumerate(vs):
            m[i, self.star_edges(v)] = 1
        return m

    def logical_cocycle(self, d: int) -> np.ndarray:
        """Direction-``d`` edges that leave the hyperplane ``x_d = 0``."""
        m = np.zeros(self.num_edges, np.uint8)
        for v in self.vertices():
            if v[d] == 0:
                m[self.edge(v, d)] = 1
        return m

    def logical_cycle(self, d: int) -> np.ndarray:
        """Direction-``d`` edges along the line through the origin."""
        m = np.zeros(self.num_edges, np.uint8)
        for v in self.vertices():
            if all(c == 0 for i, c in enumerate(v) if i != d):
                m[self.edge(v, d)] = 1
        return m

    @cached_property
    def cocycle_basis(self) -> np.ndarray:
        return gf2.nullspace(self.face_matrix)


def build_toric_layer(lattice: TorusLattice) -> StabilizerCode:
    """Vertex X-stars, face Z-plaquettes; X-logicals on cocycles, Z-logicals on cycles."""
    if lattice.D not in (2, 3):
        raise ValueError("only D = 2 and D = 3 layers are materialized")
    n = lattice.num_edges
    zero = np.zeros(n, np.uint8)
    lx = tuple(PauliOperator(lattice.logical_cocycle(d), zero) for d in range(lattice.D))
    lz = tuple(PauliOperator(zero, lattice.logical_cycle(d)) for d in range(lattice.D))
    return StabilizerCode(
        lattice.star_matrix, lattice.face_matrix, lx, lz, name=f"toric{lattice.D}D_L{lattice.L}"
    )


@dataclass(frozen=True)
class LayeredSystem:
    lattice: TorusLattice
    layers: int

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("need at least one layer")

    @property
    def num_qubits(self) -> int:
        return self.layers * self.lattice.num_edges

    def var(self, layer: int, edge: int) -> int:
        if not 1 <= layer <= self.layers:
            raise ValueError(f"layer {layer} outside 1..{self.layers}")
        return (layer - 1) * self.lattice.num_edges + edge

    def unvar(self, v: int) -> tuple[int, int]:
        layer, edge = divmod(v, self.lattice.num_edges)
        return layer + 1, edge


# ---------------------------------------------------------------------------
# Phase polynomials
# ---------------------------------------------------------------------------


def _toggle(acc: set, mono: frozenset) -> None:
    if mono in acc:
        acc.remove(mono)
    else:
        acc.add(mono)


@dataclass(frozen=True)
class PhasePolynomial:
    """Multilinear polynomial over F2 for the diagonal unitary ``(-1)^{P(x)}``.

    ``monomials`` holds each surviving monomial once; the empty monomial is
    the constant 1.
    """

    monomials: frozenset = frozenset()

    @classmethod
    def from_terms(cls, terms) -> PhasePolynomial:
        acc: set = set()
        for t in terms:
            _toggle(acc, frozenset(t))
        return cls(frozenset(acc))

    def __add__(self, other: PhasePolynomial) -> PhasePolynomial:
        return PhasePolynomial(self.monomials ^ other.monomials)

    def __len__(self) -> int:
        return len(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def variables(self) -> set:
        return set().union(*self.monomials) if self.monomials else set()

    def homogeneous(self, d: int) -> PhasePolynomial:
        return PhasePolynomial(frozenset(m for m in self.monomials if len(m) == d))

    def evaluate(self, x) -> int:
        """Value at a 0/1 assignment indexed by variable."""
        total = 0
        for m in self.monomials:
            total ^= int(all(x[v] for v in m))
        return total


def _path_monomials(lat: TorusLattice, sys: LayeredSystem, v, dirs, layers, corner=None):
    """One monomial per ordering of ``dirs``: layer ``i`` on the path's i-th edge."""
    start = list(v)
    sign = [1] * lat.D
    if corner is not None:
        for d in dirs:
            if corner[d]:
                start[d] = (start[d] + 1) % lat.L
                sign[d] = -1
    for order in itertools.permutations(dirs):
        p = tuple(start)
        mono = []
        for layer, d in zip(layers, order):
            if sign[d] > 0:
                e = lat.edge(p, d)
                p = lat.shift(p, d)
            else:
                p = lat.shift(p, d, -1)
                e = lat.edge(p, d)
            mono.append(sys.var(layer, e))
        yield mono


def cup_polynomial(system: LayeredSystem, layers, cells, corner=None) -> tuple[PhasePolynomial, int]:
    """Sum of path monomials over ``cells``; returns the polynomial and the raw term count.

    ``corner`` (0/1 per direction) moves the start of every path to another
    corner of its cell, walking backwards along flagged directions.
    """
    lat = system.lattice
    terms = []
    for v, dirs in cells:
        if len(dirs) != len(layers):
            raise ValueError("cell dimension must equal the number of layers")
        terms.extend(_path_monomials(lat, system, v, dirs, layers, corner))
    return PhasePolynomial.from_terms(terms), len(terms)


def build_logical_CZ(system: LayeredSystem, layers=(1, 2), corner=None) -> PhasePolynomial:
    """Two CZ paths per face between two layers of a 2D toric code."""
    if system.lattice.D != 2:
        raise ValueError("build_logical_CZ needs a 2D lattice; use cup_polynomial for planes")
    _check_layers(system, layers)
    return cup_polynomial(system, layers, system.lattice.cells(2), corner)[0]


def build_logical_CnZ(system: LayeredSystem, layers=None, corner=None) -> PhasePolynomial:
    """``D!`` path monomials of degree ``D`` per ``D``-cube, one layer per path edge."""
    D = system.lattice.D
    if layers is None:
        if system.layers < D:
            raise ValueError(f"need at least {D} layers, have {system.layers}")
        layers = tuple(range(1, D + 1))
    if len(layers) != D:
        raise ValueError(f"need exactly {D} layers")
    _check_layers(system, layers)
    return cup_polynomial(system, layers, system.lattice.cells(D), corner)[0]


def hyperplane_polynomial(system: LayeredSystem) -> PhasePolynomial:
    """Degree ``D-1`` construction on layers ``1..D-1`` inside the hyperplane ``x_{D-1} = 0``."""
    lat = system.lattice
    D = lat.D
    cells = lat.cells(D - 1, directions=range(D - 1), fixed={D - 1: 0})
    return cup_polynomial(system, tuple(range(1, D)), cells)[0]


def _check_layers(system: LayeredSystem, layers) -> None:
    if len(set(layers)) != len(layers):
        raise ValueError("layers must be distinct")
    for layer in layers:
        if not 1 <= layer <= system.layers:
            raise ValueError(f"layer {layer} outside 1..{system.layers}")


# ---------------------------------------------------------------------------
# Flips and conjugation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class XFlip:
    """X-type operator given by an edge subset per layer (``{layer: bit array}``)."""

    system: LayeredSystem
    supports: tuple  # ((layer, frozenset of edges), ...)

    @classmethod
    def make(cls, system: LayeredSystem, per_layer: dict) -> XFlip:
        sup = []
        for layer, bits in sorted(per_layer.items()):
            edges = frozenset(int(e) for e in np.nonzero(np.asarray(bits))[0])
            sup.append((layer, edges))
        return cls(system, tuple(sup))

    def variables(self) -> frozenset:
        return frozenset(self.system.var(layer, e) for layer, edges in self.supports for e in edges)

    def is_closed(self) -> bool:
        """Each layer's support has even overlap with every face (commutes with plaquettes)."""
        lat = self.system.lattice
        for _, edges in self.supports:
            v = np.zeros(lat.num_edges, np.int64)
            v[list(edges)] = 1
            if ((lat.face_matrix.astype(np.int64) @ v) % 2).any():
                return False
        return True


def logical_flip(system: LayeredSystem, layer: int, direction: int | None = None) -> XFlip:
    """Logical X on ``layer``: a string (2D) or membrane (3D) crossing ``direction``."""
    d = system.lattice.D - 1 if direction is None else direction
    return XFlip.make(system, {layer: system.lattice.logical_cocycle(d)})


def star_flip(system: LayeredSystem, layer: int, vertex=None) -> XFlip:
    """A single X-star: a contractible flip with no logical content."""
    lat = system.lattice
    v = (0,) * lat.D if vertex is None else tuple(vertex)
    bits = np.zeros(lat.num_edges, np.uint8)
    bits[lat.star_edges(v)] = 1
    return XFlip.make(system, {layer: bits})


def conjugate_by_flip(P: PhasePolynomial, flip) -> PhasePolynomial:
    """``P(x + m) + P(x)`` for the flip's indicator ``m``, expanded symbolically."""
    m = flip.variables() if isinstance(flip, XFlip) else frozenset(flip)
    acc: set = set()
    for mono in P.monomials:
        hit = sorted(mono & m)
        if not hit:
            continue
        rest = mono - m
        for r in range(1, len(hit) + 1):
            for sub in itertools.combinations(hit, r):
                _toggle(acc, frozenset(rest | (set(hit) - set(sub))))
    return PhasePolynomial(frozenset(acc))


# ---------------------------------------------------------------------------
# Equivalence on the codespace
# ---------------------------------------------------------------------------


def restrict_to_cocycles(system: LayeredSystem, P: PhasePolynomial) -> PhasePolynomial:
    """Rewrite ``P`` in coordinates of each layer's cocycle space.

    Every layer's Z-basis codespace support is ``x = y B`` with ``B`` a basis
    of closed cochains. The result is constant exactly when ``P`` takes one
    value on all codespace basis states.
    """
    basis = system.lattice.cocycle_basis
    dim = basis.shape[0]
    forms = {}

    def form(v):
        if v not in forms:
            layer, e = system.unvar(v)
            forms[v] = [(layer - 1) * dim + j for j in np.nonzero(basis[:, e])[0]]
        return forms[v]

    acc: set = set()
    for mono in P.monomials:
        terms = {frozenset()}
        for v in mono:
            nxt: set = set()
            for t in terms:
                for y in form(v):
                    _toggle(nxt, t | {y})
            terms = nxt
        for t in terms:
            _toggle(acc, t)
    return PhasePolynomial(frozenset(acc))


def _plaquette_span_contains(system: LayeredSystem, linear: PhasePolynomial) -> bool:
    lat = system.lattice
    for layer in range(1, system.layers + 1):
        vec = np.zeros(lat.num_edges, np.uint8)
        for (v,) in (tuple(m) for m in linear.monomials):
            lyr, e = system.unvar(v)
            if lyr == layer:
                vec[e] = 1
        if vec.any() and not gf2.in_rowspace(lat.face_matrix, vec):
            return False
    return True


@dataclass(frozen=True)
class IdentityReport:
    D: int
    L: int
    residual: PhasePolynomial
    classification: str  # exact | stabilizer_equivalent | fail
    method: str
    global_phase: int

    def as_dict(self) -> dict:
        return {
            "D": self.D,
            "L": self.L,
            "residual_terms": len(self.residual),
            "residual_degree": self.residual.degree,
            "classification": self.classification,
            "method": self.method,
            "global_phase": "-1" if self.global_phase else "+1",
        }

    def dumps(self) -> str:
        return "\n".join(f"{k}: {v}" for k, v in self.as_dict().items())


def classify_residual(system: LayeredSystem, R: PhasePolynomial) -> tuple[str, str, int]:
    """Decide whether ``(-1)^R`` is trivial on the codespace.

    Returns ``(classification, method, constant)``. A residual of constant
    plus plaquette-supported linear terms is recognized directly; otherwise
    it is rewritten on the cocycle space and must reduce to a constant.
    """
    if not R:
        return "exact", "zero residual", 0
    const = int(frozenset() in R.monomials)
    if R.degree <= 1 and _plaquette_span_contains(system, R.homogeneous(1)):
        return "stabilizer_equivalent", "linear terms in plaquette span", const
    restricted = restrict_to_cocycles(system, R)
    if restricted.degree == 0:
        return "stabilizer_equivalent", "constant on the cocycle space", int(bool(restricted))
    return "fail", f"degree {restricted.degree} on the cocycle space", const


def verify_conjugation_identity(D: int, L: int = 2, flip: XFlip | None = None) -> IdentityReport:
    """Check ``C^{D-1}Z X_D C^{D-1}Z = X_D C^{D-2}Z`` on ``D`` layers.

    The residual is ``conjugate_by_flip(C^{D-1}Z, X_D)`` plus the degree
    ``D-1`` construction on layers ``1..D-1`` in the hyperplane crossed by
    ``X_D``. A custom ``flip`` replaces ``X_D``; then the residual is the
    conjugation difference alone, which must carry no logical content.
    """
    if D not in (2, 3) or L not in (2, 3):
        raise ValueError("identity check supports D in {2, 3} and L in {2, 3}")
    system = LayeredSystem(TorusLattice(D, L), D)
    P = build_logical_CnZ(system)
    if flip is None:
        R = conjugate_by_flip(P, logical_flip(system, D)) + hyperplane_polynomial(system)
    else:
        if not flip.is_closed():
            raise ValueError("flip does not commute with the plaquettes")
        R = conjugate_by_flip(P, flip)
    cls, method, const = classify_residual(system, R)
    return IdentityReport(D, L, R, cls, method, const)


# ---------------------------------------------------------------------------
# Statevector check (two 2D layers at L = 2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodespaceReport:
    preserved: bool
    phases: dict  # logical bits (layer1 dirs..., layer2 dirs...) -> +1/-1
    offending: tuple | None
    bilinear: np.ndarray | None  # B with phase = (-1)^{c1 B c2}, if the table has that form

    def as_dict(self) -> dict:
        return {
            "preserved": self.preserved,
            "phases": {"".join(map(str, k)): v for k, v in sorted(self.phases.items())},
            "offending": None if self.offending is None else "".join(map(str, self.offending)),
            "bilinear": None if self.bilinear is None else self.bilinear.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _layered_basis_state(system: LayeredSystem, bits) -> np.ndarray:
    code = build_toric_layer(system.lattice)
    D = system.lattice.D
    psi = np.ones(1, complex)
    for layer in range(system.layers):
        psi = np.kron(psi, logical_state(code, bits[layer * D : (layer + 1) * D]))
    return psi


def apply_phase_polynomial(sv: StateVector, system: LayeredSystem, P: PhasePolynomial) -> None:
    """Apply ``(-1)^P`` as a product of multi-controlled Z gates."""
    for mono in sorted(P.monomials, key=lambda m: (len(m), sorted(m))):
        if not mono:
            sv.amplitudes *= -1.0
            continue
        sv.apply_gate("MCZ", *(_label(system, v) for v in sorted(mono)))


def _label(system: LayeredSystem, v: int) -> str:
    layer, e = system.unvar(v)
    return f"L{layer}e{e}"


def statevector_codespace_check(system: LayeredSystem, P: PhasePolynomial, tol: float = 1e-9) -> CodespaceReport:
    """Apply ``(-1)^P`` to every layered logical basis state and read off phases."""
    if system.num_qubits > 20:
        raise ValueError(f"{system.num_qubits} qubits exceed the statevector budget of 20")
    labels = [_label(system, v) for v in range(system.num_qubits)]
    k = system.layers * system.lattice.D
    phases = {}
    for bits in itertools.product((0, 1), repeat=k):
        psi = _layered_basis_state(system, bits)
        sv = StateVector(labels, psi.copy())
        apply_phase_polynomial(sv, system, P)
        amp = np.vdot(psi, sv.amplitudes)
        if abs(abs(amp) - 1.0) > tol:
            return CodespaceReport(False, phases, bits, None)
        phases[bits] = 1 if amp.real > 0 else -1
    return CodespaceReport(True, phases, None, _bilinear_form(system, phases))


def _bilinear_form(system: LayeredSystem, phases: dict) -> np.ndarray | None:
    if system.layers != 2:
        return None
    D = system.lattice.D
    B = np.zeros((D, D), np.uint8)
    for i in range(D):
        for j in range(D):
            c = [0] * (2 * D)
            c[i] = c[D + j] = 1
            B[i, j] = phases[tuple(c)] == -1
    for bits, ph in phases.items():
        c1 = np.array(bits[:D])
        c2 = np.array(bits[D:])
        if int(c1 @ B @ c2) % 2 != (ph == -1):
            return None
    return B


def predicted_phases(system: LayeredSystem, P: PhasePolynomial) -> dict:
    """Phases from evaluating ``P`` on the cocycle representatives of each logical state."""
    lat = system.lattice
    E = lat.num_edges
    D = lat.D
    out = {}
    for bits in itertools.product((0, 1), repeat=system.layers * D):
        x = np.zeros(system.num_qubits, np.uint8)
        for layer in range(system.layers):
            for d in range(D):
                if bits[layer * D + d]:
                    x[layer * E : (layer + 1) * E] ^= lat.logical_cocycle(d)
        out[bits] = -1 if P.evaluate(x) else 1
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def dumps_polynomial(system: LayeredSystem, P: PhasePolynomial) -> str:
    """One monomial per line as ``(layer,edge)`` tuples, lines sorted."""
    lines = []
    for m in P.monomials:
        parts = sorted(system.unvar(v) for v in m)
        lines.append(" ".join(f"({a},{b})" for a, b in parts) if parts else "1")
    return "\n".join(sorted(lines)) + ("\n" if lines else "")


def loads_polynomial(system: LayeredSystem, text: str) -> PhasePolynomial:
    terms = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "1":
            terms.append(())
            continue
        mono = []
        for tok in line.split():
            a, b = tok.strip("()").split(",")
            mono.append(system.var(int(a), int(b)))
        terms.append(mono)
    return PhasePolynomial.from_terms(terms)
