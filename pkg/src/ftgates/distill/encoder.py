"""Encoding circuit for the [[15,1,3]] code, derived from its X check matrix.

The encoder has four phases:

P0  prepare the output qubit and the pivot qubits in |+>, the rest in |0>;
P1  the key CNOTs: output -> 1 (EPR pair), then every pivot -> 1;
P2  fan qubit 1 out onto the rest of the logical-X representative;
P3  fan every pivot out so that it regenerates its own X stabilizer.

Pivots are chosen so that the X-check matrix restricted to those columns is
invertible; each generator is then the unique row-space element that hits
exactly one pivot.
"""

from __future__ import annotations

import numpy as np

from .. import gf2
from ..codes import QRM15, StabilizerCode
from ..pauli import CliffordCircuit, Gate, NoisyGateSite, Prepare

OUT = "out"
FLAG = "flag"
DATA_QUBIT = 1
PIVOTS = (5, 7, 8, 11)


def _row_space_element(hx: np.ndarray, cols: list[int], pattern: tuple[int, ...], offset=None):
    """Unique ``v`` in ``offset + rowspace(hx)`` with ``v[cols] == pattern``."""
    words = gf2.span(hx)
    if offset is not None:
        words = words ^ gf2.as_bits(offset)[None, :]
    hits = [w for w in words if tuple(int(w[c]) for c in cols) == pattern]
    if len(hits) != 1:
        raise ValueError(f"pivot pattern {pattern} matched {len(hits)} row-space elements")
    return hits[0]


def encoder_structure(
    code: StabilizerCode = QRM15, pivots=PIVOTS, data: int = DATA_QUBIT
) -> tuple[list[int], dict[int, list[int]], dict[int, list[int]]]:
    """Derive the fan-out sets of the encoder.

    Returns:
        ``(spread, generators, fanouts)`` with 1-based qubit labels:
        ``spread`` is the logical-X representative that carries ``data`` and
        avoids every pivot, ``generators[p]`` the X stabilizer whose only
        pivot is ``p``, and ``fanouts[p]`` the CNOT targets of pivot ``p`` in
        the last phase.
    """
    hx = code.hx
    n = code.n
    cols = [p - 1 for p in pivots]
    if gf2.rank(hx[:, cols]) != len(cols):
        raise ValueError(f"pivot columns {pivots} are not independent in H_X")
    ones = np.ones(n, np.uint8)
    spread_vec = _row_space_element(hx, cols, (0,) * len(cols), offset=ones)
    if not spread_vec[data - 1]:
        raise ValueError("logical X representative misses the data qubit")
    spread = [i + 1 for i in np.nonzero(spread_vec)[0]]
    generators: dict[int, list[int]] = {}
    fanouts: dict[int, list[int]] = {}
    for j, p in enumerate(pivots):
        pattern = tuple(int(j == i) for i in range(len(cols)))
        g = _row_space_element(hx, cols, pattern)
        if not g[data - 1]:
            raise ValueError(f"generator for pivot {p} misses the data qubit")
        generators[p] = [i + 1 for i in np.nonzero(g)[0]]
        # pivot p reaches spread via CNOT(p -> data) and P2; the rest comes from P3
        rest = g ^ spread_vec
        rest[p - 1] ^= 1
        fanouts[p] = [i + 1 for i in np.nonzero(rest)[0]]
        if data in fanouts[p] or p in fanouts[p]:
            raise ValueError(f"fan-out of pivot {p} would touch the data qubit or itself")
    return spread, generators, fanouts


def key_site_name(control) -> str:
    return "epr" if control == OUT else f"key{control}"


def synthesize_encoder(
    data: int | None = None, flag: bool = False, code: StabilizerCode = QRM15
) -> CliffordCircuit:
    """Build the encoder as a circuit of noisy CNOT sites.

    Args:
        data: ``None`` for the distillation layout (output qubit in |+> and
            an EPR CNOT onto qubit 1). ``0`` or ``1`` drops the output qubit
            and prepares qubit 1 in that basis state instead.
        flag: insert ``CNOT(1 -> flag)`` before and after the four pivot
            CNOTs, then ``CNOT(p -> flag)`` for every pivot. The pivot CNOTs
            flip qubit 1 by the pivot parity, so the flag reads +1 only once
            that parity is added back. The flag is prepared here; measuring
            it is left to the caller.

    Every CNOT is a :class:`NoisyGateSite`. Site names: ``epr``, ``key<p>``,
    ``flag_in``, ``flag_out``, ``flag_par<p>``, ``fan1_<t>`` and ``fan<p>_<q>``.
    """
    spread, _, fanouts = encoder_structure(code)
    n = code.n
    labels: list = ([OUT] if data is None else []) + list(range(1, n + 1))
    if flag:
        labels.append(FLAG)
    c = CliffordCircuit(labels)

    # P0
    if data is None:
        c.append(Prepare(OUT, "+"))
    for q in range(1, n + 1):
        if q in PIVOTS:
            c.append(Prepare(q, "+"))
        elif q == DATA_QUBIT and data is not None:
            c.append(Prepare(q, str(int(data))))
        else:
            c.append(Prepare(q, "0"))
    if flag:
        c.append(Prepare(FLAG, "0"))

    # P1
    if data is None:
        c.append(NoisyGateSite(Gate("CNOT", (OUT, DATA_QUBIT)), "epr"))
    if flag:
        c.append(NoisyGateSite(Gate("CNOT", (DATA_QUBIT, FLAG)), "flag_in"))
    for p in PIVOTS:
        c.append(NoisyGateSite(Gate("CNOT", (p, DATA_QUBIT)), key_site_name(p)))
    if flag:
        c.append(NoisyGateSite(Gate("CNOT", (DATA_QUBIT, FLAG)), "flag_out"))
        for p in PIVOTS:
            c.append(NoisyGateSite(Gate("CNOT", (p, FLAG)), f"flag_par{p}"))

    # P2
    for t in spread:
        if t != DATA_QUBIT:
            c.append(NoisyGateSite(Gate("CNOT", (DATA_QUBIT, t)), f"fan1_{t}"))

    # P3
    for p in PIVOTS:
        for q in fanouts[p]:
            c.append(NoisyGateSite(Gate("CNOT", (p, q)), f"fan{p}_{q}"))
    return c

