import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftgates.pauli import (
    CliffordCircuit,
    Gate,
    Measure,
    PauliOperator,
    commutes,
    conjugate_gate,
    conjugate_through,
    multiply,
)

N = 3
paulis = st.builds(
    PauliOperator,
    st.lists(st.integers(0, 1), min_size=N, max_size=N).map(lambda v: np.array(v, np.uint8)),
    st.lists(st.integers(0, 1), min_size=N, max_size=N).map(lambda v: np.array(v, np.uint8)),
    st.integers(0, 3),
)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
S = np.diag([1, 1j])
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def embed(u, positions, n):
    """Dense unitary of ``u`` on 1-based ``positions`` (qubit 1 most significant)."""
    k = len(positions)
    others = [q for q in range(1, n + 1) if q not in positions]
    order = list(positions) + others
    full = np.kron(u, np.eye(2 ** (n - k)))
    perm = np.argsort(order)
    t = full.reshape([2] * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


def test_label_round_trip():
    p = PauliOperator.from_label("-iXYZ")
    assert p.letters() == "XYZ"
    assert np.allclose(p.to_matrix(), -1j * np.kron(np.kron([[0, 1], [1, 0]], [[0, -1j], [1j, 0]]), np.diag([1, -1])))


def test_y_is_hermitian():
    y = PauliOperator.from_label("Y").to_matrix()
    assert np.allclose(y, y.conj().T)


def test_bad_label():
    with pytest.raises(ValueError):
        PauliOperator.from_label("XQ")


@settings(max_examples=80, deadline=None)
@given(paulis, paulis)
def test_multiply_matches_matrices(a, b):
    assert np.allclose(multiply(a, b).to_matrix(), a.to_matrix() @ b.to_matrix())


@settings(max_examples=80, deadline=None)
@given(paulis, paulis)
def test_commutation_matches_matrices(a, b):
    ma, mb = a.to_matrix(), b.to_matrix()
    assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


@settings(max_examples=60, deadline=None)
@given(paulis, st.sampled_from(["H", "S", "SDG", "X", "Z"]), st.integers(1, N))
def test_one_qubit_conjugation(p, name, q):
    u1 = {"H": H, "S": S, "SDG": S.conj().T, "X": np.array([[0, 1], [1, 0]]), "Z": np.diag([1, -1])}[name]
    u = embed(u1, [q], N)
    out = conjugate_gate(p, name, [q])
    assert np.allclose(out.to_matrix(), u @ p.to_matrix() @ u.conj().T)


@settings(max_examples=60, deadline=None)
@given(paulis, st.permutations(range(1, N + 1)), st.sampled_from(["CNOT", "CZ"]))
def test_two_qubit_conjugation(p, order, name):
    c, t = order[:2]
    u2 = CNOT if name == "CNOT" else np.diag([1, 1, 1, -1])
    u = embed(u2, [c, t], N)
    out = conjugate_gate(p, name, [c, t])
    assert np.allclose(out.to_matrix(), u @ p.to_matrix() @ u.conj().T)


def test_conjugate_through_cnot_chain():
    c = CliffordCircuit([1, 2, 3], [Gate("CNOT", (1, 2)), Gate("CNOT", (2, 3))])
    p = conjugate_through(c, c.pauli({1: "X"}))
    assert p.x_support() == {1, 2, 3}
    z = conjugate_through(c, c.pauli({3: "Z"}))
    assert z.z_support() == {2, 3}


def test_conjugate_through_rejects_measurement():
    c = CliffordCircuit([1, 2], [Measure(1, "Z", "m"), Gate("CNOT", (1, 2))])
    with pytest.raises(ValueError):
        conjugate_through(c, c.pauli({1: "X"}))
    # starting after the measurement is fine
    assert conjugate_through(c, c.pauli({1: "X"}), 1).x_support() == {1, 2}
