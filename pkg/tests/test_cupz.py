import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftgates import cupz
from ftgates.cupz import LayeredSystem, PhasePolynomial, TorusLattice

SYS2 = LayeredSystem(TorusLattice(2, 2), 2)
SYS3 = LayeredSystem(TorusLattice(3, 2), 3)
monos = st.frozensets(st.frozensets(st.integers(0, 11), max_size=3), max_size=12)


def test_lattice_counts():
    lat = TorusLattice(3, 3)
    assert lat.num_vertices == 27
    assert lat.num_edges == 81
    for i in range(lat.num_edges):
        v, d = lat.edge_of(i)
        assert lat.edge(v, d) == i


def test_toric_layer_is_a_code():
    for D in (2, 3):
        code = cupz.build_toric_layer(TorusLattice(D, 2))
        assert code.check() == []
        assert code.k == D


def test_logicals_are_closed():
    for d in range(3):
        f = cupz.XFlip.make(SYS3, {1: SYS3.lattice.logical_cocycle(d)})
        assert f.is_closed()
    assert cupz.star_flip(SYS3, 2).is_closed()


def test_var_round_trip():
    for v in range(SYS3.num_qubits):
        assert SYS3.var(*SYS3.unvar(v)) == v


def test_polynomial_degrees():
    assert cupz.build_logical_CZ(SYS2).degree == 2
    assert cupz.build_logical_CnZ(SYS3).degree == 3
    assert cupz.hyperplane_polynomial(SYS3).degree == 2


def test_raw_term_counts():
    lat2, lat3 = SYS2.lattice, SYS3.lattice
    assert cupz.cup_polynomial(SYS2, (1, 2), lat2.cells(2))[1] == 8
    assert cupz.cup_polynomial(SYS3, (1, 2, 3), lat3.cells(3))[1] == 48


@settings(max_examples=50, deadline=None)
@given(monos, monos, st.frozensets(st.integers(0, 11), max_size=6))
def test_conjugation_is_linear(a, b, m):
    P, Q = PhasePolynomial.from_terms(a), PhasePolynomial.from_terms(b)
    assert cupz.conjugate_by_flip(P + Q, m) == cupz.conjugate_by_flip(P, m) + cupz.conjugate_by_flip(Q, m)


@settings(max_examples=50, deadline=None)
@given(monos, st.frozensets(st.integers(0, 11), max_size=6))
def test_conjugation_lowers_degree(a, m):
    P = PhasePolynomial.from_terms(a)
    R = cupz.conjugate_by_flip(P, m)
    assert R.degree <= max(P.degree - 1, 0)


@settings(max_examples=50, deadline=None)
@given(monos, st.frozensets(st.integers(0, 11), max_size=6))
def test_conjugation_matches_evaluation(a, m):
    P = PhasePolynomial.from_terms(a)
    R = cupz.conjugate_by_flip(P, m)
    rng = np.random.default_rng(len(a))
    for _ in range(8):
        x = rng.integers(0, 2, 12)
        y = x.copy()
        y[list(m)] ^= 1
        assert R.evaluate(x) == P.evaluate(x) ^ P.evaluate(y)


@settings(max_examples=30, deadline=None)
@given(monos, st.frozensets(st.integers(0, 11), max_size=6))
def test_second_difference_along_same_flip_vanishes(a, m):
    # R(x) = P(x+m) + P(x) satisfies R(x+m) = R(x)
    P = PhasePolynomial.from_terms(a)
    R = cupz.conjugate_by_flip(P, m)
    assert cupz.conjugate_by_flip(R, m) == PhasePolynomial()
    assert cupz.conjugate_by_flip(cupz.conjugate_by_flip(R, m), m) == PhasePolynomial()


def test_2d_codespace_check():
    P = cupz.build_logical_CZ(SYS2)
    rep = cupz.statevector_codespace_check(SYS2, P)
    assert rep.preserved
    assert rep.bilinear.tolist() == [[0, 1], [1, 0]]
    assert rep.phases == cupz.predicted_phases(SYS2, P)


def test_plaquette_linear_terms_are_stabilizers():
    lat = SYS2.lattice
    face = lat.face_edges((0, 0), 0, 1)
    P = PhasePolynomial.from_terms([[SYS2.var(1, e)] for e in face])
    assert cupz.classify_residual(SYS2, P)[0] == "stabilizer_equivalent"


@pytest.mark.parametrize("D,L", [(2, 2), (2, 3), (3, 2)])
def test_identity(D, L):
    rep = cupz.verify_conjugation_identity(D, L)
    assert rep.classification in ("exact", "stabilizer_equivalent")


def test_contractible_control():
    rep = cupz.verify_conjugation_identity(3, 2, flip=cupz.star_flip(SYS3, 3))
    assert rep.classification in ("exact", "stabilizer_equivalent")
    assert rep.global_phase == 0


def test_missing_hyperplane_term_fails():
    P = cupz.build_logical_CnZ(SYS3)
    R = cupz.conjugate_by_flip(P, cupz.logical_flip(SYS3, 3))
    assert cupz.classify_residual(SYS3, R)[0] == "fail"


def test_other_corner_is_equivalent():
    for corner in itertools.product((0, 1), repeat=3):
        P = cupz.build_logical_CnZ(SYS3, corner=corner)
        R = cupz.conjugate_by_flip(P, cupz.logical_flip(SYS3, 3)) + cupz.hyperplane_polynomial(SYS3)
        assert cupz.classify_residual(SYS3, R)[0] != "fail", corner


def test_open_flip_rejected():
    bits = np.zeros(SYS3.lattice.num_edges, np.uint8)
    bits[0] = 1
    with pytest.raises(ValueError):
        cupz.verify_conjugation_identity(3, 2, flip=cupz.XFlip.make(SYS3, {3: bits}))


def test_polynomial_text_round_trip():
    P = cupz.build_logical_CnZ(SYS3)
    assert cupz.loads_polynomial(SYS3, cupz.dumps_polynomial(SYS3, P)) == P


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        cupz.verify_conjugation_identity(4)
