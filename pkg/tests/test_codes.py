import numpy as np

from ftgates import gf2
from ftgates.codes import QRM15, STEANE7, dumps_checks, loads_checks, min_weight_logical_at_most, syndrome
from ftgates.pauli import PauliOperator


def test_qrm_parameters():
    assert QRM15.n == 15
    assert QRM15.k == 1
    assert QRM15.check() == []
    assert gf2.rank(QRM15.hx) == 4
    assert gf2.rank(QRM15.hz) == 10


def test_qrm_x_checks_are_z_checks():
    for row in QRM15.hx:
        assert gf2.in_rowspace(QRM15.hz, row)


def test_qrm_distance_three():
    assert not min_weight_logical_at_most(QRM15, 2)
    assert min_weight_logical_at_most(QRM15, 3)


def test_steane():
    assert STEANE7.k == 1
    assert STEANE7.check() == []
    assert not min_weight_logical_at_most(STEANE7, 2)


def test_single_x_error_has_unique_syndrome():
    seen = set()
    for q in range(1, 16):
        _, sz = syndrome(QRM15, PauliOperator.from_support(15, x=[q]))
        seen.add(tuple(sz))
    assert len(seen) == 15


def test_transversal_logicals():
    assert QRM15.is_logical(QRM15.logical_x[0])
    assert QRM15.is_logical(QRM15.logical_z[0])
    assert not QRM15.in_stabilizer_group(QRM15.logical_z[0])


def test_check_text_round_trip():
    again = loads_checks(dumps_checks(QRM15))
    assert np.array_equal(again.hx, QRM15.hx)
    assert np.array_equal(again.hz, QRM15.hz)
    assert again.k == 1
