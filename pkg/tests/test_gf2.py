import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ftgates import gf2

bit_matrices = st.tuples(st.integers(1, 6), st.integers(1, 9)).flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
)


def test_row_reduce_identity():
    red, piv = gf2.row_reduce(np.eye(4, dtype=np.uint8))
    assert piv == [0, 1, 2, 3]
    assert np.array_equal(red, np.eye(4, dtype=np.uint8))


def test_rank_of_dependent_rows():
    m = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert gf2.rank(m) == 2


def test_span_size():
    m = [[1, 1, 0, 0], [0, 0, 1, 1]]
    s = gf2.span(m)
    assert s.shape == (4, 4)
    assert {tuple(r) for r in s} == {(0, 0, 0, 0), (1, 1, 0, 0), (0, 0, 1, 1), (1, 1, 1, 1)}


@settings(max_examples=60, deadline=None)
@given(bit_matrices)
def test_rank_nullity(m):
    assert gf2.rank(m) + gf2.nullspace(m).shape[0] == m.shape[1]


@settings(max_examples=60, deadline=None)
@given(bit_matrices)
def test_nullspace_is_kernel(m):
    ns = gf2.nullspace(m)
    if ns.size:
        assert not ((m.astype(int) @ ns.T.astype(int)) % 2).any()


@settings(max_examples=60, deadline=None)
@given(bit_matrices)
def test_rows_lie_in_rowspace(m):
    for row in m:
        assert gf2.in_rowspace(m, row)
