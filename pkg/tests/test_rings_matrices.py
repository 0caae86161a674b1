from fractions import Fraction

import pytest

from hyperoct.rings import QQ, ZZ, GF, RingError, ring_by_name
from hyperoct.matrices import SparseMatrix


def test_ring_parsing():
    assert ring_by_name("q") == QQ
    assert ring_by_name("z") == ZZ
    assert ring_by_name("f5").characteristic == 5
    with pytest.raises(RingError):
        ring_by_name("f4")
    with pytest.raises(RingError):
        ring_by_name("r")


def test_prime_field_arithmetic():
    f = GF(7)
    assert f.div(f.from_int(3), f.from_int(5)) == (3 * pow(5, 5, 7)) % 7
    assert f.from_pair(1, 3) == pow(3, 5, 7)
    with pytest.raises(RingError):
        GF(7).from_pair(1, 7)


def test_integer_pairs():
    assert ZZ.from_pair(6, 3) == 2
    with pytest.raises(RingError):
        ZZ.from_pair(1, 2)
    assert QQ.from_pair(1, 2) == Fraction(1, 2)


def test_matmul_and_transpose():
    a = SparseMatrix.from_dense(ZZ, [[1, 2], [0, 1]])
    b = SparseMatrix.from_dense(ZZ, [[1, 0], [3, 1]])
    prod = a.matmul(b)
    assert prod.to_dense() == [[7, 2], [3, 1]]
    assert a.transpose().to_dense() == [[1, 0], [2, 1]]
    assert a.matmul(SparseMatrix.identity(ZZ, 2)).equals(a)


def test_add_scale_apply():
    a = SparseMatrix.from_dense(QQ, [[1, 0], [0, 2]])
    b = a.add(a.neg())
    assert b.is_zero_matrix()
    v = a.apply({0: Fraction(3), 1: Fraction(1, 2)})
    assert v == {0: Fraction(3), 1: Fraction(1)}


def test_submatrix_and_block_support():
    m = SparseMatrix.from_dense(ZZ, [[1, 0, 5], [0, 2, 0], [0, 0, 3]])
    sub = m.submatrix([0, 2], [0, 2])
    assert sub.to_dense() == [[1, 5], [0, 3]]
    assert m.restrict_rows_complement_is_zero([0, 2], [2])
    assert not m.restrict_rows_complement_is_zero([0], [1])
