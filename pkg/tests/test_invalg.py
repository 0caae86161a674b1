import random

import pytest

from hyperoct.rings import QQ, ZZ, GF
from hyperoct import invalg as ia


def test_c2_involution_is_identity():
    A = ia.cyclic_group_algebra(2, QQ)
    for i in range(2):
        assert A.involve(A.basis_vector(i)) == A.basis_vector(i)


def test_c3_involution_swaps_generators():
    A = ia.cyclic_group_algebra(3, QQ)
    assert A.involve(A.basis_vector(1)) == A.basis_vector(2)
    assert A.involve(A.basis_vector(2)) == A.basis_vector(1)
    assert A.multiply(A.basis_vector(1), A.basis_vector(2)) == A.basis_vector(0)


def test_trivial_group_over_integers():
    A = ia.cyclic_group_algebra(1, ZZ)
    assert A.dim == 1
    assert A.involve(A.unit) == A.unit
    assert A.eps(A.unit) == 1


def test_unit_neutral_and_involution_involutive():
    rng = random.Random(4)
    A = ia.symmetric_group_algebra(3, QQ)
    for _ in range(20):
        x = tuple(QQ.from_int(rng.randrange(-3, 4)) for _ in range(A.dim))
        assert A.multiply(A.unit, x) == x
        assert A.multiply(x, A.unit) == x
        assert A.involve(A.involve(x)) == x


def test_bad_group_tables_rejected():
    with pytest.raises(ia.AlgebraError):
        ia.group_algebra(("a", "b"), [[1, 1], [1, 1]], QQ)  # no identity
    with pytest.raises(ia.AlgebraError):
        ia.group_algebra(("a", "b"), [[0, 1], [1, 1]], QQ)  # b not invertible


def test_non_associative_structure_rejected():
    # x*x = y, x*y = e but y*x = 0, so (x x) x differs from x (x x)
    one, zero = QQ.one(), QQ.zero()
    e, x, y = (one, zero, zero), (zero, one, zero), (zero, zero, one)
    z = (zero, zero, zero)
    structure = [
        [e, x, y],
        [x, y, e],
        [y, z, z],
    ]
    ident = [e, x, y]
    with pytest.raises(ia.AlgebraError, match="associativity"):
        ia.InvolutiveAlgebra(QQ, ("e", "x", "y"), structure, e, ident)


def test_adapt_q_c3():
    A = ia.cyclic_group_algebra(3, QQ)
    B = ia.adapt_basis_to_augmentation(A)
    assert B.is_adapted()
    assert B.basis_names == ("1", "i1", "i2")
    # involution permutes the two ideal directions
    assert B.involve(B.basis_vector(1)) == B.basis_vector(2)
    # already adapted input comes back unchanged
    assert ia.adapt_basis_to_augmentation(B) is B


def test_adapt_requires_augmentation():
    A = ia.cyclic_group_algebra(3, QQ)
    stripped = ia.InvolutiveAlgebra(QQ, A.basis_names, A.structure, A.unit,
                                    A.involution, None)
    with pytest.raises(ia.AlgebraError):
        ia.adapt_basis_to_augmentation(stripped)


def test_adapt_over_integers_is_unimodular():
    A = ia.cyclic_group_algebra(3, ZZ)
    B = ia.adapt_basis_to_augmentation(A)
    assert B.is_adapted()
    for plane in B.structure:
        for row in plane:
            assert all(isinstance(v, int) for v in row)
    # products of ideal vectors have no unit component
    for i in range(1, B.dim):
        for j in range(1, B.dim):
            assert B.multiply(B.basis_vector(i), B.basis_vector(j))[0] == 0


def test_adapted_augmentation_values():
    B = ia.adapt_basis_to_augmentation(ia.klein_four_algebra(QQ))
    assert B.eps(B.basis_vector(0)) == QQ.one()
    for i in range(1, B.dim):
        assert B.eps(B.basis_vector(i)) == QQ.zero()


def test_dimension_mismatch_errors():
    A = ia.cyclic_group_algebra(2, QQ)
    with pytest.raises(ia.AlgebraError):
        A.multiply((QQ.one(),), A.unit)
    with pytest.raises(ia.AlgebraError):
        A.involve((QQ.one(),))


def test_tensor_bases():
    B = ia.adapt_basis_to_augmentation(ia.cyclic_group_algebra(3, QQ))
    full = ia.BasicTensorBasis(B, 1, "full")
    ideal = ia.BasicTensorBasis(B, 1, "ideal")
    assert len(full) == 9
    assert len(ideal) == 4
    assert full.tuples[0] == (0, 0)
    assert all(all(x >= 1 for x in t) for t in ideal.tuples)
    empty = ia.BasicTensorBasis(B, -1, "full")
    assert empty.tuples == [()]
    unadapted = ia.cyclic_group_algebra(3, QQ)
    with pytest.raises(ia.AlgebraError):
        ia.BasicTensorBasis(unadapted, 1, "ideal")


def test_ground_ring_algebra_over_f2():
    A = ia.ground_ring_algebra(GF(2))
    assert A.dim == 1
    assert A.eps(A.unit) == 1


@pytest.mark.parametrize("builtin", ["c2", "c4", "c6", "klein", "s3"])
def test_builtins_adapt_over_the_integers(builtin):
    A = ia.builtin_algebra(builtin, ZZ)
    B = ia.adapt_basis_to_augmentation(A)
    assert B.is_adapted()
    for plane in B.structure:
        for row in plane:
            assert all(isinstance(v, int) for v in row)
    for row in B.involution:
        assert all(isinstance(v, int) for v in row)
