"""Exact linear algebra helpers."""

from fractions import Fraction as F

import numpy as np
import pytest

from heatgen import rational


def test_rat_accepts_int_str_fraction():
    assert rational.rat(3) == F(3)
    assert rational.rat("4/6") == F(2, 3)
    assert rational.rat(F(1, 2)) == F(1, 2)


def test_rat_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        rational.rat(0.5)
    with pytest.raises(TypeError):
        rational.rat(True)


def test_matmul_and_trace():
    a = rational.matrix([[1, 2], [3, 4]])
    b = rational.matrix([[0, 1], [1, 0]])
    assert rational.matmul(a, b) == rational.matrix([[2, 1], [4, 3]])
    assert rational.trace(a) == 5
    assert rational.trace_product(a, b) == rational.trace(rational.matmul(a, b))


def test_commutator_antisymmetry():
    a = rational.matrix([[0, 1], [-1, 0]])
    b = rational.matrix([[1, 0], [0, -1]])
    ab = rational.commutator(a, b)
    ba = rational.commutator(b, a)
    assert ab == rational.scale(ba, F(-1))


def test_determinant_matches_cofactor_expansion():
    m = rational.matrix([[F(1, 2), 3, 0], [1, F(-2, 3), 4], [0, 5, 1]])
    # cofactor expansion along the first row
    det = F(1, 2) * (F(-2, 3) * 1 - 4 * 5) - 3 * (1 * 1 - 4 * 0)
    assert rational.determinant(m) == det


def test_determinant_singular():
    m = rational.matrix([[1, 2], [2, 4]])
    assert rational.determinant(m) == 0


def test_positive_definite():
    assert rational.is_positive_definite(rational.matrix([[2, 1], [1, 2]]))
    assert not rational.is_positive_definite(rational.matrix([[1, 2], [2, 1]]))
    assert not rational.is_positive_definite(rational.matrix([[0, 0], [0, 1]]))


def test_inverse_roundtrip():
    m = rational.matrix([[F(1, 2), 3], [1, F(-2, 3)]])
    assert rational.matmul(m, rational.inverse(m)) == rational.identity(2)


def test_inverse_singular_raises():
    with pytest.raises(ZeroDivisionError):
        rational.inverse(rational.matrix([[1, 1], [1, 1]]))


def test_span_decompose_solves_and_detects_outside():
    b1 = rational.matrix([[1, 0], [0, 0]])
    b2 = rational.matrix([[0, 1], [1, 0]])
    inside = rational.matrix([[F(2, 3), -1], [-1, 0]])
    outside = rational.matrix([[0, 0], [0, 1]])
    rank, sols = rational.span_decompose([b1, b2], [inside, outside])
    assert rank == 2
    assert sols[0] == (F(2, 3), F(-1))
    assert sols[1] is None


def test_span_decompose_reports_rank_deficiency():
    b1 = rational.matrix([[1, 0], [0, 1]])
    b2 = rational.matrix([[2, 0], [0, 2]])
    rank, _ = rational.span_decompose([b1, b2], [])
    assert rank == 1


def test_scaled_tensor_roundtrip():
    data = [[F(1, 3), F(-2, 5)], [F(0), F(7)]]
    t = rational.ScaledTensor.from_nested(data)
    assert t.to_fractions() == ((F(1, 3), F(-2, 5)), (F(0), F(7)))


def test_exact_einsum_matches_fraction_matmul():
    a = rational.matrix([[F(1, 2), 3], [0, F(5, 7)]])
    b = rational.matrix([[2, F(1, 3)], [F(-4, 9), 1]])
    ta = rational.ScaledTensor.from_nested(a)
    tb = rational.ScaledTensor.from_nested(b)
    prod = rational.exact_einsum("ij,jk->ik", ta, tb)
    assert prod.to_fractions() == rational.matmul(a, b)


def test_exact_einsum_object_fallback_is_exact():
    # Entries big enough that an int64 contraction would overflow.
    big = 2**70
    a = rational.ScaledTensor.from_nested([[big, 0], [0, big]])
    prod = rational.exact_einsum("ij,jk->ik", a, a)
    assert prod.array.dtype == object
    assert prod.to_fractions()[0][0] == F(big) ** 2


def test_scaled_tensor_equality_cross_denominator():
    a = rational.ScaledTensor.from_nested([F(1, 2), F(3, 2)])
    b = rational.ScaledTensor.from_nested([F(2, 4), F(6, 4)])
    assert a.equals(b)
    c = rational.ScaledTensor.from_nested([F(1, 2), F(5, 4)])
    assert not a.equals(c)


def test_scaled_tensor_is_zero_empty_and_filled():
    assert rational.ScaledTensor(np.zeros((2, 2), dtype=np.int64), 1).is_zero()
    assert not rational.ScaledTensor.from_nested([[0, 1]]).is_zero()
