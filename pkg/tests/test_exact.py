from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from pmod.errors import DimensionError, ParameterError
from pmod.exact import FieldElement, Matrix, as_rational, ceil_div, floor_div, format_rational, parse_rational

from .strategies import matrices, mat, positive_rationals, rationals


@pytest.mark.parametrize("x, eps, expected", [
    (F(5, 2), 1, 2),
    (F(-1, 2), 1, -1),
    # 7/3 / (1/2) = 14/3 and 14 // 3 = 4
    (F(7, 3), F(1, 2), 14 // 3),
])
def test_floor_div(x, eps, expected):
    assert floor_div(x, eps) == expected


@pytest.mark.parametrize("x, eps, expected", [
    (F(5, 2), 1, 3),
    (2, 1, 2),
    # -14/3 ceiled, via ceil(x) = -floor(-x)
    (F(-7, 3), F(1, 2), -(14 // 3)),
])
def test_ceil_div(x, eps, expected):
    assert ceil_div(x, eps) == expected


@pytest.mark.parametrize("eps", [0, -1, F(-1, 2)])
def test_nonpositive_step_is_rejected(eps):
    with pytest.raises(ParameterError):
        floor_div(1, eps)
    with pytest.raises(ParameterError):
        ceil_div(1, eps)


@given(rationals, positive_rationals)
def test_floor_brackets_x(x, eps):
    k = floor_div(x, eps)
    assert eps * k <= x < eps * (k + 1)


@given(rationals, positive_rationals)
def test_ceil_is_negated_floor(x, eps):
    assert ceil_div(x, eps) == -floor_div(-x, eps)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_rational_text_roundtrip():
    assert parse_rational("2/4") == F(1, 2)
    assert format_rational(parse_rational("2/4")) == "1/2"
    assert format_rational(F(-6, 3)) == "-2"


@pytest.mark.parametrize("p", [2, 3, 1009])
def test_every_nonzero_element_is_invertible(p):
    for a in range(1, p):
        x = FieldElement(a, p)
        assert x * x.inverse() == FieldElement(1, p)


def test_field_axioms_small():
    p = 3
    elems = [FieldElement(a, p) for a in range(p)]
    for a in elems:
        for b in elems:
            assert a + b == b + a
            assert a * b == b * a
            for c in elems:
                assert a * (b + c) == a * b + a * c
        assert a + (-a) == FieldElement(0, p)


def test_composite_modulus_is_refused():
    with pytest.raises(ParameterError):
        FieldElement(1, 4)


def test_identity_is_unit_of_multiply():
    a = mat([[1, 0, 1], [1, 1, 0]])
    assert Matrix.identity(2, 2) @ a == a
    assert a @ Matrix.identity(3, 2) == a


def test_rank_examples():
    assert mat([[1, 0], [0, 1]]).rank() == 2
    # row reduction: second row minus first vanishes
    assert mat([[1, 1], [1, 1]]).rank() == 1
    assert mat([[1, 1], [1, 1]], p=3).rank() == 1
    assert mat([[1, 2], [2, 1]], p=3).rank() == 1


def test_empty_shapes():
    into_zero = Matrix.zeros(0, 3, 2)
    out_of_zero = Matrix.zeros(2, 0, 2)
    through_zero = out_of_zero @ into_zero
    assert through_zero.shape == (2, 3) and through_zero.is_zero()
    assert (into_zero @ Matrix.zeros(3, 0, 2)) == Matrix.identity(0, 2)
    assert into_zero.rank() == 0


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        mat([[1, 0]]) @ mat([[1, 0]])


shapes = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))


@given(shapes.flatmap(lambda s: st.tuples(matrices(s[0], s[1]), matrices(s[1], s[2]))))
def test_rank_of_product_is_bounded(ab):
    a, b = ab
    assert (a @ b).rank() <= min(a.rank(), b.rank())


@given(shapes.flatmap(lambda s: st.tuples(matrices(s[0], s[1], 3), matrices(s[1], s[2], 3),
                                          matrices(s[2], s[0], 3))))
def test_multiply_is_associative(abc):
    a, b, c = abc
    assert (a @ b) @ c == a @ (b @ c)


@given(st.integers(1, 4).flatmap(lambda r: st.tuples(matrices(r, 3), st.permutations(range(r)))))
def test_rank_ignores_row_order(data):
    a, perm = data
    rows = a.to_rows()
    assert Matrix(a.rows, a.cols, a.p, [rows[i] for i in perm]).rank() == a.rank()
