import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from pmod.errors import OrderError, ParameterError, ValidationError
from pmod.exact import Matrix
from pmod.module import (NAT, REAL, TameModule, canonicalize, evaluate, is_lower_stable, pixelize,
                         rank_table, structure_map, translate)

from .strategies import mat, nat, positive_rationals, rationals, raw_modules, real

HALF = real((F(1, 2), F(5, 2)))
TWO_BARS = TameModule(REAL, 2, (0, 1, 2, 3), (1, 2, 1, 0),
                      (mat([[1], [0]]), mat([[0, 1]]), Matrix.zeros(0, 1, 2)))


def test_eval_examples():
    assert evaluate(HALF, 1) == (1, 0)
    assert HALF.eval(-3) == 0
    # half-open: the dimension drops at 5/2
    assert HALF.eval(F(5, 2)) == 0
    assert HALF.eval(F(5, 2) - F(1, 1000)) == 1


def test_structure_map_examples():
    assert structure_map(HALF, 1, 1) == Matrix.identity(1, 2)
    zero_target = real((0, 2)).structure_map(0, 3)
    assert zero_target.shape == (0, 1)
    # A1 @ A0 = [[0, 1]] @ [[1], [0]]
    assert TWO_BARS.structure_map(0, 2) == mat([[0]])


def test_structure_map_order():
    with pytest.raises(OrderError):
        HALF.structure_map(2, 1)


@given(raw_modules(), st.lists(st.builds(F, st.integers(-15, 27), st.just(3)), min_size=3, max_size=3))
def test_functoriality(m, pts):
    x, y, z = sorted(pts)
    assert m.structure_map(x, z) == m.structure_map(y, z) @ m.structure_map(x, y)


def test_validation():
    with pytest.raises(ValidationError):
        TameModule(REAL, 2, (1, 0), (1, 1), (Matrix.identity(1, 2),))
    with pytest.raises(ValidationError):
        TameModule(REAL, 2, (0, 1), (1, 2), (Matrix.identity(1, 2),))
    with pytest.raises(ValidationError):
        TameModule(NAT, 2, (F(1, 2),), (1,), ())
    with pytest.raises(ValidationError):
        TameModule(REAL, 4, (), (), ())


def test_translate_examples():
    assert translate(HALF, 0) == HALF
    assert canonicalize(translate(HALF, 1)) == real((F(-1, 2), F(3, 2)))


def test_translate_pointwise_random():
    rng = random.Random(7)
    m = TWO_BARS
    for _ in range(100):
        p = F(rng.randint(-12, 12), rng.randint(1, 4))
        q = F(rng.randint(-12, 12), rng.randint(1, 4))
        assert translate(m, p).eval(q) == m.eval(p + q)


def test_translate_nat():
    n = nat((3, 6), (1, 2))
    assert canonicalize(translate(n, 2)) == nat((1, 4))
    with pytest.raises(ParameterError):
        translate(n, F(1, 2))
    with pytest.raises(ParameterError):
        translate(n, -1)


@given(raw_modules(), rationals, rationals)
def test_translations_compose(m, p, q):
    assert canonicalize(translate(translate(m, q), p)) == canonicalize(translate(m, p + q))


@given(raw_modules(kind=NAT), st.integers(0, 5), st.integers(0, 5))
def test_nat_translations_compose(n, p, q):
    assert canonicalize(translate(translate(n, q), p)) == canonicalize(translate(n, p + q))
    for k in range(12):
        assert translate(n, p).eval(k) == n.eval(k + p)


def test_pixelize_examples():
    # the cell [k, k+1) takes the value at k: nonzero for k = 1, 2
    assert pixelize(HALF, 0, 1) == real((1, 3))
    pix = pixelize(HALF, 0, 1)
    assert pixelize(pix, 0, 1) == pix
    lattice_aligned = real((0, 2), (1, 4))
    assert pixelize(lattice_aligned, 0, 1) == lattice_aligned


def test_pixelize_rejects_bad_width():
    with pytest.raises(ParameterError):
        pixelize(HALF, 0, 0)


@given(raw_modules(), rationals, positive_rationals)
def test_pixelize_is_idempotent(m, x0, eps):
    pix = pixelize(m, x0, eps)
    assert pixelize(pix, x0, eps) == pix


@given(raw_modules(), rationals, positive_rationals, st.integers(-6, 12),
       st.integers(0, 99))
def test_pixelize_constant_on_cells(m, x0, eps, k, s):
    pix = pixelize(m, x0, eps)
    left = x0 + k * eps
    offset = eps * F(s, 100)
    assert pix.eval(left + offset) == pix.eval(left) == m.eval(left)
    assert pix.structure_map(left, left + offset).is_identity()


def test_lower_stability():
    assert is_lower_stable(real((0, 3), (1, 2)), 0)
    # M(-3/2 <= -1/2) is 1x0 for the interval [-1, 5)
    assert not is_lower_stable(real((-1, 5)), 0)
    assert is_lower_stable(TameModule.zero(), 17)
    assert is_lower_stable(real((-1, 5)), -1)


def test_canonicalize():
    assert canonicalize(TWO_BARS) == TWO_BARS
    padded = TameModule(REAL, 2, (0, 1, 2), (2, 2, 0),
                        (Matrix.identity(2, 2), Matrix.zeros(0, 2, 2)))
    assert canonicalize(padded) == TameModule(REAL, 2, (0, 2), (2, 0), (Matrix.zeros(0, 2, 2),))
    leading = TameModule(REAL, 2, (-1, 0), (0, 1), (Matrix.zeros(1, 0, 2),))
    assert canonicalize(leading) == TameModule(REAL, 2, (0,), (1,), ())


def test_rank_table_examples():
    r = rank_table(real((0, 2)))
    assert r(0, 1) == 0
    const = TameModule(REAL, 3, (0, 1, 2), (2, 2, 2), (Matrix.identity(2, 3),) * 2)
    r = rank_table(const)
    assert all(r(i, j) == 2 for i in range(3) for j in range(i, 3))
    assert rank_table(TWO_BARS)(0, 2) == 0


@given(raw_modules())
def test_rank_table_monotone(m):
    r = rank_table(m)
    n = len(m.grid)
    for i in range(n):
        assert r(i, i) == m.dims[i]
        for j in range(i, n):
            for k in range(j, n):
                assert r(i, k) <= min(r(i, j), r(j, k))
