import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from pmod.barcode import decompose, from_barcode
from pmod.bridge import (GradedPresentation, compose_fg, compose_gf, compose_gf_direct, discretize,
                         graded_to_nat, nat_to_graded, realify)
from pmod.errors import ParameterError, StabilityError, ValidationError
from pmod.exact import floor_div
from pmod.generate import random_barcode, random_presentation, random_raw_module
from pmod.module import NAT, REAL, TameModule, canonicalize, is_lower_stable, translate

from .strategies import nat, positive_rationals, rationals, raw_modules, real

HALF = real((F(1, 2), F(5, 2)))


def test_discretize_examples():
    assert discretize(HALF, 1) == nat((0, 2))
    assert discretize(HALF, F(1, 2)) == nat((0, 4))
    assert discretize(TameModule.zero(), 1) == TameModule.zero(NAT)


def test_discretize_errors():
    with pytest.raises(ParameterError):
        discretize(HALF, 0)
    with pytest.raises(StabilityError):
        discretize(real((-1, 2)), 1)


def test_realify_examples():
    assert realify(nat((0, 2)), 1) == real((-1, 1))
    assert realify(nat((0, 2)), F(1, 2)) == real((F(-1, 2), F(1, 2)))
    assert realify(TameModule.zero(NAT), 1) == TameModule.zero()


def test_composite_examples():
    assert compose_gf(HALF, 1) == real((-1, 1))
    assert compose_gf(TameModule.zero(), 1) == TameModule.zero()
    assert compose_fg(nat((3, 6)), 1) == nat((1, 4))
    assert compose_fg(nat((0, 2)), 1) == TameModule.zero(NAT)


def test_graded_examples():
    pres = nat_to_graded(nat((2, 5)))
    assert pres.generator_degrees == (2,)
    assert pres.relations == ((5, (1,)),)
    module = graded_to_nat(pres)
    # degree-n dimension of k[t]g / (t^3 g) with deg g = 2
    assert [module.eval(n) for n in range(7)] == [0, 0, 1, 1, 1, 0, 0]
    assert module == nat((2, 5))
    free = nat_to_graded(nat((0, float("inf"))))
    assert free.generator_degrees == (0,) and free.relations == ()
    assert nat_to_graded(TameModule.zero(NAT)) == GradedPresentation(2, (), ())
    assert graded_to_nat(GradedPresentation(2, (), ())) == TameModule.zero(NAT)


def test_graded_errors():
    with pytest.raises(ValidationError):
        GradedPresentation(2, (3,), ((1, (1,)),))
    with pytest.raises(ParameterError):
        graded_to_nat(GradedPresentation(2, (2,), ((5, (1,)),)), horizon=3)


def test_nat_roundtrip_random():
    rng = random.Random(5)
    for _ in range(200):
        n = from_barcode(random_barcode(rng, rng.randint(0, 8), 20, NAT, infinite_rate=0.2))
        assert canonicalize(graded_to_nat(nat_to_graded(n))) == canonicalize(n)


@given(raw_modules(kind=NAT, lo=0, hi=10))
def test_nat_roundtrip_raw_modules(n):
    # raw modules need not be interval-sum shaped, so compare the complete invariant
    back = graded_to_nat(nat_to_graded(n))
    assert decompose(back) == decompose(n)


def graded_profile(pres: GradedPresentation, horizon: int):
    m = graded_to_nat(pres, horizon)
    dims = [m.eval(d) for d in range(horizon + 1)]
    ranks = [m.structure_map(d, d + 1).rank() for d in range(horizon)]
    return dims, ranks


def test_graded_roundtrip_random():
    for seed in range(200):
        for p in (2, 3):
            pres = random_presentation(seed, p=p)
            horizon = pres.max_degree() + 2
            back = nat_to_graded(graded_to_nat(pres, horizon))
            assert graded_profile(back, horizon) == graded_profile(pres, horizon)


@given(raw_modules(), positive_rationals, st.integers(0, 30))
def test_discretize_formula(m, eps, n):
    assume(is_lower_stable(m, 0))
    assert discretize(m, eps).eval(n) == m.eval((n + 1) * eps)


@given(raw_modules(kind=NAT), positive_rationals, rationals)
def test_realify_formula(n, eps, x):
    expected = n.eval(floor_div(x, eps) + 1) if floor_div(x, eps) + 1 >= 0 else 0
    assert realify(n, eps).eval(x) == expected


@given(raw_modules(), positive_rationals, rationals)
def test_gf_formula(m, eps, x):
    assume(is_lower_stable(m, 0))
    k = floor_div(x, eps)
    expected = m.eval((k + 2) * eps) if x >= -eps else 0
    assert compose_gf(m, eps).eval(x) == expected


@given(raw_modules(), positive_rationals)
def test_gf_direct_agrees_with_composite(m, eps):
    assume(is_lower_stable(m, 0))
    assert compose_gf_direct(m, eps) == compose_gf(m, eps)


@given(raw_modules(kind=NAT), positive_rationals)
def test_fg_is_shift_by_two(n, eps):
    assert compose_fg(n, eps) == canonicalize(translate(n, 2))


@given(raw_modules(), rationals)
def test_translation_moves_lower_stability(m, x0):
    assert is_lower_stable(m, x0) == is_lower_stable(translate(m, x0), 0)
    assert canonicalize(translate(translate(m, x0), -x0)) == canonicalize(m)


def test_bridge_preserves_ranks_through_gf():
    for seed in range(50):
        m = random_raw_module(seed, REAL, min_endpoint=0, max_endpoint=6, denominators=(1, 2))
        gf = compose_gf(m, 1)
        for x in (F(-1), F(0), F(3, 2)):
            k = floor_div(x, 1)
            assert gf.structure_map(x, x + 2).rank() == \
                m.structure_map((k + 2), (floor_div(x + 2, 1) + 2)).rank()
