import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from pmod.barcode import INF, Barcode, decompose
from pmod.errors import BudgetExceeded, ParameterError, UsageError
from pmod.module import NAT, REAL, TameModule
from pmod.oracles import bottleneck_distance, brute_force_interleaving_exists, search_space

from .strategies import barcodes, nat, real


def permutation_bottleneck(b1: Barcode, b2: Barcode):
    """Reference: try every matching by padding each side with diagonal slots."""
    xs, ys = b1.bars(), b2.bars()
    left = xs + [None] * len(ys)
    right = ys + [None] * len(xs)

    def cost(a, b):
        if a is None and b is None:
            return F(0)
        if a is None or b is None:
            bar = a or b
            return INF if bar[1] == INF else F(bar[1] - bar[0]) / 2
        if (a[1] == INF) != (b[1] == INF):
            return INF
        tail = 0 if a[1] == INF else abs(a[1] - b[1])
        return max(abs(a[0] - b[0]), tail)

    return min(max((cost(a, b) for a, b in zip(left, perm)), default=F(0))
               for perm in itertools.permutations(right))


def test_bottleneck_examples():
    a = Barcode.from_bars(REAL, [(0, 10)])
    assert bottleneck_distance(a, a) == 0
    assert bottleneck_distance(a, Barcode.from_bars(REAL, [(1, 11)])) == 1
    assert bottleneck_distance(Barcode.from_bars(REAL, [(0, 2)]), Barcode(REAL)) == 1
    assert bottleneck_distance(Barcode.from_bars(REAL, [(0, INF)]), Barcode(REAL)) == INF
    assert bottleneck_distance(Barcode.from_bars(REAL, [(0, INF)]),
                               Barcode.from_bars(REAL, [(F(1, 2), INF)])) == F(1, 2)


def test_bottleneck_kind_mismatch():
    with pytest.raises(UsageError):
        bottleneck_distance(Barcode(REAL), Barcode(NAT))


@settings(max_examples=150)
@given(barcodes(max_bars=3), barcodes(max_bars=3))
def test_bottleneck_matches_permutation_search(b1, b2):
    assert bottleneck_distance(b1, b2) == permutation_bottleneck(b1, b2)


@given(barcodes(max_bars=3), barcodes(max_bars=3))
def test_bottleneck_is_symmetric(b1, b2):
    assert bottleneck_distance(b1, b2) == bottleneck_distance(b2, b1)


def test_brute_force_examples():
    m = real((0, 2), (1, 3))
    assert brute_force_interleaving_exists(m, m, 0)
    assert brute_force_interleaving_exists(real((0, 2)), real((1, 3)), 1)
    assert not brute_force_interleaving_exists(real((0, 2)), TameModule.zero(), F(1, 2))
    assert brute_force_interleaving_exists(real((0, 2)), TameModule.zero(), 1)
    assert brute_force_interleaving_exists(nat((3, 6)), nat((1, 4)), 2)
    assert not brute_force_interleaving_exists(nat((0, 6)), nat((0, 2)), 1)


def test_brute_force_agrees_with_bottleneck_on_samples():
    mods = [TameModule.zero(), real((0, 2)), real((1, 3)), real((0, 4)), real((0, 2), (1, 3)),
            real((0, 1), (2, 4))]
    for m, n in itertools.product(mods, repeat=2):
        d = bottleneck_distance(decompose(m), decompose(n))
        for eps in (0, F(1, 2), 1, F(3, 2), 2):
            assert brute_force_interleaving_exists(m, n, eps) == (d <= eps), (m, n, eps)


def test_search_space_counts_unpruned_blocks():
    # only f at the cell [0, 2) is nonzero: a 1x1 block, so 2 assignments in total
    assert search_space(real((0, 2)), real((1, 3)), 1) == 2
    # identity-sized 2x2 blocks on [1, 2) for both maps, 1x1 blocks on [0, 1) and [2, 3)
    m = real((0, 2), (1, 3))
    assert search_space(m, m, 0) == (2 ** (1 + 4 + 1)) ** 2


def test_budget_is_enforced():
    m = real((0, 4), (0, 4), (1, 3))
    with pytest.raises(BudgetExceeded):
        brute_force_interleaving_exists(m, m, 1, budget=10)


def test_brute_force_requires_binary_field():
    m = real((0, 2), p=3)
    with pytest.raises(ParameterError):
        brute_force_interleaving_exists(m, m, 1)
