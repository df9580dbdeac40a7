"""Shared builders and hypothesis strategies for the test suite."""
from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from pmod.barcode import Barcode, from_barcode
from pmod.exact import Matrix
from pmod.module import NAT, REAL, TameModule

F = Fraction


def real(*bars, p=2):
    return from_barcode(Barcode.from_bars(REAL, bars), p)


def nat(*bars, p=2):
    return from_barcode(Barcode.from_bars(NAT, bars), p)


def mat(rows, p=2, cols=None):
    return Matrix.from_rows(rows, p, cols)


rationals = st.builds(F, st.integers(-12, 12), st.integers(1, 4))
positive_rationals = st.builds(F, st.integers(1, 8), st.integers(1, 4))


@st.composite
def matrices(draw, rows, cols, p=2):
    return Matrix(rows, cols, p, [[draw(st.integers(0, p - 1)) for _ in range(cols)] for _ in range(rows)])


@st.composite
def raw_modules(draw, kind=REAL, p=2, max_grid=5, max_dim=3, lo=-4, hi=8):
    if kind == NAT:
        pool = st.integers(max(lo, 0), hi).map(F)
    else:
        pool = st.builds(F, st.integers(lo * 3, hi * 3), st.just(3))
    grid = sorted(draw(st.sets(pool, max_size=max_grid)))
    dims = [draw(st.integers(0, max_dim)) for _ in grid]
    maps = [draw(matrices(b, a, p)) for a, b in zip(dims, dims[1:])]
    return TameModule(kind, p, tuple(grid), tuple(dims), tuple(maps))


@st.composite
def barcodes(draw, kind=REAL, max_bars=4, lo=-4, hi=8):
    if kind == NAT:
        pts = st.integers(max(lo, 0), hi).map(F)
    else:
        pts = st.builds(F, st.integers(lo * 2, hi * 2), st.just(2))
    bars = []
    for _ in range(draw(st.integers(0, max_bars))):
        a, b = draw(pts), draw(pts)
        if a != b:
            bars.append((min(a, b), max(a, b), 1))
    return Barcode(kind, tuple(bars))
