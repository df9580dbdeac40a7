"""Deterministic random instances for tests and the ``gen`` subcommand.

Every generator takes either an integer seed or a ``random.Random``; the same
seed and parameters always give the same value.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .barcode import INF, Barcode, from_barcode
from .bridge import GradedPresentation
from .exact import DEFAULT_FIELD, Matrix
from .module import NAT, REAL, TameModule


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _points(lo, hi, kind: str, denominators: Sequence[int]) -> list[Fraction]:
    if kind == NAT:
        return [Fraction(k) for k in range(max(int(lo), 0), int(hi) + 1)]
    pts = set()
    for q in denominators:
        k0, k1 = int(Fraction(lo) * q), int(Fraction(hi) * q)
        pts.update(Fraction(k, q) for k in range(k0, k1 + 1) if lo <= Fraction(k, q) <= hi)
    return sorted(pts)


def random_barcode(seed, bars: int = 3, max_endpoint=10, kind: str = REAL, *, min_endpoint=0,
                   denominators: Sequence[int] = (1,), infinite_rate: float = 0.0) -> Barcode:
    """``bars`` intervals with endpoints drawn from the lattice pool in [min, max]."""
    rng = _rng(seed)
    pool = _points(min_endpoint, max_endpoint, kind, denominators)
    out = []
    if len(pool) < 2:
        return Barcode(kind)
    for _ in range(bars):
        if rng.random() < infinite_rate:
            out.append((rng.choice(pool), INF, 1))
            continue
        b, d = sorted(rng.sample(pool, 2))
        out.append((b, d, 1))
    return Barcode(kind, tuple(out))


def random_interval_module(seed, bars: int = 3, max_endpoint=10, kind: str = REAL, *,
                           p: int = DEFAULT_FIELD, **kwargs) -> TameModule:
    return from_barcode(random_barcode(seed, bars, max_endpoint, kind, **kwargs), p)


def random_matrix(rng: random.Random, rows: int, cols: int, p: int) -> Matrix:
    return Matrix(rows, cols, p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])


def random_raw_module(seed, kind: str = REAL, *, p: int = DEFAULT_FIELD, max_grid: int = 5,
                      max_dim: int = 3, min_endpoint=0, max_endpoint=6,
                      denominators: Sequence[int] = (1,)) -> TameModule:
    """Random grid, dimensions and transition matrices; not necessarily interval-sum shaped."""
    rng = _rng(seed)
    pool = _points(min_endpoint, max_endpoint, kind, denominators)
    size = rng.randint(0, min(max_grid, len(pool)))
    grid = sorted(rng.sample(pool, size))
    dims = [rng.randint(0, max_dim) for _ in grid]
    maps = [random_matrix(rng, b, a, p) for a, b in zip(dims, dims[1:])]
    return TameModule(kind, p, tuple(grid), tuple(dims), tuple(maps))


def random_presentation(seed, *, p: int = DEFAULT_FIELD, max_gens: int = 4, max_relations: int = 4,
                        max_degree: int = 8) -> GradedPresentation:
    """Homogeneous presentation with random coefficients on generators of low enough degree."""
    rng = _rng(seed)
    gens = tuple(rng.randint(0, max_degree) for _ in range(rng.randint(0, max_gens)))
    rels = []
    for _ in range(rng.randint(0, max_relations) if gens else 0):
        deg = rng.randint(min(gens), max_degree)
        coeffs = tuple(rng.randrange(p) if e <= deg else 0 for e in gens)
        rels.append((deg, coeffs))
    return GradedPresentation(p, gens, tuple(rels))
