"""Barcodes and interval decomposition of tame modules."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ValidationError
from .exact import DEFAULT_FIELD, Matrix, as_rational, row_echelon
from .module import KINDS, NAT, TameModule, rank_table

INF = math.inf


def _death_key(d):
    return (1, 0) if d == INF else (0, d)


def interval_key(bar: tuple) -> tuple:
    return (bar[0], _death_key(bar[1]))


@dataclass(frozen=True)
class Barcode:
    """Multiset of half-open intervals [birth, death), kept in canonical order.

    ``intervals`` holds ``(birth, death, multiplicity)`` triples sorted by
    (birth, death) with equal intervals merged; ``death`` may be ``INF``.
    """

    kind: str
    intervals: tuple[tuple[Fraction, object, int], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown index kind {self.kind!r}")
        counts: Counter = Counter()
        for bar in self.intervals:
            b, d, *rest = bar
            mult = rest[0] if rest else 1
            b = as_rational(b)
            d = INF if d == INF or d is None else as_rational(d)
            if not d > b:
                raise ValidationError(f"empty interval [{b}, {d})")
            if mult < 1:
                raise ValidationError("multiplicities must be positive")
            if self.kind == NAT and (b.denominator != 1 or b < 0 or (d != INF and d.denominator != 1)):
                raise ValidationError("nat barcodes need non-negative integer endpoints")
            counts[(b, d)] += mult
        canon = tuple(sorted(((b, d, m) for (b, d), m in counts.items()), key=interval_key))
        object.__setattr__(self, "intervals", canon)

    @classmethod
    def from_bars(cls, kind: str, bars: Iterable[tuple]) -> Barcode:
        return cls(kind, tuple((b, d, 1) for b, d in bars))

    def bars(self) -> list[tuple[Fraction, object]]:
        """Intervals expanded by multiplicity, in canonical order."""
        return [(b, d) for b, d, m in self.intervals for _ in range(m)]

    def __len__(self):
        return sum(m for _, _, m in self.intervals)

    def endpoints(self) -> list[Fraction]:
        pts = set()
        for b, d, _ in self.intervals:
            pts.add(b)
            if d != INF:
                pts.add(d)
        return sorted(pts)


def from_barcode(bc: Barcode, p: int = DEFAULT_FIELD) -> TameModule:
    """Direct sum of interval modules, bars ordered canonically in every space."""
    bars = bc.bars()
    grid = bc.endpoints()
    active = [[k for k, (b, d) in enumerate(bars) if b <= t < d] for t in grid]
    maps = []
    for src, dst in zip(active, active[1:]):
        pos = {k: r for r, k in enumerate(dst)}
        rows = [[0] * len(src) for _ in dst]
        for c, k in enumerate(src):
            if k in pos:
                rows[pos[k]][c] = 1
        maps.append(Matrix(len(dst), len(src), p, rows))
    return TameModule(bc.kind, p, tuple(grid), tuple(len(a) for a in active), tuple(maps))


def _extend_to_basis(vectors: list[list[int]], dim: int, p: int) -> list[list[int]]:
    """Standard basis vectors completing the independent ``vectors`` to a basis."""
    _, pivots = row_echelon(vectors, dim, p)
    return [[int(i == j) for i in range(dim)] for j in range(dim) if j not in pivots]


def decompose(m: TameModule) -> Barcode:
    """Barcode of M by left-to-right column reduction with the elder rule.

    Each live bar carries a vector in the current space.  Crossing a grid
    point, the images are reduced oldest first; a column that reduces to zero
    is a combination of older bars and its bar dies there.
    """
    p = m.p
    bars: list[tuple[Fraction, object]] = []
    if not m.grid:
        return Barcode(m.kind)
    # live: list of (birth, vector in current space), oldest first
    live = [(m.grid[0], [int(i == j) for i in range(m.dims[0])]) for j in range(m.dims[0])]
    for i, a in enumerate(m.maps):
        t_next = m.grid[i + 1]
        dim = m.dims[i + 1]
        images = []
        for birth, v in live:
            images.append((birth, [sum(a[r, c] * v[c] for c in range(len(v))) % p for r in range(dim)]))
        kept: list[tuple[Fraction, list[int]]] = []
        pivot_of: dict[int, list[int]] = {}
        for birth, w in images:
            w = list(w)
            # eliminate against older survivors; adds only older columns to younger ones
            for r in range(dim):
                if w[r] and r in pivot_of:
                    col = pivot_of[r]
                    f = w[r] * pow(col[r], p - 2, p) % p
                    w = [(x - f * y) % p for x, y in zip(w, col)]
            lead = next((r for r in range(dim) if w[r]), None)
            if lead is None:
                bars.append((birth, t_next))
                continue
            pivot_of[lead] = w
            kept.append((birth, w))
        new = _extend_to_basis([w for _, w in kept], dim, p)
        live = kept + [(t_next, v) for v in new]
    bars.extend((birth, INF) for birth, _ in live)
    return Barcode(m.kind, tuple((b, d, 1) for b, d in bars))


def barcode_from_ranks(m: TameModule) -> Barcode:
    """Barcode read off the rank table by inclusion-exclusion."""
    r = rank_table(m)
    n = len(m.grid)
    out = []
    for i in range(n):
        for j in range(i + 1, n + 1):
            mult = r(i, j - 1) - r(i, j) - r(i - 1, j - 1) + r(i - 1, j)
            if mult:
                death = m.grid[j] if j < n else INF
                out.append((m.grid[i], death, mult))
    return Barcode(m.kind, tuple(out))
