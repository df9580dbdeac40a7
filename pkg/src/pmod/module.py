"""Tame persistence modules over (R, <=) and (N, <=).

A module is a finite ascending grid t_0 < ... < t_{m-1}, dimensions d_i and
transition matrices A_i: M(t_i) -> M(t_{i+1}).  It is zero below t_0, constant
on each [t_i, t_{i+1}) and constant (via identities) from t_{m-1} on.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import OrderError, ParameterError, UsageError, ValidationError
from .exact import DEFAULT_FIELD, Matrix, as_rational, check_field, floor_div, format_rational, ceil_div

REAL = "real"
NAT = "nat"
KINDS = (REAL, NAT)


@dataclass(frozen=True)
class TameModule:
    kind: str
    p: int
    grid: tuple[Fraction, ...]
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown index kind {self.kind!r}")
        try:
            check_field(self.p)
        except ParameterError as exc:
            raise ValidationError(str(exc)) from None
        grid = tuple(as_rational(t) for t in self.grid)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.dims) != len(grid):
            raise ValidationError(f"{len(grid)} grid points but {len(self.dims)} dims")
        if any(d < 0 for d in self.dims):
            raise ValidationError("dimensions must be non-negative")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValidationError("grid must be strictly ascending")
        if self.kind == NAT and any(t.denominator != 1 or t < 0 for t in grid):
            raise ValidationError("nat grids must consist of non-negative integers")
        if len(self.maps) != max(len(grid) - 1, 0):
            raise ValidationError(f"expected {max(len(grid) - 1, 0)} maps, got {len(self.maps)}")
        for i, a in enumerate(self.maps):
            want = (self.dims[i + 1], self.dims[i])
            if a.shape != want:
                raise ValidationError(
                    f"map {i} has shape {a.rows}x{a.cols}, dims require {want[0]}x{want[1]}")
            if a.p != self.p:
                raise ValidationError(f"map {i} is over F_{a.p}, module over F_{self.p}")

    @classmethod
    def zero(cls, kind: str = REAL, p: int = DEFAULT_FIELD) -> TameModule:
        return cls(kind, p, (), (), ())

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def cell(self, x) -> int:
        """Index of the grid cell containing x, or -1 below the grid."""
        return bisect_right(self.grid, as_rational(x)) - 1

    def dim_of_cell(self, c: int) -> int:
        return self.dims[c] if c >= 0 else 0

    def eval(self, x) -> int:
        return self.dim_of_cell(self.cell(x))

    def cell_map(self, ci: int, cj: int) -> Matrix:
        """Composite of transition matrices from cell ci to cell cj >= ci."""
        out = Matrix.identity(self.dim_of_cell(ci), self.p)
        if ci < 0:
            if cj < 0:
                return out
            out = Matrix.zeros(self.dims[0], 0, self.p)
            ci = 0
        for k in range(ci, cj):
            out = self.maps[k] @ out
        return out

    def structure_map(self, x, y) -> Matrix:
        x, y = as_rational(x), as_rational(y)
        if x > y:
            raise OrderError(f"structure map needs x <= y, got {format_rational(x)} > {format_rational(y)}")
        return self.cell_map(self.cell(x), self.cell(y))

    def critical_values(self) -> tuple[Fraction, ...]:
        return self.grid


def evaluate(m: TameModule, x) -> tuple[int, int]:
    """Return (dimension, cell index) of M at x."""
    c = m.cell(x)
    return m.dim_of_cell(c), c


def structure_map(m: TameModule, x, y) -> Matrix:
    return m.structure_map(x, y)


def pullback(m: TameModule, kind: str, cells: Sequence[tuple[Fraction, Fraction]]) -> TameModule:
    """Build N with N(s) = M(u) on each cell starting at s.

    ``cells`` pairs each new grid point s_j with a sample point u_j of M;
    samples must be non-decreasing.  Consecutive cells with equal s keep the
    last sample.  N is zero below the first s_j, so callers must ensure the
    sampled values vanish there.
    """
    merged: dict[Fraction, Fraction] = {}
    for s, u in sorted(cells):
        merged[as_rational(s)] = as_rational(u)
    grid = sorted(merged)
    samples = [merged[s] for s in grid]
    dims = [m.eval(u) for u in samples]
    maps = [m.structure_map(a, b) for a, b in zip(samples, samples[1:])]
    return canonicalize(TameModule(kind, m.p, tuple(grid), tuple(dims), tuple(maps)))


def canonicalize(m: TameModule) -> TameModule:
    """Drop grid points whose incoming map is a square identity.

    The point below the grid counts as a zero space, so leading zero-dimensional
    points disappear as well.
    """
    grid, dims, maps = [], [], []
    prev_dim = 0
    for i, t in enumerate(m.grid):
        incoming = m.maps[i - 1] if i > 0 else None
        d = m.dims[i]
        redundant = d == prev_dim and (d == 0 if incoming is None else incoming.is_identity())
        if redundant:
            continue
        if grid:
            # composite of the dropped identities is the map itself
            maps.append(m.structure_map(grid[-1], t))
        grid.append(t)
        dims.append(d)
        prev_dim = d
    return TameModule(m.kind, m.p, tuple(grid), tuple(dims), tuple(maps))


def modules_equal(a: TameModule, b: TameModule) -> bool:
    return canonicalize(a) == canonicalize(b)


def translate(m: TameModule, shift) -> TameModule:
    """The shifted module T_p M with T_p M(q) = M(p + q)."""
    shift = as_rational(shift)
    if m.kind == REAL:
        grid = tuple(t - shift for t in m.grid)
        return TameModule(REAL, m.p, grid, m.dims, m.maps)
    if shift.denominator != 1 or shift < 0:
        raise ParameterError(f"nat modules shift by non-negative integers, got {format_rational(shift)}")
    if shift == 0:
        return m
    cells = [(max(t - shift, Fraction(0)), max(t, shift)) for t in m.grid]
    return pullback(m, NAT, cells)


def pixelize(m: TameModule, x0, eps) -> TameModule:
    """Module constant on [x0 + k eps, x0 + (k+1) eps), sampling M at the left lattice point."""
    x0, eps = as_rational(x0), as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"pixel width must be positive, got {format_rational(eps)}")
    if m.kind != REAL:
        raise UsageError("pixelize applies to real modules")
    lattice = [x0 + ceil_div(t - x0, eps) * eps for t in m.grid]
    return pullback(m, REAL, [(ell, ell) for ell in lattice])


def pixel_point(x, x0, eps) -> Fraction:
    """Largest lattice point x0 + k eps that is <= x."""
    x0, eps = as_rational(x0), as_rational(eps)
    return x0 + floor_div(as_rational(x) - x0, eps) * eps


def lattice_ceiling(x, x0, eps) -> Fraction:
    """Smallest lattice point x0 + k eps that is >= x."""
    x0, eps = as_rational(x0), as_rational(eps)
    return x0 + ceil_div(as_rational(x) - x0, eps) * eps


def is_lower_stable(m: TameModule, x0) -> bool:
    """True iff every structure map strictly below x0 is an isomorphism.

    The module is zero below its grid, so this holds exactly when no cell that
    starts below x0 carries a nonzero space.
    """
    if m.kind != REAL:
        raise UsageError("lower stability is defined for real modules")
    x0 = as_rational(x0)
    return all(d == 0 for t, d in zip(m.grid, m.dims) if t < x0)


@dataclass(frozen=True)
class RankTable:
    dims: tuple[int, ...]
    ranks: tuple[tuple[int, ...], ...]

    def __call__(self, i: int, j: int) -> int:
        """Rank of M(t_i <= t_j); index -1 and len(grid) mean below and past the grid."""
        n = len(self.dims)
        if i < 0 or j >= n:
            return 0
        if i > j:
            raise OrderError("rank table is indexed by i <= j")
        return self.ranks[i][j - i]


def rank_table(m: TameModule) -> RankTable:
    n = len(m.grid)
    rows = []
    for i in range(n):
        comp = Matrix.identity(m.dims[i], m.p)
        row = [comp.rank()]
        for j in range(i, n - 1):
            comp = m.maps[j] @ comp
            row.append(comp.rank())
        rows.append(tuple(row))
    return RankTable(m.dims, tuple(rows))
