"""Exact scalars and dense matrices over prime fields.

Parameter values (grid points, shifts, basepoints) are ``fractions.Fraction``;
coefficients live in a prime field F_p and are stored as plain ``int``
residues inside :class:`Matrix`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionError, ParameterError, ParseError

Rational = Fraction
DEFAULT_FIELD = 2


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not parameter values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"not a rational: {text!r}") from None
    if d == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(n, d)


def format_rational(value) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _check_step(eps: Fraction) -> None:
    if eps <= 0:
        raise ParameterError(f"step must be positive, got {format_rational(eps)}")


def floor_div(x, eps) -> int:
    """Return floor(x / eps) for eps > 0, rounding toward minus infinity."""
    x, eps = as_rational(x), as_rational(eps)
    _check_step(eps)
    return math.floor(x / eps)


def ceil_div(x, eps) -> int:
    x, eps = as_rational(x), as_rational(eps)
    _check_step(eps)
    return math.ceil(x / eps)


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_field(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"field modulus must be prime, got {p!r}")
    return p


@dataclass(frozen=True)
class FieldElement:
    residue: int
    p: int

    def __post_init__(self):
        check_field(self.p)
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.residue + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.residue - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(o - self.residue, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.residue * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.p)

    def inverse(self) -> FieldElement:
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.residue, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * FieldElement(o, self.p).inverse()

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue


class Matrix:
    """Immutable dense matrix over F_p.

    Shapes with a zero dimension are legal; an ``r x 0`` matrix is the unique
    map out of the zero space and a ``0 x c`` matrix the unique map into it.
    """

    __slots__ = ("rows", "cols", "p", "_data", "_hash")

    def __init__(self, rows: int, cols: int, p: int, data: Iterable[Iterable[int]] = ()):
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape {rows}x{cols}")
        self.rows, self.cols, self.p = rows, cols, p
        data = tuple(tuple(v % p for v in row) for row in data)
        if not data and rows:
            data = ((0,) * cols,) * rows
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError(f"entries do not fill a {rows}x{cols} matrix")
        self._data = data
        self._hash = None

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> Matrix:
        return cls(rows, cols, p)

    @classmethod
    def identity(cls, n: int, p: int) -> Matrix:
        return cls(n, n, p, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> Matrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, p, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_rows(self) -> tuple[tuple[int, ...], ...]:
        return self._data

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self._data[i][j], self.p)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.p, self._data) == (
            other.rows, other.cols, other.p, other._data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.p, self._data))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} mod {self.p}: {[list(r) for r in self._data]})"

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.p != other.p:
            raise DimensionError("matrices over different fields")
        p = self.p
        cols_b = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) % p for col in cols_b] for row in self._data]
        return Matrix(self.rows, other.cols, p, out)

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows, self.p, zip(*self._data) if self.rows else [])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows, self.p)

    def rank(self) -> int:
        return len(row_echelon(self._data, self.cols, self.p)[1])


def row_echelon(rows: Sequence[Sequence[int]], ncols: int, p: int):
    """Reduced row echelon form of ``rows`` over F_p.

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] % p), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][c], p - 2, p)
        work[r] = [v * inv % p for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] % p:
                f = work[i][c]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots
