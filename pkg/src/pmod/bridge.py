"""Functors between real modules, natural modules and graded k[t]-modules.

``discretize`` samples a real module on the lattice (n + 1) * eps,
``realify`` spreads a natural module back over R with
N(floor(x / eps) + 1).  The graded side is handled through finite
homogeneous presentations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .barcode import INF, decompose
from .errors import ParameterError, StabilityError, UsageError, ValidationError
from .exact import Matrix, as_rational, ceil_div, check_field, format_rational, row_echelon
from .module import NAT, REAL, TameModule, canonicalize, is_lower_stable, pullback


def _positive(eps) -> Fraction:
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {format_rational(eps)}")
    return eps


def discretize(m: TameModule, eps, *, check_stable: bool = True) -> TameModule:
    """Natural module n -> M((n + 1) eps).

    ``check_stable=False`` skips the lower-stability precondition; the
    composite F G uses it because G N is only stable below -eps.
    """
    eps = _positive(eps)
    if m.kind != REAL:
        raise UsageError("discretize takes a real module")
    if check_stable and not is_lower_stable(m, 0):
        raise StabilityError("module is not lower stable at 0")
    cells = []
    for t in m.grid:
        n = max(ceil_div(t, eps) - 1, 0)
        cells.append((Fraction(n), (n + 1) * eps))
    return pullback(m, NAT, cells)


def realify(n: TameModule, eps) -> TameModule:
    """Real module x -> N(floor(x / eps) + 1), zero where that index is negative."""
    eps = _positive(eps)
    if n.kind != NAT:
        raise UsageError("realify takes a natural module")
    cells = [((t - 1) * eps, t) for t in n.grid]
    return pullback(n, REAL, cells)


def compose_gf(m: TameModule, eps) -> TameModule:
    return realify(discretize(m, eps), eps)


def compose_gf_direct(m: TameModule, eps) -> TameModule:
    """G F M computed from x -> M((floor(x / eps) + 2) eps) for x >= -eps.

    Below -eps the composite is zero because natural modules have no
    negative degrees.
    """
    eps = _positive(eps)
    if not is_lower_stable(m, 0):
        raise StabilityError("module is not lower stable at 0")
    cells = []
    for t in m.grid:
        k = max(ceil_div(t, eps), 1)
        cells.append(((k - 2) * eps, k * eps))
    return pullback(m, REAL, cells)


def compose_fg(n: TameModule, eps) -> TameModule:
    return discretize(realify(n, eps), eps, check_stable=False)


@dataclass(frozen=True)
class GradedPresentation:
    """Homogeneous presentation of a graded k[t]-module.

    Relation j has degree d_j and coefficients c_ij; it stands for
    sum_i c_ij t^(d_j - e_i) g_i where e_i is the degree of generator i.
    """

    p: int
    generator_degrees: tuple[int, ...]
    relations: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        check_field(self.p)
        gens = tuple(int(e) for e in self.generator_degrees)
        if any(e < 0 for e in gens):
            raise ValidationError("generator degrees must be non-negative")
        rels = []
        for deg, coeffs in self.relations:
            coeffs = tuple(int(c) % self.p for c in coeffs)
            if len(coeffs) != len(gens):
                raise ValidationError(f"relation has {len(coeffs)} coefficients for {len(gens)} generators")
            for e, c in zip(gens, coeffs):
                if c and e > deg:
                    raise ValidationError(f"relation of degree {deg} uses a generator of degree {e}")
            rels.append((int(deg), coeffs))
        object.__setattr__(self, "generator_degrees", gens)
        object.__setattr__(self, "relations", tuple(rels))

    def max_degree(self) -> int:
        degrees = list(self.generator_degrees) + [d for d, _ in self.relations]
        return max(degrees, default=-1)


def nat_to_graded(n: TameModule) -> GradedPresentation:
    """Minimal presentation: one generator per bar, one relation per finite bar."""
    if n.kind != NAT:
        raise UsageError("nat_to_graded takes a natural module")
    bars = decompose(n).bars()
    gens = tuple(int(b) for b, _ in bars)
    rels = []
    for k, (_, d) in enumerate(bars):
        if d != INF:
            rels.append((int(d), tuple(int(i == k) for i in range(len(bars)))))
    return GradedPresentation(n.p, gens, tuple(rels))


class _Quotient:
    """F_n / R_n in degree n: reduce generator vectors against relation echelon rows."""

    def __init__(self, pres: GradedPresentation, degree: int):
        p = pres.p
        self.p = p
        self.active = [i for i, e in enumerate(pres.generator_degrees) if e <= degree]
        rel_rows = [[c[i] for i in self.active] for d, c in pres.relations if d <= degree]
        self.rows, pivots = row_echelon(rel_rows, len(self.active), p)
        self.pivots = pivots
        pivot_set = set(pivots)
        self.basis = [self.active[k] for k in range(len(self.active)) if k not in pivot_set]

    def coordinates(self, gen: int) -> list[int]:
        p = self.p
        v = [int(g == gen) for g in self.active]
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                f = v[c]
                v = [(a - f * b) % p for a, b in zip(v, row)]
        pivot_set = set(self.pivots)
        return [v[k] for k in range(len(self.active)) if k not in pivot_set]


def graded_to_nat(pres: GradedPresentation, horizon: int | None = None) -> TameModule:
    """Natural module n -> degree-n part of the presented module, t acting as n <= n + 1."""
    top = pres.max_degree()
    if horizon is None:
        horizon = top + 1
    if horizon < top:
        raise ParameterError(f"horizon {horizon} is below the presentation degree {top}")
    if top < 0:
        return TameModule.zero(NAT, pres.p)
    quotients = [_Quotient(pres, n) for n in range(horizon + 1)]
    maps = []
    for q, q_next in zip(quotients, quotients[1:]):
        cols = [q_next.coordinates(g) for g in q.basis]
        rows = [[col[r] for col in cols] for r in range(len(q_next.basis))]
        maps.append(Matrix(len(q_next.basis), len(q.basis), pres.p, rows))
    grid = tuple(Fraction(n) for n in range(horizon + 1))
    dims = tuple(len(q.basis) for q in quotients)
    return canonicalize(TameModule(NAT, pres.p, grid, dims, tuple(maps)))
