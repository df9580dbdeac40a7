"""Interleaving certificates and their exact verifiers.

A :class:`ModuleMap` with shift eps has components f_x: M(x) -> N(x + eps),
stored as one block per cell of a grid refining M's critical values and N's
critical values moved back by eps.  Everything is piecewise constant, so the
verifiers only have to look at finitely many points.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .barcode import decompose
from .bridge import compose_fg, compose_gf, discretize
from .errors import ParameterError, PreconditionError, StabilityError, UsageError, ValidationError
from .exact import Matrix, as_rational, ceil_div, floor_div, format_rational
from .module import (NAT, TameModule, is_lower_stable, lattice_ceiling, pixel_point,
                     pixelize, translate)

STRONG = "strong"
WEAK = "weak"


def _shift_value(shift, kind: str) -> Fraction:
    shift = as_rational(shift)
    if shift < 0:
        raise ParameterError(f"shift must be non-negative, got {format_rational(shift)}")
    if kind == NAT and shift.denominator != 1:
        raise ParameterError("nat modules interleave at integer shifts")
    return shift


def refined_grid(m: TameModule, n: TameModule, shift) -> tuple[Fraction, ...]:
    """Cells on which both M(x) and N(x + shift) are constant."""
    pts = set(m.grid)
    for t in n.grid:
        s = t - shift
        pts.add(max(s, Fraction(0)) if m.kind == NAT else s)
    return tuple(sorted(pts))


@dataclass(frozen=True)
class ModuleMap:
    source: TameModule
    target: TameModule
    shift: Fraction
    cell_grid: tuple[Fraction, ...]
    blocks: tuple[Matrix, ...]

    def __post_init__(self):
        m, n = self.source, self.target
        if m.kind != n.kind or m.p != n.p:
            raise ValidationError("source and target must share index kind and field")
        try:
            shift = _shift_value(self.shift, m.kind)
        except ParameterError as exc:
            raise ValidationError(str(exc)) from None
        object.__setattr__(self, "shift", shift)
        grid = tuple(as_rational(s) for s in self.cell_grid)
        object.__setattr__(self, "cell_grid", grid)
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValidationError("cell grid must be strictly ascending")
        if len(self.blocks) != len(grid):
            raise ValidationError(f"{len(grid)} cells but {len(self.blocks)} blocks")
        cells = set(grid)
        missing = [t for t in m.grid if t not in cells]
        if missing:
            raise ValidationError(f"cell grid misses source critical value {format_rational(missing[0])}")
        lo = grid[0] if grid else None
        for t in n.grid:
            s = t - shift
            if m.kind == NAT:
                s = max(s, Fraction(0))
            if lo is not None and s >= lo and s not in cells:
                raise ValidationError(f"cell grid misses shifted target critical value {format_rational(s)}")
        for k, (s, b) in enumerate(zip(grid, self.blocks)):
            want = (n.eval(s + shift), m.eval(s))
            if b.shape != want:
                raise ValidationError(f"block {k} has shape {b.rows}x{b.cols}, expected {want[0]}x{want[1]}")
            if b.p != m.p:
                raise ValidationError(f"block {k} is over the wrong field")

    def at(self, x) -> Matrix:
        """Component f_x; below the first cell this is the map out of the zero space."""
        x = as_rational(x)
        k = bisect_right(self.cell_grid, x) - 1
        if k < 0:
            return Matrix.zeros(self.target.eval(x + self.shift), 0, self.source.p)
        return self.blocks[k]

    def with_block(self, k: int, block: Matrix) -> ModuleMap:
        blocks = list(self.blocks)
        blocks[k] = block
        return replace(self, blocks=tuple(blocks))


def map_at(f: ModuleMap, x) -> Matrix:
    return f.at(x)


def build_map(m: TameModule, n: TameModule, shift, component: Callable[[Fraction], Matrix]) -> ModuleMap:
    """Tabulate a natural map from its value at the left end of every refined cell."""
    shift = _shift_value(shift, m.kind)
    grid = refined_grid(m, n, shift)
    return ModuleMap(m, n, shift, grid, tuple(component(s) for s in grid))


@dataclass(frozen=True)
class Witness:
    x: Fraction
    condition: str
    lhs: Matrix
    rhs: Matrix


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.accepted == (self.witness is not None):
            raise ValueError("a witness is present exactly when the verdict rejects")

    def __bool__(self):
        return self.accepted


ACCEPT = Verdict(True)


@dataclass(frozen=True)
class InterleavingCertificate:
    f: ModuleMap
    g: ModuleMap
    kind: str = STRONG
    basepoint: Fraction | None = None

    def __post_init__(self):
        if self.kind not in (STRONG, WEAK):
            raise ValidationError(f"unknown certificate kind {self.kind!r}")
        if self.kind == WEAK:
            if self.basepoint is None:
                raise ValidationError("weak certificates need a basepoint")
            object.__setattr__(self, "basepoint", as_rational(self.basepoint))
        elif self.basepoint is not None:
            raise ValidationError("strong certificates carry no basepoint")
        if self.f.shift != self.g.shift:
            raise ValidationError("f and g must share their shift")
        if self.f.source != self.g.target or self.f.target != self.g.source:
            raise ValidationError("f and g must connect the same pair of modules in opposite directions")

    @property
    def source(self) -> TameModule:
        return self.f.source

    @property
    def target(self) -> TameModule:
        return self.f.target

    @property
    def shift(self) -> Fraction:
        return self.f.shift

    def as_weak(self, x0) -> InterleavingCertificate:
        return InterleavingCertificate(self.f, self.g, WEAK, as_rational(x0))

    def as_strong(self) -> InterleavingCertificate:
        return InterleavingCertificate(self.f, self.g, STRONG)

    def swapped(self) -> InterleavingCertificate:
        return InterleavingCertificate(self.g, self.f, self.kind, self.basepoint)


def check_natural(f: ModuleMap, name: str = "f") -> Verdict:
    m, n, eps = f.source, f.target, f.shift
    s = f.cell_grid
    for k in range(len(s) - 1):
        lhs = n.structure_map(s[k] + eps, s[k + 1] + eps) @ f.blocks[k]
        rhs = f.blocks[k + 1] @ m.structure_map(s[k], s[k + 1])
        if lhs != rhs:
            return Verdict(False, Witness(s[k + 1], f"naturality of {name} entering cell {k + 1}", lhs, rhs))
    return ACCEPT


def _critical_values(c: InterleavingCertificate) -> set[Fraction]:
    return set(c.source.grid) | set(c.target.grid) | set(c.f.cell_grid) | set(c.g.cell_grid)


def strong_check_points(c: InterleavingCertificate) -> list[Fraction]:
    """Left endpoints of the joint refinement: critical values moved by 0, +-eps, +-2eps."""
    eps = c.shift
    base = _critical_values(c)
    pts = {b + k * eps for b in base for k in (-2, -1, 0, 1, 2)}
    if pts:
        pts.add(min(pts) - 1)
    if c.source.kind == NAT:
        pts = {x for x in pts if x >= 0} | {Fraction(0)}
    return sorted(pts)


def weak_check_points(c: InterleavingCertificate) -> list[Fraction]:
    """Lattice points x0 + k eps, k = 0..K, past which nothing changes."""
    eps, x0 = c.shift, c.basepoint
    if eps == 0:
        return [x0]
    top = max(_critical_values(c), default=x0)
    k_max = max(ceil_div(top + 2 * eps - x0, eps) + 1, 0)
    return [x0 + k * eps for k in range(k_max + 1)]


def _composites(c: InterleavingCertificate, points) -> Verdict:
    m, n, eps = c.source, c.target, c.shift
    for x in points:
        lhs = c.g.at(x + eps) @ c.f.at(x)
        rhs = m.structure_map(x, x + 2 * eps)
        if lhs != rhs:
            return Verdict(False, Witness(x, "g f = M(x <= x + 2 eps)", lhs, rhs))
        lhs = c.f.at(x + eps) @ c.g.at(x)
        rhs = n.structure_map(x, x + 2 * eps)
        if lhs != rhs:
            return Verdict(False, Witness(x, "f g = N(x <= x + 2 eps)", lhs, rhs))
    return ACCEPT


def _naturality(c: InterleavingCertificate) -> Verdict:
    v = check_natural(c.f, "f")
    return v if not v else check_natural(c.g, "g")


def verify_strong(c: InterleavingCertificate) -> Verdict:
    if c.kind != STRONG:
        raise UsageError("verify_strong needs a strong certificate")
    v = _naturality(c)
    return v if not v else _composites(c, strong_check_points(c))


def verify_weak(c: InterleavingCertificate) -> Verdict:
    if c.kind != WEAK:
        raise UsageError("verify_weak needs a weak certificate")
    v = _naturality(c)
    return v if not v else _composites(c, weak_check_points(c))


def verify(c: InterleavingCertificate) -> Verdict:
    return verify_strong(c) if c.kind == STRONG else verify_weak(c)


def identity_interleaving(m: TameModule) -> InterleavingCertificate:
    f = build_map(m, m, 0, lambda x: Matrix.identity(m.eval(x), m.p))
    return InterleavingCertificate(f, f, STRONG)


def canonical_shift_interleaving(m: TameModule, eps) -> InterleavingCertificate:
    """M against T_eps M: f_x = M(x <= x + 2 eps), g_x the identity of M(x + eps)."""
    eps = _shift_value(eps, m.kind)
    shifted = translate(m, eps)
    f = build_map(m, shifted, eps, lambda x: m.structure_map(x, x + 2 * eps))
    g = build_map(shifted, m, eps, lambda x: Matrix.identity(m.eval(x + eps), m.p))
    return InterleavingCertificate(f, g, STRONG)


def _positive(eps) -> Fraction:
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {format_rational(eps)}")
    return eps


def canonical_pixel_interleaving(m: TameModule, x0, eps) -> InterleavingCertificate:
    """M against its pixelization on x0 + Z eps, weak with basepoint x0."""
    x0, eps = as_rational(x0), _positive(eps)
    if not is_lower_stable(m, x0):
        raise StabilityError(f"module is not lower stable at {format_rational(x0)}")
    pix = pixelize(m, x0, eps)

    def f(x):
        return m.structure_map(x, pixel_point(x, x0, eps) + eps)

    def g(x):
        return m.structure_map(pixel_point(x, x0, eps), x + eps)

    return InterleavingCertificate(build_map(m, pix, eps, f), build_map(pix, m, eps, g), WEAK, x0)


def canonical_gf_interleaving(m: TameModule, eps) -> InterleavingCertificate:
    """M against G F M at shift 2 eps, weak with basepoint 0.

    G F M(x) is M((floor(x / eps) + 2) eps) for x >= -eps and zero below.
    """
    eps = _positive(eps)
    if not is_lower_stable(m, 0):
        raise StabilityError("module is not lower stable at 0")
    gf = compose_gf(m, eps)
    step = 2 * eps

    def sample(x):
        return (floor_div(x, eps) + 2) * eps if x >= -eps else None

    def f(x):
        a = sample(x + step)
        if a is None:
            return Matrix.zeros(0, m.eval(x), m.p)
        return m.structure_map(x, a)

    def g(x):
        a = sample(x)
        if a is None:
            return Matrix.zeros(m.eval(x + step), 0, m.p)
        return m.structure_map(a, x + step)

    return InterleavingCertificate(build_map(m, gf, step, f), build_map(gf, m, step, g), WEAK, Fraction(0))


def canonical_fg_interleaving(n: TameModule, eps) -> InterleavingCertificate:
    """N against F G N = T_2 N at shift 2, independent of eps."""
    eps = _positive(eps)
    if n.kind != NAT:
        raise UsageError("canonical_fg_interleaving takes a natural module")
    fg = compose_fg(n, eps)
    f = build_map(n, fg, 2, lambda x: n.structure_map(x, x + 4))
    g = build_map(fg, n, 2, lambda x: Matrix.identity(n.eval(x + 2), n.p))
    return InterleavingCertificate(f, g, STRONG)


def promote_weak_to_strong(c: InterleavingCertificate) -> InterleavingCertificate:
    """Strong 2 eps certificate from a weak eps one.

    Each component climbs to the next lattice point, applies the weak map
    there and descends to x + 2 eps.
    """
    if c.kind != WEAK:
        raise UsageError("promotion takes a weak certificate")
    if c.shift == 0:
        raise ParameterError("cannot promote a weak interleaving with zero step")
    verdict = verify_weak(c)
    if not verdict:
        raise PreconditionError(f"certificate fails weak verification at x = {format_rational(verdict.witness.x)}")
    eps, x0 = c.shift, c.basepoint

    def lift(h: ModuleMap) -> ModuleMap:
        src, dst = h.source, h.target

        def comp(x):
            lam = lattice_ceiling(x, x0, eps)
            return dst.structure_map(lam + eps, x + 2 * eps) @ h.at(lam) @ src.structure_map(x, lam)

        return build_map(src, dst, 2 * eps, comp)

    return InterleavingCertificate(lift(c.f), lift(c.g), STRONG)


def compose_maps(f1: ModuleMap, f2: ModuleMap) -> ModuleMap:
    """x -> f2_{x + eps1} f1_x, a map M -> L shifted by eps1 + eps2."""
    if f1.target != f2.source:
        raise ValidationError("maps do not compose")
    return build_map(f1.source, f2.target, f1.shift + f2.shift,
                     lambda x: f2.at(x + f1.shift) @ f1.at(x))


def compose_certificates(c1: InterleavingCertificate, c2: InterleavingCertificate) -> InterleavingCertificate:
    """Strong (M, N) at eps1 and (N, L) at eps2 give (M, L) at eps1 + eps2."""
    return InterleavingCertificate(compose_maps(c1.f, c2.f), compose_maps(c2.g, c1.g), STRONG)


def detectable_corruptions(c: InterleavingCertificate) -> list[tuple[str, int]]:
    """Blocks whose zeroing must be rejected.

    A block qualifies when some checked point in its cell has a nonzero
    reference structure map, so the composite through a zero block cannot match.
    """
    points = strong_check_points(c) if c.kind == STRONG else weak_check_points(c)
    eps = c.shift
    out = []
    for name, h, ref in (("f", c.f, c.source), ("g", c.g, c.target)):
        grid = h.cell_grid
        for k, block in enumerate(h.blocks):
            if block.is_zero():
                continue
            hi = grid[k + 1] if k + 1 < len(grid) else None
            for x in points:
                if x >= grid[k] and (hi is None or x < hi) and not ref.structure_map(x, x + 2 * eps).is_zero():
                    out.append((name, k))
                    break
    return out


def zero_block(c: InterleavingCertificate, which: str, k: int) -> InterleavingCertificate:
    h = c.f if which == "f" else c.g
    b = h.blocks[k]
    h = h.with_block(k, Matrix.zeros(b.rows, b.cols, b.p))
    if which == "f":
        return replace(c, f=h)
    return replace(c, g=h)


@dataclass
class EquivalenceReport:
    """Verdicts of the interleaved-equivalence pipeline for one input module.

    ``informational`` verdicts are reported but do not count toward
    :attr:`all_accepted`.
    """

    kind: str
    epsilon: Fraction
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    informational: dict[str, Verdict] = field(default_factory=dict)
    diagnostics: dict[str, object] = field(default_factory=dict)
    certificates: dict[str, InterleavingCertificate] = field(default_factory=dict)

    @property
    def all_accepted(self) -> bool:
        return all(v.accepted for v in self.verdicts.values())


def _fg_side(report: EquivalenceReport, n: TameModule, eps: Fraction) -> None:
    cert = canonical_fg_interleaving(n, eps)
    report.certificates["fg"] = cert
    report.verdicts["fg_strong_2"] = verify_strong(cert)
    report.diagnostics["fg_equals_shift_2"] = cert.target == translate(n, 2)
    if report.verdicts["fg_strong_2"]:
        promoted = promote_weak_to_strong(cert.as_weak(0))
        report.certificates["fg_promoted"] = promoted
        report.verdicts["fg_promoted_strong_4"] = verify_strong(promoted)
    else:
        report.verdicts["fg_promoted_strong_4"] = report.verdicts["fg_strong_2"]


def equivalence_report(module: TameModule, eps) -> EquivalenceReport:
    """Run the G F (real input) and F G constructions and promote both to strong."""
    from .oracles import bottleneck_distance

    eps = _positive(eps)
    report = EquivalenceReport(module.kind, eps)
    if module.kind == NAT:
        _fg_side(report, module, eps)
        return report
    cert = canonical_gf_interleaving(module, eps)
    report.certificates["gf"] = cert
    report.verdicts["gf_weak_2eps"] = verify_weak(cert)
    report.informational["gf_strong_2eps"] = verify_strong(cert.as_strong())
    if report.verdicts["gf_weak_2eps"]:
        promoted = promote_weak_to_strong(cert)
        report.certificates["gf_promoted"] = promoted
        report.verdicts["gf_promoted_strong_4eps"] = verify_strong(promoted)
    else:
        report.verdicts["gf_promoted_strong_4eps"] = report.verdicts["gf_weak_2eps"]
    dist = bottleneck_distance(decompose(module), decompose(compose_gf(module, eps)))
    report.diagnostics["bottleneck_gf"] = dist
    report.diagnostics["bottleneck_gf_within_2eps"] = dist <= 2 * eps
    _fg_side(report, discretize(module, eps), eps)
    return report
