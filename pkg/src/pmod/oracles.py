"""Independent oracles used to cross-check the interleaving machinery."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .barcode import INF, Barcode
from .errors import BudgetExceeded, ParameterError, UsageError
from .exact import Matrix, as_rational
from .interleave import (STRONG, InterleavingCertificate, ModuleMap, refined_grid,
                         strong_check_points, verify_strong)
from .module import TameModule

DEFAULT_BUDGET = 2 ** 24


def _pair_cost(a, b):
    (b1, d1), (b2, d2) = a, b
    if (d1 == INF) != (d2 == INF):
        return INF
    if d1 == INF:
        return abs(b1 - b2)
    return max(abs(b1 - b2), abs(d1 - d2))


def _half_length(bar):
    b, d = bar
    return INF if d == INF else (d - b) / 2


def _has_perfect_matching(adj: list[list[int]], n_right: int) -> bool:
    match_right = [-1] * n_right

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    return all(augment(u, set()) for u in range(len(adj)))


def bottleneck_distance(b1: Barcode, b2: Barcode):
    """Exact bottleneck distance; ``INF`` when no finite matching exists.

    Matched bars pay the larger endpoint displacement, unmatched bars pay half
    their length.  The optimum is one of finitely many candidate costs, found
    by binary search with a bipartite feasibility test at each threshold.
    """
    if b1.kind != b2.kind:
        raise UsageError("barcodes must share their index kind")
    xs, ys = b1.bars(), b2.bars()
    n, m = len(xs), len(ys)
    if n + m == 0:
        return Fraction(0)
    cost = [[_pair_cost(a, b) for b in ys] for a in xs]
    hx = [_half_length(a) for a in xs]
    hy = [_half_length(b) for b in ys]
    candidates = sorted({c for row in cost for c in row} | set(hx) | set(hy) | {Fraction(0)})

    def feasible(delta) -> bool:
        # left: xs then diagonal copies of ys; right: ys then diagonal copies of xs
        adj = []
        for i in range(n):
            row = [j for j in range(m) if cost[i][j] <= delta]
            if hx[i] <= delta:
                row.append(m + i)
            adj.append(row)
        for j in range(m):
            row = [m + i for i in range(n)]
            if hy[j] <= delta:
                row.append(j)
            adj.append(row)
        return _has_perfect_matching(adj, n + m)

    lo, hi = 0, len(candidates) - 1
    if not feasible(candidates[hi]):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


@lru_cache(maxsize=None)
def _all_matrices(rows: int, cols: int, p: int) -> tuple[Matrix, ...]:
    out = []
    for entries in itertools.product(range(p), repeat=rows * cols):
        out.append(Matrix(rows, cols, p, [entries[r * cols:(r + 1) * cols] for r in range(rows)]))
    return tuple(out)


def search_space(m: TameModule, n: TameModule, eps) -> int:
    """Number of block assignments for both maps, before any pruning."""
    eps = as_rational(eps)
    total = 1
    for a, b in ((m, n), (n, m)):
        for s in refined_grid(a, b, eps):
            total *= a.p ** (b.eval(s + eps) * a.eval(s))
    return total


def natural_maps(m: TameModule, n: TameModule, shift) -> list[ModuleMap]:
    """Every natural map M -> N shifted by ``shift``, by backtracking over cell blocks.

    Each cell's block is enumerated in full; a partial assignment is extended
    only when the naturality square with the previous cell commutes.
    """
    shift = as_rational(shift)
    grid = refined_grid(m, n, shift)
    p = m.p
    shapes = [(n.eval(s + shift), m.eval(s)) for s in grid]
    src_steps = [m.structure_map(a, b) for a, b in zip(grid, grid[1:])]
    dst_steps = [n.structure_map(a + shift, b + shift) for a, b in zip(grid, grid[1:])]
    found: list[tuple[Matrix, ...]] = []

    def extend(prefix: list[Matrix]):
        k = len(prefix)
        if k == len(grid):
            found.append(tuple(prefix))
            return
        for block in _all_matrices(*shapes[k], p):
            if k and dst_steps[k - 1] @ prefix[-1] != block @ src_steps[k - 1]:
                continue
            prefix.append(block)
            extend(prefix)
            prefix.pop()

    extend([])
    return [ModuleMap(m, n, shift, grid, blocks) for blocks in found]


def brute_force_interleaving_exists(m: TameModule, n: TameModule, eps, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff some pair of natural maps passes :func:`verify_strong` at ``eps``.

    ``budget`` caps the unpruned search space of :func:`search_space`; the
    pruned enumeration and the pair tests never exceed it.
    """
    if m.p != 2 or n.p != 2:
        raise ParameterError("the brute-force search runs over F_2 only")
    eps = as_rational(eps)
    size = search_space(m, n, eps)
    if size > budget:
        raise BudgetExceeded(f"search space of {size} assignments exceeds the budget of {budget}")
    fs = natural_maps(m, n, eps)
    gs = natural_maps(n, m, eps)
    if not fs or not gs:
        return False
    # the composite conditions only depend on the maps through their blocks,
    # so the check points and reference structure maps are shared by all pairs
    points = strong_check_points(InterleavingCertificate(fs[0], gs[0], STRONG))
    checks = [(x, x + eps, m.structure_map(x, x + 2 * eps), n.structure_map(x, x + 2 * eps)) for x in points]
    f_at = [{x: f.at(x) for pt in checks for x in pt[:2]} for f in fs]
    g_at = [{x: g.at(x) for pt in checks for x in pt[:2]} for g in gs]
    for i, j in itertools.product(range(len(fs)), range(len(gs))):
        fi, gj = f_at[i], g_at[j]
        if all(gj[y] @ fi[x] == rm and fi[y] @ gj[x] == rn for x, y, rm, rn in checks):
            if verify_strong(InterleavingCertificate(fs[i], gs[j], STRONG)):
                return True
    return False
