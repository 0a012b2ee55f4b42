"""Independent reference computations used to check the library.

None of these call ``decompose``, ``hom_basis``, ``optimal_matching`` or the
cohomology code; they only rely on the basic matrix routines in ``linalg``.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np

from triwass import linalg as la
from triwass.quiver import Interval, Rep


def composite(m: Rep, a: int, b: int) -> np.ndarray:
    """Composite map M(a) -> M(b) of an all-forward rep, 0-based vertices."""
    out = la.identity(m.dims[a])
    for e in range(a, b):
        out = la.mul(m.maps[e], out)
    return out


def equioriented_multiplicities(m: Rep) -> Counter:
    """Rank inclusion-exclusion on composite maps (all arrows forward)."""
    n = m.quiver.n

    def r(a, b):
        if a < 0 or b >= n:
            return 0
        return la.rank(composite(m, a, b))

    out = Counter()
    for a in range(n):
        for b in range(a, n):
            k = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if k:
                out[Interval(a + 1, b + 1)] = k
    return out


def lim_colim_rank(m: Rep, a: int, b: int) -> int:
    """Rank of the canonical map lim -> colim over the full subquiver on [a, b]."""
    dims = m.dims[a : b + 1]
    offs = np.cumsum([0] + list(dims))
    total = int(offs[-1])
    if total == 0:
        return 0
    rows = []
    for e in range(a, b):
        s, t = m.quiver.edge_ends(e)
        rel = la.zeros(m.dims[t], total)
        rel[:, offs[s - a] : offs[s - a + 1]] = m.maps[e]
        rel[:, offs[t - a] : offs[t - a + 1]] = la.neg(la.identity(m.dims[t]))
        rows.append(rel)
    if not rows:
        return total
    rel = np.vstack(rows) if len(rows) > 1 else rows[0]
    lim = la.kernel_basis(rel)  # compatible families
    # colim: quotient of the sum by x_s - M(x_s), i.e. by the transpose relations
    gens = []
    for e in range(a, b):
        s, t = m.quiver.edge_ends(e)
        g = la.zeros(total, m.dims[s])
        g[offs[s - a] : offs[s - a + 1], :] = la.identity(m.dims[s])
        g[offs[t - a] : offs[t - a + 1], :] = la.neg(m.maps[e])
        gens.append(g)
    span = np.hstack(gens)
    proj, _ = la.cokernel_projection(span)
    return la.rank(la.mul(proj, lim))


def zigzag_multiplicities(m: Rep) -> Counter:
    """Multiplicities from the lim/colim rank invariant, any orientation."""
    n = m.quiver.n

    def r(a, b):
        if a < 0 or b >= n:
            return 0
        return lim_colim_rank(m, a, b)

    out = Counter()
    for a in range(n):
        for b in range(a, n):
            k = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if k:
                out[Interval(a + 1, b + 1)] = k
    return out


def naturality_map(a: Rep, b: Rep) -> np.ndarray:
    """(f_v) -> (B(e) f_s - f_t A(e))_e, from sum_v Hom(A_v, B_v) to sum_e Hom(A_s, B_t).

    Its kernel is Hom(a, b) and its cokernel is Ext^1(a, b) (standard
    projective resolution of a).
    """
    q = a.quiver
    col_sizes = [a.dims[v] * b.dims[v] for v in range(q.n)]
    col_off = np.cumsum([0] + col_sizes)
    row_blocks = []
    for e, s, t in q.arrows():
        blk = la.zeros(b.dims[t] * a.dims[s], int(col_off[-1]))
        # row-major vec: vec(B X) = kron(B, I) vec(X), vec(X A) = kron(I, A^T) vec(X)
        blk[:, col_off[s] : col_off[s + 1]] = la.as_matrix(np.kron(b.maps[e], np.eye(a.dims[s], dtype=np.int64)))
        blk[:, col_off[t] : col_off[t + 1]] = la.neg(
            la.as_matrix(np.kron(np.eye(b.dims[t], dtype=np.int64), a.maps[e].T)))
        row_blocks.append(blk)
    if not row_blocks:
        return la.zeros(0, int(col_off[-1]))
    return np.vstack(row_blocks)


def hom_ext_resolution(a: Rep, b: Rep) -> tuple[int, int]:
    d = naturality_map(a, b)
    r = la.rank(d) if d.size else 0
    return d.shape[1] - r, d.shape[0] - r


def vertex_cohomology(c, i: int, p: int) -> int:
    """dim H^i of the complex of vector spaces c(p)."""
    dim = c.term(i).dims[p]
    out_rank = la.rank(c.diff(i).components[p]) if dim else 0
    in_rank = la.rank(c.diff(i - 1).components[p]) if dim else 0
    return dim - out_rank - in_rank


def brute_force_matching(cost_ab, cost_a0, cost_0b, p):
    """Enumerate every partial matching; return the best p-th power sum (or max).

    Finite costs are scaled to integers by a common denominator so the
    enumeration runs on exact integers; the result is scaled back.
    """
    m, n = len(cost_a0), len(cost_0b)
    flat = [c for row in cost_ab for c in row] + list(cost_a0) + list(cost_0b)
    finite = [Fraction(c) for c in flat if c != math.inf]
    if p != math.inf:
        finite = [c ** p for c in finite]
    den = math.lcm(*(c.denominator for c in finite)) if finite else 1

    def conv(c):
        if c == math.inf:
            return math.inf
        c = Fraction(c)
        if p != math.inf:
            c = c ** p
        return c.numerator * (den // c.denominator)

    ab = [[conv(c) for c in row] for row in cost_ab]
    a0 = [conv(c) for c in cost_a0]
    zb = [conv(c) for c in cost_0b]
    combine = max if p == math.inf else (lambda x, y: x + y)
    best = math.inf

    def rec(i, used, acc):
        nonlocal best
        if i == m:
            total = acc
            for j in range(n):
                if not used >> j & 1:
                    total = combine(total, zb[j])
            best = min(best, total)
            return
        rec(i + 1, used, combine(acc, a0[i]))
        for j in range(n):
            if not used >> j & 1:
                rec(i + 1, used | 1 << j, combine(acc, ab[i][j]))

    rec(0, 0, 0)
    return best if best == math.inf else Fraction(best, den)


def abs_chi_oracle(c) -> tuple[int, ...]:
    """|<chi(c), e_v>| from the alternating sum of term dimensions.

    Uses the chain-level Euler characteristic, so no cohomology is taken, and
    the Euler form of the quiver written out from its arrows.
    """
    q = c.quiver
    chi = [0] * q.n
    for i in c.degrees():
        for p, d in enumerate(c.term(i).dims):
            chi[p] += (-1) ** (i % 2) * d
    heads = [[] for _ in range(q.n)]
    for e in range(q.n - 1):
        s, t = q.edge_ends(e)
        heads[t].append(s)
    return tuple(abs(chi[v] - sum(chi[s] for s in heads[v])) for v in range(q.n))
