"""Exact optimal partial matchings with deletion costs.

Given costs ``c(a_i, b_j)``, ``c(a_i, 0)`` and ``c(0, b_j)`` (nonnegative
rationals or ``math.inf``), find the partial matching minimizing the p-norm of
all incurred costs.  Finite p is reduced to a square assignment problem on
p-th powers and solved with the Hungarian method in exact arithmetic; p = inf
is a bottleneck problem solved by binary search over the distinct costs with a
perfect-matching feasibility test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence, Union

INF = math.inf
Extended = Union[Fraction, float]  # float only ever holds math.inf


def parse_exponent(p) -> Union[int, float]:
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity", "∞"):
            return INF
        p = int(p)
    if p == INF:
        return INF
    if int(p) != p or p < 1:
        raise ValueError(f"exponent must be an integer >= 1 or inf, got {p!r}")
    return int(p)


def _is_inf(c) -> bool:
    # after normalisation the only floats left are infinities
    return isinstance(c, float)


def _power(c: Extended, p) -> Extended:
    return INF if _is_inf(c) else c ** p


@dataclass
class MatchingResult:
    p: Union[int, float]
    pairs: list[tuple[int, int, Extended]] = field(default_factory=list)
    unmatched_a: list[tuple[int, Extended]] = field(default_factory=list)
    unmatched_b: list[tuple[int, Extended]] = field(default_factory=list)
    total: Extended = Fraction(0)

    def costs(self) -> list[Extended]:
        return ([c for _, _, c in self.pairs] + [c for _, c in self.unmatched_a]
                + [c for _, c in self.unmatched_b])

    def recompute(self) -> Extended:
        """Aggregate the parts: sum of p-th powers, or the maximum for p = inf."""
        costs = self.costs()
        if self.p == INF:
            return max(costs, default=Fraction(0))
        if any(_is_inf(c) for c in costs):
            return INF
        return sum((Fraction(c) ** self.p for c in costs), Fraction(0))

    @property
    def value(self) -> Union[Fraction, float]:
        """The distance ``total ** (1/p)``: exact for p in {1, inf}, a float otherwise."""
        if self.p == INF or self.p == 1 or self.total == INF:
            return self.total
        return float(self.total) ** (1.0 / self.p)

    def value_decimal(self, digits: int = 12) -> str:
        if self.total == INF:
            return "inf"
        return decimal_root(self.total, 1 if self.p == INF else self.p, digits)


def decimal_root(x: Fraction, p: int, digits: int = 12) -> str:
    """``x ** (1/p)`` rendered with ``digits`` decimals."""
    with localcontext() as ctx:
        ctx.prec = digits + 30
        d = Decimal(x.numerator) / Decimal(x.denominator)
        r = d if p == 1 else (d ** (Decimal(1) / Decimal(p)) if d else Decimal(0))
        return str(r.quantize(Decimal(1).scaleb(-digits)))


def hungarian(cost: Sequence[Sequence]) -> list[int]:
    """Minimum-cost perfect assignment; returns ``col`` for each row.

    Shortest augmenting paths with row/column potentials, O(n^3).  Exact for
    integer or Fraction costs.
    """
    n = len(cost)
    if n == 0:
        return []
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match_col = [0] * (n + 1)  # match_col[j] = row assigned to column j (1-based, 0 = free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match_col[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_col[j0]
            delta, j1 = INF, 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta, j1 = minv[j], j
            for j in range(n + 1):
                if used[j]:
                    u[match_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_col[j0] = match_col[j1]
            j0 = j1
    assignment = [0] * n
    for j in range(1, n + 1):
        assignment[match_col[j] - 1] = j - 1
    return assignment


def _perfect_matching(allowed: list[list[bool]]) -> list[int] | None:
    """Row -> column perfect matching by augmenting paths, or None."""
    n = len(allowed)
    owner = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in range(n):
            if allowed[i][j] and not seen[j]:
                seen[j] = True
                if owner[j] < 0 or augment(owner[j], seen):
                    owner[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return None
    assignment = [0] * n
    for j, i in enumerate(owner):
        assignment[i] = j
    return assignment


def _augmented(cost_ab, cost_a0, cost_0b):
    """Square (m+n) cost table; ``None`` marks forbidden cells."""
    m, n = len(cost_a0), len(cost_0b)
    size = m + n
    table: list[list] = [[None] * size for _ in range(size)]
    for i in range(m):
        for j in range(n):
            table[i][j] = cost_ab[i][j]
        table[i][n + i] = cost_a0[i]
    for j in range(n):
        table[m + j][j] = cost_0b[j]
        for k in range(m):
            table[m + j][n + k] = Fraction(0)
    return table


def _result_from_assignment(assignment, cost_ab, cost_a0, cost_0b, p) -> MatchingResult:
    m, n = len(cost_a0), len(cost_0b)
    res = MatchingResult(p)
    for i, j in enumerate(assignment):
        if i < m and j < n:
            res.pairs.append((i, j, cost_ab[i][j]))
        elif i < m:
            res.unmatched_a.append((i, cost_a0[i]))
        elif j < n:
            res.unmatched_b.append((j, cost_0b[j]))
    res.pairs.sort()
    res.unmatched_a.sort()
    res.unmatched_b.sort()
    res.total = res.recompute()
    return res


def optimal_matching(cost_ab: Sequence[Sequence[Extended]], cost_a0: Sequence[Extended],
                     cost_0b: Sequence[Extended], p) -> MatchingResult:
    """Optimal partial matching for explicit cost tables (see module docstring)."""
    p = parse_exponent(p)
    m, n = len(cost_a0), len(cost_0b)
    if len(cost_ab) != m or any(len(row) != n for row in cost_ab):
        raise ValueError(f"pair cost table must be {m}x{n}")
    cost_ab = [[_extended(c) for c in row] for row in cost_ab]
    cost_a0 = [_extended(c) for c in cost_a0]
    cost_0b = [_extended(c) for c in cost_0b]
    table = _augmented(cost_ab, cost_a0, cost_0b)
    if p == INF:
        assignment = _bottleneck(table)
    else:
        powered = [[None if c is None else _power(c, p) for c in row] for row in table]
        finite = [c for row in powered for c in row if c is not None and not _is_inf(c)]
        # a common denominator turns the problem into an equivalent integer one
        den = math.lcm(*(c.denominator for c in finite)) if finite else 1
        big = sum(c.numerator * (den // c.denominator) for c in finite) + 1
        square = [[big if (c is None or _is_inf(c)) else c.numerator * (den // c.denominator) for c in row]
                  for row in powered]
        assignment = hungarian(square)
    return _result_from_assignment(assignment, cost_ab, cost_a0, cost_0b, p)


def _bottleneck(table) -> list[int]:
    size = len(table)
    if size == 0:
        return []
    values = sorted({c for row in table for c in row if c is not None and not _is_inf(c)})
    lo, hi = 0, len(values) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        t = values[mid]
        found = _perfect_matching([[c is not None and c <= t for c in row] for row in table])
        if found is not None:
            best, hi = found, mid - 1
        else:
            lo = mid + 1
    if best is None:
        # only matchings using infinite costs remain
        best = _perfect_matching([[c is not None for c in row] for row in table])
    return best


def _extended(c) -> Extended:
    if isinstance(c, float) and c == INF:
        return INF
    c = Fraction(c)
    if c < 0:
        raise ValueError(f"costs must be nonnegative, got {c}")
    return c
