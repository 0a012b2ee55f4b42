"""Zigzag costs, the bounds sandwiching a path metric, and Wasserstein distances."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import linalg as la
from .complex import ChainMorphism, DerivedBarcode, RepComplex, chain_hom_basis, cone
from .matching import INF, MatchingResult, optimal_matching, parse_exponent
from .quiver import AnQuiver, RepMorphism
from .weights import WeightFamily, integrate, weight, weight_vector

Bar = tuple  # (Interval, degree)
PairDistance = Callable[[Optional[Bar], Optional[Bar]], Fraction]


@dataclass(frozen=True)
class Leg:
    morphism: ChainMorphism
    forward: bool = True


class Zigzag:
    """``X = X_0 - X_1 - ... - X_n = Y`` with legs alternating in direction.

    A forward leg is a morphism ``X_{k-1} -> X_k``, a backward leg a morphism
    ``X_k -> X_{k-1}``.
    """

    def __init__(self, legs: Sequence[Leg]):
        legs = list(legs)
        if not legs:
            raise ValueError("a zigzag needs at least one leg")
        for a, b in zip(legs, legs[1:]):
            if a.forward == b.forward:
                raise ValueError("zigzag legs must alternate in direction")
        objs = [legs[0].morphism.source if legs[0].forward else legs[0].morphism.target]
        for k, leg in enumerate(legs):
            start, end = ((leg.morphism.source, leg.morphism.target) if leg.forward
                          else (leg.morphism.target, leg.morphism.source))
            if start != objs[-1]:
                raise ValueError(f"leg {k} does not start where leg {k - 1} ended")
            objs.append(end)
        self.legs = legs
        self.objects = objs

    @property
    def start(self) -> RepComplex:
        return self.objects[0]

    @property
    def end(self) -> RepComplex:
        return self.objects[-1]


def zigzag_cost(z: Zigzag, fam: WeightFamily) -> Fraction:
    """Sum of the integrated weights of the cones of the legs."""
    return sum((weight(cone(leg.morphism), fam) for leg in z.legs), Fraction(0))


@dataclass(frozen=True)
class Bounds:
    lower: Fraction
    upper: Fraction


def bounds(a, b, fam: WeightFamily, quiver: AnQuiver | None = None) -> Bounds:
    """``∫|w(a) - w(b)| dμ <= d(a, b) <= ∫(w(a) + w(b)) dμ``."""
    qa = a.quiver if isinstance(a, RepComplex) else quiver
    qb = b.quiver if isinstance(b, RepComplex) else quiver
    if qa is None or qb is None or qa != qb:
        raise ValueError("bounds need both objects over the same quiver")
    return bounds_from_vectors(weight_vector(a, fam, qa), weight_vector(b, fam, qa), qa)


def bounds_from_vectors(va: Sequence[int], vb: Sequence[int], quiver: AnQuiver) -> Bounds:
    lower = integrate([abs(x - y) for x, y in zip(va, vb)], quiver)
    upper = integrate([x + y for x, y in zip(va, vb)], quiver)
    return Bounds(lower, upper)


def candidate_morphisms(x: RepComplex, y: RepComplex, limit: int = 6) -> list[ChainMorphism]:
    """The zero map, basis chain maps, and their sum; identity when x == y."""
    out = [ChainMorphism.zero(x, y)]
    basis = chain_hom_basis(x, y) if not (x.is_zero() or y.is_zero()) else []
    out.extend(basis[:limit])
    if len(basis) > 1:
        total = {}
        for f in basis:
            for i, g in f.components.items():
                total[i] = g if i not in total else _add_rep_morphisms(total[i], g)
        out.append(ChainMorphism(x, y, total, check=False))
    if x == y:
        out.append(ChainMorphism.identity(x))
    return out


def _add_rep_morphisms(f: RepMorphism, g: RepMorphism) -> RepMorphism:
    return RepMorphism(f.source, f.target, [la.add(a, b) for a, b in zip(f.components, g.components)],
                       check=False)


class PathOracle:
    """Weighted graph on ``pool ∪ {0}`` whose edges are candidate chain maps.

    An edge joins two pool members when some candidate map between them, in
    either direction, exists; its weight is the least integrated weight of the
    cone of such a map.  Shortest paths with a bounded number of legs are
    upper bounds on the true path distance.
    """

    def __init__(self, pool: Sequence[RepComplex], fam: WeightFamily, candidates: int = 6):
        nodes = list(pool)
        if not nodes:
            raise ValueError("the pool is empty")
        q = nodes[0].quiver
        if any(c.quiver != q for c in nodes):
            raise ValueError("pool members live over different quivers")
        if not any(c.is_zero() for c in nodes):
            nodes.append(RepComplex.zero(q))
        size = len(nodes)
        edge = [[INF] * size for _ in range(size)]
        for i in range(size):
            for j in range(i + 1, size):
                best = INF
                # legs may point either way along a zigzag
                for x, y in ((nodes[i], nodes[j]), (nodes[j], nodes[i])):
                    for f in candidate_morphisms(x, y, candidates):
                        w = weight(cone(f), fam)
                        if w < best:
                            best = w
                edge[i][j] = edge[j][i] = best
        self.nodes = nodes
        self.edge = edge

    def index_of(self, c: RepComplex) -> int:
        for k, node in enumerate(self.nodes):
            if node == c:
                return k
        raise ValueError("endpoint is not in the pool")

    def distance(self, a: RepComplex, b: RepComplex, max_len: int = 4) -> Fraction | float:
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        src, dst = self.index_of(a), self.index_of(b)
        if src == dst:
            return Fraction(0)
        size = len(self.nodes)
        dist = [INF] * size
        dist[src] = Fraction(0)
        for _ in range(max_len):
            new = list(dist)
            for i in range(size):
                if dist[i] == INF:
                    continue
                for j in range(size):
                    w = self.edge[i][j]
                    if w != INF and dist[i] + w < new[j]:
                        new[j] = dist[i] + w
            dist = new
        return dist[dst]


def restricted_path_metric(a: RepComplex, b: RepComplex, fam: WeightFamily,
                           pool: Sequence[RepComplex], max_len: int = 4,
                           candidates: int = 6) -> Fraction | float:
    """Cheapest zigzag from a to b with at most ``max_len`` legs whose objects lie in ``pool ∪ {0}``.

    Always an upper bound on the true path distance; ``a`` and ``b`` must be
    pool members.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    return PathOracle(list(pool), fam, candidates).distance(a, b, max_len)


def expand_bars(bars: DerivedBarcode) -> list[Bar]:
    """Multiset to a sorted list with repeats."""
    out = []
    for key in sorted(bars):
        out.extend([key] * bars[key])
    return out


def default_pair_distance(fam: WeightFamily, quiver: AnQuiver) -> PairDistance:
    """Envelope costs: ``d(x, 0) = w(x)``, ``d(x, x) = 0``, ``d(x, y) = w(x) + w(y)`` otherwise."""
    cache: dict = {}

    def w(bar: Bar) -> Fraction:
        if bar not in cache:
            cache[bar] = weight(Counter({bar: 1}), fam, quiver)
        return cache[bar]

    def dist(x: Optional[Bar], y: Optional[Bar]) -> Fraction:
        if x is None and y is None:
            return Fraction(0)
        if x is None:
            return w(y)
        if y is None:
            return w(x)
        if x == y:
            return Fraction(0)
        return w(x) + w(y)

    return dist


def wasserstein(a: DerivedBarcode, b: DerivedBarcode, p, dist: PairDistance) -> MatchingResult:
    """``W_p`` over all partial matchings of the bars of a and b."""
    p = parse_exponent(p)
    xs, ys = expand_bars(a), expand_bars(b)

    def cost(x, y):
        try:
            c = dist(x, y)
        except KeyError as exc:
            raise ValueError(f"no cost for pair ({_fmt(x)}, {_fmt(y)})") from exc
        if c is None:
            raise ValueError(f"no cost for pair ({_fmt(x)}, {_fmt(y)})")
        return c

    cost_ab = [[cost(x, y) for y in ys] for x in xs]
    cost_a0 = [cost(x, None) for x in xs]
    cost_0b = [cost(None, y) for y in ys]
    return optimal_matching(cost_ab, cost_a0, cost_0b, p)


def _fmt(bar: Optional[Bar]) -> str:
    if bar is None:
        return "0"
    interval, degree = bar
    return f"{interval}@{degree}"


def pnorm_power(values: Sequence, p) -> Fraction | float:
    """Aggregate distances: sum of p-th powers, or max for p = inf."""
    p = parse_exponent(p)
    if p == INF:
        return max(values, default=Fraction(0))
    if any(v == INF for v in values):
        return math.inf
    return sum((Fraction(v) ** p for v in values), Fraction(0))
