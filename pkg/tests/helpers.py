"""Small random generators shared by the metric tests."""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np

from triwass.quiver import Interval


def random_bars(rng: np.random.Generator, n: int, max_bars: int = 4, degrees=(-1, 0, 1)) -> Counter:
    out = Counter()
    for _ in range(int(rng.integers(0, max_bars + 1))):
        a = int(rng.integers(1, n + 1))
        b = int(rng.integers(a, n + 1))
        out[(Interval(a, b), int(rng.choice(degrees)))] += 1
    return out


def random_cost(rng: np.random.Generator, inf_probability: float = 0.0):
    if rng.random() < inf_probability:
        return math.inf
    return Fraction(int(rng.integers(0, 20)), int(rng.integers(1, 6)))


def random_table(rng: np.random.Generator, max_side: int = 6, inf_probability: float = 0.0):
    m, n = (int(x) for x in rng.integers(0, max_side + 1, size=2))
    ab = [[random_cost(rng, inf_probability) for _ in range(n)] for _ in range(m)]
    a0 = [random_cost(rng, inf_probability) for _ in range(m)]
    zb = [random_cost(rng, inf_probability) for _ in range(n)]
    return ab, a0, zb


def root_leq_sum(x, y, z, p) -> bool:
    """x^(1/p) <= y^(1/p) + z^(1/p) for p-th powers x, y, z, decided exactly for p in {1, 2, inf}."""
    if p in (1, math.inf):
        return x <= y + z
    if p == 2:
        d = x - y - z
        return d <= 0 or d * d <= 4 * y * z
    raise ValueError("only p in {1, 2, inf} is decided exactly")
