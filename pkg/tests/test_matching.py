import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_table
from oracles import brute_force_matching
from triwass.matching import INF, decimal_root, hungarian, optimal_matching, parse_exponent

seeds = st.integers(0, 2**32 - 1)
F = Fraction


def test_parse_exponent():
    assert parse_exponent("inf") == INF
    assert parse_exponent(" 2 ") == 2
    assert parse_exponent(3.0) == 3
    for bad in (0, -1, 1.5, "x"):
        with pytest.raises(ValueError):
            parse_exponent(bad)


def test_hungarian_small():
    cost = [[F(4), F(1), F(3)], [F(2), F(0), F(5)], [F(3), F(2), F(2)]]
    assignment = hungarian(cost)
    assert sorted(assignment) == [0, 1, 2]
    assert sum(cost[i][j] for i, j in enumerate(assignment)) == 5


def test_empty_sides():
    res = optimal_matching([], [], [], 1)
    assert res.total == 0 and res.pairs == []
    res = optimal_matching([], [], [F(2), F(3)], 2)
    assert res.total == 13 and [j for j, _ in res.unmatched_b] == [0, 1]
    res = optimal_matching([[]], [F(5)], [], INF)
    assert res.total == 5


def test_prefers_deletion_when_cheaper():
    res = optimal_matching([[F(10)]], [F(1)], [F(1)], 1)
    assert res.total == 2 and not res.pairs
    res = optimal_matching([[F(10)]], [F(1)], [F(1)], INF)
    assert res.total == 1


def test_p_changes_the_optimum():
    # one pair at cost 2 versus two deletions at cost 1.5 each
    ab, a0, zb = [[F(2)]], [F(3, 2)], [F(3, 2)]
    assert optimal_matching(ab, a0, zb, 1).total == 2
    assert optimal_matching(ab, a0, zb, 2).total == F(4)
    assert optimal_matching(ab, a0, zb, INF).total == F(3, 2)


def test_infinite_costs():
    res = optimal_matching([[INF]], [F(1)], [F(2)], 1)
    assert res.total == 3
    res = optimal_matching([[F(1)]], [INF], [INF], 2)
    assert res.total == 1
    res = optimal_matching([[INF]], [INF], [F(0)], 1)
    assert res.total == INF
    res = optimal_matching([[INF]], [INF], [F(0)], INF)
    assert res.total == INF


def test_result_recomputes_from_parts():
    rng = np.random.default_rng(1)
    for _ in range(20):
        ab, a0, zb = random_table(rng)
        for p in (1, 2, INF):
            res = optimal_matching(ab, a0, zb, p)
            assert res.recompute() == res.total
            used_a = [i for i, _, _ in res.pairs] + [i for i, _ in res.unmatched_a]
            used_b = [j for _, j, _ in res.pairs] + [j for j, _ in res.unmatched_b]
            assert sorted(used_a) == list(range(len(a0)))
            assert sorted(used_b) == list(range(len(zb)))


def test_value_rendering():
    res = optimal_matching([[], []], [F(1), F(1)], [], 2)
    assert res.total == 2
    assert res.value_decimal() == "1.414213562373"
    assert math.isclose(res.value, math.sqrt(2))
    assert decimal_root(F(9, 4), 1, 3) == "2.250"
    assert optimal_matching([[]], [F(1, 3)], [], 1).value == F(1, 3)


def test_negative_cost_rejected():
    with pytest.raises(ValueError):
        optimal_matching([[F(-1)]], [F(0)], [F(0)], 1)
    with pytest.raises(ValueError):
        optimal_matching([[F(1), F(1)]], [F(0)], [F(0)], 1)


def test_three_by_three_table():
    ab = [[F(1), F(5), F(9)], [F(4), F(2), F(7)], [F(8), F(6), F(3)]]
    a0 = [F(2), F(2), F(2)]
    zb = [F(2), F(2), F(2)]
    for p in (1, 2, INF):
        assert optimal_matching(ab, a0, zb, p).total == brute_force_matching(ab, a0, zb, p)


@given(seeds)
def test_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    ab, a0, zb = random_table(rng, max_side=5, inf_probability=0.1)
    for p in (1, 2, 3, INF):
        assert optimal_matching(ab, a0, zb, p).total == brute_force_matching(ab, a0, zb, p)


def test_deterministic_output():
    rng = np.random.default_rng(9)
    ab, a0, zb = random_table(rng)
    first = optimal_matching(ab, a0, zb, 2)
    for _ in range(3):
        again = optimal_matching(ab, a0, zb, 2)
        assert (again.pairs, again.unmatched_a, again.unmatched_b) == (first.pairs, first.unmatched_a,
                                                                      first.unmatched_b)
