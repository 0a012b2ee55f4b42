from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from triwass import linalg as la
from triwass.complex import RepComplex, derived_barcode, shift, stalk
from triwass.quiver import AnQuiver, Interval, Rep, RepMorphism, interval_rep, simple_rep
from triwass.random_objects import random_complex, random_quiver, random_rep
from triwass.weights import (
    WeightFamily,
    abs_chi,
    abs_chi_euler_form,
    check_exactness,
    euler_weight,
    hdim,
    integrate,
    simple_stalk_bars,
    triangle_violations,
    weight,
    weight_vector,
)

seeds = st.integers(0, 2**32 - 1)
FAMILIES = [WeightFamily.hdim(), WeightFamily.abs_chi(), WeightFamily.total_dim()]


def test_zero_complex_has_zero_weight():
    q = AnQuiver(3, ("F", "B"))
    for fam in FAMILIES:
        assert weight_vector(RepComplex.zero(q), fam) == (0, 0, 0)


def test_hdim_of_stalk_is_dimension_vector():
    rng = np.random.default_rng(0)
    q = random_quiver(rng, n_max=5, n_min=3)
    m = random_rep(q, rng)
    assert hdim(stalk(m, 0)) == m.dims
    assert euler_weight(stalk(m, 3), WeightFamily.hdim(), 1) == m.dims[1]


def test_hdim_alternates():
    q = AnQuiver(1, ())
    c = RepComplex(q, 0, [Rep(q, (2,)), Rep(q, (1,))], [RepMorphism(Rep(q, (2,)), Rep(q, (1,)), [la.zeros(1, 2)])])
    assert hdim(c) == (1,)


def test_abs_chi_of_simple():
    q = AnQuiver(3, ("B", "F"))
    for p in range(3):
        assert abs_chi(stalk(simple_rep(q, p), 0))[p] == 1


def test_integrate_examples():
    q = AnQuiver.equioriented(3)
    assert integrate((0, 0, 0), q) == 0
    assert integrate(hdim(stalk(interval_rep(q, Interval(1, 3)), 0)), q) == 3
    # cell lengths as measure: an interval's weight is the length it covers
    pos = (0, Fraction(1, 2), 2, 5)
    mu = [b - a for a, b in zip(pos, pos[1:])] + [1]
    q4 = AnQuiver(4, ("F", "F", "F"), pos, mu)
    assert weight(stalk(interval_rep(q4, Interval(1, 3)), 0), WeightFamily.hdim()) == 5
    with pytest.raises(ValueError):
        integrate((1, 2), q)


@given(seeds)
def test_suspension_invariance(seed):
    rng = np.random.default_rng(seed)
    q = random_quiver(rng, n_max=4)
    c = random_complex(q, rng)
    for fam in FAMILIES:
        w = weight(c, fam)
        for ell in (-2, -1, 1, 2):
            assert weight(shift(c, ell), fam) == w


@given(seeds)
def test_hdim_shift_keeps_vector(seed):
    rng = np.random.default_rng(seed)
    c = random_complex(random_quiver(rng, n_max=4), rng)
    assert hdim(shift(c, 1)) == hdim(c)


@given(seeds)
def test_abs_chi_matches_euler_form(seed):
    rng = np.random.default_rng(seed)
    c = random_complex(random_quiver(rng, n_max=5), rng)
    assert abs_chi(c) == abs_chi_euler_form(c)
    bars = derived_barcode(c)
    assert abs_chi(bars, c.quiver) == abs_chi(c)


def test_hom_into_simples_is_abs_chi():
    rng = np.random.default_rng(5)
    q = random_quiver(rng, n_max=5, n_min=3)
    fam = WeightFamily.hom_into(q, [simple_stalk_bars(p) for p in range(q.n)])
    for _ in range(10):
        c = random_complex(q, rng)
        assert weight_vector(c, fam) == abs_chi(c)


def test_hom_into_zero_target():
    q = AnQuiver.equioriented(3)
    fam = WeightFamily.hom_into_single(q, Counter())
    c = stalk(interval_rep(q, Interval(1, 3)), 0)
    assert weight_vector(c, fam) == (0, 0, 0)


def test_hom_into_needs_matching_quiver():
    q = AnQuiver.equioriented(2)
    with pytest.raises(ValueError):
        WeightFamily.hom_into(q, [Counter()])
    fam = WeightFamily.hom_into_single(q, Counter())
    with pytest.raises(ValueError):
        weight_vector(stalk(simple_rep(AnQuiver(2, ("B",)), 0), 0), fam)


def test_family_names():
    assert WeightFamily.from_name("abs-chi").kind == "abs_chi"
    assert WeightFamily.from_name("total-dim").kind == "total_dim"
    with pytest.raises(ValueError):
        WeightFamily.from_name("bogus")


def test_triangle_violations():
    assert triangle_violations([1, 1, 2]) == []
    assert triangle_violations([Fraction(3), 1, 1]) == ["w(X) <= w(Y) + w(Z)"]


@pytest.mark.parametrize("fam", [WeightFamily.hdim(), WeightFamily.abs_chi()])
def test_exact_families_have_no_violations(fam):
    report = check_exactness(fam, 40, seed=11)
    assert report.violations == []
    assert report.to_dict()["trials"] == 40


def test_total_dim_is_not_exact():
    report = check_exactness(WeightFamily.total_dim(), 200, seed=11)
    assert report.violations
    v = report.violations[0]
    assert {"trial", "seed", "orientation", "triangle_dims", "weights", "failed"} <= set(v)


def test_total_dim_fails_on_acyclic_complex():
    q = AnQuiver(1, ())
    m = Rep(q, (1,))
    acyclic = RepComplex(q, 0, [m, m], [RepMorphism.identity(m)])
    # 0 -> acyclic -> cone: all three are zero in the derived category
    assert weight(acyclic, WeightFamily.hdim()) == 0
    assert weight(acyclic, WeightFamily.total_dim()) == 2
    assert triangle_violations([weight(acyclic, WeightFamily.total_dim()), 0, 0])


def test_exactness_is_reproducible():
    a = check_exactness(WeightFamily.total_dim(), 30, seed=4)
    b = check_exactness(WeightFamily.total_dim(), 30, seed=4)
    assert a.to_dict() == b.to_dict()
    with pytest.raises(ValueError):
        check_exactness(WeightFamily.hdim(), 0, seed=1)
