from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from triwass.complex import derived_barcode, shift_barcode
from triwass.derived_equiv import (
    Reflection,
    all_orientations,
    indecomposable_objects,
    isometry_report,
    reflect_derived,
    reflect_quiver,
    reflect_rep,
    transport_family,
    valid_reflections,
)
from triwass.quiver import AnQuiver, Interval, decompose, euler_form, interval_rep, simple_rep
from triwass.random_objects import random_complex, random_quiver, random_rep
from triwass.weights import WeightFamily, hom_derived_dim, weight_vector

seeds = st.integers(0, 2**32 - 1)
A2 = AnQuiver.equioriented(2)
ABS_CHI = WeightFamily.abs_chi()


def quivers(n_max):
    for n in range(1, n_max + 1):
        for o in all_orientations(n):
            yield AnQuiver(n, o)


def alt_dims(bars, n):
    out = [0] * n
    for (iv, d), m in bars.items():
        for p in range(iv.a - 1, iv.b):
            out[p] += (-1) ** (d % 2) * m
    return out


def test_reflect_quiver_examples():
    sink2 = Reflection(1, "sink")
    assert reflect_quiver(A2, sink2).orientation == ("B",)
    assert reflect_quiver(reflect_quiver(A2, sink2), sink2.inverse()) == A2
    assert reflect_quiver(AnQuiver(3, ("F", "B")), sink2).orientation == ("B", "F")
    with pytest.raises(ValueError):
        reflect_quiver(A2, Reflection(0, "sink"))
    with pytest.raises(ValueError):
        Reflection(0, "middle")


def test_reflections_keep_measure_and_positions():
    q = AnQuiver(3, ("F", "B"), (0, 2, 7), (1, 3, 5))
    q2 = reflect_quiver(q, Reflection(1, "sink"))
    assert q2.positions == q.positions and q2.measure == q.measure


def test_reflect_rep_examples():
    r = Reflection(1, "sink")
    q2 = reflect_quiver(A2, r)
    assert decompose(reflect_rep(interval_rep(A2, Interval(1, 2)), r)) == Counter({Interval(1, 1): 1})
    image = reflect_rep(simple_rep(A2, 0), r)
    assert image.quiver == q2
    assert decompose(image) == Counter({Interval(1, 2): 1})


@given(seeds)
def test_reflect_rep_back_and_forth(seed):
    rng = np.random.default_rng(seed)
    q = random_quiver(rng, n_max=5)
    m = random_rep(q, rng)
    for r in valid_reflections(q):
        back = reflect_rep(reflect_rep(m, r), r.inverse())
        expected = decompose(m)
        expected.pop(Interval(r.vertex + 1, r.vertex + 1), None)
        assert decompose(back) == expected


def test_reflect_derived_examples():
    q = AnQuiver(3, ("F", "B"))
    r = Reflection(1, "sink")
    assert reflect_derived(Counter({(Interval(2, 2), 0): 1}), q, r) == Counter({(Interval(2, 2), 1): 1})
    assert reflect_derived(Counter({(Interval(1, 2), 0): 1}), A2, r) == Counter({(Interval(1, 1), 0): 1})
    assert reflect_derived(Counter(), q, r) == Counter()
    src = Reflection(0, "source")
    assert reflect_derived(Counter({(Interval(1, 1), 0): 2}), A2, src) == Counter({(Interval(1, 1), -1): 2})


def test_reflect_derived_involution():
    for q in quivers(5):
        for r in valid_reflections(q):
            q2 = reflect_quiver(q, r)
            for obj in indecomposable_objects(q, (-1, 0, 1)):
                assert reflect_derived(reflect_derived(obj, q, r), q2, r.inverse()) == obj


def test_hom_preservation():
    for q in quivers(4):
        objs = indecomposable_objects(q, (0,))
        shifted = indecomposable_objects(q, range(-2, 3))
        for r in valid_reflections(q):
            q2 = reflect_quiver(q, r)
            for x in objs:
                ex = reflect_derived(x, q, r)
                for y in shifted:
                    ey = reflect_derived(y, q, r)
                    assert hom_derived_dim(q, x, y) == hom_derived_dim(q2, ex, ey), (q, r, x, y)


def test_euler_form_preservation():
    for q in quivers(5):
        objs = indecomposable_objects(q, (0, 1))
        for r in valid_reflections(q):
            q2 = reflect_quiver(q, r)
            images = [reflect_derived(x, q, r) for x in objs]
            for x, ex in zip(objs, images):
                for y, ey in zip(objs, images):
                    before = euler_form(q, alt_dims(x, q.n), alt_dims(y, q.n))
                    after = euler_form(q2, alt_dims(ex, q.n), alt_dims(ey, q.n))
                    assert before == after


def test_transport_family_examples():
    r = Reflection(1, "sink")
    t = transport_family(ABS_CHI, A2, r)
    assert t.target.kind == "hom_into" and t.reflection == r
    assert t.target.targets[1] == Counter({(Interval(2, 2), 1): 1})
    assert t.target.targets[0] == Counter({(Interval(1, 2), 0): 1})
    with pytest.raises(ValueError):
        transport_family(WeightFamily.hdim(), A2, r)
    with pytest.raises(ValueError):
        transport_family(WeightFamily.total_dim(), A2, r)
    zero = WeightFamily.hom_into_single(A2, Counter())
    t0 = transport_family(zero, A2, r)
    assert all(not t for t in t0.target.targets)


@given(seeds)
def test_transport_round_trip(seed):
    rng = np.random.default_rng(seed)
    q = random_quiver(rng, n_max=4, n_min=2)
    r = valid_reflections(q)[int(rng.integers(len(valid_reflections(q))))]
    q2 = reflect_quiver(q, r)
    there = transport_family(ABS_CHI, q, r).target
    back = transport_family(there, q2, r.inverse()).target
    for _ in range(5):
        bars = derived_barcode(random_complex(q, rng))
        assert weight_vector(bars, back, q) == weight_vector(bars, ABS_CHI, q)
        assert weight_vector(reflect_derived(bars, q, r), there, q2) == weight_vector(bars, ABS_CHI, q)


def test_isometry_on_a3():
    for q in quivers(3):
        objs = indecomposable_objects(q, (0, 1))
        for r in valid_reflections(q):
            for p in (1, 2, "inf"):
                report = isometry_report(objs, ABS_CHI, q, r, p)
                assert report.discrepancies == []
                assert report.pairs_checked == len(objs) * (len(objs) + 1) // 2


def test_isometry_accepts_complexes():
    rng = np.random.default_rng(6)
    q = AnQuiver(3, ("B", "F"))
    objs = [random_complex(q, rng) for _ in range(4)]
    report = isometry_report(objs, ABS_CHI, q, valid_reflections(q)[0], 2)
    assert report.discrepancies == []


def test_single_object_against_itself():
    q = AnQuiver(2, ("F",))
    obj = [Counter({(Interval(1, 2), 0): 1})]
    report = isometry_report(obj, ABS_CHI, q, Reflection(1, "sink"), 1)
    assert report.pairs_checked == 1 and not report.discrepancies


def test_wrong_transport_is_caught():
    r = Reflection(1, "sink")
    objs = [Counter({(Interval(2, 2), 0): 1, (Interval(1, 1), 0): 1})]
    report = isometry_report(objs, ABS_CHI, A2, r, 1, shift_simple=False)
    assert report.discrepancies
    assert {d["quantity"] for d in report.discrepancies} >= {"euler_weight"}
    assert not isometry_report(objs, ABS_CHI, A2, r, 1).discrepancies


def test_shift_commutes_with_reflection():
    q = AnQuiver(4, ("F", "B", "B"))
    for r in valid_reflections(q):
        for obj in indecomposable_objects(q, (0,)):
            assert reflect_derived(shift_barcode(obj, 1), q, r) == shift_barcode(reflect_derived(obj, q, r), 1)
