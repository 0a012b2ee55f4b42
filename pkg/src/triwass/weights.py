"""Euler-characteristic weights on bounded complexes and their integrals.

A weight family assigns to every vertex ``p`` a functor ``F_p`` and evaluates
``|sum_i (-1)^i dim F_p^i(X)|``.  Three families are provided:

* ``hdim``     ``F_p^i(X) = H^i(X)(p)``
* ``abs_chi``  ``F_p^i(X) = Hom_D(X[-i], S_p)`` with ``S_p`` the simple stalk at p
* ``hom_into`` ``F_p^i(X) = Hom_D(X[-i], T_p)`` for arbitrary target objects

plus ``total_dim``, the alternating-sign-free total dimension of the terms.
It is not invariant under quasi-isomorphism and serves as a negative control.

Derived Hom is evaluated on derived barcodes: for interval summands placed in
degrees ``d`` and ``e``, ``Hom_D(M_I[-d], M_J[-e])`` is ``Hom(M_I, M_J)`` when
``d == e``, ``Ext^1(M_I, M_J)`` when ``d == e + 1`` and zero otherwise.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import linalg as la
from .complex import (
    DerivedBarcode,
    RepComplex,
    cohomology_dims,
    complex_direct_sum,
    cone,
    derived_barcode,
    shift,
)
from .quiver import AnQuiver, Interval, euler_form, interval_hom_ext

HDIM = "hdim"
ABS_CHI = "abs_chi"
HOM_INTO = "hom_into"
TOTAL_DIM = "total_dim"

Object = Union[RepComplex, DerivedBarcode]


@dataclass(frozen=True, eq=True)
class WeightFamily:
    kind: str
    targets: tuple = ()
    quiver: AnQuiver | None = None

    def __post_init__(self):
        if self.kind not in (HDIM, ABS_CHI, HOM_INTO, TOTAL_DIM):
            raise ValueError(f"unknown weight family {self.kind!r}")
        if self.kind == HOM_INTO:
            if self.quiver is None or len(self.targets) != self.quiver.n:
                raise ValueError("hom_into needs a quiver and one target per vertex")
            object.__setattr__(self, "targets", tuple(Counter(t) for t in self.targets))

    __hash__ = None

    @classmethod
    def hdim(cls) -> "WeightFamily":
        return cls(HDIM)

    @classmethod
    def abs_chi(cls) -> "WeightFamily":
        return cls(ABS_CHI)

    @classmethod
    def total_dim(cls) -> "WeightFamily":
        return cls(TOTAL_DIM)

    @classmethod
    def hom_into(cls, quiver: AnQuiver, targets: Sequence[Object]) -> "WeightFamily":
        """One representable functor ``Hom_D(-, T_p)`` per vertex."""
        return cls(HOM_INTO, tuple(_bars(t) for t in targets), quiver)

    @classmethod
    def hom_into_single(cls, quiver: AnQuiver, target: Object) -> "WeightFamily":
        """The single functor ``Hom_D(-, T)``, evaluated identically at every vertex."""
        return cls.hom_into(quiver, [target] * quiver.n)

    @classmethod
    def from_name(cls, name: str) -> "WeightFamily":
        key = name.replace("-", "_").lower()
        if key not in (HDIM, ABS_CHI, TOTAL_DIM):
            raise ValueError(f"unknown weight family {name!r}; expected hdim, abs-chi or total-dim")
        return cls(key)


def _bars(obj: Object) -> DerivedBarcode:
    if isinstance(obj, RepComplex):
        return derived_barcode(obj)
    return Counter(obj)


def simple_stalk_bars(vertex: int) -> DerivedBarcode:
    return Counter({(Interval(vertex + 1, vertex + 1), 0): 1})


def hom_derived_dim(quiver: AnQuiver, x: DerivedBarcode, y: DerivedBarcode) -> int:
    """``dim Hom_D(X, Y)`` for objects given by their derived barcodes."""
    total = 0
    for (i, d), m in x.items():
        for (j, e), k in y.items():
            if d == e:
                total += m * k * interval_hom_ext(quiver, i, j)[0]
            elif d == e + 1:
                total += m * k * interval_hom_ext(quiver, i, j)[1]
    return total


def _hom_into_value(quiver: AnQuiver, x: DerivedBarcode, target: DerivedBarcode) -> int:
    """``|sum_i (-1)^i dim Hom_D(X[-i], T)|`` by literal summation over i."""
    if not x or not target:
        return 0
    dx = [d for _, d in x]
    dt = [e for _, e in target]
    total = 0
    for i in range(min(dt) - max(dx) - 1, max(dt) - min(dx) + 2):
        # X[-i] has its degree-d summands in degree d + i
        moved = Counter({(iv, d + i): m for (iv, d), m in x.items()})
        total += (-1) ** (i % 2) * hom_derived_dim(quiver, moved, target)
    return abs(total)


def _alt_dims_from_bars(quiver: AnQuiver, bars: DerivedBarcode) -> list[int]:
    out = [0] * quiver.n
    for (iv, d), m in bars.items():
        for p in range(iv.a - 1, iv.b):
            out[p] += (-1) ** (d % 2) * m
    return out


def weight_vector(obj: Object, fam: WeightFamily, quiver: AnQuiver | None = None) -> tuple[int, ...]:
    """``p -> |sum_i (-1)^i dim F_p^i(obj)|`` for every vertex."""
    if isinstance(obj, RepComplex):
        quiver = obj.quiver
    elif quiver is None:
        raise ValueError("a quiver is needed to weigh a bare derived barcode")
    if fam.kind == HDIM:
        if isinstance(obj, RepComplex):
            alt = [0] * quiver.n
            for i in obj.degrees():
                for p, h in enumerate(cohomology_dims(obj, i)):
                    alt[p] += (-1) ** (i % 2) * h
        else:
            alt = _alt_dims_from_bars(quiver, obj)
        return tuple(abs(a) for a in alt)
    if fam.kind == TOTAL_DIM:
        if isinstance(obj, RepComplex):
            return obj.total_dims()
        out = [0] * quiver.n
        for (iv, _), m in obj.items():
            for p in range(iv.a - 1, iv.b):
                out[p] += m
        return tuple(out)
    bars = _bars(obj)
    if fam.kind == ABS_CHI:
        targets = [simple_stalk_bars(p) for p in range(quiver.n)]
    else:
        if fam.quiver != quiver:
            raise ValueError("weight family and object live over different quivers")
        targets = fam.targets
    return tuple(_hom_into_value(quiver, bars, t) for t in targets)


def euler_weight(obj: Object, fam: WeightFamily, vertex: int, quiver: AnQuiver | None = None) -> int:
    return weight_vector(obj, fam, quiver)[vertex]


def hdim(c: Object, quiver: AnQuiver | None = None) -> tuple[int, ...]:
    return weight_vector(c, WeightFamily.hdim(), quiver)


def abs_chi(c: Object, quiver: AnQuiver | None = None) -> tuple[int, ...]:
    return weight_vector(c, WeightFamily.abs_chi(), quiver)


def abs_chi_euler_form(c: Object, quiver: AnQuiver | None = None) -> tuple[int, ...]:
    """|χ| through the Euler form of the alternating cohomology dimension vector."""
    if isinstance(c, RepComplex):
        quiver = c.quiver
        alt = [0] * quiver.n
        for i in c.degrees():
            for p, h in enumerate(cohomology_dims(c, i)):
                alt[p] += (-1) ** (i % 2) * h
    else:
        alt = _alt_dims_from_bars(quiver, c)
    return tuple(abs(euler_form(quiver, alt, [int(p == v) for p in range(quiver.n)]))
                 for v in range(quiver.n))


def integrate(v: Sequence, quiver: AnQuiver) -> Fraction:
    """``sum_p mu(p) v(p)``."""
    if len(v) != quiver.n:
        raise ValueError(f"weight vector has {len(v)} entries, quiver has {quiver.n} vertices")
    return sum((mu * x for mu, x in zip(quiver.measure, v)), Fraction(0))


def weight(obj: Object, fam: WeightFamily, quiver: AnQuiver | None = None) -> Fraction:
    """The integrated weight ``(mu ∘ w_F)(obj)``."""
    if isinstance(obj, RepComplex):
        quiver = obj.quiver
    return integrate(weight_vector(obj, fam, quiver), quiver)


@dataclass
class ExactnessReport:
    family: str
    trials: int
    seed: int
    violations: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"family": self.family, "trials": self.trials, "seed": self.seed,
                "violations": self.violations}


def triangle_violations(ws: Sequence[Fraction]) -> list[str]:
    """Which of the three triangle inequalities fail for weights (X, Y, Z)."""
    wx, wy, wz = ws
    failed = []
    if wx > wy + wz:
        failed.append("w(X) <= w(Y) + w(Z)")
    if wy > wx + wz:
        failed.append("w(Y) <= w(X) + w(Z)")
    if wz > wx + wy:
        failed.append("w(Z) <= w(X) + w(Y)")
    return failed


def random_triangle(rng: np.random.Generator, n_max: int = 5, max_terms: int = 4, max_dim: int = 3,
                    replace_probability: float = 0.5):
    """A cone triangle ``X -> Y -> cone(f) -> X[1]``, each vertex possibly
    replaced by an isomorphic object of the derived category (a direct sum with
    a contractible complex)."""
    from .random_objects import random_chain_morphism, random_complex, random_contractible, random_quiver

    q = random_quiver(rng, n_max)
    x = random_complex(q, rng, max_terms, max_dim)
    y = random_complex(q, rng, max_terms, max_dim)
    f = random_chain_morphism(x, y, rng)
    z = cone(f)
    objs = []
    for c in (x, y, z):
        if rng.random() < replace_probability:
            c = complex_direct_sum(c, random_contractible(q, rng))
        objs.append(c)
    return q, f, objs


def check_exactness(fam: WeightFamily, trials: int, seed: int, n_max: int = 5,
                    max_terms: int = 4, max_dim: int = 3) -> ExactnessReport:
    """Test the three triangle inequalities and suspension invariance on random triangles.

    Trial ``t`` draws from ``default_rng([seed, t])`` so trials are independent
    streams and any single counterexample can be replayed.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    report = ExactnessReport(fam.kind, trials, seed)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        q, _, objs = random_triangle(rng, n_max, max_terms, max_dim)
        ws = [weight(c, fam) for c in objs]
        failed = triangle_violations(ws)
        for name, c, w in zip("XYZ", objs, ws):
            ws_shift = weight(shift(c, 1), fam)
            if ws_shift != w:
                failed.append(f"w({name}) == w({name}[1])")
        if failed:
            report.violations.append({
                "trial": t,
                "seed": seed,
                "orientation": "".join(q.orientation),
                "triangle_dims": [list(c.total_dims()) for c in objs],
                "weights": [la.fraction_str(w) for w in ws],
                "failed": failed,
            })
    return report
