"""Bounded cochain complexes of quiver representations.

Complexes are cohomologically indexed: ``d^i : X^i -> X^{i+1}``.  Shift follows
``(X[l])^i = X^{i+l}`` with differentials multiplied by ``(-1)^l``, so ``[1]`` is
the suspension.
"""
from __future__ import annotations

from collections import Counter
from typing import Mapping, Sequence

import numpy as np

from . import linalg as la
from .quiver import (
    AnQuiver,
    Rep,
    RepMorphism,
    decompose,
    direct_sum,
    direct_sum_morphism,
    interval_rep,
)

DerivedBarcode = Counter  # Counter[(Interval, degree)] -> multiplicity


class RepComplex:
    """Terms ``terms[k]`` sit in degree ``lo + k``; ``diffs[k]`` leaves that degree."""

    __slots__ = ("quiver", "lo", "terms", "diffs")

    def __init__(self, quiver: AnQuiver, lo: int, terms: Sequence[Rep], diffs: Sequence[RepMorphism] = ()):
        terms = tuple(terms)
        diffs = tuple(diffs)
        if any(t.quiver != quiver for t in terms):
            raise ValueError("all terms must live over the same quiver")
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValueError(f"{len(terms)} terms need {max(len(terms) - 1, 0)} differentials")
        for k, d in enumerate(diffs):
            if d.source.dims != terms[k].dims or d.target.dims != terms[k + 1].dims:
                raise ValueError(f"differential in degree {lo + k} has the wrong shape")
        for k in range(len(diffs) - 1):
            for p in range(quiver.n):
                if la.mul(diffs[k + 1].components[p], diffs[k].components[p]).any():
                    raise ValueError(f"d∘d != 0 in degree {lo + k} at vertex {p}")
        self.quiver = quiver
        self.lo = int(lo)
        self.terms = terms
        self.diffs = diffs

    @classmethod
    def zero(cls, quiver: AnQuiver) -> "RepComplex":
        return cls(quiver, 0, ())

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> Rep:
        if self.lo <= i <= self.hi:
            return self.terms[i - self.lo]
        return Rep.zero(self.quiver)

    def diff(self, i: int) -> RepMorphism:
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return RepMorphism.zero(self.term(i), self.term(i + 1))

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def total_dims(self) -> tuple[int, ...]:
        return tuple(sum(t.dims[p] for t in self.terms) for p in range(self.quiver.n))

    def trimmed(self) -> "RepComplex":
        """Drop zero terms at both ends of the window."""
        nz = [k for k, t in enumerate(self.terms) if not t.is_zero()]
        if not nz:
            return RepComplex.zero(self.quiver)
        a, b = nz[0], nz[-1]
        return RepComplex(self.quiver, self.lo + a, self.terms[a : b + 1], self.diffs[a:b])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepComplex):
            return NotImplemented
        x, y = self.trimmed(), other.trimmed()
        return (
            x.quiver == y.quiver
            and len(x.terms) == len(y.terms)
            and (not x.terms or x.lo == y.lo)
            and x.terms == y.terms
            and x.diffs == y.diffs
        )

    __hash__ = None

    def __repr__(self) -> str:
        dims = ", ".join(f"{i}:{t.dims}" for i, t in zip(self.degrees(), self.terms))
        return f"RepComplex({dims})"


class ChainMorphism:
    """Degreewise natural maps commuting with the differentials."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: RepComplex, target: RepComplex,
                 components: Mapping[int, RepMorphism | Sequence], check: bool = True):
        if source.quiver != target.quiver:
            raise ValueError("chain morphism between complexes over different quivers")
        comps: dict[int, RepMorphism] = {}
        for i, f in components.items():
            i = int(i)
            if not isinstance(f, RepMorphism):
                f = RepMorphism(source.term(i), target.term(i), f, check=check)
            if f.source.dims != source.term(i).dims or f.target.dims != target.term(i).dims:
                raise ValueError(f"component in degree {i} has the wrong shape")
            if not f.is_zero():
                comps[i] = f
        self.source = source
        self.target = target
        self.components = comps
        if check:
            bad = self.commutation_defect()
            if bad is not None:
                raise ValueError(f"chain morphism does not commute with d in degree {bad}")

    def component(self, i: int) -> RepMorphism:
        f = self.components.get(i)
        if f is None:
            return RepMorphism.zero(self.source.term(i), self.target.term(i))
        return f

    def window(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def commutation_defect(self) -> int | None:
        for i in self.window():
            for p in range(self.source.quiver.n):
                lhs = la.mul(self.component(i + 1).components[p], self.source.diff(i).components[p])
                rhs = la.mul(self.target.diff(i).components[p], self.component(i).components[p])
                if not np.array_equal(lhs, rhs):
                    return i
        return None

    @classmethod
    def identity(cls, c: RepComplex) -> "ChainMorphism":
        return cls(c, c, {i: RepMorphism.identity(t) for i, t in zip(c.degrees(), c.terms)}, check=False)

    @classmethod
    def zero(cls, source: RepComplex, target: RepComplex) -> "ChainMorphism":
        return cls(source, target, {}, check=False)


def stalk(m: Rep, degree: int = 0) -> RepComplex:
    return RepComplex(m.quiver, degree, (m,))


def stalk_morphism(f: RepMorphism, degree: int = 0) -> ChainMorphism:
    return ChainMorphism(stalk(f.source, degree), stalk(f.target, degree), {degree: f}, check=False)


def shift(c: RepComplex, ell: int) -> RepComplex:
    sign = -1 if ell % 2 else 1
    diffs = [d.scaled(sign) for d in c.diffs]
    return RepComplex(c.quiver, c.lo - ell, c.terms, diffs)


def shift_morphism(f: ChainMorphism, ell: int) -> ChainMorphism:
    comps = {i - ell: g for i, g in f.components.items()}
    return ChainMorphism(shift(f.source, ell), shift(f.target, ell), comps, check=False)


def complex_direct_sum(x: RepComplex, y: RepComplex) -> RepComplex:
    if x.quiver != y.quiver:
        raise ValueError("direct sum of complexes over different quivers")
    if not x.terms:
        return y
    if not y.terms:
        return x
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    terms = [direct_sum(x.term(i), y.term(i)) for i in range(lo, hi + 1)]
    diffs = [direct_sum_morphism(x.diff(i), y.diff(i)) for i in range(lo, hi)]
    return RepComplex(x.quiver, lo, terms, diffs)


def cone(f: ChainMorphism) -> RepComplex:
    """Mapping cone: ``C^i = Y^i ⊕ X^{i+1}`` with ``d = [[d_Y, f], [0, -d_X]]``."""
    x, y = f.source, f.target
    q = x.quiver
    windows = [(y.lo, y.hi)] if y.terms else []
    if x.terms:
        windows.append((x.lo - 1, x.hi - 1))
    if not windows:
        return RepComplex.zero(q)
    lo, hi = min(w[0] for w in windows), max(w[1] for w in windows)
    terms = [direct_sum(y.term(i), x.term(i + 1)) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        comps = []
        for p in range(q.n):
            dy = y.diff(i).components[p]
            dx = x.diff(i + 1).components[p]
            fp = f.component(i + 1).components[p]
            comps.append(la.block([[dy, fp], [la.zeros(dx.shape[0], dy.shape[1]), la.neg(dx)]]))
        diffs.append(RepMorphism(terms[i - lo], terms[i + 1 - lo], comps, check=False))
    return RepComplex(q, lo, terms, diffs)


def cone_inclusion(f: ChainMorphism) -> ChainMorphism:
    """The canonical map ``Y -> cone(f)``."""
    c = cone(f)
    comps = {}
    for i in c.degrees():
        y = f.target.term(i)
        comps[i] = [la.block([[la.identity(d)], [la.zeros(c.term(i).dims[p] - d, d)]])
                    for p, d in enumerate(y.dims)]
    return ChainMorphism(f.target, c, comps, check=False)


def cohomology_dims(c: RepComplex, i: int) -> tuple[int, ...]:
    """Pointwise ``dim H^i``, from ranks of the vertexwise differentials."""
    t, din, dout = c.term(i), c.diff(i - 1), c.diff(i)
    return tuple(
        t.dims[p] - la.rank(dout.components[p]) - la.rank(din.components[p])
        for p in range(c.quiver.n)
    )


def _cycle_data(c: RepComplex, i: int):
    """Per vertex: cycle basis Z, projection of Z-coordinates onto H, and a section."""
    out = []
    for p in range(c.quiver.n):
        z = la.kernel_basis(c.diff(i).components[p])
        b = la.solve(z, c.diff(i - 1).components[p])
        if b is None:
            raise ArithmeticError("boundaries are not cycles")
        proj, _ = la.cokernel_projection(b)
        sect = la.right_inverse(proj) if proj.shape[0] else la.zeros(z.shape[1], 0)
        out.append((z, proj, sect))
    return out


def cohomology(c: RepComplex, i: int) -> Rep:
    """``H^i`` as a representation, with edge maps induced on the subquotients."""
    data = _cycle_data(c, i)
    t = c.term(i)
    maps = []
    for e, s, tt in c.quiver.arrows():
        zs, _, sect_s = data[s]
        zt, proj_t, _ = data[tt]
        y = la.solve(zt, la.mul(t.maps[e], zs))
        if y is None:
            raise ArithmeticError(f"edge map does not preserve cycles at edge {e}")
        maps.append(la.mul(la.mul(proj_t, y), sect_s))
    return Rep(c.quiver, [proj.shape[0] for _, proj, _ in data], maps)


def derived_barcode(c: RepComplex) -> DerivedBarcode:
    """``(interval, degree)`` summands of ``c ≅ ⊕ H^i(c)[-i]``."""
    bars: DerivedBarcode = Counter()
    for i in c.degrees():
        if not any(cohomology_dims(c, i)):
            continue
        for interval, mult in decompose(cohomology(c, i)).items():
            bars[(interval, i)] += mult
    return bars


def cohomology_map_ranks(f: ChainMorphism, i: int) -> tuple[int, ...]:
    """Pointwise ranks of ``H^i(f)``."""
    src, tgt = _cycle_data(f.source, i), _cycle_data(f.target, i)
    ranks = []
    for p in range(f.source.quiver.n):
        zx, _, sect_x = src[p]
        zy, proj_y, _ = tgt[p]
        y = la.solve(zy, la.mul(f.component(i).components[p], zx))
        if y is None:
            raise ArithmeticError("chain map does not send cycles to cycles")
        ranks.append(la.rank(la.mul(la.mul(proj_y, y), sect_x)))
    return tuple(ranks)


def is_quasi_iso(f: ChainMorphism) -> bool:
    for i in f.window():
        hx = cohomology_dims(f.source, i)
        hy = cohomology_dims(f.target, i)
        if hx != hy:
            return False
        if any(hx) and cohomology_map_ranks(f, i) != hx:
            return False
    return True


def shift_barcode(bars: DerivedBarcode, ell: int) -> DerivedBarcode:
    """Barcode of ``c[ell]`` from that of ``c``: degrees drop by ``ell``."""
    return Counter({(iv, d - ell): m for (iv, d), m in bars.items()})


def complex_from_barcode(quiver: AnQuiver, bars: DerivedBarcode) -> RepComplex:
    """Direct sum of shifted interval stalks with zero differentials."""
    out = RepComplex.zero(quiver)
    for (interval, degree), mult in sorted(bars.items()):
        for _ in range(mult):
            out = complex_direct_sum(out, stalk(interval_rep(quiver, interval), degree))
    return out


def chain_hom_basis(x: RepComplex, y: RepComplex) -> list[ChainMorphism]:
    """A basis of the space of chain maps ``x -> y``."""
    q = x.quiver
    degs = [i for i in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1)
            if not x.term(i).is_zero() and not y.term(i).is_zero()]
    if not degs:
        return []
    shapes, index = [], {}
    for i in degs:
        for p in range(q.n):
            index[(i, p)] = len(shapes)
            shapes.append((y.term(i).dims[p], x.term(i).dims[p]))
    eqs = []
    eye = la.identity
    for i in degs:
        xi, yi = x.term(i), y.term(i)
        for e, s, t in q.arrows():
            eqs.append([(index[(i, s)], yi.maps[e], eye(xi.dims[s])),
                        (index[(i, t)], la.neg(eye(yi.dims[t])), xi.maps[e])])
    for i in range(min(degs) - 1, max(degs) + 1):
        for p in range(q.n):
            terms = []
            if (i, p) in index:  # d_Y f^i
                terms.append((index[(i, p)], y.diff(i).components[p], eye(x.term(i).dims[p])))
            if (i + 1, p) in index:  # - f^{i+1} d_X
                terms.append((index[(i + 1, p)], la.neg(eye(y.term(i + 1).dims[p])),
                              x.diff(i).components[p]))
            if terms:
                eqs.append(terms)
    system = la.sylvester_system(shapes, eqs)
    ker = la.kernel_basis(system)
    out = []
    for k in range(ker.shape[1]):
        mats = la.unpack(ker[:, k], shapes)
        comps = {i: [mats[index[(i, p)]] for p in range(q.n)] for i in degs}
        out.append(ChainMorphism(x, y, comps, check=False))
    return out
