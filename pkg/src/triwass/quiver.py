"""Type-A quivers, their representations, and interval decomposition."""
from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la

FORWARD = "F"
BACKWARD = "B"


@dataclass(frozen=True)
class AnQuiver:
    """A quiver of type A_n with one orientation flag per edge.

    Edge ``e`` joins vertices ``e`` and ``e + 1`` (0-based); ``"F"`` means
    ``e -> e + 1`` and ``"B"`` means ``e + 1 -> e``.  Every vertex carries a
    real position (a label only) and a nonnegative measure weight.
    """

    n: int
    orientation: tuple[str, ...]
    positions: tuple[Fraction, ...] = ()
    measure: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a quiver needs at least one vertex")
        orient = tuple(self.orientation)
        if len(orient) != self.n - 1 or any(o not in (FORWARD, BACKWARD) for o in orient):
            raise ValueError(f"orientation must be {self.n - 1} flags from 'F'/'B', got {orient}")
        pos = tuple(la.to_fraction(x) for x in self.positions) or tuple(
            Fraction(i) for i in range(self.n)
        )
        mu = tuple(la.to_fraction(x) for x in self.measure) or (Fraction(1),) * self.n
        if len(pos) != self.n or len(mu) != self.n:
            raise ValueError("positions and measure need one entry per vertex")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")
        if any(m < 0 for m in mu):
            raise ValueError("measure values must be nonnegative")
        object.__setattr__(self, "orientation", orient)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "measure", mu)

    @classmethod
    def equioriented(cls, n: int, **kw) -> "AnQuiver":
        return cls(n, (FORWARD,) * (n - 1), **kw)

    def edge_ends(self, e: int) -> tuple[int, int]:
        """(source, target) of edge ``e``."""
        return (e, e + 1) if self.orientation[e] == FORWARD else (e + 1, e)

    def arrows(self) -> list[tuple[int, int, int]]:
        return [(e, *self.edge_ends(e)) for e in range(self.n - 1)]

    def is_sink(self, v: int) -> bool:
        return all(t == v for e, s, t in self.arrows() if v in (s, t))

    def is_source(self, v: int) -> bool:
        return all(s == v for e, s, t in self.arrows() if v in (s, t))

    def with_orientation(self, orientation: Sequence[str]) -> "AnQuiver":
        return AnQuiver(self.n, tuple(orientation), self.positions, self.measure)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed vertex interval ``[a, b]`` with 1-based endpoints."""

    a: int
    b: int

    def __post_init__(self):
        if not 1 <= self.a <= self.b:
            raise ValueError(f"invalid interval [{self.a}, {self.b}]")

    def __contains__(self, vertex: int) -> bool:
        """Membership of a 0-based vertex."""
        return self.a - 1 <= vertex <= self.b - 1

    def indicator(self, n: int) -> tuple[int, ...]:
        return tuple(int(v in self) for v in range(n))

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


def _edge_shape(quiver: AnQuiver, dims: Sequence[int], e: int) -> tuple[int, int]:
    s, t = quiver.edge_ends(e)
    return dims[t], dims[s]


class Rep:
    """A representation: one vector space dimension per vertex, one matrix per edge.

    ``maps[e]`` has shape ``(dims[target], dims[source])`` for edge ``e``.
    """

    __slots__ = ("quiver", "dims", "maps")

    def __init__(self, quiver: AnQuiver, dims: Sequence[int], maps: Sequence | None = None):
        dims = tuple(int(d) for d in dims)
        if len(dims) != quiver.n or any(d < 0 for d in dims):
            raise ValueError(f"need {quiver.n} nonnegative dimensions, got {dims}")
        if maps is None:
            maps = [la.zeros(*_edge_shape(quiver, dims, e)) for e in range(quiver.n - 1)]
        if len(maps) != quiver.n - 1:
            raise ValueError(f"need {quiver.n - 1} edge maps, got {len(maps)}")
        checked = []
        for e, m in enumerate(maps):
            shape = _edge_shape(quiver, dims, e)
            m = la.as_matrix(m, *shape) if np.ndim(m) != 2 else la.as_matrix(m)
            if m.shape != shape:
                raise ValueError(f"edge {e}: map has shape {m.shape}, expected {shape}")
            m.setflags(write=False)
            checked.append(m)
        self.quiver = quiver
        self.dims = dims
        self.maps = tuple(checked)

    @classmethod
    def zero(cls, quiver: AnQuiver) -> "Rep":
        return cls(quiver, (0,) * quiver.n)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.dims == other.dims
            and all(np.array_equal(a, b) for a, b in zip(self.maps, other.maps))
        )

    def __hash__(self):
        return hash((self.quiver, self.dims, tuple(m.tobytes() for m in self.maps)))

    def __repr__(self) -> str:
        return f"Rep(dims={self.dims}, orientation={''.join(self.quiver.orientation)})"


class RepMorphism:
    """A natural transformation given by one matrix per vertex."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Rep, target: Rep, components: Sequence, check: bool = True):
        if source.quiver != target.quiver:
            raise ValueError("morphism between representations of different quivers")
        comps = []
        for p, f in enumerate(components):
            f = la.as_matrix(f, target.dims[p], source.dims[p]) if np.ndim(f) != 2 else la.as_matrix(f)
            if f.shape != (target.dims[p], source.dims[p]):
                raise ValueError(f"vertex {p}: component has shape {f.shape}")
            f.setflags(write=False)
            comps.append(f)
        if len(comps) != source.quiver.n:
            raise ValueError("need one component per vertex")
        self.source = source
        self.target = target
        self.components = tuple(comps)
        if check:
            bad = self.naturality_defect()
            if bad is not None:
                raise ValueError(f"morphism is not natural on edge {bad}")

    def naturality_defect(self) -> int | None:
        for e, s, t in self.source.quiver.arrows():
            lhs = la.mul(self.target.maps[e], self.components[s])
            rhs = la.mul(self.components[t], self.source.maps[e])
            if not np.array_equal(lhs, rhs):
                return e
        return None

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "RepMorphism":
        return cls(source, target, [la.zeros(t, s) for s, t in zip(source.dims, target.dims)], check=False)

    @classmethod
    def identity(cls, rep: Rep) -> "RepMorphism":
        return cls(rep, rep, [la.identity(d) for d in rep.dims], check=False)

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """``self ∘ other``."""
        if other.target.dims != self.source.dims:
            raise ValueError("morphisms are not composable")
        comps = [la.mul(f, g) for f, g in zip(self.components, other.components)]
        return RepMorphism(other.source, self.target, comps, check=False)

    def scaled(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [la.scale(f, c) for f in self.components], check=False)

    def is_zero(self) -> bool:
        return not any(f.any() for f in self.components)

    def ranks(self) -> tuple[int, ...]:
        return tuple(la.rank(f) for f in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and all(np.array_equal(a, b) for a, b in zip(self.components, other.components))
        )

    __hash__ = None


Barcode = Counter  # Counter[Interval]: interval -> multiplicity


def interval_rep(quiver: AnQuiver, interval: Interval) -> Rep:
    if interval.b > quiver.n:
        raise ValueError(f"interval {interval} outside A_{quiver.n}")
    dims = interval.indicator(quiver.n)
    maps = []
    for e, s, t in quiver.arrows():
        one = int(s in interval and t in interval)
        maps.append(np.full((dims[t], dims[s]), one, dtype=np.int64))
    return Rep(quiver, dims, maps)


def simple_rep(quiver: AnQuiver, vertex: int) -> Rep:
    """The simple module at a 0-based vertex."""
    return interval_rep(quiver, Interval(vertex + 1, vertex + 1))


def direct_sum(a: Rep, b: Rep) -> Rep:
    if a.quiver != b.quiver:
        raise ValueError("direct sum of representations of different quivers")
    dims = [x + y for x, y in zip(a.dims, b.dims)]
    maps = [la.block([[ma, la.zeros(ma.shape[0], mb.shape[1])], [la.zeros(mb.shape[0], ma.shape[1]), mb]])
            for ma, mb in zip(a.maps, b.maps)]
    return Rep(a.quiver, dims, maps)


def direct_sum_all(quiver: AnQuiver, reps: Sequence[Rep]) -> Rep:
    out = Rep.zero(quiver)
    for r in reps:
        out = direct_sum(out, r)
    return out


def rep_from_barcode(quiver: AnQuiver, barcode: Barcode) -> Rep:
    reps = []
    for interval in sorted(barcode):
        reps.extend([interval_rep(quiver, interval)] * barcode[interval])
    return direct_sum_all(quiver, reps)


def direct_sum_morphism(f: RepMorphism, g: RepMorphism) -> RepMorphism:
    comps = [la.block([[a, la.zeros(a.shape[0], b.shape[1])], [la.zeros(b.shape[0], a.shape[1]), b]])
             for a, b in zip(f.components, g.components)]
    return RepMorphism(direct_sum(f.source, g.source), direct_sum(f.target, g.target), comps, check=False)


def decompose(m: Rep) -> Barcode:
    """Interval decomposition by a single left-to-right sweep.

    At the current vertex we keep a basis whose columns are generators of the
    interval summands still alive, each tagged with its birth vertex, together
    with a total order in which a column may only be modified by adding
    columns that precede it.  That order is exactly the set of automorphisms of
    the restricted module: a column born across a forward edge may absorb all
    older columns, one born across a backward edge may be absorbed by them.
    """
    q = m.quiver
    n = q.n
    bars: Counter = Counter()
    basis = la.identity(m.dims[0])
    births = [0] * m.dims[0]
    order = list(range(m.dims[0]))  # column indices, earlier may be added to later

    for e in range(n - 1):
        d_next = m.dims[e + 1]
        alive: list[int] = []
        dead: list[int] = []
        if q.orientation[e] == FORWARD:
            images = la.mul(m.maps[e], basis)
            echelon: list[tuple[int, np.ndarray]] = []
            new_cols = {}
            for c in order:
                v = _reduce(images[:, c].copy(), echelon)
                if not v.any():
                    dead.append(c)
                    continue
                piv = int(np.nonzero(v)[0][0])
                v = (v * la.inv_scalar(v[piv])) % la.get_prime()
                echelon.append((piv, v))
                new_cols[c] = v
                alive.append(c)
            used = {p for p, _ in echelon}
            fresh = [r for r in range(d_next) if r not in used]
            cols = [new_cols[c] for c in alive] + [la.identity(d_next)[:, r] for r in fresh]
            new_births = [births[c] for c in alive] + [e + 1] * len(fresh)
            born = list(range(len(alive), len(alive) + len(fresh)))
            # born across a forward edge: may absorb every older column
            new_order = list(range(len(alive))) + born
        else:
            g = m.maps[e]  # M_{e+1} -> M_e
            coords = la.mul(la.inverse(basis), g) if basis.size else la.zeros(0, g.shape[1])
            proj, _ = la.cokernel_projection(coords)
            echelon_q: list[tuple[int, np.ndarray, np.ndarray]] = []
            combos = {}
            width = basis.shape[1]
            for c in order:
                v = proj[:, c].copy()
                comb = np.zeros(width, dtype=np.int64)
                comb[c] = 1
                v, comb = _reduce_tracked(v, comb, echelon_q)
                if not v.any():
                    combos[c] = comb
                    alive.append(c)
                    continue
                piv = int(np.nonzero(v)[0][0])
                inv = la.inv_scalar(v[piv])
                echelon_q.append((piv, (v * inv) % la.get_prime(), (comb * inv) % la.get_prime()))
                dead.append(c)
            targets = np.stack([la.mul(basis, combos[c].reshape(-1, 1))[:, 0] for c in alive], axis=1) \
                if alive else la.zeros(basis.shape[0], 0)
            pre = la.solve(g, targets)
            if pre is None:
                raise ArithmeticError("internal error: continuing generator not in the image")
            ker = la.kernel_basis(g)
            cols = [pre[:, k] for k in range(len(alive))] + [ker[:, k] for k in range(ker.shape[1])]
            new_births = [births[c] for c in alive] + [e + 1] * ker.shape[1]
            born = list(range(len(alive), len(alive) + ker.shape[1]))
            # born across a backward edge: every older column may absorb it
            new_order = born + list(range(len(alive)))
        for c in dead:
            bars[Interval(births[c] + 1, e + 1)] += 1
        basis = np.stack(cols, axis=1) if cols else la.zeros(d_next, 0)
        births = new_births
        order = new_order
    for c in order:
        bars[Interval(births[c] + 1, n)] += 1
    return bars


def _reduce(v: np.ndarray, echelon: list[tuple[int, np.ndarray]]) -> np.ndarray:
    p = la.get_prime()
    for piv, w in echelon:
        if v[piv]:
            v = (v - v[piv] * w) % p
    return v


def _reduce_tracked(v, comb, echelon):
    p = la.get_prime()
    for piv, w, wc in echelon:
        if v[piv]:
            c = int(v[piv])
            v = (v - c * w) % p
            comb = (comb - c * wc) % p
    return v, comb


def kernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Pointwise kernel with the induced edge maps, and its inclusion."""
    src = f.source
    bases = [la.kernel_basis(c) for c in f.components]
    maps = []
    for e, s, t in src.quiver.arrows():
        x = la.solve(bases[t], la.mul(src.maps[e], bases[s]))
        if x is None:
            raise ValueError(f"morphism is not natural on edge {e}")
        maps.append(x)
    k = Rep(src.quiver, [b.shape[1] for b in bases], maps)
    return k, RepMorphism(k, src, bases, check=False)


def cokernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Pointwise cokernel with the induced edge maps, and its projection."""
    tgt = f.target
    projs = [la.cokernel_projection(c)[0] for c in f.components]
    maps = []
    for e, s, t in tgt.quiver.arrows():
        section = la.right_inverse(projs[s]) if projs[s].shape[0] else la.zeros(tgt.dims[s], 0)
        maps.append(la.mul(la.mul(projs[t], tgt.maps[e]), section))
    c = Rep(tgt.quiver, [p.shape[0] for p in projs], maps)
    return c, RepMorphism(tgt, c, projs, check=False)


def _hom_system(a: Rep, b: Rep) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Naturality system ``b(e) f_s - f_t a(e) = 0`` for ``f: a -> b``."""
    shapes = [(b.dims[p], a.dims[p]) for p in range(a.quiver.n)]
    eqs = []
    for e, s, t in a.quiver.arrows():
        eqs.append([(s, b.maps[e], la.identity(a.dims[s])),
                    (t, la.neg(la.identity(b.dims[t])), a.maps[e])])
    return la.sylvester_system(shapes, eqs), shapes


def hom_basis(a: Rep, b: Rep) -> list[RepMorphism]:
    if a.quiver != b.quiver:
        raise ValueError("Hom between representations of different quivers")
    system, shapes = _hom_system(a, b)
    ker = la.kernel_basis(system)
    return [RepMorphism(a, b, la.unpack(ker[:, k], shapes), check=False) for k in range(ker.shape[1])]


def hom_dim(a: Rep, b: Rep) -> int:
    if a.quiver != b.quiver:
        raise ValueError("Hom between representations of different quivers")
    system, shapes = _hom_system(a, b)
    return sum(r * c for r, c in shapes) - la.rank(system)


def euler_form(quiver: AnQuiver, x: Sequence[int], y: Sequence[int]) -> int:
    """``sum_p x_p y_p - sum_{s->t} x_s y_t``."""
    if len(x) != quiver.n or len(y) != quiver.n:
        raise ValueError("dimension vectors must have one entry per vertex")
    return sum(a * b for a, b in zip(x, y)) - sum(x[s] * y[t] for _, s, t in quiver.arrows())


def ext1_dim(a: Rep, b: Rep) -> int:
    """dim Ext^1(a, b), from Hom and the Euler form (the path algebra is hereditary)."""
    ext = hom_dim(a, b) - euler_form(a.quiver, a.dims, b.dims)
    if ext < 0:
        raise ArithmeticError(f"negative Ext^1 ({ext}): Hom computation is inconsistent")
    return ext


def interval_hom_ext(quiver: AnQuiver, i: Interval, j: Interval) -> tuple[int, int]:
    """(dim Hom, dim Ext^1) between two interval modules."""
    return _interval_hom_ext(quiver.orientation, i, j, la.get_prime())


@functools.lru_cache(maxsize=65536)
def _interval_hom_ext(orientation: tuple[str, ...], i: Interval, j: Interval, prime: int) -> tuple[int, int]:
    # Hom and Ext between interval modules ignore positions and measure
    quiver = AnQuiver(len(orientation) + 1, orientation)
    with la.prime_field(prime):
        a, b = interval_rep(quiver, i), interval_rep(quiver, j)
        return hom_dim(a, b), ext1_dim(a, b)
