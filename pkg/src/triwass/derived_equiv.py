"""BGP reflection functors as derived equivalences between orientations of A_n.

Reflecting at a sink ``i`` (R+) turns it into a source; the derived functor
sends the simple ``S_i`` in degree j to the new simple ``S_i'`` in degree j+1
and every other interval module to an interval module in the same degree.
Reflecting at a source (R-) is the inverse, moving ``S_i`` down one degree.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .complex import DerivedBarcode, RepComplex, derived_barcode
from .matching import parse_exponent
from .metrics import bounds_from_vectors, default_pair_distance, wasserstein
from .quiver import (
    BACKWARD,
    FORWARD,
    AnQuiver,
    Interval,
    Rep,
    decompose,
    interval_rep,
)
from .weights import ABS_CHI, HDIM, TOTAL_DIM, WeightFamily, simple_stalk_bars, weight_vector

SINK = "sink"
SOURCE = "source"


@dataclass(frozen=True)
class Reflection:
    vertex: int  # 0-based
    kind: str  # SINK (R+) or SOURCE (R-)

    def __post_init__(self):
        if self.kind not in (SINK, SOURCE):
            raise ValueError(f"reflection kind must be 'sink' or 'source', got {self.kind!r}")

    def inverse(self) -> "Reflection":
        return Reflection(self.vertex, SOURCE if self.kind == SINK else SINK)

    def check(self, quiver: AnQuiver) -> None:
        if not 0 <= self.vertex < quiver.n:
            raise ValueError(f"vertex {self.vertex} outside A_{quiver.n}")
        ok = quiver.is_sink(self.vertex) if self.kind == SINK else quiver.is_source(self.vertex)
        if not ok:
            raise ValueError(f"vertex {self.vertex + 1} is not a {self.kind} of {''.join(quiver.orientation)}")


def valid_reflections(quiver: AnQuiver) -> list[Reflection]:
    out = []
    for v in range(quiver.n):
        if quiver.is_sink(v):
            out.append(Reflection(v, SINK))
        if quiver.is_source(v):
            out.append(Reflection(v, SOURCE))
    return out


def reflect_quiver(quiver: AnQuiver, r: Reflection) -> AnQuiver:
    r.check(quiver)
    orient = list(quiver.orientation)
    for e in (r.vertex - 1, r.vertex):
        if 0 <= e < quiver.n - 1:
            orient[e] = BACKWARD if orient[e] == FORWARD else FORWARD
    return quiver.with_orientation(orient)


def _incident_edges(quiver: AnQuiver, v: int) -> list[tuple[int, int]]:
    """(edge, neighbour) pairs at vertex v."""
    out = []
    if v > 0:
        out.append((v - 1, v - 1))
    if v < quiver.n - 1:
        out.append((v, v + 1))
    return out


def reflect_rep(m: Rep, r: Reflection) -> Rep:
    """Classical reflection functor on a single representation."""
    q = m.quiver
    r.check(q)
    q2 = reflect_quiver(q, r)
    i = r.vertex
    edges = _incident_edges(q, i)
    dims = list(m.dims)
    maps = list(m.maps)
    if r.kind == SINK:
        # M'_i = ker(⊕ M_j -> M_i); new arrows i -> j are the kernel components
        total = la.block([[m.maps[e] for e, _ in edges]]) if edges else la.zeros(m.dims[i], 0)
        total = total.reshape(m.dims[i], sum(m.dims[j] for _, j in edges))
        k = la.kernel_basis(total)
        dims[i] = k.shape[1]
        row = 0
        for e, j in edges:
            maps[e] = k[row : row + m.dims[j], :]
            row += m.dims[j]
    else:
        # M'_i = coker(M_i -> ⊕ M_j); new arrows j -> i are the projection components
        total = la.block([[m.maps[e]] for e, _ in edges]) if edges else la.zeros(0, m.dims[i])
        total = total.reshape(sum(m.dims[j] for _, j in edges), m.dims[i])
        proj, d = la.cokernel_projection(total)
        dims[i] = d
        col = 0
        for e, j in edges:
            maps[e] = proj[:, col : col + m.dims[j]]
            col += m.dims[j]
    return Rep(q2, dims, maps)


def reflect_derived(bars: DerivedBarcode, quiver: AnQuiver, r: Reflection,
                    shift_simple: bool = True) -> DerivedBarcode:
    """Image of a derived barcode under the derived reflection functor.

    ``shift_simple=False`` deliberately omits the degree shift of the simple at
    the reflected vertex; it exists only as a negative control.
    """
    r.check(quiver)
    simple = Interval(r.vertex + 1, r.vertex + 1)
    step = 1 if r.kind == SINK else -1
    out: DerivedBarcode = Counter()
    for (iv, d), mult in bars.items():
        if iv == simple:
            out[(iv, d + step if shift_simple else d)] += mult
            continue
        image = decompose(reflect_rep(interval_rep(quiver, iv), r))
        if sum(image.values()) != 1:
            raise ArithmeticError(f"reflection of {iv} is not indecomposable: {dict(image)}")
        (jv,) = image
        out[(jv, d)] += mult
    return out


@dataclass(frozen=True)
class TransportedFamily:
    source: WeightFamily
    reflection: Reflection
    target: WeightFamily


def transport_family(fam: WeightFamily, quiver: AnQuiver, r: Reflection,
                     shift_simple: bool = True) -> TransportedFamily:
    """Push a representable family ``{Hom(-, T_p)}`` through the reflection."""
    if fam.kind in (HDIM, TOTAL_DIM):
        raise ValueError(f"the {fam.kind} family is not given by representable functors")
    q2 = reflect_quiver(quiver, r)
    if fam.kind == ABS_CHI:
        targets = [simple_stalk_bars(p) for p in range(quiver.n)]
    else:
        targets = fam.targets
    moved = [reflect_derived(t, quiver, r, shift_simple) for t in targets]
    return TransportedFamily(fam, r, WeightFamily.hom_into(q2, moved))


def indecomposable_objects(quiver: AnQuiver, degrees: Sequence[int] = (0,)) -> list[DerivedBarcode]:
    """Every shifted interval module ``M_I[-d]`` as a one-bar derived barcode."""
    out = []
    for a in range(1, quiver.n + 1):
        for b in range(a, quiver.n + 1):
            for d in degrees:
                out.append(Counter({(Interval(a, b), d): 1}))
    return out


def all_orientations(n: int) -> list[tuple[str, ...]]:
    return [tuple(o) for o in itertools.product((FORWARD, BACKWARD), repeat=n - 1)]


@dataclass
class IsometryReport:
    orientation: str
    reflection: str
    p: str
    pairs_checked: int = 0
    discrepancies: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"orientation": self.orientation, "reflection": self.reflection, "p": self.p,
                "pairs_checked": self.pairs_checked, "discrepancies": self.discrepancies}


def _label(bars: DerivedBarcode) -> str:
    return " + ".join(f"{m}x{iv}@{d}" if m > 1 else f"{iv}@{d}" for (iv, d), m in sorted(bars.items())) or "0"


def isometry_report(objects: Sequence, fam: WeightFamily, quiver: AnQuiver, r: Reflection, p,
                    shift_simple: bool = True) -> IsometryReport:
    """Compare weights, bounds and envelope W_p before and after the reflection.

    ``objects`` are complexes or derived barcodes over ``quiver``.  The
    measure is carried over unchanged, since the vertices are.
    """
    p = parse_exponent(p)
    transported = transport_family(fam, quiver, r, shift_simple)
    fam2 = transported.target
    q2 = fam2.quiver
    before = [derived_barcode(o) if isinstance(o, RepComplex) else Counter(o) for o in objects]
    after = [reflect_derived(b, quiver, r, shift_simple) for b in before]
    report = IsometryReport("".join(quiver.orientation), f"{r.kind}@{r.vertex + 1}", str(p))
    dist1 = default_pair_distance(fam, quiver)
    dist2 = default_pair_distance(fam2, q2)

    def note(pair, quantity, x, y):
        report.discrepancies.append({"pair": pair, "quantity": quantity, "before": str(x), "after": str(y)})

    vec1 = [weight_vector(b, fam, quiver) for b in before]
    vec2 = [weight_vector(b, fam2, q2) for b in after]
    for b1, w1, w2 in zip(before, vec1, vec2):
        if w1 != w2:
            note([_label(b1)], "euler_weight", list(w1), list(w2))
    for x in range(len(before)):
        for y in range(x, len(before)):
            pair = [_label(before[x]), _label(before[y])]
            report.pairs_checked += 1
            bd1 = bounds_from_vectors(vec1[x], vec1[y], quiver)
            bd2 = bounds_from_vectors(vec2[x], vec2[y], q2)
            if bd1 != bd2:
                note(pair, "bounds", (bd1.lower, bd1.upper), (bd2.lower, bd2.upper))
            m1 = wasserstein(before[x], before[y], p, dist1).total
            m2 = wasserstein(after[x], after[y], p, dist2).total
            if m1 != m2:
                note(pair, "wasserstein", m1, m2)
    return report
