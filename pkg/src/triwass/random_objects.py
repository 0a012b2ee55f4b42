"""Seeded random quivers, representations, complexes and chain maps.

Morphisms are drawn from the full solution space of their defining linear
system (naturality, commutation with differentials, ``d∘d = 0``), so they are
always valid.  Each kernel basis vector gets a uniform coefficient with
probability ``density`` and zero otherwise; sparse draws keep nontrivial
cohomology common, which generic maps over a large field would destroy.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg as la
from .complex import ChainMorphism, RepComplex, chain_hom_basis
from .quiver import AnQuiver, Rep, RepMorphism, hom_basis


def random_quiver(rng: np.random.Generator, n_max: int = 5, n_min: int = 1,
                  unit_measure: bool = False) -> AnQuiver:
    n = int(rng.integers(n_min, n_max + 1))
    orientation = tuple(rng.choice(["F", "B"], size=n - 1).tolist())
    steps = rng.integers(1, 4, size=n)
    positions = np.cumsum(steps).tolist()
    if unit_measure:
        return AnQuiver(n, orientation, positions)
    measure = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(0, 4, size=n), rng.integers(1, 4, size=n))]
    return AnQuiver(n, orientation, positions, measure)


def _random_entries(rng: np.random.Generator, shape, density: float) -> np.ndarray:
    q = la.get_prime()
    vals = rng.integers(0, q, size=shape)
    mask = rng.random(size=shape) < density
    return (vals * mask).astype(np.int64)


def random_rep(quiver: AnQuiver, rng: np.random.Generator, max_dim: int = 3,
               density: float = 0.6) -> Rep:
    dims = rng.integers(0, max_dim + 1, size=quiver.n).tolist()
    maps = []
    for e, s, t in quiver.arrows():
        maps.append(_random_entries(rng, (dims[t], dims[s]), density))
    return Rep(quiver, dims, maps)


def _combine(rng: np.random.Generator, count: int, density: float) -> np.ndarray:
    return _random_entries(rng, (count,), density)


def random_morphism(a: Rep, b: Rep, rng: np.random.Generator, density: float = 0.5) -> RepMorphism:
    basis = hom_basis(a, b)
    coeffs = _combine(rng, len(basis), density)
    comps = [la.zeros(t, s) for s, t in zip(a.dims, b.dims)]
    for c, f in zip(coeffs, basis):
        if c:
            comps = [la.add(x, la.scale(y, int(c))) for x, y in zip(comps, f.components)]
    return RepMorphism(a, b, comps, check=False)


def random_complex(quiver: AnQuiver, rng: np.random.Generator, max_terms: int = 4,
                   max_dim: int = 3, lo_range: tuple[int, int] = (-1, 1),
                   density: float = 0.5) -> RepComplex:
    """Random terms; each differential is sampled from natural maps killing the previous one."""
    length = int(rng.integers(1, max_terms + 1))
    lo = int(rng.integers(lo_range[0], lo_range[1] + 1))
    terms = [random_rep(quiver, rng, max_dim) for _ in range(length)]
    diffs: list[RepMorphism] = []
    for k in range(length - 1):
        src, tgt = terms[k], terms[k + 1]
        basis = hom_basis(src, tgt)
        if diffs:
            prev = diffs[-1]
            basis = _restrict_to_annihilators(basis, prev)
        coeffs = _combine(rng, len(basis), density)
        comps = [la.zeros(t, s) for s, t in zip(src.dims, tgt.dims)]
        for c, f in zip(coeffs, basis):
            if c:
                comps = [la.add(x, la.scale(y, int(c))) for x, y in zip(comps, f.components)]
        diffs.append(RepMorphism(src, tgt, comps, check=False))
    return RepComplex(quiver, lo, terms, diffs)


def _restrict_to_annihilators(basis: list[RepMorphism], prev: RepMorphism) -> list[RepMorphism]:
    """Basis of the span of ``basis`` restricted to maps ``g`` with ``g ∘ prev = 0``."""
    if not basis:
        return []
    columns = [np.concatenate([la.mul(g, h).ravel() for g, h in zip(f.components, prev.components)])
               for f in basis]
    system = np.stack(columns, axis=1)
    ker = la.kernel_basis(system)
    out = []
    for k in range(ker.shape[1]):
        comps = [la.zeros(*c.shape) for c in basis[0].components]
        for coeff, f in zip(ker[:, k], basis):
            if coeff:
                comps = [la.add(x, la.scale(y, int(coeff))) for x, y in zip(comps, f.components)]
        out.append(RepMorphism(basis[0].source, basis[0].target, comps, check=False))
    return out


def random_chain_morphism(x: RepComplex, y: RepComplex, rng: np.random.Generator,
                          density: float = 0.5) -> ChainMorphism:
    basis = chain_hom_basis(x, y)
    coeffs = _combine(rng, len(basis), density)
    acc: dict[int, list[np.ndarray]] = {}
    for c, f in zip(coeffs, basis):
        if not c:
            continue
        for i, g in f.components.items():
            cur = acc.setdefault(i, [la.zeros(*m.shape) for m in g.components])
            acc[i] = [la.add(a, la.scale(b, int(c))) for a, b in zip(cur, g.components)]
    return ChainMorphism(x, y, acc, check=False)


def random_contractible(quiver: AnQuiver, rng: np.random.Generator, max_dim: int = 2,
                        lo_range: tuple[int, int] = (-1, 1)) -> RepComplex:
    """``E --id--> E``: acyclic and nonzero whenever E is."""
    e = random_rep(quiver, rng, max_dim)
    lo = int(rng.integers(lo_range[0], lo_range[1] + 1))
    return RepComplex(quiver, lo, (e, e), (RepMorphism.identity(e),))
