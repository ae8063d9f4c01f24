"""
Spans inside a bigraded algebra: the sub-cbba generated by a set of seeds
together with their ∂, ∂̄ and ∂∂̄ images, and ideal slices per bidegree.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence

from .bigraded import AlgebraElement, Bidegree, BigradedAlgebra
from .exactla import Subspace

# Configure logging
logger = logging.getLogger(__name__)

Family = Dict[Bidegree, Subspace]


def homogeneous_parts(elements: Sequence[AlgebraElement]) -> List[AlgebraElement]:
    out = []
    for u in elements:
        for bd in u.bidegrees():
            out.append(u.component(bd))
    return out


def differential_closure(algebra: BigradedAlgebra, seeds: Sequence[AlgebraElement],
                         max_total: Optional[int] = None) -> List[AlgebraElement]:
    """Seeds plus their ∂, ∂̄ and ∂∂̄ images, dropping zeros and degrees beyond ``max_total``."""
    top = algebra.max_total if max_total is None else max_total
    out: List[AlgebraElement] = []
    for s in homogeneous_parts(seeds):
        k = s.bidegree.total
        candidates = [s]
        if k + 1 <= top:
            candidates += [algebra.apply_diff(s, "del"), algebra.apply_diff(s, "delbar")]
        if k + 2 <= top:
            candidates.append(algebra.apply_diff(s, "deldelbar"))
        out.extend(c for c in candidates if c)
    return out


def _elements_of(algebra: BigradedAlgebra, space: Subspace, bd: Bidegree) -> List[AlgebraElement]:
    return [algebra.element(bd, v) for v in space.basis]


def subalgebra_span(algebra: BigradedAlgebra, seeds: Sequence[AlgebraElement],
                    max_total: Optional[int] = None) -> Family:
    """
    Per-bidegree span of all products of the differential closure of the seeds.

    Args:
        algebra: The ambient algebra.
        seeds: Elements generating the sub-cbba; the unit is always included.
        max_total: Largest total degree to compute, defaults to the algebra's.

    Returns:
        A Subspace for every bidegree with total degree up to ``max_total``.
    """
    top = algebra.max_total if max_total is None else min(max_total, algebra.max_total)
    factors = differential_closure(algebra, seeds, top)
    family: Family = {}
    for bd in algebra.bidegrees(top):
        vectors = []
        if bd == Bidegree(0, 0):
            unit = algebra.one()
            if unit:
                vectors.append(algebra.vector(unit, bd))
        for sigma in factors:
            rest = bd.minus(sigma.bidegree)
            if rest.p < 0 or rest.q < 0 or rest.total >= bd.total:
                continue
            for tail in _elements_of(algebra, family.get(rest, Subspace.zero(0)), rest):
                product = sigma * tail
                if product:
                    vectors.append(algebra.vector(product, bd))
        family[bd] = Subspace.span(vectors, algebra.dim(bd))
    return family


def generated_sub_cbba(algebra, s: int) -> Family:
    """𝒞(ΛV^{≤s}): the sub-cbba generated by the generators of total degree at most ``s``."""

    def build() -> Family:
        seeds = [algebra.generator_element(i) for i, g in enumerate(algebra.generators) if g.total <= s]
        family = subalgebra_span(algebra, seeds)
        logger.debug("Generated sub-cbba of %s up to generator degree %d", algebra.name, s)
        return family

    return algebra.memo(("sub_cbba", s), build)


def ideal_span(algebra: BigradedAlgebra, generators: Sequence[AlgebraElement], bd: Bidegree,
               closure: bool = True, ambient: Optional[Family] = None) -> Subspace:
    """
    The slice at ``bd`` of the ideal generated by ``generators``.

    Args:
        algebra: The ambient algebra.
        generators: Ideal generators (any bidegrees).
        bd: The bidegree of the slice.
        closure: Also use the ∂, ∂̄ and ∂∂̄ images of the generators.
        ambient: Multipliers come from this family instead of the whole algebra.

    Returns:
        The span of ``g * c`` at ``bd``.
    """
    gens = differential_closure(algebra, generators, bd.total) if closure else homogeneous_parts(generators)
    vectors = []
    for g in gens:
        rest = bd.minus(g.bidegree)
        if rest.p < 0 or rest.q < 0:
            continue
        if ambient is None:
            multipliers = [algebra.basis_element(k) for k in algebra.basis(rest)]
        else:
            multipliers = _elements_of(algebra, ambient.get(rest, Subspace.zero(algebra.dim(rest))), rest)
        for c in multipliers:
            product = g * c
            if product:
                vectors.append(algebra.vector(product, bd))
    return Subspace.span(vectors, algebra.dim(bd))
