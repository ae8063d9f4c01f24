"""
The comparison morphism ψ from a split sub-cbba to its Bott-Chern cohomology.

On 𝒞(ΛV^{≤s}) = P ⊕ I, with P spanned by products of the closed generators
and I the ideal of the non-closed ones, ψ sends an element to the Bott-Chern
class of its P part.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .bigraded import AlgebraElement, Bidegree
from .cohomology import bc_closed, class_coordinates, cohomology, computable, image_in, kernel_of
from .errors import MorphismViolation, PreconditionFailed, TruncationOverflow
from .exactla import Subspace, Vector, combination, format_scalar, is_zero_vector, map_subspace, zero_vector
from .free import FreeCbba
from .spans import Family, differential_closure, generated_sub_cbba, subalgebra_span
from .splitting import SplittingCertificate, verification_caps, ideal_slice, split_verify

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class PsiMorphism:
    """
    ψ tabulated per bidegree.

    ``assignment`` maps the label of every certificate element to the
    coordinates of its image against the RREF-least Bott-Chern representatives.
    """

    algebra: str
    s: int
    reach: int
    assignment: Dict[str, List[str]] = field(default_factory=dict)
    ranks: Dict[str, int] = field(default_factory=dict)
    checks: Dict[str, int] = field(default_factory=dict)
    _split: Dict[Bidegree, Tuple[Subspace, Subspace]] = field(default_factory=dict, repr=False)

    def _components(self, algebra: FreeCbba, u: AlgebraElement, bd: Bidegree) -> AlgebraElement:
        products, ideal = self._split[bd]
        target = algebra.vector(u, bd)
        coeffs = combination(list(products.basis) + list(ideal.basis), target)
        if coeffs is None:
            raise MorphismViolation(f"{u} is outside the split sub-cbba at {bd}", witness=u, bidegree=bd)
        return algebra.element(bd, _head(coeffs, products))

    def apply(self, algebra: FreeCbba, u: AlgebraElement, bd: Bidegree) -> Vector:
        """BC class coordinates of ψ(u) for an element ``u`` of bidegree ``bd``."""
        space = cohomology(algebra, "BC", bd)
        if not u:
            return zero_vector(space.dim)
        coords = class_coordinates(space, self._components(algebra, u, bd))
        if coords is None:
            raise MorphismViolation(f"the product part of {u} is not closed", witness=u, bidegree=bd)
        return coords


def _head(coeffs: Vector, products: Subspace) -> Vector:
    out = list(zero_vector(products.ambient_dim))
    for c, row in zip(coeffs, products.basis):
        for j, value in enumerate(row):
            out[j] += c * value
    return tuple(out)


def _class_element(algebra: FreeCbba, bd: Bidegree, coords: Vector) -> AlgebraElement:
    out = algebra.zero()
    for c, rep in zip(coords, cohomology(algebra, "BC", bd).representatives):
        out = out + rep * c
    return out


def build_psi(algebra: FreeCbba, certificate: SplittingCertificate) -> PsiMorphism:
    """
    Tabulates ψ for a verified certificate and checks it is a morphism.

    Checked on every bidegree in reach: ψ is well defined (P ∩ I lies in
    Im ∂∂̄), kills ∂ and ∂̄ images, is multiplicative on generator factors,
    agrees with the inclusion on Bott-Chern and Aeppli classes, is onto in
    degrees up to s and injective on classes of the sub-cbba up to s+1.

    Raises:
        MorphismViolation: If the certificate fails verification or a check fails.
    """
    if algebra.kind != "free":
        raise PreconditionFailed(f"{algebra.name} is not a free algebra")
    s = certificate.s
    report = split_verify(algebra, certificate, s)
    if not report.passed:
        raise MorphismViolation(f"certificate does not verify: {report.failures[0]}",
                                witness=report.witness, bidegree=report.failing_bidegree)

    reach, _ = verification_caps(algebra)
    ambient: Family = generated_sub_cbba(algebra, s)
    products_family = subalgebra_span(algebra, certificate.closed_elements(s), max_total=reach)
    nonclosed = certificate.nonclosed_elements(s)
    psi = PsiMorphism(algebra.name, s, reach)
    checks = {"well_defined": 0, "kills_differentials": 0, "multiplicative": 0, "bc_agreement": 0,
              "a_agreement": 0, "onto": 0, "injective": 0}

    for bd in algebra.bidegrees(reach):
        n = algebra.dim(bd)
        sub = ambient.get(bd, Subspace.zero(n))
        products = products_family.get(bd, Subspace.zero(n))
        ideal = ideal_slice(algebra, nonclosed, bd, ambient)
        if products.sum(ideal).dim != sub.dim or not sub.contains(products.sum(ideal)):
            raise MorphismViolation(f"products and ideal do not span the sub-cbba at {bd}", bidegree=bd)
        overlap = products.intersect(ideal)
        bad = overlap.quotient_basis(image_in(algebra, "deldelbar", bd))
        if bad:
            u = algebra.element(bd, bad[0])
            raise MorphismViolation(f"ψ is not well defined at {bd}", witness=u, bidegree=bd)
        checks["well_defined"] += 1
        psi._split[bd] = (products, ideal)
        psi.ranks[str(bd)] = products.dim

    for bd in algebra.bidegrees(reach):
        sub = ambient.get(bd, Subspace.zero(algebra.dim(bd)))
        for v in sub.basis:
            u = algebra.element(bd, v)
            for which, target in (("del", bd.shifted(1, 0)), ("delbar", bd.shifted(0, 1))):
                if target.total > reach:
                    continue
                image = algebra.apply_diff(u, which)
                if image and not is_zero_vector(psi.apply(algebra, image, target)):
                    raise MorphismViolation(f"ψ does not vanish on {which} of {u}", witness=u, bidegree=bd)
                checks["kills_differentials"] += 1

    factors = differential_closure(algebra, certificate.closed_elements(s) + nonclosed, reach)
    for sigma in factors:
        sb = sigma.bidegree
        left = _class_element(algebra, sb, psi.apply(algebra, sigma, sb))
        for bd in algebra.bidegrees(reach):
            rest = bd.minus(sb)
            if rest.p < 0 or rest.q < 0 or rest.total >= bd.total:
                continue
            for v in ambient.get(rest, Subspace.zero(algebra.dim(rest))).basis:
                tail = algebra.element(rest, v)
                try:
                    product = sigma * tail
                    expected = left * _class_element(algebra, rest, psi.apply(algebra, tail, rest))
                except TruncationOverflow:
                    continue
                zero = zero_vector(cohomology(algebra, "BC", bd).dim)
                got = psi.apply(algebra, product, bd) if product else zero
                want = class_coordinates(cohomology(algebra, "BC", bd), expected) if expected else zero
                if want is None or tuple(got) != tuple(want):
                    raise MorphismViolation(f"ψ is not multiplicative on {sigma} * {tail}", witness=product,
                                            bidegree=bd)
                checks["multiplicative"] += 1

    for bd in algebra.bidegrees(reach):
        n = algebra.dim(bd)
        sub = ambient.get(bd, Subspace.zero(n))
        bc_space = cohomology(algebra, "BC", bd)
        for v in sub.intersect(bc_closed(algebra, bd)).basis:
            u = algebra.element(bd, v)
            if tuple(psi.apply(algebra, u, bd)) != tuple(class_coordinates(bc_space, u)):
                raise MorphismViolation(f"ψ and the inclusion differ on the Bott-Chern class of {u}",
                                        witness=u, bidegree=bd)
            checks["bc_agreement"] += 1
        if computable(algebra, "A", bd.total) and bd.total + 2 <= algebra.max_total:
            a_space = cohomology(algebra, "A", bd)
            for v in sub.intersect(kernel_of(algebra, "deldelbar", bd)).basis:
                u = algebra.element(bd, v)
                image = _class_element(algebra, bd, psi.apply(algebra, u, bd))
                if class_coordinates(a_space, image) != class_coordinates(a_space, u):
                    raise MorphismViolation(f"ψ and the inclusion differ on the Aeppli class of {u}",
                                            witness=u, bidegree=bd)
                checks["a_agreement"] += 1

        if bd.total <= s:
            image_dim = Subspace.span([psi.apply(algebra, algebra.element(bd, v), bd) for v in sub.basis],
                                      bc_space.dim).dim if bc_space.dim else 0
            if image_dim != bc_space.dim:
                raise MorphismViolation(f"ψ misses Bott-Chern classes at {bd}", bidegree=bd)
            checks["onto"] += 1
        if bd.total <= s + 1:
            source = bd.shifted(-1, -1)
            closed_sub = sub.intersect(bc_closed(algebra, bd))
            inner = Subspace.zero(n)
            if source.p >= 0 and source.q >= 0:
                inner = map_subspace(ambient.get(source, Subspace.zero(algebra.dim(source))),
                                     algebra.diff_rows("deldelbar", source), n)
            if closed_sub.intersect(image_in(algebra, "deldelbar", bd)).dim != inner.dim:
                raise MorphismViolation(f"Bott-Chern classes of the sub-cbba collapse at {bd}", bidegree=bd)
            checks["injective"] += 1

    for bd in certificate.bidegrees():
        for u in certificate.closed.get(bd, ()) + certificate.nonclosed.get(bd, ()):
            if bd.total <= reach:
                psi.assignment[str(u)] = [format_scalar(c) for c in psi.apply(algebra, u, bd)]
    psi.checks = checks
    logger.info("ψ on %s verified up to degree %d (%s)", algebra.name, reach,
                ", ".join(f"{k}={v}" for k, v in checks.items()))
    return psi
