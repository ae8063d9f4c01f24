"""
∂∂̄-Lemma decision procedures.

The lemma is checked bidegree by bidegree as the inclusion

    ker ∂ ∩ ker ∂̄ ∩ Im d ⊆ Im ∂∂̄

with the left side projected to one bidegree at a time, either on the
whole algebra or on the sub-cbba generated by the generators of low degree.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bigraded import AlgebraElement, Bidegree, BigradedAlgebra, bidegrees_of_total
from .cohomology import (
    aeppli_exact,
    bc_closed,
    cohomology,
    computable,
    image_in,
    kernel_of,
    pairing_check,
    total_d_rows,
)
from .errors import InsufficientTruncation, InternalContradiction, PreconditionFailed
from .exactla import Subspace, Vector, combination, preimage, vector_times, zero_vector
from .parallel import parallel_map
from .spans import Family, generated_sub_cbba

# Configure logging
logger = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
VANISHING = "vanishing by SD"
BY_DUALITY = "by duality"


@dataclass
class DdbarVerdict:
    """Outcome of a ∂∂̄-Lemma check; ``table`` maps each bidegree to its status."""

    scope: str
    holds: bool
    witness: Optional[AlgebraElement] = None
    bidegree: Optional[Bidegree] = None
    table: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)


# -- exactness helpers -------------------------------------------------------

def dexact_subspace(algebra: BigradedAlgebra, bd: Bidegree, restrict: Optional[Family] = None) -> Subspace:
    """
    Components in bidegree ``bd`` of d-exact elements all of whose components
    are ∂- and ∂̄-closed, and lie in ``restrict`` when it is given.

    An element of Im d need not be pure, so its components are checked
    together and only then projected to ``bd``.
    """

    def build() -> Subspace:
        n = algebra.dim(bd)
        k = bd.total
        if k == 0 or n == 0:
            return Subspace.zero(n)
        rows = total_d_rows(algebra, k - 1)
        if not rows:
            return Subspace.zero(n)
        width = len(rows[0])
        allowed: List[Vector] = []
        offset = start = 0
        for b in bidegrees_of_total(k):
            m = algebra.dim(b)
            if b == bd:
                start = offset
            if m:
                closed = bc_closed(algebra, b)
                if restrict is not None:
                    closed = closed.intersect(restrict.get(b, Subspace.zero(m)))
                for v in closed.basis:
                    padded = list(zero_vector(width))
                    padded[offset:offset + m] = v
                    allowed.append(tuple(padded))
            offset += m
        sources = preimage(rows, Subspace.span(allowed, width))
        return Subspace.span([vector_times(x, rows, width)[start:start + n] for x in sources.basis], n)

    if restrict is not None:
        return build()
    return algebra.memo(("d_exact", bd), build)


def ddbar_primitive(algebra: BigradedAlgebra, u: AlgebraElement, bd: Bidegree) -> Optional[AlgebraElement]:
    """φ with ∂∂̄φ = u, or None when ``u`` is not ∂∂̄-exact."""
    source = bd.shifted(-1, -1)
    target = algebra.vector(u, bd)
    if source.p < 0 or source.q < 0:
        return algebra.zero() if not u else None
    coeffs = combination(algebra.diff_rows("deldelbar", source), target)
    if coeffs is None:
        return None
    return algebra.element(source, coeffs)


def del_delbar_split(algebra: BigradedAlgebra, u: AlgebraElement,
                     bd: Bidegree) -> Optional[Tuple[AlgebraElement, AlgebraElement]]:
    """(α, β) with ∂α + ∂̄β = u, or None when ``u`` is outside Im ∂ + Im ∂̄."""
    a_bd, b_bd = bd.shifted(-1, 0), bd.shifted(0, -1)
    del_rows = algebra.diff_rows("del", a_bd) if a_bd.p >= 0 else []
    delbar_rows = algebra.diff_rows("delbar", b_bd) if b_bd.q >= 0 else []
    coeffs = combination(list(del_rows) + list(delbar_rows), algebra.vector(u, bd))
    if coeffs is None:
        return None
    cut = len(del_rows)
    alpha = algebra.element(a_bd, coeffs[:cut]) if cut else algebra.zero()
    beta = algebra.element(b_bd, coeffs[cut:]) if delbar_rows else algebra.zero()
    return alpha, beta


def violations(algebra: BigradedAlgebra, bd: Bidegree, restrict: Optional[Family] = None) -> List[Vector]:
    """RREF-least representatives of d-exact, ∂- and ∂̄-closed elements that are not ∂∂̄-exact."""
    n = algebra.dim(bd)
    if bd.total == 0 or n == 0:
        return []
    candidates = dexact_subspace(algebra, bd, restrict)
    return candidates.quotient_basis(image_in(algebra, "deldelbar", bd))


# -- scans -------------------------------------------------------------------

def _scan(algebra: BigradedAlgebra, scope: str, bidegrees: Sequence[Bidegree],
          restrict: Optional[Family] = None) -> DdbarVerdict:
    ordered = sorted(bidegrees, key=lambda b: (b.total, b.p))
    results = parallel_map(lambda bd: violations(algebra, bd, restrict), ordered, desc="ddbar")
    verdict = DdbarVerdict(scope=scope, holds=True)
    for bd, bad in zip(ordered, results):
        verdict.table[str(bd)] = FAILS if bad else HOLDS
        if bad and verdict.holds:
            verdict.holds = False
            verdict.bidegree = bd
            verdict.witness = algebra.element(bd, bad[0])
    if not verdict.holds:
        logger.info("∂∂̄-Lemma (%s) fails on %s at %s", scope, algebra.name, verdict.bidegree)
    return verdict


def _occupied(algebra: BigradedAlgebra, top: int) -> List[Bidegree]:
    return [bd for bd in algebra.bidegrees(top) if algebra.dim(bd)]


def ddbar_check_global(algebra: BigradedAlgebra, top: Optional[int] = None) -> DdbarVerdict:
    """
    Checks the ∂∂̄-Lemma on every bidegree in reach.

    Finite bicomplexes are checked everywhere. A free algebra with an SD
    target n is checked up to total degree 2n, higher degrees being zero in
    cohomology; without a target it is checked up to one below the
    truncation and the verdict only holds up to truncation.

    Args:
        algebra: A validated algebra.
        top: Optional cap on the total degree.

    Raises:
        InsufficientTruncation: If the truncation cannot see degree 2n.
    """
    if algebra.kind == "finite":
        limit = algebra.max_total if top is None else min(top, algebra.max_total)
        verdict = _scan(algebra, "global", _occupied(algebra, limit))
        return verdict

    reach = algebra.max_total - 1
    sd = getattr(algebra, "sd_target", None)
    if sd is not None:
        if 2 * sd > reach:
            raise InsufficientTruncation(
                f"the ∂∂̄-Lemma for a {sd}-SD algebra needs truncation at least {2 * sd + 1}"
            )
        limit = 2 * sd if top is None else min(top, 2 * sd)
    else:
        limit = reach if top is None else min(top, reach)
    verdict = _scan(algebra, "global", _occupied(algebra, limit))
    if sd is not None:
        for bd in _occupied(algebra, reach):
            if bd.total > limit:
                verdict.table[str(bd)] = VANISHING
    else:
        verdict.notes.append(f"holds up to truncation {algebra.max_total}" if verdict.holds
                             else f"checked up to total degree {limit}")
    return verdict


def ddbar_check_up_to(algebra: BigradedAlgebra, s: int) -> DdbarVerdict:
    """
    The ∂∂̄-Lemma on 𝒞(ΛV^{≤s}): d-exact, ∂- and ∂̄-closed elements of the
    sub-cbba generated in degrees at most ``s`` are ∂∂̄-exact in the whole
    algebra.
    """
    if algebra.kind != "free":
        raise PreconditionFailed("the ∂∂̄-Lemma up to degree s is defined for free algebras")
    if s + 3 > algebra.max_total:
        raise InsufficientTruncation(f"∂∂̄-Lemma up to degree {s} needs truncation at least {s + 3}")
    family = generated_sub_cbba(algebra, s)
    verdict = _scan(algebra, f"up_to({s})", _occupied(algebra, algebra.max_total - 1), family)
    logger.debug("∂∂̄-Lemma up to degree %d on %s: %s", s, algebra.name, verdict.holds)
    return verdict


def bc_to_a_iso_table(algebra: BigradedAlgebra, up_to: Optional[int] = None) -> Dict[Bidegree, bool]:
    """Whether H_BC → H_A induced by the identity is bijective, per bidegree."""
    top = algebra.max_total if up_to is None else min(up_to, algebra.max_total)

    def one(bd: Bidegree) -> bool:
        closed = bc_closed(algebra, bd)
        exact = aeppli_exact(algebra, bd)
        injective = closed.intersect(exact).dim == image_in(algebra, "deldelbar", bd).dim
        surjective = closed.sum(exact).dim == kernel_of(algebra, "deldelbar", bd).dim
        return injective and surjective

    bidegrees = [bd for bd in algebra.bidegrees(top) if computable(algebra, "A", bd.total)]
    return dict(zip(bidegrees, parallel_map(one, bidegrees, desc="bc-to-a")))


def sd_promotion_check(algebra: BigradedAlgebra, n: int) -> DdbarVerdict:
    """
    Global ∂∂̄-Lemma of an n-SD algebra from the lemma up to degree n−1.

    Degrees up to n are checked directly, the dimension symmetry of
    Bott-Chern and Aeppli cohomology is asserted there, and degrees above n
    follow by duality. The result is cross-checked against the direct
    global check.

    Raises:
        PreconditionFailed: If the pairing fails or the lemma fails below n.
        InternalContradiction: If the two global verdicts disagree.
    """
    pairing = pairing_check(algebra, n)
    if not pairing.holds:
        raise PreconditionFailed(f"{algebra.name} is not {n}-SD: {pairing.failure}")
    if algebra.kind == "free":
        low = ddbar_check_up_to(algebra, n - 1)
    else:
        low = _scan(algebra, f"up_to({n - 1})", _occupied(algebra, n - 1))
    if not low.holds:
        raise PreconditionFailed(f"the ∂∂̄-Lemma fails below degree {n} at {low.bidegree}")

    verdict = _scan(algebra, "global", _occupied(algebra, n))
    verdict.scope = "global"
    if not verdict.holds:
        return verdict
    for k in range(n + 1):
        bc = sum(cohomology(algebra, "BC", bd).dim for bd in bidegrees_of_total(k))
        aeppli = sum(cohomology(algebra, "A", bd).dim for bd in bidegrees_of_total(k))
        if bc != aeppli:
            raise InternalContradiction(
                f"degree {k}: Bott-Chern dimension {bc} differs from Aeppli dimension {aeppli}"
            )
    for bd in _occupied(algebra, min(2 * n, algebra.max_total)):
        if bd.total > n:
            verdict.table[str(bd)] = BY_DUALITY
    if algebra.kind == "free":
        for bd in _occupied(algebra, algebra.max_total - 1):
            if bd.total > 2 * n:
                verdict.table[str(bd)] = VANISHING
    verdict.notes.append(f"degrees above {n} follow by {n}-SD duality")

    direct = ddbar_check_global(algebra, top=2 * n) if algebra.kind == "finite" else _scan(
        algebra, "global", _occupied(algebra, 2 * n))
    if not direct.holds:
        raise InternalContradiction(
            f"promoted ∂∂̄-Lemma disagrees with the direct check at {direct.bidegree}"
        )
    logger.info("∂∂̄-Lemma on %s promoted from degree %d", algebra.name, n - 1)
    return verdict
