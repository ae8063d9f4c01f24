"""
Splittings V = C ⊕ N of the generators of a free algebra and the
s-strong formality check built on them.

C collects closed generators (after subtracting a decomposable primitive),
N a complement on which d is injective. The ideal conditions on

    I_s = (N + ∂N + ∂̄N + ∂∂̄N) · 𝒞(ΛV^{≤s})

are decided slice by slice: closed elements must be ∂∂̄-exact and
∂∂̄-closed elements must lie in Im ∂ + Im ∂̄.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .bigraded import AlgebraElement, Bidegree, bidegrees_of_total
from .cohomology import aeppli_exact, bc_closed, image_in, kernel_of, total_vector
from .ddbar import DdbarVerdict, ddbar_check_global, ddbar_check_up_to, ddbar_primitive, del_delbar_split
from .errors import (
    DdbarWitnessMissing,
    InsufficientTruncation,
    InternalContradiction,
    NoSolution,
    PreconditionFailed,
    SplittingObstructed,
)
from .exactla import ONE, Subspace, Vector, combination, is_zero, is_zero_vector, preimage, rank, zero_vector
from .free import FreeCbba
from .spans import Family, generated_sub_cbba, ideal_span

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdealWitness:
    """Why one spanning element of an ideal slice satisfies its condition."""

    condition: str  # BC: closed and ∂∂̄-exact | A: ∂∂̄-closed and in Im ∂ + Im ∂̄
    bidegree: Bidegree
    element: AlgebraElement
    primitive: Optional[AlgebraElement] = None
    alpha: Optional[AlgebraElement] = None
    beta: Optional[AlgebraElement] = None


@dataclass(frozen=True)
class SplittingCertificate:
    """
    A splitting of the generators up to total degree ``s``.

    ``closed`` and ``nonclosed`` hold, per bidegree, the modified generators
    spanning C and N as elements of the algebra. ``adjustments`` maps a
    generator name to the element subtracted from it.
    """

    algebra: str
    s: int
    scope: str
    closed: Dict[Bidegree, Tuple[AlgebraElement, ...]]
    nonclosed: Dict[Bidegree, Tuple[AlgebraElement, ...]]
    witnesses: Tuple[IdealWitness, ...] = ()
    adjustments: Dict[str, AlgebraElement] = field(default_factory=dict)

    def bidegrees(self) -> List[Bidegree]:
        return sorted(set(self.closed) | set(self.nonclosed), key=lambda b: (b.total, b.p))

    def nonclosed_elements(self, max_total: Optional[int] = None) -> List[AlgebraElement]:
        return [u for bd in self.bidegrees() if max_total is None or bd.total <= max_total
                for u in self.nonclosed.get(bd, ())]

    def closed_elements(self, max_total: Optional[int] = None) -> List[AlgebraElement]:
        return [u for bd in self.bidegrees() if max_total is None or bd.total <= max_total
                for u in self.closed.get(bd, ())]


@dataclass
class VerifyReport:
    passed: bool
    scope: int
    failures: List[str] = field(default_factory=list)
    failing_bidegree: Optional[Bidegree] = None
    witness: Optional[AlgebraElement] = None
    witnesses: List[IdealWitness] = field(default_factory=list)
    slices_checked: int = 0
    remark_checked: int = 0

    def fail(self, message: str, bd: Optional[Bidegree] = None, witness: Optional[AlgebraElement] = None) -> None:
        if self.passed:
            self.failing_bidegree = bd
            self.witness = witness
        self.passed = False
        self.failures.append(message)


@dataclass
class StrongVerdict:
    """Outcome of an s-strong formality check.

    ``status`` is ``certified``, ``refuted`` (the ∂∂̄-Lemma fails, which no
    choice of generators can repair) or ``not certified`` (the deterministic
    splitting violates an ideal condition).
    """

    s: int
    holds: bool
    status: str
    scope: str
    certificate: Optional[SplittingCertificate] = None
    witness: Optional[AlgebraElement] = None
    bidegree: Optional[Bidegree] = None
    message: Optional[str] = None
    lemma: Optional[DdbarVerdict] = None


# -- ker ρ and purification ----------------------------------------------------

def _require_free(algebra) -> FreeCbba:
    if algebra.kind != "free":
        raise PreconditionFailed(f"{algebra.name} is not a free algebra")
    return algebra


def decomposable_differentials(algebra: FreeCbba, k: int) -> Tuple[List[Vector], List[Tuple[Bidegree, object]]]:
    """d of every decomposable monomial of total degree ``k``, as total-degree vectors."""

    def build():
        keys = [(bd, m) for bd in bidegrees_of_total(k) for m in algebra.basis(bd) if sum(e for _, e in m) >= 2]
        rows = [total_vector(algebra, algebra.apply_diff(algebra.basis_element(m), "d"), k + 1) for _, m in keys]
        return rows, keys

    return algebra.memo(("decomposable_d", k), build)


def _check_rho_range(algebra: FreeCbba, k: int) -> None:
    if k + 2 > algebra.max_total:
        raise InsufficientTruncation(f"ker ρ in degree {k} needs truncation at least {k + 2}")


def ker_rho_at(algebra: FreeCbba, bd: Bidegree) -> Subspace:
    """Generators v of bidegree ``bd`` with dv ∈ d((ΛV^{<k})^k), in generator coordinates."""
    _require_free(algebra)
    _check_rho_range(algebra, bd.total)

    def build() -> Subspace:
        k = bd.total
        rows, _ = decomposable_differentials(algebra, k)
        width = sum(algebra.dim(b) for b in bidegrees_of_total(k + 1))
        target = Subspace.span(rows, width)
        generator_rows = [total_vector(algebra, algebra.apply_diff(algebra.generator_element(i), "d"), k + 1)
                          for i in algebra.generators_of(bd)]
        if not generator_rows:
            return Subspace.zero(0)
        return preimage(generator_rows, target)

    return algebra.memo(("ker_rho", bd), build)


def ker_rho(algebra: FreeCbba, k: int) -> Subspace:
    """ker ρ on V^k, in the coordinates of the degree-k generators in declaration order."""
    _require_free(algebra)
    order = algebra.generators_of_total(k)
    position = {g: j for j, g in enumerate(order)}
    vectors = []
    for bd in bidegrees_of_total(k):
        gens = algebra.generators_of(bd)
        if not gens:
            continue
        for v in ker_rho_at(algebra, bd).basis:
            full = list(zero_vector(len(order)))
            for g, c in zip(gens, v):
                full[position[g]] = c
            vectors.append(tuple(full))
    return Subspace.span(vectors, len(order))


def purify_primitive(algebra: FreeCbba, y: AlgebraElement, bd: Optional[Bidegree] = None) -> AlgebraElement:
    """
    A decomposable b of the bidegree of ``y`` with ∂b = ∂y and ∂̄b = ∂̄y.

    A possibly mixed-bidegree decomposable solution of db = dy is found
    first; its (p,q) part is then corrected by ∂∂̄-primitives φ of the
    defects, b = b^{p,q} + ∂̄φ^{p,q-1} - ∂φ^{p-1,q}, and the correction is
    chosen so that b stays decomposable.

    Raises:
        NoSolution: If dy is not d of a decomposable element.
        DdbarWitnessMissing: If a defect is not ∂∂̄-exact.
    """
    bd = bd or y.bidegree
    if bd is None:
        raise PreconditionFailed("purification needs an element of pure bidegree")
    if not y:
        return algebra.zero()
    k = bd.total
    _check_rho_range(algebra, k)
    rows, keys = decomposable_differentials(algebra, k)
    target = total_vector(algebra, algebra.apply_diff(y, "d"), k + 1)
    coeffs = combination(rows, target)
    if coeffs is None:
        raise NoSolution(f"d({y}) is not the differential of a decomposable element", witness=y, bidegree=bd)
    b = AlgebraElement(algebra, {m: c for (b_bd, m), c in zip(keys, coeffs) if b_bd == bd})

    rest = y - b
    defect_del = algebra.apply_diff(rest, "del")
    defect_delbar = algebra.apply_diff(rest, "delbar")
    phi_del = ddbar_primitive(algebra, defect_del, bd.shifted(1, 0))
    if phi_del is None:
        raise DdbarWitnessMissing(f"∂ of {rest} is not ∂∂̄-exact", witness=defect_del, bidegree=bd.shifted(1, 0))
    phi_delbar = ddbar_primitive(algebra, defect_delbar, bd.shifted(0, 1))
    if phi_delbar is None:
        raise DdbarWitnessMissing(f"∂̄ of {rest} is not ∂∂̄-exact", witness=defect_delbar,
                                  bidegree=bd.shifted(0, 1))
    purified = b + algebra.apply_diff(phi_del, "delbar") - algebra.apply_diff(phi_delbar, "del")

    linear = algebra.linear_part(purified, bd)
    if not is_zero_vector(linear):
        purified = _drop_linear_part(algebra, purified, bd, linear)

    if algebra.apply_diff(y - purified, "del") or algebra.apply_diff(y - purified, "delbar"):
        raise InternalContradiction(f"purified primitive of {y} does not close it")
    return purified


def _drop_linear_part(algebra: FreeCbba, purified: AlgebraElement, bd: Bidegree, linear: Vector) -> AlgebraElement:
    """Shifts the ∂∂̄-primitives by ∂∂̄-closed elements until the result has no linear part."""
    moves: List[AlgebraElement] = []
    for source, which, sign in ((bd.shifted(0, -1), "delbar", 1), (bd.shifted(-1, 0), "del", -1)):
        if source.p < 0 or source.q < 0:
            continue
        for v in kernel_of(algebra, "deldelbar", source).basis:
            step = algebra.apply_diff(algebra.element(source, v), which)
            moves.append(step if sign > 0 else -step)
    coeffs = combination([algebra.linear_part(m, bd) for m in moves], tuple(-c for c in linear))
    if coeffs is None:
        raise NoSolution(f"no decomposable primitive exists at {bd}", witness=purified, bidegree=bd)
    out = purified
    for c, m in zip(coeffs, moves):
        out = out + m * c
    return out


# -- verification --------------------------------------------------------------

def verification_caps(algebra: FreeCbba) -> Tuple[int, int]:
    bc_cap, a_cap = algebra.max_total - 1, algebra.max_total - 2
    sd = getattr(algebra, "sd_target", None)
    if sd is not None:
        bc_cap, a_cap = min(bc_cap, 2 * sd), min(a_cap, 2 * sd)
    return bc_cap, a_cap


def covered_bidegrees(algebra: FreeCbba, s: int) -> List[Bidegree]:
    return [bd for bd in algebra.bidegrees(s) if algebra.generators_of(bd)]


def _aeppli_form_holds(algebra: FreeCbba, bd: Bidegree) -> bool:
    """ker ∂ ∩ ker ∂̄ ∩ (Im ∂ + Im ∂̄) ⊆ Im ∂∂̄ at ``bd``."""
    both = bc_closed(algebra, bd).intersect(aeppli_exact(algebra, bd))
    return image_in(algebra, "deldelbar", bd).contains(both)


def ideal_slice(algebra: FreeCbba, nonclosed: Sequence[AlgebraElement], bd: Bidegree,
                ambient: Family) -> Subspace:
    if not nonclosed:
        return Subspace.zero(algebra.dim(bd))
    return ideal_span(algebra, nonclosed, bd, closure=True, ambient=ambient)


def check_ideal(algebra: FreeCbba, nonclosed: Sequence[AlgebraElement], ambient: Family,
                report: VerifyReport, bidegrees: Optional[Sequence[Bidegree]] = None) -> None:
    """Runs both ideal conditions on every slice in reach, recording witnesses and failures."""
    bc_cap, a_cap = verification_caps(algebra)
    targets = bidegrees if bidegrees is not None else algebra.bidegrees(bc_cap)
    for bd in targets:
        if bd.total > bc_cap or not algebra.dim(bd):
            continue
        slice_ = ideal_slice(algebra, nonclosed, bd, ambient)
        if not slice_.dim:
            continue
        report.slices_checked += 1
        closed_part = slice_.intersect(bc_closed(algebra, bd))
        bad = closed_part.quotient_basis(image_in(algebra, "deldelbar", bd))
        bc_ok = not bad
        if bad:
            report.fail(f"a closed element of the ideal at {bd} is not ∂∂̄-exact", bd, algebra.element(bd, bad[0]))
        else:
            for v in closed_part.basis:
                u = algebra.element(bd, v)
                report.witnesses.append(IdealWitness("BC", bd, u, primitive=ddbar_primitive(algebra, u, bd)))
        if bd.total > a_cap:
            continue
        ddbar_closed = slice_.intersect(kernel_of(algebra, "deldelbar", bd))
        bad_a = ddbar_closed.quotient_basis(aeppli_exact(algebra, bd))
        if bad_a:
            report.fail(f"a ∂∂̄-closed element of the ideal at {bd} is outside Im ∂ + Im ∂̄", bd,
                        algebra.element(bd, bad_a[0]))
            continue
        for v in ddbar_closed.basis:
            u = algebra.element(bd, v)
            alpha, beta = del_delbar_split(algebra, u, bd)
            report.witnesses.append(IdealWitness("A", bd, u, alpha=alpha, beta=beta))
        if _aeppli_form_holds(algebra, bd):
            report.remark_checked += 1
            if not bc_ok:
                raise InternalContradiction(
                    f"at {bd} the Aeppli ideal condition and the ∂∂̄-Lemma hold but the Bott-Chern condition fails"
                )


def split_verify(algebra: FreeCbba, certificate: SplittingCertificate, scope: Optional[int] = None) -> VerifyReport:
    """
    Re-checks a certificate from scratch: coverage, the direct sum, d(C) = 0,
    injectivity of d on N and both ideal conditions on I_scope.

    Returns:
        A VerifyReport; failures are reported, not raised.
    """
    _require_free(algebra)
    scope = certificate.s if scope is None else scope
    report = VerifyReport(passed=True, scope=scope)
    if scope + 1 > algebra.max_total:
        report.fail(f"scope {scope} lies beyond truncation {algebra.max_total}")
        return report

    for bd in covered_bidegrees(algebra, scope):
        if bd not in certificate.closed and bd not in certificate.nonclosed:
            report.fail(f"coverage gap at {bd}", bd)
            continue
        cs = certificate.closed.get(bd, ())
        ns = certificate.nonclosed.get(bd, ())
        if any(u and u.bidegree != bd for u in cs + ns):
            report.fail(f"an element listed at {bd} has another bidegree", bd)
            continue
        m = len(algebra.generators_of(bd))
        linear = [algebra.linear_part(u, bd) for u in cs + ns]
        if len(linear) != m or rank(linear, m) != m:
            report.fail(f"C and N do not split the generators at {bd}", bd)
            continue
        for c in cs:
            if algebra.apply_diff(c, "d"):
                report.fail(f"{c} is in C but not closed", bd, c)
        k = bd.total
        images = [total_vector(algebra, algebra.apply_diff(u, "d"), k + 1) for u in ns]
        if ns and rank(images, len(images[0])) != len(ns):
            report.fail(f"d is not injective on N at {bd}", bd, ns[0])

    if report.passed:
        ambient = generated_sub_cbba(algebra, scope)
        check_ideal(algebra, certificate.nonclosed_elements(scope), ambient, report)
    logger.info("Splitting of %s at scope %d: %s", algebra.name, scope, "pass" if report.passed else "fail")
    return report


# -- search --------------------------------------------------------------------

def split_degree(algebra: FreeCbba, bd: Bidegree) -> Tuple[List[AlgebraElement], List[AlgebraElement]]:
    """Purified ker ρ generators and the RREF complement at one bidegree."""
    kernel = ker_rho_at(algebra, bd)
    closed = []
    for v in kernel.basis:
        y = algebra.from_linear(bd, v)
        closed.append(y - purify_primitive(algebra, y, bd))
    m = len(algebra.generators_of(bd))
    nonclosed = [algebra.from_linear(bd, u) for u in Subspace.full(m).quotient_basis(kernel)]
    return closed, nonclosed


def adjustments_of(algebra: FreeCbba, closed: Dict[Bidegree, Tuple[AlgebraElement, ...]]) -> Dict[str, AlgebraElement]:
    """Generator name to subtrahend, for closed elements whose linear part is a single generator."""
    out: Dict[str, AlgebraElement] = {}
    for bd, elements in closed.items():
        gens = algebra.generators_of(bd)
        for u in elements:
            linear = algebra.linear_part(u, bd)
            support = [g for g, c in zip(gens, linear) if not is_zero(c)]
            if len(support) == 1 and linear[gens.index(support[0])] == ONE:
                g = support[0]
                subtrahend = algebra.generator_element(g) - u
                if subtrahend:
                    out[algebra.generators[g].name] = subtrahend
    return out


def split_search(algebra: FreeCbba, s: int, lemma: Optional[DdbarVerdict] = None) -> SplittingCertificate:
    """
    Builds the ker-ρ splitting up to degree ``s`` and verifies it.

    Args:
        algebra: A free algebra.
        s: The degree bound.
        lemma: A ∂∂̄-Lemma verdict covering degree ``s``; computed when omitted.

    Raises:
        SplittingObstructed: With the ∂∂̄ witness or the first ideal witness.
    """
    _require_free(algebra)
    if lemma is None:
        lemma = ddbar_check_up_to(algebra, s)
    if not lemma.holds:
        raise SplittingObstructed(f"the ∂∂̄-Lemma up to degree {s} fails at {lemma.bidegree}",
                                  witness=lemma.witness, bidegree=lemma.bidegree)
    closed: Dict[Bidegree, Tuple[AlgebraElement, ...]] = {}
    nonclosed: Dict[Bidegree, Tuple[AlgebraElement, ...]] = {}
    for bd in covered_bidegrees(algebra, s):
        cs, ns = split_degree(algebra, bd)
        closed[bd], nonclosed[bd] = tuple(cs), tuple(ns)
        logger.debug("Split %s at %s: %d closed, %d non-closed", algebra.name, bd, len(cs), len(ns))
    certificate = SplittingCertificate(algebra.name, s, f"s={s}", closed, nonclosed,
                                       adjustments=adjustments_of(algebra, closed))
    report = split_verify(algebra, certificate, s)
    if not report.passed:
        raise SplittingObstructed(report.failures[0], witness=report.witness, bidegree=report.failing_bidegree)
    return replace(certificate, witnesses=tuple(report.witnesses))


def s_strong_check(algebra: FreeCbba, s: int, lemma: Optional[DdbarVerdict] = None,
                   scope_label: Optional[str] = None) -> StrongVerdict:
    """
    s-strong formality: the ∂∂̄-Lemma up to degree ``s`` together with a
    verified splitting of the generators up to degree ``s``.
    """
    _require_free(algebra)
    label = scope_label or f"s={s}"
    if lemma is None:
        lemma = ddbar_check_up_to(algebra, s)
    if not lemma.holds:
        return StrongVerdict(s, False, "refuted", label, witness=lemma.witness, bidegree=lemma.bidegree,
                             message=f"the ∂∂̄-Lemma fails at {lemma.bidegree}", lemma=lemma)
    try:
        certificate = split_search(algebra, s, lemma)
    except SplittingObstructed as exc:
        return StrongVerdict(s, False, "not certified", label, witness=exc.witness, bidegree=exc.bidegree,
                             message=str(exc), lemma=lemma)
    certificate = replace(certificate, scope=label)
    logger.info("%s is %d-strongly formal", algebra.name, s)
    return StrongVerdict(s, True, "certified", label, certificate=certificate, lemma=lemma)


def strong_check(algebra: FreeCbba, n: int) -> StrongVerdict:
    """Strong formality of an n-SD model as 2n-strong formality."""
    _require_free(algebra)
    s = 2 * n
    if s + 3 <= algebra.max_total:
        lemma = ddbar_check_up_to(algebra, s)
    else:
        if getattr(algebra, "sd_target", None) != n:
            raise InsufficientTruncation(f"strong formality check needs truncation at least {s + 3} "
                                         f"or a declared sd-target {n}")
        lemma = ddbar_check_global(algebra)
    return s_strong_check(algebra, s, lemma, scope_label=f"global-to-{s}")
