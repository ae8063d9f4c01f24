"""
Promotion of (n−1)-strong formality to strong formality for n-SD models.

Generators of degree n, ..., 2n are processed in order, closed ones (ker ρ)
first. A closed generator is purified into C. A non-closed generator x goes
to N after subtracting a closed correction ψ chosen through the duality
pairing, so that ∂∂̄-closed elements of the growing ideal at (n,n) stay in
Im ∂ + Im ∂̄.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .bigraded import AlgebraElement, Bidegree, bidegrees_of_total
from .cohomology import cohomology, kernel_of, omega_coordinate, pairing_check
from .ddbar import ddbar_primitive, sd_promotion_check
from .errors import (
    HypothesesUnmet,
    InternalContradiction,
    PairingSingular,
    PreconditionFailed,
    PromotionObstructed,
)
from .exactla import ONE, Subspace, combination, format_scalar, is_zero, is_zero_vector, vector_times
from .free import FreeCbba
from .spans import Family, generated_sub_cbba, subalgebra_span
from .splitting import (
    SplittingCertificate,
    VerifyReport,
    ideal_slice,
    ker_rho_at,
    purify_primitive,
    s_strong_check,
    split_verify,
)

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class PromotionContext:
    """The modified generators processed so far; they generate 𝒞(ΛV_{i−1})."""

    algebra: FreeCbba
    n: int
    closed: List[AlgebraElement] = field(default_factory=list)
    nonclosed: List[AlgebraElement] = field(default_factory=list)
    _ambient: Optional[Family] = field(default=None, repr=False)

    def ambient(self) -> Family:
        if self._ambient is None:
            top = min(2 * self.n + 1, self.algebra.max_total)
            self._ambient = subalgebra_span(self.algebra, self.closed + self.nonclosed, max_total=top)
        return self._ambient

    def slice(self, bd: Bidegree) -> Subspace:
        return self.ambient().get(bd, Subspace.zero(self.algebra.dim(bd)))

    def ideal(self, bd: Bidegree) -> Subspace:
        return ideal_slice(self.algebra, self.nonclosed, bd, self.ambient())

    def add_closed(self, u: AlgebraElement) -> None:
        self.closed.append(u)
        self._ambient = None

    def add_nonclosed(self, u: AlgebraElement) -> None:
        self.nonclosed.append(u)
        self._ambient = None

    def extended(self, x: AlgebraElement) -> "PromotionContext":
        return PromotionContext(self.algebra, self.n, list(self.closed), self.nonclosed + [x])


@dataclass(frozen=True)
class EtaNormalForm:
    """η = η₀ + τ·x + ∂α + ∂̄β with η₀ in the previous ideal and τ closed."""

    case: str
    eta0: AlgebraElement
    tau: AlgebraElement
    alpha: AlgebraElement
    beta: AlgebraElement


@dataclass
class Adjustment:
    generator: str
    bidegree: Bidegree
    psi: AlgebraElement
    lambdas: List[str] = field(default_factory=list)
    constrained: int = 0


@dataclass
class PromotionResult:
    n: int
    certificate: SplittingCertificate
    report: VerifyReport
    adjustments: List[Adjustment] = field(default_factory=list)
    normal_forms: List[EtaNormalForm] = field(default_factory=list)


# -- normal forms --------------------------------------------------------------

def _nondecomposable(algebra: FreeCbba, u: AlgebraElement, bd: Bidegree) -> bool:
    return bool(u) and not is_zero_vector(algebra.linear_part(u, bd))


def _case(algebra: FreeCbba, x: AlgebraElement, n: int) -> str:
    bd = x.bidegree
    k = bd.total
    del_x = _nondecomposable(algebra, algebra.apply_diff(x, "del"), bd.shifted(1, 0))
    delbar_x = _nondecomposable(algebra, algebra.apply_diff(x, "delbar"), bd.shifted(0, 1))
    if k == n - 1:
        if not (del_x and delbar_x):
            raise HypothesesUnmet(f"degree {k} generator {x} needs non-decomposable ∂ and ∂̄ images")
        return "2.1" if n % 2 == 0 else "2.2"
    if k < n - 1:
        raise HypothesesUnmet(f"generator {x} of degree {k} is below degree {n - 1}")
    if del_x and delbar_x:
        return "1.1"
    return "1.2" if del_x or delbar_x else "1.3"


def _closing_steps(algebra: FreeCbba, x: AlgebraElement, case: str) -> Tuple[str, ...]:
    """Differentials of τ that may need a ∂∂̄ correction; the others vanish by the ∂∂̄η = 0 identities."""
    if case == "1.3":
        return "del", "delbar"
    if case == "1.2":
        del_x = _nondecomposable(algebra, algebra.apply_diff(x, "del"), x.bidegree.shifted(1, 0))
        return ("del",) if del_x else ("delbar",)
    return ()


def _multipliers(context: PromotionContext, bd: Bidegree) -> List[AlgebraElement]:
    if bd.p < 0 or bd.q < 0:
        return []
    return [context.algebra.element(bd, v) for v in context.slice(bd).basis]


def _basis_elements(algebra: FreeCbba, bd: Bidegree) -> List[AlgebraElement]:
    if bd.p < 0 or bd.q < 0:
        return []
    return [algebra.basis_element(m) for m in algebra.basis(bd)]


def rewrite_eta(algebra: FreeCbba, eta: AlgebraElement, x: AlgebraElement,
                context: PromotionContext) -> EtaNormalForm:
    """
    Writes a ∂∂̄-closed η of bidegree (n,n) in the ideal I_i as
    η₀ + τ·x + ∂α + ∂̄β with η₀ in I_{i−1} and τ closed.

    η is first split as η₀ + η₁·x + η₂·∂x + η₃·∂̄x + η₄·∂∂̄x + ∂σ + ∂̄ξ with
    η₀ ∈ I_{i−1} and ηⱼ in the earlier sub-cbba, and η₄·∂∂̄x is folded into
    the ∂̄x term. With s = (−1)^{k−1} for k = |x| the candidate is
    τ = η₁ − s∂η₂ − s∂̄η₃, α = s·η₂·x + σ, β = s·η₃·x + ξ. In cases 1.1, 2.1
    and 2.2 this τ is closed already; when ∂x or ∂̄x is decomposable (cases
    1.2 and 1.3) τ is corrected by ∂∂̄-primitives, whose products with x move
    into α and β.

    Args:
        algebra: The free algebra.
        eta: The element to rewrite.
        x: The i-th non-closed generator, possibly already modified.
        context: The modified generators before x.

    Returns:
        The normal form; it recomposes to ``eta`` exactly.

    Raises:
        HypothesesUnmet: If η is not ∂∂̄-closed at (n,n) in I_i, or x is too low.
        InternalContradiction: If an x² term is needed, or the case
            construction leaves τ non-closed or η₀ outside I_{i−1}.
    """
    n = context.n
    top = Bidegree(n, n)
    xb = x.bidegree
    if xb is None:
        raise HypothesesUnmet("the generator must have pure bidegree")
    if eta and eta.bidegree != top:
        raise HypothesesUnmet(f"{eta} is not of bidegree {top}")
    if algebra.apply_diff(eta, "deldelbar"):
        raise HypothesesUnmet(f"{eta} is not ∂∂̄-closed")
    case = _case(algebra, x, n)
    vec = algebra.vector(eta, top)
    if not context.extended(x).ideal(top).contains_vector(vec):
        raise HypothesesUnmet(f"{eta} is not in the ideal generated by x and the earlier non-closed generators")

    s = ONE if xb.total % 2 else -ONE
    rest = top.minus(xb)
    factors = [x] + [algebra.apply_diff(x, which) for which in ("del", "delbar", "deldelbar")]
    places = [rest, rest.shifted(-1, 0), rest.shifted(0, -1), rest.shifted(-1, -1)]
    groups = [_multipliers(context, bd) if f else [] for f, bd in zip(factors, places)]
    sigmas, xis = _basis_elements(algebra, top.shifted(-1, 0)), _basis_elements(algebra, top.shifted(0, -1))
    previous = context.ideal(top)

    rows = list(previous.basis)
    for f, group in zip(factors, groups):
        rows += [algebra.vector(c * f, top) for c in group]
    rows += [algebra.vector(algebra.apply_diff(a, "del"), top) for a in sigmas]
    rows += [algebra.vector(algebra.apply_diff(b, "delbar"), top) for b in xis]
    coeffs = combination(rows, vec)
    if coeffs is None:
        if xb.plus(xb) == top:
            raise InternalContradiction(f"∂∂̄-closed ideal element {eta} needs an x² term")
        raise InternalContradiction(f"{eta} has no normal form with respect to {x}")

    cut = previous.dim
    parts = []
    for group in groups + [sigmas, xis]:
        parts.append(_combine(algebra, coeffs[cut:cut + len(group)], group))
        cut += len(group)
    eta1, eta2, eta3, eta4, sigma, xi = parts

    # η₄·∂∂̄x = -s·∂(η₄·∂̄x) + s·∂η₄·∂̄x
    alpha = sigma + eta2 * x * s - eta4 * factors[2] * s
    eta3 = eta3 + algebra.apply_diff(eta4, "del") * s
    beta = xi + eta3 * x * s
    tau = eta1 - algebra.apply_diff(eta2, "del") * s - algebra.apply_diff(eta3, "delbar") * s

    for which in _closing_steps(algebra, x, case):
        d_tau = algebra.apply_diff(tau, which)
        if not d_tau:
            continue
        primitive = ddbar_primitive(algebra, d_tau, d_tau.bidegree)
        if primitive is None:
            raise InternalContradiction(f"case {case}: {which} of τ = {tau} is not ∂∂̄-exact")
        if which == "del":
            tau = tau - algebra.apply_diff(primitive, "delbar")
            beta = beta + primitive * x
        else:
            tau = tau + algebra.apply_diff(primitive, "del")
            alpha = alpha - primitive * x
    if algebra.apply_diff(tau, "del") or algebra.apply_diff(tau, "delbar"):
        raise InternalContradiction(f"case {case}: τ = {tau} is not closed")

    remainder = eta - tau * x - algebra.apply_diff(alpha, "del") - algebra.apply_diff(beta, "delbar")
    rows = list(previous.basis)
    rows += [algebra.vector(algebra.apply_diff(a, "del"), top) for a in sigmas]
    rows += [algebra.vector(algebra.apply_diff(b, "delbar"), top) for b in xis]
    coeffs = combination(rows, algebra.vector(remainder, top))
    if coeffs is None:
        raise InternalContradiction(f"case {case}: the remainder {remainder} lies outside the earlier ideal")
    cut1, cut2 = previous.dim, previous.dim + len(sigmas)
    alpha = alpha + _combine(algebra, coeffs[cut1:cut2], sigmas)
    beta = beta + _combine(algebra, coeffs[cut2:], xis)
    eta0 = eta - tau * x - algebra.apply_diff(alpha, "del") - algebra.apply_diff(beta, "delbar")
    form = EtaNormalForm(case, eta0, tau, alpha, beta)
    check_normal_form(algebra, eta, x, form, previous)
    return form


def check_normal_form(algebra: FreeCbba, eta: AlgebraElement, x: AlgebraElement, form: EtaNormalForm,
                      previous: Subspace) -> None:
    """η recomposes from the form, τ is closed and η₀ lies in the earlier ideal."""
    recomposed = form.eta0 + form.tau * x + algebra.apply_diff(form.alpha, "del") \
        + algebra.apply_diff(form.beta, "delbar")
    if recomposed != eta:
        raise InternalContradiction(f"normal form of {eta} does not recompose")
    if algebra.apply_diff(form.tau, "d"):
        raise InternalContradiction(f"τ = {form.tau} in the normal form of {eta} is not closed")
    if form.eta0 and not previous.contains_vector(algebra.vector(form.eta0, form.eta0.bidegree)):
        raise InternalContradiction(f"η₀ = {form.eta0} in the normal form of {eta} is outside the earlier ideal")


def _combine(algebra: FreeCbba, coeffs, elements: List[AlgebraElement]) -> AlgebraElement:
    out = algebra.zero()
    for c, u in zip(coeffs, elements):
        out = out + u * c
    return out


# -- generator adjustment ------------------------------------------------------

def _lambdas(algebra: FreeCbba, x: AlgebraElement, context: PromotionContext) -> List[Tuple[int, object]]:
    """(j, λ_j) for every dual Aeppli representative z_j that admits a k_j."""
    n = context.n
    bd = x.bidegree
    top = Bidegree(n, n)
    dual = Bidegree(n - bd.p, n - bd.q)
    previous = context.ideal(top)
    after = top.shifted(1, 1)
    rows = [algebra.vector(algebra.apply_diff(algebra.element(top, v), "deldelbar"), after) for v in previous.basis]
    out = []
    for j, z in enumerate(cohomology(algebra, "A", dual).representatives):
        product = z * x
        target = algebra.vector(-algebra.apply_diff(product, "deldelbar"), after)
        coeffs = combination(rows, target) if rows else (() if is_zero_vector(target) else None)
        if coeffs is None:
            continue
        k = algebra.element(top, vector_times(coeffs, previous.basis, algebra.dim(top)))
        out.append((j, omega_coordinate(algebra, n, k + product)))
    return out


def adjust_generator(algebra: FreeCbba, x: AlgebraElement, context: PromotionContext) -> Adjustment:
    """
    The closed correction ψ with [z_j]_A·[ψ]_BC = λ_j[ω]_A for every z_j.

    After replacing x by x − ψ every λ_j vanishes.

    Raises:
        PairingSingular: If the pairing system has no solution.
        InternalContradiction: If ψ falls outside the sub-cbba of earlier generators.
    """
    n = context.n
    bd = x.bidegree
    adjustment = Adjustment(generator=str(x), bidegree=bd, psi=algebra.zero())
    if bd.p > n or bd.q > n:
        return adjustment
    lambdas = _lambdas(algebra, x, context)
    adjustment.lambdas = [format_scalar(value) for _, value in lambdas]
    adjustment.constrained = len(lambdas)
    if all(is_zero(value) for _, value in lambdas):
        return adjustment

    bc = cohomology(algebra, "BC", bd).representatives
    dual = cohomology(algebra, "A", Bidegree(n - bd.p, n - bd.q)).representatives
    rows = [tuple(omega_coordinate(algebra, n, b * dual[j]) for j, _ in lambdas) for b in bc]
    coeffs = combination(rows, tuple(value for _, value in lambdas)) if rows else None
    if coeffs is None:
        raise PairingSingular(f"no Bott-Chern class at {bd} pairs to the λ values of {x}")
    psi = _combine(algebra, coeffs, list(bc))
    if not context.slice(bd).contains_vector(algebra.vector(psi, bd)):
        raise InternalContradiction(f"correction {psi} of {x} lies outside the earlier sub-cbba")
    adjustment.psi = psi
    logger.debug("Adjusted %s by %s", x, psi)
    return adjustment


# -- promotion -----------------------------------------------------------------

def _check_promotable(algebra: FreeCbba, n: int) -> None:
    if algebra.kind != "free":
        raise PreconditionFailed(f"{algebra.name} is not a free algebra")
    if algebra.generators_of_total(1):
        raise PreconditionFailed(f"{algebra.name} has degree-1 generators and is not simply connected")
    if algebra.max_total < 2 * n + 2:
        raise PreconditionFailed(f"promotion to degree {2 * n} needs truncation at least {2 * n + 2}")
    pairing = pairing_check(algebra, n)
    if not pairing.holds:
        raise PreconditionFailed(f"{algebra.name} is not {n}-SD: {pairing.failure}")


def _snapshot_check(algebra: FreeCbba, context: PromotionContext, k: int) -> None:
    top = min(2 * context.n + 1, algebra.max_total)
    original = generated_sub_cbba(algebra, k)
    for bd in algebra.bidegrees(top):
        if context.slice(bd) != original.get(bd, Subspace.zero(algebra.dim(bd))):
            raise InternalContradiction(f"modified generators change the sub-cbba at {bd} after degree {k}")


def _label(algebra: FreeCbba, bd: Bidegree, coords, u: AlgebraElement) -> str:
    """The generator name when ``u`` is a multiple of one generator, else the element itself."""
    support = [g for g, c in zip(algebra.generators_of(bd), coords) if not is_zero(c)]
    return algebra.generators[support[0]].name if len(support) == 1 else str(u)


def promote(algebra: FreeCbba, n: int) -> PromotionResult:
    """
    Extends an (n−1)-strong formality certificate of an n-SD model to degree 2n.

    Slices of I_{2n} away from (n,n) are settled by the final verification,
    which the pairing argument guarantees once (n,n) is.

    Raises:
        PreconditionFailed: If the model is not free, simply connected, n-SD
            and (n−1)-strongly formal, or the truncation is below 2n+2.
        PromotionObstructed: If the extended certificate fails verification.
    """
    _check_promotable(algebra, n)
    base = s_strong_check(algebra, n - 1)
    if not base.holds:
        raise PreconditionFailed(f"{algebra.name} is not {n - 1}-strongly formal: {base.message}")
    sd_promotion_check(algebra, n)
    closed: Dict[Bidegree, Tuple[AlgebraElement, ...]] = dict(base.certificate.closed)
    nonclosed: Dict[Bidegree, Tuple[AlgebraElement, ...]] = dict(base.certificate.nonclosed)
    adjustments_log: Dict[str, AlgebraElement] = dict(base.certificate.adjustments)
    context = PromotionContext(algebra, n, base.certificate.closed_elements(), base.certificate.nonclosed_elements())
    result_adjustments: List[Adjustment] = []
    normal_forms: List[EtaNormalForm] = []
    top = Bidegree(n, n)

    for k in range(n, 2 * n + 1):
        bidegrees = [bd for bd in bidegrees_of_total(k) if algebra.generators_of(bd)]
        complements: Dict[Bidegree, List] = {}
        for bd in bidegrees:
            kernel = ker_rho_at(algebra, bd)
            purified = []
            for v in kernel.basis:
                y = algebra.from_linear(bd, v)
                c = y - purify_primitive(algebra, y, bd)
                purified.append(c)
                context.add_closed(c)
                if y != c:
                    adjustments_log[_label(algebra, bd, v, y)] = y - c
            closed[bd] = tuple(purified)
            complements[bd] = Subspace.full(len(algebra.generators_of(bd))).quotient_basis(kernel)

        for bd in bidegrees:
            chosen = []
            for u in complements[bd]:
                x = algebra.from_linear(bd, u)
                adjustment = adjust_generator(algebra, x, context)
                x_hat = x - adjustment.psi
                if adjustment.psi:
                    adjustments_log[_label(algebra, bd, u, x)] = adjustment.psi
                    again = adjust_generator(algebra, x_hat, context)
                    if again.psi:
                        raise InternalContradiction(f"adjusting {x_hat} a second time is not trivial")
                result_adjustments.append(adjustment)
                extended = context.extended(x_hat)
                if top.total <= algebra.max_total - 2:
                    candidates = extended.ideal(top).intersect(kernel_of(algebra, "deldelbar", top))
                    previous = context.ideal(top)
                    for v in candidates.basis:
                        eta = algebra.element(top, v)
                        form = rewrite_eta(algebra, eta, x_hat, context)
                        check_normal_form(algebra, eta, x_hat, form, previous)
                        normal_forms.append(form)
                context.add_nonclosed(x_hat)
                chosen.append(x_hat)
            nonclosed[bd] = tuple(chosen)
        if bidegrees:
            _snapshot_check(algebra, context, k)
        logger.info("Promotion of %s: degree %d done", algebra.name, k)

    certificate = SplittingCertificate(algebra.name, 2 * n, f"global-to-{2 * n}", closed, nonclosed,
                                       adjustments=adjustments_log)
    report = split_verify(algebra, certificate, 2 * n)
    if not report.passed:
        raise PromotionObstructed(report.failures[0], witness=report.witness, bidegree=report.failing_bidegree)
    certificate = SplittingCertificate(algebra.name, 2 * n, f"global-to-{2 * n}", closed, nonclosed,
                                       witnesses=tuple(report.witnesses), adjustments=adjustments_log)
    return PromotionResult(n, certificate, report, result_adjustments, normal_forms)
