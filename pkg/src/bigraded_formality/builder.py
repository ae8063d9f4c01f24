"""
Builders for truncated minimal models.

``complete_model`` extends a partial model mapping to a target ring degree by
degree: Bott-Chern classes killed by the map get a triple (r, ∂r, ∂̄r) with
∂∂̄r equal to the class, missing target classes get a closed generator. The
other builders assemble partial models from geometric input, then complete
and promote them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .bigraded import AlgebraElement, Bidegree, bidegrees_of_total, parse_bidegree
from .cohomology import bc_closed, class_coordinates, cohomology, computable, kernel_of
from .config import get_settings
from .ddbar import ddbar_check_global, ddbar_primitive
from .errors import (
    CompletionObstructed,
    DimensionMismatch,
    HypothesesUnmet,
    InternalContradiction,
    ObstructionError,
    PreconditionFailed,
    ProductViolation,
    PromotionObstructed,
    RestrictionContractViolated,
    SpecialBranchInconsistent,
    SplittingObstructed,
    TargetNotDdbar,
    TruncationTooSmall,
    WidthViolated,
)
from .exactla import ONE, ZERO, Scalar, Subspace, Vector, is_zero, is_zero_vector, left_kernel, rank
from .finite import FiniteBicomplex
from .free import FreeCbba, Generator, monomial_word
from .presentation import (
    Assignment,
    Declaration,
    PresentationFile,
    ProductRule,
    canonical_poly,
    format_terms,
    parse_poly,
    parse_scalar,
)
from .promotion import EtaNormalForm, PromotionContext, PromotionResult, promote, rewrite_eta
from .splitting import (
    SplittingCertificate,
    StrongVerdict,
    VerifyReport,
    ideal_slice,
    s_strong_check,
    split_verify,
)
from .spans import generated_sub_cbba
from .validation import validate

# Configure logging
logger = logging.getLogger(__name__)


# -- class assignments ---------------------------------------------------------

def target_element(target: FiniteBicomplex, text: str) -> AlgebraElement:
    """A target element from text linear in the target's basis labels."""
    terms: Dict[int, object] = {}
    for coeff, word in parse_poly(text, target.labels):
        if len(word) > 1:
            raise DimensionMismatch(f"{text!r} is not linear in the basis of {target.name}")
        key = target.unit if not word else target.index_of(word[0])
        if key is None:
            raise DimensionMismatch(f"{target.name} has no unit for the constant term of {text!r}")
        terms[key] = terms.get(key, ZERO) + coeff
    return AlgebraElement(target, terms)


def image_of(model: FreeCbba, images: Mapping[str, AlgebraElement], target: FiniteBicomplex,
             u: AlgebraElement) -> AlgebraElement:
    """The multiplicative extension of a generator assignment applied to ``u``."""
    out = target.zero()
    for key, c in u.terms.items():
        value = target.one()
        for g in monomial_word(key):
            value = value * images[model.generators[g].name]
        out = out + value * c
    return out


def check_morphism(model: FreeCbba, images: Mapping[str, AlgebraElement], target: FiniteBicomplex,
                   error=PreconditionFailed) -> None:
    """Degrees are preserved and ∂, ∂̄ commute with the assignment on every generator."""
    for i, g in enumerate(model.generators):
        value = images.get(g.name)
        if value is None:
            raise error(f"no image assigned to generator {g.name}")
        if value and value.bidegree != g.bidegree:
            raise error(f"image of {g.name} has the wrong bidegree")
        if g.total + 1 > model.max_total:
            continue
        x = model.generator_element(i)
        for which in ("del", "delbar"):
            lhs = image_of(model, images, target, model.apply_diff(x, which))
            if lhs != target.apply_diff(value, which):
                raise error(f"the assignment does not commute with {which} on {g.name}")


def _bc_rows(model: FreeCbba, images, target: FiniteBicomplex, bd: Bidegree) -> Tuple[list, list, int]:
    reps = list(cohomology(model, "BC", bd).representatives)
    space = cohomology(target, "BC", bd)
    rows = []
    for rep in reps:
        coords = class_coordinates(space, image_of(model, images, target, rep))
        if coords is None:
            raise InternalContradiction(f"image of the closed element {rep} is not closed")
        rows.append(coords)
    return reps, rows, space.dim


def _a_rows(model: FreeCbba, images, target: FiniteBicomplex, bd: Bidegree) -> Tuple[list, int]:
    space = cohomology(target, "A", bd)
    rows = []
    for rep in cohomology(model, "A", bd).representatives:
        coords = class_coordinates(space, image_of(model, images, target, rep))
        if coords is None:
            raise InternalContradiction(f"image of the ∂∂̄-closed element {rep} is not ∂∂̄-closed")
        rows.append(coords)
    return rows, space.dim


def _kernel_vectors(rows: List[Vector], width: int) -> List[Vector]:
    if not rows:
        return []
    if not width:
        return list(Subspace.full(len(rows)).basis)
    return list(Subspace.span(left_kernel(rows, width), len(rows)).basis)


# -- completion ----------------------------------------------------------------

@dataclass
class Triple:
    name: str
    killed: str
    bidegree: Bidegree


@dataclass
class CompletionResult:
    presentation: PresentationFile
    algebra: FreeCbba
    images: Dict[str, AlgebraElement]
    triples: List[Triple] = field(default_factory=list)
    closed_added: List[str] = field(default_factory=list)
    comparison: Dict[str, Dict[str, List[int]]] = field(default_factory=dict)
    matches: bool = True
    minimal: bool = True
    passes: int = 0


class _Workbench:
    """Presentation, algebra and generator images being extended together."""

    def __init__(self, presentation: PresentationFile, target: FiniteBicomplex, images: Dict[str, AlgebraElement]):
        self.presentation = presentation
        self.target = target
        self.images = images
        self.algebra: FreeCbba = validate(presentation)
        self.counter = 0

    def fresh(self, stem: str) -> str:
        names = set(self.presentation.names)
        while True:
            self.counter += 1
            candidate = f"{stem}{self.counter}"
            if not {candidate, candidate + "p", candidate + "q"} & names:
                return candidate

    def rebuild(self, declarations: List[Declaration], assignments: List[Assignment]) -> None:
        self.presentation = self.presentation.model_copy(update={
            "declarations": self.presentation.declarations + declarations,
            "assignments": self.presentation.assignments + assignments,
        })
        self.algebra = validate(self.presentation)

    def add_triple(self, killed: AlgebraElement, bd: Bidegree) -> Triple:
        if bd.p < 1 or bd.q < 1 or bd.total < 3:
            raise CompletionObstructed(f"the class of {killed} at {bd} cannot be killed by a generator",
                                       witness=killed, bidegree=bd)
        model, target = self.algebra, self.target
        value = image_of(model, self.images, target, killed)
        if value:
            primitive = ddbar_primitive(target, value, bd)
            if primitive is None:
                raise InternalContradiction(f"image of the killed class {killed} is not ∂∂̄-exact")
        else:
            primitive = target.zero()
        r = self.fresh("r")
        rp, rq = r + "p", r + "q"
        names = self.presentation.names + [r, rp, rq]
        text = str(killed)
        declarations = [Declaration(name=r, p=bd.p - 1, q=bd.q - 1), Declaration(name=rp, p=bd.p, q=bd.q - 1),
                        Declaration(name=rq, p=bd.p - 1, q=bd.q)]
        assignments = [
            Assignment(operator="del", name=r, poly=canonical_poly(f"1 * {rp}", names)),
            Assignment(operator="delbar", name=r, poly=canonical_poly(f"1 * {rq}", names)),
            Assignment(operator="delbar", name=rp, poly=canonical_poly(f"-({text})", names)),
            Assignment(operator="del", name=rq, poly=canonical_poly(text, names)),
        ]
        self.images[r] = primitive
        self.images[rp] = target.apply_diff(primitive, "del")
        self.images[rq] = target.apply_diff(primitive, "delbar")
        self.rebuild(declarations, assignments)
        logger.debug("Added %s with ∂∂̄%s = %s", r, r, text)
        return Triple(r, text, bd.shifted(-1, -1))

    def add_closed(self, value: AlgebraElement, bd: Bidegree) -> str:
        name = self.fresh("c")
        self.images[name] = value
        self.rebuild([Declaration(name=name, p=bd.p, q=bd.q)], [])
        logger.debug("Added closed generator %s for %s", name, value)
        return name


def _complete_degree(bench: _Workbench, k: int, result: CompletionResult) -> Optional[int]:
    """One pass over total degree k; the lowest degree that gained generators, if any."""
    lowest: Optional[int] = None
    for bd in bidegrees_of_total(k):
        reps, rows, width = _bc_rows(bench.algebra, bench.images, bench.target, bd)
        kernel = []
        for v in _kernel_vectors(rows, width):
            killed = bench.algebra.zero()
            for c, rep in zip(v, reps):
                killed = killed + rep * c
            kernel.append(killed)
        for killed in kernel:
            # generators are only appended, so monomial keys carry over
            moved = AlgebraElement(bench.algebra, killed.terms)
            result.triples.append(bench.add_triple(moved, bd))
            lowest = k - 2

        reps, rows, width = _bc_rows(bench.algebra, bench.images, bench.target, bd)
        if not width:
            continue
        image = Subspace.span(rows, width) if rows else Subspace.zero(width)
        targets = cohomology(bench.target, "BC", bd).representatives
        for e in Subspace.full(width).quotient_basis(image):
            value = bench.target.zero()
            for c, rep in zip(e, targets):
                value = value + rep * c
            result.closed_added.append(bench.add_closed(value, bd))
            lowest = k if lowest is None else lowest
    return lowest


def _extend(bench: _Workbench, first: int, last: int, result: CompletionResult) -> None:
    """
    Runs degree passes from ``first`` to ``last`` until a sweep changes nothing.

    A pass that adds generators restarts the sweep at the lowest degree it
    touched, since new generators in degrees k−2 and k−1 can carry new
    classes there.
    """
    limit = get_settings().completion_passes
    k = first
    while k <= last:
        lowest = _complete_degree(bench, k, result)
        if lowest is None:
            k += 1
            continue
        result.passes += 1
        if result.passes > limit:
            raise CompletionObstructed(
                f"completion of {bench.presentation.name} still changed degree {k} after {limit} passes "
                f"(FORMALITY_COMPLETION_PASSES)")
        k = max(1, lowest)
        logger.debug("Completion of %s restarts at degree %d: %d generators", bench.presentation.name, k,
                     len(bench.algebra.generators))
    result.presentation, result.algebra, result.images = bench.presentation, bench.algebra, bench.images
    result.comparison, result.matches = comparison_table(bench.algebra, bench.target)
    result.minimal = bench.algebra.is_minimal()


def comparison_table(model: FreeCbba, target: FiniteBicomplex) -> Tuple[Dict[str, Dict[str, List[int]]], bool]:
    """Model and target BC/A dimensions per bidegree up to two below the truncation."""
    table: Dict[str, Dict[str, List[int]]] = {"BC": {}, "A": {}}
    matches = True
    for bd in model.bidegrees(model.max_total - 2):
        for kind in ("BC", "A"):
            if not computable(model, kind, bd.total):
                continue
            pair = [cohomology(model, kind, bd).dim, cohomology(target, kind, bd).dim]
            table[kind][str(bd)] = pair
            matches = matches and pair[0] == pair[1]
    return table, matches


def complete_model(partial: PresentationFile, target: FiniteBicomplex, truncation: int,
                   assignment: Mapping[str, str], through: Optional[int] = None) -> CompletionResult:
    """
    Completes a partial free model of a target ring up to a truncation.

    Args:
        partial: A free presentation; its truncation is replaced.
        target: A finite bicomplex with multiplication satisfying the ∂∂̄-Lemma.
        truncation: The truncation D of the result.
        assignment: Generator name to target element text.
        through: Last total degree to process, defaults to D−1.

    Returns:
        The extended presentation, its algebra, the generator images and a
        dimension comparison with the target.

    Raises:
        TargetNotDdbar: If the target fails the ∂∂̄-Lemma.
        TruncationTooSmall: If the truncation is below 3.
        CompletionObstructed: If a class must be killed in bidegree (p,0) or (0,q).
    """
    if partial.kind != "free":
        raise PreconditionFailed(f"{partial.name} is not a free presentation")
    if not target.has_product:
        raise PreconditionFailed(f"{target.name} carries no multiplication")
    if truncation < 3:
        raise TruncationTooSmall(f"completion needs truncation at least 3, got {truncation}")
    lemma = ddbar_check_global(target)
    if not lemma.holds:
        raise TargetNotDdbar(f"{target.name} fails the ∂∂̄-Lemma at {lemma.bidegree}")

    images = {name: target_element(target, text) for name, text in assignment.items()}
    bench = _Workbench(partial.model_copy(update={"truncation": truncation}), target, images)
    check_morphism(bench.algebra, bench.images, target)
    result = CompletionResult(bench.presentation, bench.algebra, bench.images)

    last = truncation - 1 if through is None else min(through, truncation - 1)
    _extend(bench, 1, last, result)
    logger.info("Completed %s: %d triples, %d closed generators, dims %s", partial.name, len(result.triples),
                len(result.closed_added), "match" if result.matches else "differ")
    return result


def promote_built(algebra: FreeCbba, n: int) -> PromotionResult:
    """
    Promotes a model assembled here.

    A promotion precondition failing on a built model is an obstruction of
    the construction, reported with the witness of the failed check.
    """
    try:
        return promote(algebra, n)
    except PreconditionFailed as exc:
        raise PromotionObstructed(f"the built model {algebra.name} cannot be promoted: {exc}",
                                  witness=getattr(exc, "witness", None),
                                  bidegree=getattr(exc, "bidegree", None)) from exc


# -- central cohomology ----------------------------------------------------------

class SpecialBranch(BaseModel):
    """η ∈ H^{m,m} with η² = a·x^{2m} + b·x^m·η + Σ_j x^j·α_j, each α_j primitive in bidegree (2m−j, 2m−j)."""

    model_config = ConfigDict(extra="forbid")
    m: int = Field(..., ge=1)
    h_mm: int = Field(..., ge=0)
    a: str = "1"
    b: str = "0"
    alpha: Dict[int, str] = Field(default_factory=dict)


class HodgeInput(BaseModel):
    """Hodge data of a central-cohomology manifold: primitive dimensions per degree and bidegree."""

    model_config = ConfigDict(extra="forbid")
    name: str = "central"
    n: int = Field(..., ge=1)
    omega: bool = True
    primitive: Dict[int, Dict[str, int]] = Field(default_factory=dict)
    special: Optional[SpecialBranch] = None


@dataclass
class CentralModel:
    presentation: PresentationFile
    algebra: FreeCbba
    verdict: StrongVerdict
    ring: FiniteBicomplex
    completion: CompletionResult
    promotion: PromotionResult

    @property
    def certificate(self) -> SplittingCertificate:
        return self.verdict.certificate


@dataclass(frozen=True)
class _Primitive:
    name: str
    bidegree: Bidegree
    index: int


def _primitives(h: HodgeInput) -> List[_Primitive]:
    low = math.ceil(h.n / 2) + 1
    out: List[_Primitive] = []
    for k in sorted(h.primitive):
        for label, dim in sorted(h.primitive[k].items()):
            bd = parse_bidegree(label)
            if dim < 0:
                raise DimensionMismatch(f"negative primitive dimension at {bd}")
            if bd.total != k:
                raise DimensionMismatch(f"bidegree {bd} does not have total degree {k}")
            if dim and not low <= k <= h.n:
                raise WidthViolated(f"primitive classes in degree {k} lie outside [{low}, {h.n}]")
            out.extend(_Primitive(f"p{k}_{bd.p}{bd.q}_{j + 1}", bd, j + 1) for j in range(dim))
    return out


def _special_terms(h: HodgeInput, primitives: List[_Primitive]):
    """a, b and the α_j as (coefficient, primitive name) pairs."""
    special = h.special
    m = special.m
    if h.n != 4 * m - 1:
        raise SpecialBranchInconsistent(f"the special branch needs n = 4m−1, got n = {h.n}, m = {m}")
    if special.h_mm != 2:
        raise SpecialBranchInconsistent(f"the special branch needs h^{{{m},{m}}} = 2, got {special.h_mm}")
    a, b = parse_scalar(special.a), parse_scalar(special.b)
    if is_zero(a):
        raise SpecialBranchInconsistent("η² needs a nonzero x^{2m} coefficient, got a = 0")
    by_name = {p.name: p for p in primitives}
    alpha: Dict[int, List[Tuple[Scalar, str]]] = {}
    for j, text in sorted(special.alpha.items()):
        if not 1 <= j <= m - 1:
            raise SpecialBranchInconsistent(f"α_{j} is outside j = 1..{m - 1}")
        expected = Bidegree(2 * m - j, 2 * m - j)
        terms = parse_poly(text, list(by_name))
        if any(len(word) != 1 or by_name[word[0]].bidegree != expected for _, word in terms):
            raise SpecialBranchInconsistent(f"α_{j} = {text!r} is not linear in primitive classes at {expected}")
        alpha[j] = [(c, word[0]) for c, word in terms]
    return a, b, alpha


def _x_word(power: int) -> List[str]:
    return ["x"] * power


def central_presentation(h: HodgeInput) -> PresentationFile:
    """Λ(x, primitive generators), with η and the ξ triple of the special branch."""
    n = h.n
    primitives = _primitives(h)
    declarations = [Declaration(name="x", p=1, q=1)]
    declarations += [Declaration(name=p.name, p=p.bidegree.p, q=p.bidegree.q) for p in primitives]

    assignments: List[Assignment] = []
    if h.special is not None:
        m = h.special.m
        a, b, alpha = _special_terms(h, primitives)
        declarations += [Declaration(name="eta", p=m, q=m),
                         Declaration(name="xi", p=2 * m - 1, q=2 * m - 1),
                         Declaration(name="xip", p=2 * m, q=2 * m - 1),
                         Declaration(name="xiq", p=2 * m - 1, q=2 * m)]
        terms = [("eta*eta", ONE), ("*".join(_x_word(2 * m)), -a), ("*".join(_x_word(m) + ["eta"]), -b)]
        for j, pairs in alpha.items():
            terms += [("*".join(_x_word(j) + [name]), -c) for c, name in pairs]
        relation = format_terms(terms)
        names = [d.name for d in declarations]
        assignments = [
            Assignment(operator="del", name="xi", poly=canonical_poly("1 * xip", names)),
            Assignment(operator="delbar", name="xi", poly=canonical_poly("1 * xiq", names)),
            Assignment(operator="delbar", name="xip", poly=canonical_poly(f"-({relation})", names)),
            Assignment(operator="del", name="xiq", poly=canonical_poly(relation, names)),
        ]
    return PresentationFile(name=h.name, kind="free", truncation=2 * n + 2, sd_target=n,
                            declarations=declarations, assignments=assignments)


def central_ring(h: HodgeInput) -> PresentationFile:
    """
    The cohomology ring a central model maps to.

    The basis is x^i for i ≤ n together with the Lefschetz images x^i·P of
    each primitive class P of degree k for i ≤ n−k; η counts as a primitive
    class of degree 2m. Conjugate primitive classes pair to x^{k+i+j} and
    products of other primitive pairs vanish, which is associative because
    every primitive degree exceeds n/2. In the special branch η² follows the
    relation and η·x^i·q = (c_q/a)·x^{2m−j+i}·η for q occurring in α_j with
    coefficient c_q.

    Raises:
        DimensionMismatch: If the primitive dimensions are not Hodge symmetric.
    """
    n = h.n
    primitives = _primitives(h)
    by_place = {(p.bidegree, p.index): p.name for p in primitives}
    conjugate: Dict[str, str] = {}
    for p in primitives:
        mirror = by_place.get((Bidegree(p.bidegree.q, p.bidegree.p), p.index))
        if mirror is None:
            raise DimensionMismatch(f"{h.name}: primitive dimensions at {p.bidegree} and its conjugate differ")
        conjugate[p.name] = mirror
    weight = {p.name: p.bidegree for p in primitives}

    eta_square: List[Tuple[int, Optional[str], Scalar]] = []
    eta_with: Dict[str, Tuple[int, Scalar]] = {}
    if h.special is not None:
        m = h.special.m
        a, b, alpha = _special_terms(h, primitives)
        weight["eta"] = Bidegree(m, m)
        eta_square = [(2 * m, None, a), (m, "eta", b)]
        for j, pairs in alpha.items():
            eta_square += [(j, name, c) for c, name in pairs]
            eta_with.update({name: (2 * m - j, c / a) for c, name in pairs})

    def top(cls: Optional[str]) -> int:
        return n if cls is None else n - weight[cls].total

    def label(i: int, cls: Optional[str]) -> str:
        if cls is None:
            return "one" if i == 0 else "x" if i == 1 else f"x{i}"
        return cls if i == 0 else f"x{i}_{cls}"

    def lift(i: int, cls: Optional[str], c: Scalar) -> List[Tuple[str, Scalar]]:
        return [(label(i, cls), c)] if i <= top(cls) and not is_zero(c) else []

    def product(u, v) -> List[Tuple[str, Scalar]]:
        (i, s), (j, t) = u, v
        shift = i + j
        if s is None or t is None:
            return lift(shift, t if s is None else s, ONE)
        if s == "eta" and t == "eta":
            return [term for power, cls, c in eta_square for term in lift(power + shift, cls, c)]
        if "eta" in (s, t):
            power, c = eta_with.get(t if s == "eta" else s, (0, ZERO))
            return lift(power + shift, "eta", c)
        if conjugate[s] != t:
            return []
        bd = weight[s]
        sign = -ONE if bd.p < bd.q and bd.total % 2 else ONE
        return lift(bd.total + shift, None, sign)

    classes = [(i, None) for i in range(n + 1)] + [(i, cls) for cls in weight for i in range(top(cls) + 1)]
    labels = [label(*c) for c in classes]
    declarations = []
    for i, cls in classes:
        bd = Bidegree(i, i) if cls is None else weight[cls].shifted(i, i)
        declarations.append(Declaration(name=label(i, cls), p=bd.p, q=bd.q))
    products = []
    for index, u in enumerate(classes):
        for v in classes[index:]:
            if (0, None) in (u, v):
                continue
            terms = product(u, v)
            if terms:
                products.append(ProductRule(left=label(*u), right=label(*v),
                                            poly=canonical_poly(format_terms(terms), labels)))
    return PresentationFile(name=f"{h.name}-ring", kind="finite", sd_target=n,
                            declarations=declarations, products=products)


def central_model(h: HodgeInput) -> CentralModel:
    """
    Builds the strongly formal model of a central-cohomology manifold.

    The partial model Λ(x, P), with η and the ξ triple in the special branch,
    is completed against the central ring up to truncation 2n+2. Its
    (n−1)-splitting is certified with N empty, or N = ⟨ξ⟩ in the special
    branch, and the completed model is promoted to strong formality.

    Raises:
        WidthViolated: If primitive classes sit below ⌈n/2⌉+1.
        SpecialBranchInconsistent: If n ≠ 4m−1, h^{m,m} ≠ 2, a = 0 or the
            η relation does not give an associative ring.
        SplittingObstructed: If the certificate cannot be produced.
        PromotionObstructed: If the completed model cannot be promoted.
    """
    n = h.n
    partial = central_presentation(h)
    try:
        ring = validate(central_ring(h))
    except ProductViolation as exc:
        if h.special is None:
            raise
        raise SpecialBranchInconsistent(f"the η relation does not give a ring: {exc}") from exc
    assignment = {d.name: f"1 * {d.name}" for d in partial.declarations}
    assignment.update({name: "0" for name in ("xi", "xip", "xiq") if name in assignment})
    completion = complete_model(partial, ring, 2 * n + 2, assignment)
    algebra = completion.algebra

    verdict = s_strong_check(algebra, n - 1)
    if not verdict.holds:
        raise SplittingObstructed(f"{h.name} is not {n - 1}-strongly formal: {verdict.message}",
                                  witness=verdict.witness, bidegree=verdict.bidegree)
    nonclosed = verdict.certificate.nonclosed_elements()
    if h.special is None and nonclosed:
        raise InternalContradiction("the generic central model has non-closed generators below degree n")
    if h.special is not None:
        xi = algebra.generators[algebra.generator_index("xi")]
        if len(nonclosed) != 1 or nonclosed[0].bidegree != xi.bidegree:
            raise InternalContradiction(f"expected N = ⟨xi⟩ below degree {n}, got {nonclosed}")
    report = split_verify(algebra, verdict.certificate, n - 1)
    if not report.passed:
        raise InternalContradiction(f"central model certificate fails verification: {report.failures[0]}")
    promotion = promote_built(algebra, n)
    logger.info("Central model %s: %d generators, %d completion passes, promoted", h.name,
                len(algebra.generators), completion.passes)
    return CentralModel(completion.presentation, algebra, verdict, ring, completion, promotion)


# -- multiplicative relations ----------------------------------------------------

@dataclass
class RelationsReport:
    n: int
    holds: bool
    failing_degree: Optional[int] = None
    failing_bidegree: Optional[Bidegree] = None
    witness: Optional[str] = None
    checked: Dict[str, List[int]] = field(default_factory=dict)


def _relation_text(free: FreeCbba, classes: List[str], monomials, coeffs) -> str:
    terms = []
    for key, c in zip(monomials, coeffs):
        terms.append(("*".join(classes[g] for g in monomial_word(key)), c))
    return format_terms(terms)


def relations_injectivity_check(ring: FiniteBicomplex, n: int) -> RelationsReport:
    """
    Whether products of lower classes never vanish below degree n+2.

    For each k < n+2 the graded-symmetric algebra on Bott-Chern classes of
    degree below k maps by multiplication into H_BC of degree k; the check is
    injectivity of that map on each bidegree.
    """
    if not ring.has_product:
        raise PreconditionFailed(f"{ring.name} carries no multiplication")
    report = RelationsReport(n=n, holds=True)
    for k in range(2, n + 2):
        reps = [(bd, r) for bd in ring.bidegrees(k - 1) if bd.total >= 1
                for r in cohomology(ring, "BC", bd).representatives]
        if not reps:
            continue
        classes = [f"[{r}]" for _, r in reps]
        free = FreeCbba(f"sym-{ring.name}", [Generator(f"h{j}", bd) for j, (bd, _) in enumerate(reps)], {}, {}, k)
        for bd in bidegrees_of_total(k):
            monomials = free.basis(bd)
            if not monomials:
                continue
            space = cohomology(ring, "BC", bd)
            rows = []
            for key in monomials:
                value = ring.one()
                for g in monomial_word(key):
                    value = value * reps[g][1]
                coords = class_coordinates(space, value)
                if coords is None:
                    raise InternalContradiction(f"a product of Bott-Chern classes at {bd} is not closed")
                rows.append(coords)
            r = rank(rows, space.dim) if space.dim else 0
            report.checked[str(bd)] = [len(monomials), r]
            if r == len(monomials) or not report.holds:
                continue
            report.holds = False
            report.failing_degree = k
            report.failing_bidegree = bd
            if space.dim:
                coeffs = left_kernel(rows, space.dim)[0]
            else:
                coeffs = tuple(ONE if j == 0 else ZERO for j in range(len(monomials)))
            report.witness = _relation_text(free, classes, monomials, coeffs)
            logger.debug("Relation %s = 0 at %s", report.witness, bd)
    logger.info("Relations check of %s below degree %d: %s", ring.name, n + 2, report.holds)
    return report


@dataclass
class RelationsModel:
    ring: FiniteBicomplex
    relations: RelationsReport
    completion: CompletionResult
    verdict: StrongVerdict
    promotion: PromotionResult

    @property
    def presentation(self) -> PresentationFile:
        return self.completion.presentation

    @property
    def algebra(self) -> FreeCbba:
        return self.completion.algebra


def relations_model(ring: FiniteBicomplex, n: int) -> RelationsModel:
    """
    Builds and promotes the model of an n-SD ring with no multiplicative
    relations below degree n+2.

    Completing the empty model against such a ring only adds closed
    generators through degree n+1, so the result is (n−1)-strongly formal
    with N empty and promotion applies.

    Raises:
        HypothesesUnmet: If a product of classes vanishes below degree n+2.
        PromotionObstructed: If the completed model cannot be promoted.
    """
    relations = relations_injectivity_check(ring, n)
    if not relations.holds:
        raise HypothesesUnmet(f"{ring.name} has the relation {relations.witness} = 0 at "
                              f"{relations.failing_bidegree}")
    partial = PresentationFile(name=f"{ring.name}-model", kind="free", truncation=2 * n + 2, sd_target=n)
    completion = complete_model(partial, ring, 2 * n + 2, {})
    early = [t for t in completion.triples if t.bidegree.total < n]
    if early:
        raise InternalContradiction(f"completion killed {early[0].killed} below degree {n + 2}")
    verdict = s_strong_check(completion.algebra, n - 1)
    if not verdict.holds:
        raise SplittingObstructed(f"{partial.name} is not {n - 1}-strongly formal: {verdict.message}",
                                  witness=verdict.witness, bidegree=verdict.bidegree)
    promotion = promote_built(completion.algebra, n)
    logger.info("Model of %s: %d generators, %d triples, promoted", ring.name,
                len(completion.algebra.generators), len(completion.triples))
    return RelationsModel(ring, relations, completion, verdict, promotion)


# -- Lefschetz extension ---------------------------------------------------------

@dataclass
class RestrictionInput:
    """A model of B with a restriction to the cohomology ring of A."""

    model: PresentationFile
    target: FiniteBicomplex
    restriction: Dict[str, str]
    n: int
    name: Optional[str] = None


@dataclass
class ExtensionResult:
    presentation: PresentationFile
    algebra: FreeCbba
    base: SplittingCertificate
    verification: VerifyReport
    promotion: Optional[PromotionResult] = None
    obstruction: Optional[ObstructionError] = None
    added_closed: List[str] = field(default_factory=list)
    added_triples: List[Triple] = field(default_factory=list)
    normal_forms: List[EtaNormalForm] = field(default_factory=list)
    frozen: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    passes: int = 0


def check_restriction(model: FreeCbba, images, target: FiniteBicomplex, n: int) -> None:
    """Iso on BC and A cohomology below degree n and injective in degree n."""
    check_morphism(model, images, target, error=RestrictionContractViolated)
    for k in range(n + 1):
        for bd in bidegrees_of_total(k):
            _, bc_rows, bc_width = _bc_rows(model, images, target, bd)
            a_rows, a_width = _a_rows(model, images, target, bd)
            for kind, rows, width in (("BC", bc_rows, bc_width), ("A", a_rows, a_width)):
                r = rank(rows, width) if rows and width else 0
                if r < len(rows):
                    raise RestrictionContractViolated(f"H_{kind}{bd} of the restriction is not injective")
                if k < n and r < width:
                    raise RestrictionContractViolated(f"H_{kind}{bd} of the restriction is not onto")


def _ideal_dims(algebra: FreeCbba, nonclosed: List[AlgebraElement], s: int, top: int) -> Dict[str, int]:
    ambient = generated_sub_cbba(algebra, s)
    return {str(bd): ideal_slice(algebra, nonclosed, bd, ambient).dim for bd in algebra.bidegrees(top)}


def _ideal_classes(algebra: FreeCbba, nonclosed: List[AlgebraElement], s: int, k: int) -> int:
    """Dimension of the Bott-Chern classes in degree k represented inside the ideal of N."""
    ambient = generated_sub_cbba(algebra, s)
    count = 0
    for bd in bidegrees_of_total(k):
        space = cohomology(algebra, "BC", bd)
        if not space.dim:
            continue
        closed = ideal_slice(algebra, nonclosed, bd, ambient).intersect(bc_closed(algebra, bd))
        rows = [class_coordinates(space, algebra.element(bd, v)) for v in closed.basis]
        count += rank(rows, space.dim) if rows else 0
    return count


def _bc_total(algebra, k: int) -> int:
    return sum(cohomology(algebra, "BC", bd).dim for bd in bidegrees_of_total(k))


def _moved(algebra: FreeCbba, family: Mapping[Bidegree, Tuple[AlgebraElement, ...]]):
    return {bd: tuple(AlgebraElement(algebra, u.terms) for u in us) for bd, us in family.items()}


def _extended_certificate(m_r: FreeCbba, base: SplittingCertificate, triples: List[Triple],
                          n: int) -> SplittingCertificate:
    closed = _moved(m_r, base.closed)
    nonclosed = _moved(m_r, base.nonclosed)
    for t in triples:
        i = m_r.generator_index(t.name)
        killed = m_r.apply_diff(m_r.generator_element(i), "deldelbar")
        if not is_zero_vector(m_r.linear_part(killed, t.bidegree.shifted(1, 1))):
            raise InternalContradiction(f"the killed class {t.killed} is not decomposable")
        nonclosed[t.bidegree] = nonclosed.get(t.bidegree, ()) + (m_r.generator_element(i),)
        closed.setdefault(t.bidegree, ())
    return SplittingCertificate(m_r.name, n - 1, f"s={n - 1}", closed, nonclosed)


def lefschetz_extend(data: RestrictionInput, truncation: int) -> ExtensionResult:
    """
    Builds a strongly formal model of A from a model of B and a restriction
    that is an isomorphism below degree n and injective in degree n.

    The cokernel of the restriction in degree n becomes closed generators,
    the kernel in degree n+1 is killed by triples (r, ∂r, ∂̄r) whose r join
    N in degree n−1, the model is completed up to the truncation and the
    result is promoted to strong formality. The model is named
    ``data.name``, or ``<B>-to-<A>`` by default.

    A completion or promotion obstruction after the (n−1)-certificate is in
    place is kept on the result together with the model built so far.

    Raises:
        RestrictionContractViolated: If the restriction breaks its contract.
        PreconditionFailed: If B is not (n−1)-strongly formal.
        InternalContradiction: If the frozen ideal I_{n−1} changes during completion.
    """
    n = data.n
    if truncation < 2 * n + 2:
        raise TruncationTooSmall(f"the extension needs truncation at least {2 * n + 2}, got {truncation}")
    source = data.model.model_copy(update={"truncation": truncation})
    model_b = validate(source)
    images = {name: target_element(data.target, text) for name, text in data.restriction.items()}
    check_restriction(model_b, images, data.target, n)
    base = s_strong_check(model_b, n - 1)
    if not base.holds:
        raise PreconditionFailed(f"{model_b.name} is not {n - 1}-strongly formal: {base.message}")

    name = data.name or f"{data.model.name}-to-{data.target.name}"
    step = complete_model(source.model_copy(update={"name": name}), data.target, truncation, data.restriction,
                          through=n + 1)
    m_r = step.algebra
    if any(t.bidegree.total != n - 1 for t in step.triples):
        raise InternalContradiction(f"completion killed classes outside degree {n + 1}")
    if any(m_r.generators[m_r.generator_index(c)].total < n for c in step.closed_added):
        raise InternalContradiction(f"completion added closed generators below degree {n}")
    certificate = _extended_certificate(m_r, base.certificate, step.triples, n)
    report = split_verify(m_r, certificate, n - 1)
    if not report.passed:
        raise SplittingObstructed(f"extended certificate fails: {report.failures[0]}", witness=report.witness,
                                  bidegree=report.failing_bidegree)
    frozen_top = min(2 * n, truncation - 1)
    result = ExtensionResult(step.presentation, m_r, base=certificate, verification=report,
                             added_closed=list(step.closed_added), added_triples=list(step.triples),
                             frozen=_ideal_dims(m_r, certificate.nonclosed_elements(), n - 1, frozen_top),
                             passes=step.passes)
    try:
        _finish_extension(data, base.certificate, step, result, truncation, frozen_top)
    except ObstructionError as exc:
        result.obstruction = exc
        logger.info("Lefschetz extension %s stopped: %s", name, exc)
    return result


def _finish_extension(data: RestrictionInput, base: SplittingCertificate, step: CompletionResult,
                      result: ExtensionResult, truncation: int, frozen_top: int) -> None:
    n = data.n
    bench = _Workbench(step.presentation, data.target, dict(step.images))
    final = CompletionResult(step.presentation, step.algebra, step.images)
    _extend(bench, n + 2, truncation - 1, final)
    algebra = final.algebra
    nonclosed = [AlgebraElement(algebra, u.terms) for u in result.base.nonclosed_elements()]
    if _ideal_dims(algebra, nonclosed, n - 1, frozen_top) != result.frozen:
        raise InternalContradiction("completion changed the frozen ideal I_{n−1}")
    result.presentation, result.algebra = final.presentation, algebra
    result.added_closed += final.closed_added
    result.added_triples += final.triples
    result.passes += final.passes

    context = PromotionContext(algebra, n,
                               [AlgebraElement(algebra, u.terms) for u in result.base.closed_elements()],
                               [AlgebraElement(algebra, u.terms) for u in base.nonclosed_elements()])
    top = Bidegree(n, n)
    for t in sorted(step.triples, key=lambda t: algebra.generator_index(t.name)):
        r = algebra.generator_element(algebra.generator_index(t.name))
        candidates = context.extended(r).ideal(top).intersect(kernel_of(algebra, "deldelbar", top))
        for v in candidates.basis:
            result.normal_forms.append(rewrite_eta(algebra, algebra.element(top, v), r, context))
        context.add_nonclosed(r)

    in_ideal = _ideal_classes(algebra, nonclosed, n - 1, n)
    if in_ideal:
        logger.warning("%s: %d Bott-Chern classes of degree %d lie in the ideal of N", algebra.name, in_ideal, n)
    result.notes = [
        f"degree {n - 1}: {len(result.normal_forms)} ∂∂̄-closed ideal elements at {top} in normal form",
        f"degree {n}: {in_ideal} Bott-Chern classes represented in the ideal of N",
        f"degree {2 * n - 1}: H_BC has dimension {_bc_total(algebra, 2 * n - 1)} in the model and "
        f"{_bc_total(data.target, 2 * n - 1)} in {data.target.name}",
    ]
    result.promotion = promote_built(algebra, n)
    logger.info("Lefschetz extension %s: %d closed generators, %d triples", algebra.name,
                len(result.added_closed), len(result.added_triples))
