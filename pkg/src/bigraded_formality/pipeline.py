import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel

from . import __version__, corpus
from .bigraded import AlgebraElement, Bidegree, parse_bidegree
from .builder import (
    CompletionResult,
    ExtensionResult,
    HodgeInput,
    RestrictionInput,
    central_model,
    complete_model,
    lefschetz_extend,
    relations_injectivity_check,
    relations_model,
)
from .cohomology import KINDS, cohomology, computable, dims_table, euler_check, pairing_check
from .ddbar import DdbarVerdict, bc_to_a_iso_table, ddbar_check_global, ddbar_check_up_to
from .errors import InputError, PreconditionFailed
from .finite import FiniteBicomplex
from .free import FreeCbba
from .presentation import PresentationFile, parse, parse_poly, serialize
from .promotion import EtaNormalForm, PromotionResult, promote
from .psi import build_psi
from .schema import (
    AdjustmentReport,
    CentralModelReport,
    CertificateReport,
    CohomologyReport,
    CompletionReport,
    CompletionSpec,
    CorpusListing,
    DdbarReport,
    DimsReport,
    ErrorReport,
    ExtensionReport,
    ExtensionSpec,
    NormalFormReport,
    PairingBlockReport,
    PairingReportModel,
    PromotionReport,
    RelationsModelReport,
    RelationsReportModel,
    Report,
    ShapeReport,
    StrongReport,
    ValidateReport,
    VerifyReportModel,
    WitnessReport,
    ZigzagReport,
)
from .splitting import (
    SplittingCertificate,
    StrongVerdict,
    VerifyReport,
    s_strong_check,
    split_search,
    split_verify,
    strong_check,
)
from .validation import validate
from .zigzag import zigzag_decompose, zigzag_predicted_dims

# Configure logging
logger = logging.getLogger(__name__)

CORPUS_PREFIX = "corpus:"
M = TypeVar("M", bound=BaseModel)


def _text(u: Optional[AlgebraElement]) -> Optional[str]:
    return None if u is None else str(u)


def _bd(bd: Optional[Bidegree]) -> Optional[str]:
    return None if bd is None else str(bd)


# -- inputs ----------------------------------------------------------------------

@dataclass
class Source:
    """A resolved input with the canonical text its hash is taken over."""

    name: str
    canonical: str

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.canonical.encode("utf-8")).hexdigest()


def load_presentation(ref: str) -> Tuple[PresentationFile, Source]:
    if ref.startswith(CORPUS_PREFIX):
        presentation = corpus.presentation(ref[len(CORPUS_PREFIX):])
    else:
        presentation = parse(ref)
    return presentation, Source(ref, serialize(presentation))


def load_spec(ref: str, model: Type[M]) -> Tuple[M, Source]:
    """A JSON specification from a file or from a corpus entry's payload."""
    if ref.startswith(CORPUS_PREFIX):
        e = corpus.entry(ref[len(CORPUS_PREFIX):])
        if e.payload is None:
            raise InputError(f"corpus entry '{e.name}' is a presentation, not a specification")
        data = e.payload
    else:
        path = Path(ref)
        if not path.is_file():
            raise FileNotFoundError(f"The file was not found at: {path}")
        with open(path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        spec = model.model_validate(data)
    except ValueError as exc:
        raise InputError(f"invalid {model.__name__} in {ref}: {exc}") from exc
    return spec, Source(ref, spec.model_dump_json())


def _finite(ref: str) -> FiniteBicomplex:
    presentation, _ = load_presentation(ref)
    algebra = validate(presentation)
    if algebra.kind != "finite":
        raise PreconditionFailed(f"{ref} is not a finite presentation")
    return algebra


def _free(algebra) -> FreeCbba:
    if algebra.kind != "free":
        raise PreconditionFailed(f"{algebra.name} is not a free algebra")
    return algebra


def parse_element(algebra: FreeCbba, text: str) -> AlgebraElement:
    """An element of a free algebra from polynomial text in its generator names."""
    names = [g.name for g in algebra.generators]
    out = algebra.zero()
    for coeff, word in parse_poly(text, names):
        term = algebra.one()
        for name in word:
            term = term * algebra.generator_element(algebra.generator_index(name))
        out = out + term * coeff
    return out


# -- conversions -----------------------------------------------------------------

def certificate_report(cert: SplittingCertificate) -> CertificateReport:
    return CertificateReport(
        algebra=cert.algebra,
        s=cert.s,
        scope=cert.scope,
        closed={str(bd): [str(u) for u in us] for bd, us in sorted(cert.closed.items())},
        nonclosed={str(bd): [str(u) for u in us] for bd, us in sorted(cert.nonclosed.items())},
        adjustments={name: str(u) for name, u in sorted(cert.adjustments.items())},
        witnesses=[
            WitnessReport(condition=w.condition, bidegree=str(w.bidegree), element=str(w.element),
                          primitive=_text(w.primitive), alpha=_text(w.alpha), beta=_text(w.beta))
            for w in cert.witnesses
        ],
    )


def certificate_from_report(algebra: FreeCbba, report: CertificateReport) -> SplittingCertificate:
    def family(data: Dict[str, list]) -> Dict[Bidegree, Tuple[AlgebraElement, ...]]:
        return {parse_bidegree(bd): tuple(parse_element(algebra, u) for u in us) for bd, us in data.items()}

    return SplittingCertificate(
        algebra=report.algebra,
        s=report.s,
        scope=report.scope,
        closed=family(report.closed),
        nonclosed=family(report.nonclosed),
        adjustments={name: parse_element(algebra, u) for name, u in report.adjustments.items()},
    )


def verify_report(report: VerifyReport) -> VerifyReportModel:
    return VerifyReportModel(passed=report.passed, scope=report.scope, failures=report.failures,
                             bidegree=_bd(report.failing_bidegree), witness=_text(report.witness),
                             slices_checked=report.slices_checked, remark_checked=report.remark_checked)


def strong_report(verdict: StrongVerdict) -> StrongReport:
    return StrongReport(
        s=verdict.s,
        holds=verdict.holds,
        status=verdict.status,
        scope=verdict.scope,
        message=verdict.message,
        bidegree=_bd(verdict.bidegree),
        witness=_text(verdict.witness),
        certificate=None if verdict.certificate is None else certificate_report(verdict.certificate),
    )


def ddbar_report(verdict: DdbarVerdict, algebra, up_to: Optional[int] = None) -> DdbarReport:
    table = bc_to_a_iso_table(algebra, up_to)
    return DdbarReport(scope=verdict.scope, holds=verdict.holds, bidegree=_bd(verdict.bidegree),
                       witness=_text(verdict.witness), table=verdict.table,
                       bc_to_a={str(bd): ok for bd, ok in table.items()}, notes=verdict.notes)


def normal_form_report(form: EtaNormalForm) -> NormalFormReport:
    return NormalFormReport(case=form.case, eta0=str(form.eta0), tau=str(form.tau), alpha=str(form.alpha),
                            beta=str(form.beta))


def promotion_report(result: PromotionResult) -> PromotionReport:
    return PromotionReport(
        n=result.n,
        normal_forms=[normal_form_report(f) for f in result.normal_forms],
        adjustments=[AdjustmentReport(generator=a.generator, bidegree=str(a.bidegree), psi=str(a.psi),
                                      lambdas=a.lambdas) for a in result.adjustments],
        verification=verify_report(result.report),
        certificate=certificate_report(result.certificate),
    )


def _triples(triples) -> list:
    return [{"generator": t.name, "bidegree": str(t.bidegree), "kills": t.killed} for t in triples]


def completion_report(result: CompletionResult) -> CompletionReport:
    return CompletionReport(presentation=serialize(result.presentation), triples=_triples(result.triples),
                            closed_added=result.closed_added, comparison=result.comparison,
                            matches=result.matches, minimal=result.minimal, passes=result.passes)


def error_report(exc: Exception) -> ErrorReport:
    bidegree = getattr(exc, "bidegree", None)
    witness = getattr(exc, "witness", None)
    return ErrorReport(error=type(exc).__name__, message=str(exc),
                       bidegree=None if bidegree is None else str(bidegree),
                       witness=None if witness is None else str(witness))


def extension_report(result: ExtensionResult) -> ExtensionReport:
    return ExtensionReport(
        name=result.presentation.name,
        presentation=serialize(result.presentation),
        verification=verify_report(result.verification),
        added_closed=result.added_closed,
        added_triples=_triples(result.added_triples),
        frozen_ideal=result.frozen,
        normal_forms=[normal_form_report(f) for f in result.normal_forms],
        notes=result.notes,
        passes=result.passes,
        promotion=None if result.promotion is None else promotion_report(result.promotion),
        obstruction=None if result.obstruction is None else error_report(result.obstruction),
    )


# -- commands --------------------------------------------------------------------

Outcome = Tuple[Optional[bool], BaseModel]


def cmd_validate(algebra) -> Outcome:
    if algebra.kind == "free":
        return True, ValidateReport(kind="free", name=algebra.name, generators=len(algebra.generators),
                                    truncation=algebra.truncation, minimal=algebra.is_minimal())
    return True, ValidateReport(kind="finite", name=algebra.name, generators=algebra.size,
                                euler=euler_check(algebra))


def cmd_cohomology(algebra, kind: str = "BC", bidegree: Optional[str] = None) -> Outcome:
    if kind not in KINDS:
        raise InputError(f"unknown cohomology kind {kind!r}, expected one of {', '.join(KINDS)}")
    report = CohomologyReport(kind=kind)
    if kind == "deRham":
        degrees = [int(bidegree)] if bidegree else [k for k in range(algebra.max_total + 1)
                                                   if computable(algebra, kind, k)]
        labels = [str(k) for k in degrees]
    else:
        degrees = [parse_bidegree(bidegree)] if bidegree else [bd for bd in algebra.bidegrees()
                                                              if computable(algebra, kind, bd.total)]
        labels = [str(bd) for bd in degrees]
    for label, degree in zip(labels, degrees):
        space = cohomology(algebra, kind, degree)
        report.dims[label] = space.dim
        if space.dim:
            report.representatives[label] = [str(r) for r in space.representatives]
    return None, report


def cmd_dims(algebra) -> Outcome:
    return None, DimsReport(dims=dims_table(algebra))


def cmd_zigzag(algebra) -> Outcome:
    decomposition = zigzag_decompose(algebra)
    predicted = zigzag_predicted_dims(decomposition)
    return decomposition.dots_and_squares_only, ZigzagReport(
        dots=decomposition.count("dot"),
        squares=decomposition.count("square"),
        zigzags=decomposition.count("zigzag"),
        shapes=[ShapeReport(kind=s.kind, anchor=str(s.anchor), cells=[str(c) for c in s.cells])
                for s in decomposition.shapes],
        predicted={str(bd): list(v) for bd, v in sorted(predicted.items())},
    )


def cmd_ddbar_check(algebra, up_to: Optional[int] = None) -> Outcome:
    if up_to is None:
        verdict = ddbar_check_global(algebra)
        return verdict.holds, ddbar_report(verdict, algebra)
    verdict = ddbar_check_up_to(_free(algebra), up_to)
    return verdict.holds, ddbar_report(verdict, algebra, algebra.max_total - 2)


def cmd_sd_check(algebra, n: int) -> Outcome:
    report = pairing_check(algebra, n)
    return report.holds, PairingReportModel(
        n=report.n,
        holds=report.holds,
        omega=_text(report.omega),
        blocks=[PairingBlockReport(bidegree=str(b.bidegree), rows=b.rows, cols=b.cols, rank=b.rank,
                                   matrix=b.matrix) for b in report.blocks],
        failure=report.failure,
        bidegree=_bd(report.failing_bidegree),
        witness=_text(report.witness),
    )


def cmd_split(algebra, s: int, verify: Optional[str] = None) -> Outcome:
    algebra = _free(algebra)
    if verify is None:
        certificate = split_search(algebra, s)
        psi = build_psi(algebra, certificate)
        logger.info("ψ checks on %s: %s", algebra.name, psi.checks)
        return True, certificate_report(certificate)
    report, _ = load_spec(verify, CertificateReport)
    certificate = certificate_from_report(algebra, report)
    result = split_verify(algebra, certificate, s)
    return result.passed, verify_report(result)


def cmd_s_strong(algebra, s: int) -> Outcome:
    verdict = s_strong_check(_free(algebra), s)
    return verdict.holds, strong_report(verdict)


def cmd_strong(algebra, n: int) -> Outcome:
    verdict = strong_check(_free(algebra), n)
    return verdict.holds, strong_report(verdict)


def cmd_promote(algebra, n: int) -> Outcome:
    result = promote(_free(algebra), n)
    return result.report.passed, promotion_report(result)


def cmd_relations_check(algebra, n: int) -> Outcome:
    if algebra.kind != "finite":
        raise PreconditionFailed("the relations check needs a finite cohomology ring")
    report = relations_injectivity_check(algebra, n)
    return report.holds, RelationsReportModel(n=report.n, holds=report.holds, failing_degree=report.failing_degree,
                                              bidegree=_bd(report.failing_bidegree), witness=report.witness,
                                              checked=report.checked)


def cmd_relations_model(ring, n: int) -> Outcome:
    if ring.kind != "finite":
        raise PreconditionFailed("a relations model needs a finite cohomology ring")
    built = relations_model(ring, n)
    relations = built.relations
    return built.promotion.report.passed, RelationsModelReport(
        relations=RelationsReportModel(n=relations.n, holds=relations.holds, checked=relations.checked),
        completion=completion_report(built.completion),
        strong=strong_report(built.verdict),
        promotion=promotion_report(built.promotion),
    )


def cmd_central_model(spec: HodgeInput) -> Outcome:
    built = central_model(spec)
    return built.promotion.report.passed, CentralModelReport(presentation=serialize(built.presentation),
                                                             strong=strong_report(built.verdict),
                                                             completion=completion_report(built.completion),
                                                             promotion=promotion_report(built.promotion))


def cmd_lefschetz_extend(spec: ExtensionSpec) -> Outcome:
    model, _ = load_presentation(spec.model)
    data = RestrictionInput(model=model, target=_finite(spec.target), restriction=spec.restriction, n=spec.n,
                            name=spec.name)
    result = lefschetz_extend(data, spec.truncation or 2 * spec.n + 2)
    passed = result.obstruction is None and result.promotion is not None and result.promotion.report.passed
    return passed, extension_report(result)


def cmd_complete(spec: CompletionSpec) -> Outcome:
    partial, _ = load_presentation(spec.partial)
    result = complete_model(partial, _finite(spec.target), spec.truncation, spec.assignment)
    return result.matches, completion_report(result)


PRESENTATION_COMMANDS: Dict[str, Callable[..., Outcome]] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "dims": cmd_dims,
    "zigzag": cmd_zigzag,
    "ddbar-check": cmd_ddbar_check,
    "sd-check": cmd_sd_check,
    "split": cmd_split,
    "s-strong": cmd_s_strong,
    "strong": cmd_strong,
    "promote": cmd_promote,
    "relations-check": cmd_relations_check,
    "relations-model": cmd_relations_model,
}

SPEC_COMMANDS: Dict[str, Tuple[Type[BaseModel], Callable[..., Outcome]]] = {
    "central-model": (HodgeInput, cmd_central_model),
    "lefschetz-extend": (ExtensionSpec, cmd_lefschetz_extend),
    "complete": (CompletionSpec, cmd_complete),
}


def exit_code_for(verdict: Optional[bool]) -> int:
    return 1 if verdict is False else 0


def run(command: str, ref: str, **options: Any) -> Report:
    """
    Runs one command on one input and wraps the outcome in a report.

    Args:
        command: A presentation command or a specification command.
        ref: A file path or ``corpus:NAME``.
        **options: Command options such as ``n``, ``s`` or ``up_to``.

    Returns:
        The report envelope. Errors propagate to the caller.
    """
    if command in SPEC_COMMANDS:
        model, fn = SPEC_COMMANDS[command]
        spec, source = load_spec(ref, model)
        verdict, result = fn(spec, **options)
    elif command in PRESENTATION_COMMANDS:
        presentation, source = load_presentation(ref)
        algebra = validate(presentation)
        logger.info("Validated %s presentation %s", presentation.kind, presentation.name)
        verdict, result = PRESENTATION_COMMANDS[command](algebra, **options)
    else:
        raise InputError(f"unknown command {command!r}")
    logger.info("%s on %s: verdict %s", command, ref, verdict)
    return Report(version=__version__, command=command, input=source.name, sha256=source.sha256,
                  verdict=verdict, exit_code=exit_code_for(verdict), result=result.model_dump(mode="json"))


def corpus_listing() -> Report:
    entries = [CorpusListing(name=e.name, kind=e.kind, command=e.command, description=e.description).model_dump()
               for e in corpus.CORPUS.values()]
    return Report(version=__version__, command="corpus list", verdict=None, exit_code=0,
                  result={"entries": entries})


def run_corpus(name: str) -> Report:
    e = corpus.entry(name)
    return run(e.command, CORPUS_PREFIX + name, **e.args)
