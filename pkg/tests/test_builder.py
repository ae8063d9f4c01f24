from unittest.mock import patch

import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.builder import (
    HodgeInput,
    RestrictionInput,
    SpecialBranch,
    Triple,
    central_model,
    central_presentation,
    central_ring,
    complete_model,
    relations_injectivity_check,
    relations_model,
    lefschetz_extend,
)
from bigraded_formality.cohomology import cohomology, pairing_check
from bigraded_formality.config import Settings
from bigraded_formality.errors import (
    CompletionObstructed,
    DimensionMismatch,
    HypothesesUnmet,
    PreconditionFailed,
    RestrictionContractViolated,
    SpecialBranchInconsistent,
    TruncationTooSmall,
    WidthViolated,
)
from bigraded_formality.presentation import PresentationFile, parse_text
from bigraded_formality.validation import validate

POINT = "name point\nbasis one bidegree (0,0)\nmul one one = 1 * one\n"


def _ring(name):
    return validate(corpus.presentation(name))


def test_complete_cp1():
    partial = parse_text("name cp1-partial\ngenerator x bidegree (1,1)\n")
    result = complete_model(partial, _ring("cp1-ring"), 5, {"x": "1 * x"})

    assert result.triples == [Triple("r1", "1 * x*x", Bidegree(1, 1))]
    assert result.closed_added == []
    assert result.matches
    assert result.minimal
    algebra = result.algebra
    x = algebra.generator_element(algebra.generator_index("x"))
    r = algebra.generator_element(algebra.generator_index("r1"))
    assert algebra.apply_diff(r, "deldelbar") == x * x
    assert result.comparison["BC"]["(1,1)"] == [1, 1]


def test_completion_preconditions():
    partial = parse_text("name cp1-partial\ngenerator x bidegree (1,1)\n")
    with pytest.raises(TruncationTooSmall):
        complete_model(partial, _ring("cp1-ring"), 2, {"x": "1 * x"})
    with pytest.raises(PreconditionFailed):
        complete_model(partial, _ring("zigzag2"), 5, {"x": "0"})
    with pytest.raises(PreconditionFailed):
        complete_model(partial, _ring("cp1-ring"), 5, {"x": "1 * one"})
    with pytest.raises(PreconditionFailed):
        complete_model(partial, _ring("cp1-ring"), 5, {})


def test_completion_passes_are_counted():
    partial = parse_text("name cp1-partial\ngenerator x bidegree (1,1)\n")
    result = complete_model(partial, _ring("cp1-ring"), 5, {"x": "1 * x"})
    assert result.passes == 1


def test_completion_stops_at_the_pass_limit():
    empty = PresentationFile(name="cp1-empty", kind="free", truncation=5, sd_target=1)
    with patch("bigraded_formality.builder.get_settings", return_value=Settings(completion_passes=1)):
        with pytest.raises(CompletionObstructed, match="after 1 passes"):
            complete_model(empty, _ring("cp1-ring"), 5, {})


def test_central_model_generic():
    h = HodgeInput(**corpus.entry("central-n3-generic").payload)
    model = central_model(h)
    assert model.verdict.holds
    assert model.presentation.truncation == 8
    assert model.presentation.sd_target == 3
    assert model.certificate.nonclosed_elements() == []
    assert model.promotion.report.passed
    assert model.promotion.certificate.s == 6


def test_central_model_special():
    h = HodgeInput(**corpus.entry("central-n3-special").payload)
    model = central_model(h)
    assert model.ring.name == "central-n3-special-ring"
    nonclosed = model.certificate.nonclosed_elements()
    assert len(nonclosed) == 1
    assert nonclosed[0].bidegree == Bidegree(1, 1)
    assert model.promotion.report.passed
    assert cohomology(model.algebra, "A", Bidegree(3, 3)).dim == 1


def test_central_ring_is_three_sd():
    for name in ("central-n3-generic", "central-n3-special"):
        ring = validate(central_ring(HodgeInput(**corpus.entry(name).payload)))
        assert ring.kind == "finite"
        assert pairing_check(ring, 3).holds, name


def test_central_ring_needs_conjugate_primitives():
    with pytest.raises(DimensionMismatch):
        central_ring(HodgeInput(n=3, primitive={3: {"(3,0)": 1}}))


def test_special_relation_carries_alpha_terms():
    h = HodgeInput(n=7, primitive={6: {"(3,3)": 1}},
                   special=SpecialBranch(m=2, h_mm=2, alpha={1: "1 * p6_33_1"}))
    presentation = central_presentation(h)
    relation = [a.poly for a in presentation.assignments if a.operator == "del" and a.name == "xiq"]
    assert len(relation) == 1
    assert "p6_33_1" in relation[0]
    assert "eta*eta" in relation[0]

    rules = {(r.left, r.right): r.poly for r in central_ring(h).products}
    assert "x3_eta" in rules[("p6_33_1", "eta")]


def test_special_branch_rejects_bad_alpha():
    with pytest.raises(SpecialBranchInconsistent):
        central_presentation(HodgeInput(n=3, special=SpecialBranch(m=1, h_mm=2, a="0")))
    # j runs over 1..m-1
    with pytest.raises(SpecialBranchInconsistent):
        central_presentation(HodgeInput(n=7, primitive={6: {"(3,3)": 1}},
                                        special=SpecialBranch(m=2, h_mm=2, alpha={2: "1 * p6_33_1"})))
    with pytest.raises(SpecialBranchInconsistent):
        central_presentation(HodgeInput(n=7, primitive={5: {"(3,2)": 1, "(2,3)": 1}},
                                        special=SpecialBranch(m=2, h_mm=2, alpha={1: "1 * p5_32_1"})))


def test_central_presentation_rejects_bad_input():
    with pytest.raises(WidthViolated):
        central_presentation(HodgeInput(n=3, primitive={2: {"(1,1)": 1}}))
    with pytest.raises(SpecialBranchInconsistent):
        central_presentation(HodgeInput(n=5, special=SpecialBranch(m=1, h_mm=2)))
    with pytest.raises(SpecialBranchInconsistent):
        central_presentation(HodgeInput(n=3, special=SpecialBranch(m=1, h_mm=1)))


def test_special_branch_declares_the_triple():
    presentation = central_presentation(HodgeInput(n=3, special=SpecialBranch(m=1, h_mm=2)))
    names = presentation.names
    assert {"x", "eta", "xi", "xip", "xiq"} <= set(names)
    algebra = validate(presentation)
    xi = algebra.generators[algebra.generator_index("xi")]
    assert xi.bidegree == Bidegree(1, 1)


def test_relations_check():
    assert relations_injectivity_check(_ring("cp1-ring"), 1).holds
    assert relations_injectivity_check(_ring("clemens-shape"), 3).holds

    report = relations_injectivity_check(_ring("cp1-ring"), 3)
    assert not report.holds
    assert report.failing_degree == 4
    assert report.failing_bidegree == Bidegree(2, 2)
    assert report.witness is not None


def test_restriction_contract_is_enforced():
    data = RestrictionInput(
        model=corpus.presentation("cp1-model"),
        target=validate(parse_text(POINT)),
        restriction={"x": "0", "r": "0", "rp": "0", "rq": "0"},
        n=2,
    )
    with pytest.raises(RestrictionContractViolated) as info:
        lefschetz_extend(data, 6)
    assert "(1,1)" in str(info.value)


def test_extension_needs_truncation():
    data = RestrictionInput(corpus.presentation("cp1-model"), _ring("cp1-ring"), {}, n=2)
    with pytest.raises(TruncationTooSmall):
        lefschetz_extend(data, 5)


def test_relations_model_of_clemens_ring():
    built = relations_model(_ring("clemens-shape"), 3)
    assert built.relations.holds
    assert built.presentation.name == "clemens-shape-model"
    assert len(built.completion.closed_added) == 4
    assert built.completion.triples
    assert min(t.bidegree.total for t in built.completion.triples) == 4
    assert built.verdict.certificate.nonclosed_elements() == []
    assert built.promotion.report.passed


def test_relations_model_needs_injective_products():
    with pytest.raises(HypothesesUnmet):
        relations_model(_ring("cp1-ring"), 3)


def _extension(name):
    spec = corpus.entry(name).payload
    data = RestrictionInput(
        model=corpus.presentation(spec["model"].split(":", 1)[1]),
        target=_ring(spec["target"].split(":", 1)[1]),
        restriction=spec["restriction"],
        n=spec["n"],
    )
    return lefschetz_extend(data, spec["truncation"])


def test_lefschetz_extend_cp2_to_cp1():
    result = _extension("cp2-to-cp1")
    assert result.obstruction is None
    assert result.presentation.name == "cp2-model-to-cp1-ring"
    assert result.verification.passed
    assert result.promotion is not None
    assert result.promotion.report.passed
    # the fixed point leaves no class behind in degree 4
    assert cohomology(result.algebra, "BC", Bidegree(2, 2)).dim == 0
    assert result.passes >= 1
    assert any(note.startswith("degree 1: 0 Bott-Chern classes") for note in result.notes)


def test_lefschetz_extend_reports_obstruction_past_the_certificate():
    result = _extension("cp3-to-k3")
    assert result.verification.passed
    assert result.presentation.name == "cp3-model-to-k3-shape-reduced"
    assert len(result.added_closed) == 3
    assert isinstance(result.obstruction, CompletionObstructed)
    assert result.obstruction.bidegree == Bidegree(0, 4)
    assert result.promotion is None


def test_extension_name_can_be_given():
    data = RestrictionInput(corpus.presentation("cp2-model"), _ring("cp1-ring"),
                            {"x": "1 * x", "r": "0", "rp": "0", "rq": "0"}, n=1, name="line-section")
    assert lefschetz_extend(data, 6).presentation.name == "line-section"
