from pathlib import Path

import pytest

from bigraded_formality import corpus
from bigraded_formality.errors import DuplicateName, PresentationSyntaxError, UnknownReference
from bigraded_formality.exactla import ONE, scalar
from bigraded_formality.presentation import canonical_poly, parse, parse_poly, parse_text, serialize

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def test_parse_dot_declaration():
    presentation = parse_text("name dot\nbasis a bidegree (0,0)\n")
    assert presentation.kind == "finite"
    assert presentation.names == ["a"]
    assert presentation.truncation is None


def test_parse_cp1_model_file():
    presentation = parse(FIXTURE_DIR / "cp1_model.pres")
    assert presentation.kind == "free"
    assert presentation.name == "cp1-model"
    assert presentation.names == ["x", "r", "rp", "rq"]
    assert presentation.sd_target == 1
    assert presentation == corpus.presentation("cp1-model")


def test_unknown_reference_is_rejected():
    with pytest.raises(UnknownReference):
        parse_text("generator r bidegree (1,1)\ndel r = rp\n")


def test_duplicate_declaration_is_rejected():
    with pytest.raises(DuplicateName):
        parse_text("basis a bidegree (0,0)\nbasis a bidegree (1,0)\n")


def test_syntax_error_carries_line():
    with pytest.raises(PresentationSyntaxError) as excinfo:
        parse_text("basis a bidegree (0,0)\nbasis b at (1,0)\n")
    assert excinfo.value.line == 2


def test_missing_file_raises_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse(tmp_path / "missing.pres")


def test_parse_poly_collects_terms_and_scalars():
    terms = parse_poly("3/2 * x*y - 1/2*i * x*y + x", ["x", "y"])
    assert terms == [(ONE, ("x",)), (scalar((3, 2), (-1, 2)), ("x", "y"))]


def test_canonical_poly_is_stable():
    text = canonical_poly("x*x - 2*x*x", ["x"])
    assert text == "-1 * x*x"
    assert canonical_poly(text, ["x"]) == text


@pytest.mark.parametrize("name", [e.name for e in corpus.CORPUS.values() if e.text is not None])
def test_corpus_presentations_survive_serialization(name):
    presentation = corpus.presentation(name)
    assert parse_text(serialize(presentation), default_name=name) == presentation
