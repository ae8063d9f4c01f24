from unittest.mock import patch

import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.config import Settings
from bigraded_formality.errors import (
    GradingViolation,
    NonNilpotentOrder,
    NonSquareZero,
    ProductViolation,
    TruncationOverflow,
)
from bigraded_formality.exactla import ONE
from bigraded_formality.presentation import parse_text
from bigraded_formality.validation import default_truncation, is_minimal, validate


@pytest.mark.parametrize("name", [e.name for e in corpus.CORPUS.values() if e.text is not None])
def test_corpus_presentations_validate(name):
    try:
        algebra = validate(corpus.presentation(name))
    except Exception as e:
        pytest.fail(f"Corpus entry {name} failed validation: {e}")
    assert algebra.name == name


def test_anticommutation_failure_is_reported():
    text = """
basis a bidegree (0,0)
basis b bidegree (1,0)
basis c bidegree (0,1)
basis e bidegree (1,1)
del a = b
delbar a = c
del c = e
"""
    with pytest.raises(NonSquareZero):
        validate(parse_text(text))


def test_misgraded_differential_is_reported():
    text = "generator x bidegree (1,1)\ngenerator y bidegree (1,1)\ndel x = y\n"
    with pytest.raises(GradingViolation):
        validate(parse_text(text))


def test_differential_must_use_earlier_generators():
    text = "generator x bidegree (1,0)\ngenerator z bidegree (1,0)\ndel x = x*z\n"
    with pytest.raises(NonNilpotentOrder):
        validate(parse_text(text))


def test_odd_square_in_product_table_is_rejected():
    text = """
basis one bidegree (0,0)
basis a bidegree (1,0)
basis t bidegree (2,0)
mul a a = t
"""
    with pytest.raises(ProductViolation):
        validate(parse_text(text))


def test_default_truncation_sources():
    assert default_truncation(parse_text("truncation 5\ngenerator x bidegree (1,1)\n")) == 5
    assert default_truncation(parse_text("sd-target 2\ngenerator x bidegree (1,1)\n")) == 6
    with patch("bigraded_formality.validation.get_settings", return_value=Settings(default_truncation=7)):
        assert default_truncation(parse_text("generator x bidegree (1,1)\n")) == 7


def test_free_algebra_signs_and_truncation():
    algebra = validate(corpus.presentation("iwasawa-style"))
    f1 = algebra.generator_element(algebra.generator_index("f1"))
    f2 = algebra.generator_element(algebra.generator_index("f2"))
    assert f1 * f2 == -(f2 * f1)
    assert not (f1 * f1)
    assert algebra.dim(Bidegree(2, 0)) == 3
    x = validate(corpus.presentation("cp1-model"))
    gen = x.generator_element(x.generator_index("x"))
    with pytest.raises(TruncationOverflow):
        gen * gen * gen


def test_leibniz_rule_in_free_algebra():
    algebra = validate(corpus.presentation("cp1-model"))
    x = algebra.generator_element(algebra.generator_index("x"))
    r = algebra.generator_element(algebra.generator_index("r"))
    rp = algebra.generator_element(algebra.generator_index("rp"))
    assert algebra.apply_diff(x * r, "del") == x * rp
    assert algebra.apply_diff(r, "deldelbar") == x * x
    assert algebra.apply_diff(r, "deldelbar").terms == {((0, 2),): ONE}


def test_minimality_flag():
    assert is_minimal(validate(corpus.presentation("cp1-model")))
    text = "generator x bidegree (1,1)\ngenerator y bidegree (2,2)\ngenerator u bidegree (1,1)\n" \
           "generator up bidegree (2,1)\ngenerator uq bidegree (1,2)\n" \
           "del u = up\ndelbar u = uq\ndelbar up = -y\ndel uq = y\n"
    assert not is_minimal(validate(parse_text(text)))
