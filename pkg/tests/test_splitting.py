import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.errors import PreconditionFailed, SplittingObstructed
from bigraded_formality.splitting import (
    SplittingCertificate,
    ker_rho_at,
    s_strong_check,
    split_search,
    split_verify,
    strong_check,
)
from bigraded_formality.validation import validate


def _load(name):
    return validate(corpus.presentation(name))


def _gen(algebra, name):
    return algebra.generator_element(algebra.generator_index(name))


def test_iwasawa_style_is_refuted():
    verdict = s_strong_check(_load("iwasawa-style"), 2)
    assert not verdict.holds
    assert verdict.status == "refuted"
    assert verdict.bidegree == Bidegree(0, 2)
    assert verdict.witness is not None


def test_search_reports_the_lemma_witness():
    with pytest.raises(SplittingObstructed) as info:
        split_search(_load("iwasawa-style"), 2)
    assert info.value.bidegree == Bidegree(0, 2)


def test_low_degree_is_trivially_certified():
    verdict = s_strong_check(_load("cp1-model"), 0)
    assert verdict.holds
    assert verdict.status == "certified"
    assert verdict.certificate.closed == {}


def test_cp1_model_is_strongly_formal():
    algebra = _load("cp1-model")
    verdict = strong_check(algebra, 1)
    assert verdict.holds, verdict.message
    assert verdict.scope == "global-to-2"
    certificate = verdict.certificate
    assert certificate.closed[Bidegree(1, 1)] == (_gen(algebra, "x"),)
    assert certificate.nonclosed[Bidegree(1, 1)] == (_gen(algebra, "r"),)
    assert ker_rho_at(algebra, Bidegree(1, 1)).dim == 1


def test_verify_rejects_a_swapped_certificate():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    bad = SplittingCertificate(algebra.name, 2, "s=2", {Bidegree(1, 1): (r,)}, {Bidegree(1, 1): (x,)})
    report = split_verify(algebra, bad)
    assert not report.passed
    assert report.failing_bidegree == Bidegree(1, 1)
    assert any("not closed" in f for f in report.failures)
    assert any("not injective" in f for f in report.failures)


def test_verify_rejects_a_coverage_gap():
    algebra = _load("cp1-model")
    report = split_verify(algebra, SplittingCertificate(algebra.name, 2, "s=2", {}, {}))
    assert not report.passed
    assert "coverage gap" in report.failures[0]


def test_finite_bicomplexes_are_rejected():
    with pytest.raises(PreconditionFailed):
        s_strong_check(_load("cp1-ring"), 0)
