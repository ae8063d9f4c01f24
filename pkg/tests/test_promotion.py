import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree, bidegrees_of_total
from bigraded_formality.builder import HodgeInput, central_model
from bigraded_formality.errors import HypothesesUnmet, InternalContradiction, PreconditionFailed
from bigraded_formality.exactla import ONE, ZERO, is_zero_vector
from bigraded_formality.promotion import (
    EtaNormalForm,
    PromotionContext,
    _label,
    adjust_generator,
    check_normal_form,
    promote,
    rewrite_eta,
)
from bigraded_formality.splitting import ker_rho_at, purify_primitive, split_verify
from bigraded_formality.validation import validate


def _load(name):
    return validate(corpus.presentation(name))


def _gen(algebra, name):
    return algebra.generator_element(algebra.generator_index(name))


def test_promote_cp1_model():
    algebra = _load("cp1-model")
    try:
        result = promote(algebra, 1)
    except Exception as e:
        pytest.fail(f"Promotion of cp1-model failed: {e}")
    assert result.n == 1
    assert result.report.passed
    assert result.certificate.s == 2
    assert result.certificate.scope == "global-to-2"
    assert Bidegree(1, 1) in result.certificate.nonclosed
    # the certificate stands on its own
    assert split_verify(algebra, result.certificate).passed


def test_promote_cp2_model():
    algebra = _load("cp2-model")
    result = promote(algebra, 2)
    assert result.report.passed
    assert result.certificate.scope == "global-to-4"
    assert result.certificate.nonclosed[Bidegree(2, 2)] == (_gen(algebra, "r"),)
    assert split_verify(algebra, result.certificate).passed


def test_promote_central_models_keep_checked_normal_forms():
    for name in ("central-n3-generic", "central-n3-special"):
        model = central_model(HodgeInput(**corpus.entry(name).payload))
        result = model.promotion
        assert result.report.passed, name
        for form in result.normal_forms:
            assert form.case in {"1.1", "1.2", "1.3", "2.1", "2.2"}
            assert not model.algebra.apply_diff(form.tau, "d")


def test_promote_needs_simple_connectivity():
    with pytest.raises(PreconditionFailed):
        promote(_load("iwasawa-style"), 2)


def test_promote_needs_truncation():
    with pytest.raises(PreconditionFailed):
        promote(_load("cp1-model"), 2)


# -- normal forms --------------------------------------------------------------

def test_rewrite_eta_with_nondecomposable_differentials():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    context = PromotionContext(algebra, 2, [x], [])
    eta = x * r  # ∂∂̄ lands beyond the truncation
    form = rewrite_eta(algebra, eta, r, context)
    assert form.case == "1.1"
    assert form.tau == x
    assert not form.eta0
    check_normal_form(algebra, eta, r, form, context.ideal(Bidegree(2, 2)))


def test_rewrite_eta_needs_a_closed_element():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    with pytest.raises(HypothesesUnmet):
        rewrite_eta(algebra, r, r, PromotionContext(algebra, 1, [x], []))


def test_check_normal_form_rejects_open_tau():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    context = PromotionContext(algebra, 2, [x], [])
    eta = x * r
    form = EtaNormalForm("1.1", eta - r * r, r, algebra.zero(), algebra.zero())
    with pytest.raises(InternalContradiction, match="not closed"):
        check_normal_form(algebra, eta, r, form, context.ideal(Bidegree(2, 2)))


# -- adjustments ---------------------------------------------------------------

def test_adjust_generator_removes_lambda():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    context = PromotionContext(algebra, 1, [x], [r])
    adjustment = adjust_generator(algebra, r + x, context)
    assert adjustment.constrained == 1
    assert adjustment.lambdas == ["1"]
    assert adjustment.psi == x

    again = adjust_generator(algebra, r + x - adjustment.psi, context)
    assert not again.psi
    assert again.lambdas == ["0"]


def test_adjustment_labels():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    bd = Bidegree(1, 1)
    assert _label(algebra, bd, (ONE, ZERO), x) == "x"
    assert _label(algebra, bd, (ONE, ONE), x + r) == str(x + r)


def test_purified_primitives_match_differentials():
    model = central_model(HodgeInput(**corpus.entry("central-n3-generic").payload))
    algebra = model.algebra
    checked = 0
    for k in range(3, 7):
        for bd in bidegrees_of_total(k):
            if not algebra.generators_of(bd):
                continue
            for v in ker_rho_at(algebra, bd).basis:
                y = algebra.from_linear(bd, v)
                b = purify_primitive(algebra, y, bd)
                assert not b or b.bidegree == bd
                assert is_zero_vector(algebra.linear_part(b, bd))
                assert algebra.apply_diff(b, "del") == algebra.apply_diff(y, "del")
                assert algebra.apply_diff(b, "delbar") == algebra.apply_diff(y, "delbar")
                checked += 1
    assert checked
