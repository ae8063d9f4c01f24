import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.ddbar import (
    BY_DUALITY,
    FAILS,
    HOLDS,
    VANISHING,
    bc_to_a_iso_table,
    ddbar_check_global,
    ddbar_check_up_to,
    ddbar_primitive,
    sd_promotion_check,
)
from bigraded_formality.errors import InsufficientTruncation, PreconditionFailed
from bigraded_formality.validation import validate


def _load(name):
    return validate(corpus.presentation(name))


@pytest.mark.parametrize("name", ["dot", "square", "cp1-ring", "cp2-ring", "k3-shape-reduced"])
def test_lemma_holds(name):
    verdict = ddbar_check_global(_load(name))
    assert verdict.holds
    assert verdict.witness is None
    assert FAILS not in verdict.table.values()


def test_zigzag_violates_the_lemma():
    # d a = b + c is closed in both components, neither is ∂∂̄-exact
    verdict = ddbar_check_global(_load("zigzag2"))
    assert not verdict.holds
    assert verdict.bidegree == Bidegree(0, 1)
    assert str(verdict.witness) == "1 * c"
    assert verdict.table["(1,0)"] == FAILS


def test_iwasawa_style_fails_up_to_degree_two():
    algebra = _load("iwasawa-style")
    verdict = ddbar_check_up_to(algebra, 2)
    assert not verdict.holds
    assert verdict.scope == "up_to(2)"
    assert verdict.bidegree == Bidegree(0, 2)
    assert verdict.table["(2,0)"] == FAILS
    assert verdict.table["(1,1)"] == HOLDS


def test_up_to_needs_truncation():
    with pytest.raises(InsufficientTruncation):
        ddbar_check_up_to(_load("cp1-model"), 3)


def test_model_with_sd_target_marks_vanishing_range():
    verdict = ddbar_check_global(_load("cp1-model"))
    assert verdict.holds
    assert verdict.table["(2,2)"] == VANISHING


def test_primitive_of_a_square():
    algebra = _load("cp1-model")
    x = algebra.generator_element(algebra.generator_index("x"))
    r = algebra.generator_element(algebra.generator_index("r"))
    phi = ddbar_primitive(algebra, x * x, Bidegree(2, 2))
    assert phi is not None
    assert algebra.apply_diff(phi, "deldelbar") == x * x
    assert ddbar_primitive(algebra, x, Bidegree(1, 1)) is None
    assert r.bidegree == Bidegree(1, 1)


def test_bc_to_a_table():
    assert all(bc_to_a_iso_table(_load("cp1-ring")).values())
    table = bc_to_a_iso_table(_load("zigzag2"))
    assert table[Bidegree(0, 0)] is False
    assert table[Bidegree(0, 1)] is False


def test_lemma_promoted_by_duality():
    verdict = sd_promotion_check(_load("cp1-ring"), 1)
    assert verdict.holds
    assert verdict.table["(1,1)"] == BY_DUALITY
    with pytest.raises(PreconditionFailed):
        sd_promotion_check(_load("cp1-ring"), 2)
