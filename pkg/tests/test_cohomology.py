import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.cohomology import class_coordinates, cohomology, dims_table, euler_check, pairing_check
from bigraded_formality.errors import InsufficientTruncation, PreconditionFailed
from bigraded_formality.exactla import ONE
from bigraded_formality.validation import validate


def _load(name):
    return validate(corpus.presentation(name))


def test_square_is_acyclic():
    square = _load("square")
    for kind in ("BC", "A", "Dolbeault", "antiDolbeault"):
        for bd in square.occupied():
            assert cohomology(square, kind, bd).dim == 0, f"{kind}{bd}"
    for k in range(3):
        assert cohomology(square, "deRham", k).dim == 0


def test_zigzag_cohomology():
    zigzag = _load("zigzag2")
    assert cohomology(zigzag, "BC", (1, 0)).dim == 1
    assert cohomology(zigzag, "BC", (0, 1)).dim == 1
    assert cohomology(zigzag, "BC", (0, 0)).dim == 0
    assert cohomology(zigzag, "A", (0, 0)).dim == 1
    assert cohomology(zigzag, "A", (1, 0)).dim == 0
    assert cohomology(zigzag, "Dolbeault", (0, 0)).dim == 0
    assert cohomology(zigzag, "Dolbeault", (1, 0)).dim == 1
    assert cohomology(zigzag, "deRham", 0).dim == 0
    assert cohomology(zigzag, "deRham", 1).dim == 1
    assert euler_check(zigzag)


def test_ring_representatives_and_coordinates():
    ring = _load("cp1-ring")
    top = cohomology(ring, "BC", (1, 1))
    assert top.dim == 1
    assert str(top.representatives[0]) == "1 * x"
    x = ring.basis_element(ring.index_of("x"))
    assert class_coordinates(top, x) == (ONE,)
    assert cohomology(ring, "BC", Bidegree(0, 0)).dim == 1
    assert euler_check(ring)


def test_dims_table_keys():
    table = dims_table(_load("cp1-ring"))
    assert set(table) == {"BC", "A", "Dolbeault", "antiDolbeault", "deRham"}
    assert table["BC"]["(1,1)"] == 1
    assert table["BC"]["(1,0)"] == 0
    assert table["deRham"] == {"0": 1, "1": 0, "2": 1}


def test_unknown_kind_is_rejected():
    with pytest.raises(ValueError):
        cohomology(_load("dot"), "Hodge", (0, 0))


def test_free_algebra_needs_headroom():
    model = _load("cp1-model")  # truncation 5
    assert cohomology(model, "BC", (1, 1)).dim == 1
    with pytest.raises(InsufficientTruncation):
        cohomology(model, "A", (2, 2))


@pytest.mark.parametrize("name,n", [("cp1-ring", 1), ("cp2-ring", 2), ("cp1xcp1-ring", 2), ("k3-shape-reduced", 2)])
def test_pairing_holds_on_rings(name, n):
    report = pairing_check(_load(name), n)
    assert report.holds, report.failure
    assert report.omega is not None
    assert all(block.perfect for block in report.blocks)


def test_pairing_reports_wrong_dimension():
    report = pairing_check(_load("cp1-ring"), 2)
    assert not report.holds
    assert report.failing_bidegree == Bidegree(2, 2)


def test_pairing_needs_a_product():
    with pytest.raises(PreconditionFailed):
        pairing_check(_load("dot"), 0)
