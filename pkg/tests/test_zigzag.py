import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.cohomology import cohomology
from bigraded_formality.ddbar import ddbar_check_global
from bigraded_formality.errors import PreconditionFailed
from bigraded_formality.validation import validate
from bigraded_formality.zigzag import random_bicomplex, zigzag_decompose, zigzag_predicted_dims


def _decompose(name):
    return zigzag_decompose(validate(corpus.presentation(name)))


def test_single_shapes():
    dot = _decompose("dot")
    assert [s.kind for s in dot.shapes] == ["dot"]

    square = _decompose("square")
    assert [s.kind for s in square.shapes] == ["square"]
    assert square.shapes[0].anchor == Bidegree(0, 0)
    assert square.dots_and_squares_only

    zigzag = _decompose("zigzag2")
    assert [s.kind for s in zigzag.shapes] == ["zigzag"]
    shape = zigzag.shapes[0]
    assert shape.length == 3
    assert shape.sources == (Bidegree(0, 0),)
    assert set(shape.targets) == {Bidegree(0, 1), Bidegree(1, 0)}
    assert not zigzag.dots_and_squares_only


def test_shapes_fill_the_bicomplex():
    bicomplex = validate(corpus.presentation("zigzag2"))
    decomposition = zigzag_decompose(bicomplex)
    assert decomposition.dims() == {bd: bicomplex.dim(bd) for bd in bicomplex.occupied()}


def test_free_algebras_are_rejected():
    with pytest.raises(PreconditionFailed):
        zigzag_decompose(validate(corpus.presentation("cp1-model")))


@pytest.mark.parametrize("seed", range(20))
def test_random_bicomplexes_against_direct_computation(seed):
    bicomplex = random_bicomplex(seed)
    decomposition = zigzag_decompose(bicomplex)

    assert decomposition.dims() == {bd: bicomplex.dim(bd) for bd in bicomplex.occupied()}
    predicted = zigzag_predicted_dims(decomposition)
    for bd in bicomplex.occupied():
        bc, aeppli = predicted.get(bd, (0, 0))
        assert cohomology(bicomplex, "BC", bd).dim == bc, f"seed {seed}: BC{bd}"
        assert cohomology(bicomplex, "A", bd).dim == aeppli, f"seed {seed}: A{bd}"
    assert ddbar_check_global(bicomplex).holds == decomposition.dots_and_squares_only


def test_lemma_matches_decomposition_on_many_bicomplexes():
    for seed in range(200):
        bicomplex = random_bicomplex(seed)
        decomposition = zigzag_decompose(bicomplex)
        assert ddbar_check_global(bicomplex).holds == decomposition.dots_and_squares_only, f"seed {seed}"
