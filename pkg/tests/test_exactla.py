import pytest

from bigraded_formality.errors import AmbientMismatch
from bigraded_formality.exactla import (
    I_UNIT,
    ONE,
    ZERO,
    SparseMatrix,
    Subspace,
    combination,
    format_scalar,
    left_kernel,
    rank,
    scalar,
    unit_vector,
)


def test_rank_counts_independent_rows():
    rows = [(ONE, scalar(2), ZERO), (scalar(2), scalar(4), ZERO), (ZERO, ZERO, I_UNIT)]
    assert rank(rows, 3) == 2


def test_left_kernel_annihilates_rows():
    rows = [(ONE, ONE), (scalar(2), scalar(2)), (ZERO, ONE)]
    kernel = left_kernel(rows, 2)
    assert len(kernel) == 1
    c = kernel[0]
    for j in range(2):
        assert sum((c[i] * rows[i][j] for i in range(3)), ZERO) == ZERO


def test_combination_solves_or_reports_none():
    rows = [(ONE, ZERO), (ONE, ONE)]
    assert combination(rows, (scalar(3), scalar(2))) == (ONE, scalar(2))
    assert combination([(ONE, ZERO)], (ZERO, ONE)) is None
    assert combination([], (ZERO, ZERO)) == ()


def test_subspace_operations_are_exact():
    plane = Subspace.span([(ONE, ZERO, ZERO), (ZERO, ONE, ZERO)], 3)
    line = Subspace.span([(ONE, ONE, ONE)], 3)
    diagonal = Subspace.span([(ONE, ONE, ZERO)], 3)
    assert plane.sum(line).dim == 3
    assert plane.intersect(line).dim == 0
    assert plane.intersect(diagonal) == diagonal
    assert plane.contains(diagonal)
    assert not diagonal.contains(plane)
    assert plane.coordinates((scalar(2), scalar(5), ZERO)) == (scalar(2), scalar(5))
    assert plane.coordinates((ZERO, ZERO, ONE)) is None


def test_quotient_basis_prefers_least_unit_vectors():
    full = Subspace.full(3)
    taken = Subspace.span([unit_vector(3, 0)], 3)
    assert full.quotient_basis(taken) == [unit_vector(3, 1), unit_vector(3, 2)]


def test_ambient_mismatch_is_an_error():
    with pytest.raises(AmbientMismatch):
        Subspace.zero(2).sum(Subspace.zero(3))


def test_format_scalar_forms():
    assert format_scalar(scalar((3, 2))) == "3/2"
    assert format_scalar(-ONE) == "-1"
    assert format_scalar(I_UNIT) == "i"
    assert format_scalar(-I_UNIT) == "-i"
    assert format_scalar(scalar((1, 2), (1, 3))) == "(1/2+1/3*i)"


def test_sparse_matrix_entries_are_read_only():
    entries = {(0, 0): ONE}
    m = SparseMatrix(1, 2, entries)
    entries[(0, 1)] = scalar(2)
    assert dict(m.entries) == {(0, 0): ONE}
    with pytest.raises(TypeError):
        m.entries[(0, 1)] = ONE
    assert m.transpose().row_vectors() == [(ONE,), (ZERO,)]
