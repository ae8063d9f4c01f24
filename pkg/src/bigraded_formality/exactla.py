"""
Exact linear algebra over the Gaussian rationals.

Scalars are ``QQ_I`` elements and row reduction is delegated to sympy's
``DomainMatrix``. Vectors are plain tuples of scalars; linear maps follow the
row convention (row ``i`` is the image of basis vector ``i``), so kernels are
left kernels and images are row spans.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.domains.gaussiandomains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .errors import AmbientMismatch, DimensionMismatch

# Configure logging
logger = logging.getLogger(__name__)

Scalar = type(QQ_I.one)
Vector = Tuple[Scalar, ...]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)

# Below this many columns matrices are reduced in dense format.
DENSE_COLUMN_LIMIT = 64


def scalar(re, im=0) -> Scalar:
    """Builds a Gaussian rational from ints, ``QQ`` elements or ``(num, den)`` pairs."""
    if isinstance(re, tuple):
        re = QQ(*re)
    if isinstance(im, tuple):
        im = QQ(*im)
    return QQ_I(re, im)


def is_zero(c: Scalar) -> bool:
    return not c.x and not c.y


def _format_rational(v) -> str:
    num, den = int(QQ.numer(v)), int(QQ.denom(v))
    return str(num) if den == 1 else f"{num}/{den}"


def format_scalar(c: Scalar) -> str:
    """Canonical text form: ``3/2``, ``-i``, ``(1/2+1/3*i)``."""
    re, im = c.x, c.y
    if not im:
        return _format_rational(re)
    if im == QQ(1):
        imag = "i"
    elif im == QQ(-1):
        imag = "-i"
    else:
        imag = f"{_format_rational(im)}*i"
    if not re:
        return imag
    sign = "" if imag.startswith("-") else "+"
    return f"({_format_rational(re)}{sign}{imag})"


# -- vectors ---------------------------------------------------------------

def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def is_zero_vector(v: Sequence[Scalar]) -> bool:
    return all(is_zero(c) for c in v)


def add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot add vectors of length {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot subtract vectors of length {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Scalar, v: Sequence[Scalar]) -> Vector:
    return tuple(c * a for a in v)


def linear_combination(coeffs: Sequence[Scalar], rows: Sequence[Sequence[Scalar]], n: int) -> Vector:
    out = list(zero_vector(n))
    for c, row in zip(coeffs, rows):
        if is_zero(c):
            continue
        for j, a in enumerate(row):
            if not is_zero(a):
                out[j] += c * a
    return tuple(out)


def vector_times(v: Sequence[Scalar], rows: Sequence[Sequence[Scalar]], n: int) -> Vector:
    """Row vector times matrix, the matrix given by its rows."""
    if len(v) != len(rows):
        raise DimensionMismatch(f"vector of length {len(v)} against {len(rows)} rows")
    return linear_combination(v, rows, n)


# -- matrices --------------------------------------------------------------

@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if is_zero(v):
                raise ValueError(f"explicit zero stored at ({r}, {c})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int) -> "SparseMatrix":
        entries: Dict[Tuple[int, int], Scalar] = {}
        for r, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch(f"row {r} has length {len(row)}, expected {cols}")
            for c, v in enumerate(row):
                if not is_zero(v):
                    entries[(r, c)] = v
        return cls(len(rows), cols, entries)

    def row_vectors(self) -> List[Vector]:
        out = [list(zero_vector(self.cols)) for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return [tuple(row) for row in out]

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def to_domain(self) -> DomainMatrix:
        if self.cols < DENSE_COLUMN_LIMIT:
            return DomainMatrix([list(row) for row in self.row_vectors()], (self.rows, self.cols), QQ_I)
        dod: Dict[int, Dict[int, Scalar]] = {}
        for (r, c), v in self.entries.items():
            dod.setdefault(r, {})[c] = v
        return DomainMatrix(dod, (self.rows, self.cols), QQ_I)


def rref_rows(rows: Sequence[Sequence[Scalar]], cols: int) -> Tuple[List[Vector], List[int]]:
    """
    Row-reduces the matrix with the given rows.

    Returns:
        The nonzero rows of the reduced row-echelon form and their pivot columns.
    """
    if not rows or cols == 0:
        return [], []
    matrix = SparseMatrix.from_rows(rows, cols)
    if not matrix.entries:
        return [], []
    reduced, pivots = matrix.to_domain().rref()
    dense = reduced.to_dense().to_list()
    return [tuple(dense[i]) for i in range(len(pivots))], list(pivots)


def rref(m: SparseMatrix) -> Tuple[SparseMatrix, List[int]]:
    basis, pivots = rref_rows(m.row_vectors(), m.cols)
    padded = basis + [zero_vector(m.cols)] * (m.rows - len(basis))
    return SparseMatrix.from_rows(padded, m.cols), pivots


def rank(rows: Sequence[Sequence[Scalar]], cols: int) -> int:
    return len(rref_rows(rows, cols)[1])


def nullspace(m: SparseMatrix) -> List[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column, in column order."""
    basis, pivots = rref_rows(m.row_vectors(), m.cols)
    pivot_set = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = list(zero_vector(m.cols))
        x[f] = ONE
        for row, p in zip(basis, pivots):
            x[p] = -row[f]
        out.append(tuple(x))
    return out


def left_kernel(rows: Sequence[Sequence[Scalar]], cols: int) -> List[Vector]:
    """Basis of ``{c : sum c_i rows_i = 0}``."""
    if not rows:
        return []
    return nullspace(SparseMatrix.from_rows(rows, cols).transpose())


def solve(m: SparseMatrix, b: Sequence[Scalar]) -> Optional[Vector]:
    """
    Solves ``m x = b`` with free variables set to zero.

    Returns:
        The solution, or None when the system is inconsistent.
    """
    if len(b) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {m.rows} equations")
    augmented = [tuple(row) + (b[i],) for i, row in enumerate(m.row_vectors())]
    basis, pivots = rref_rows(augmented, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = list(zero_vector(m.cols))
    for row, p in zip(basis, pivots):
        x[p] = row[m.cols]
    return tuple(x)


def combination(rows: Sequence[Sequence[Scalar]], target: Sequence[Scalar]) -> Optional[Vector]:
    """Coefficients ``c`` with ``sum c_i rows_i = target``, or None."""
    n = len(target)
    if not rows:
        return () if is_zero_vector(target) else None
    return solve(SparseMatrix.from_rows(rows, n).transpose(), target)


# -- subspaces -------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace stored by its unique RREF basis."""

    ambient_dim: int
    basis: Tuple[Vector, ...] = ()
    pivots: Tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        basis, pivots = rref_rows(vectors, ambient_dim)
        return cls(ambient_dim, tuple(basis), tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(
            ambient_dim,
            tuple(unit_vector(ambient_dim, i) for i in range(ambient_dim)),
            tuple(range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch(f"subspaces of dimensions {self.ambient_dim} and {other.ambient_dim}")

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Remainder of ``v`` after clearing the pivot columns; linear in ``v``."""
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        out = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if is_zero(c):
                continue
            for j in range(p, self.ambient_dim):
                if not is_zero(row[j]):
                    out[j] -= c * row[j]
        return tuple(out)

    def contains_vector(self, v: Sequence[Scalar]) -> bool:
        return is_zero_vector(self.reduce(v))

    def coordinates(self, v: Sequence[Scalar]) -> Optional[Vector]:
        """Coefficients of ``v`` against the RREF basis, None if ``v`` is outside."""
        if not self.contains_vector(v):
            return None
        return tuple(v[p] for p in self.pivots)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for v in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not other.basis:
            return self
        if not self.basis:
            return other
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        n = self.ambient_dim
        if not self.basis or not other.basis:
            return Subspace.zero(n)
        if self.dim == n:
            return other
        if other.dim == n:
            return self
        stacked = [v + v for v in self.basis] + [w + zero_vector(n) for w in other.basis]
        basis, pivots = rref_rows(stacked, 2 * n)
        common = [row[n:] for row, p in zip(basis, pivots) if p >= n]
        return Subspace.span(common, n)

    def quotient_basis(self, other: "Subspace") -> List[Vector]:
        """
        Coset representatives for ``self / (self ∩ other)``: the RREF basis
        rows of ``self`` taken greedily, so for the full space these are the
        lexicographically least standard basis vectors outside ``other``.
        """
        self._check(other)
        chosen: List[Vector] = []
        current = other
        for row in self.basis:
            if current.contains_vector(row):
                continue
            chosen.append(row)
            current = current.sum(Subspace.span([row], self.ambient_dim))
        return chosen


def image(rows: Sequence[Sequence[Scalar]], target_dim: int) -> Subspace:
    return Subspace.span(rows, target_dim)


def kernel(rows: Sequence[Sequence[Scalar]], target_dim: int) -> Subspace:
    """Kernel, inside the source, of the map whose row ``i`` is the image of ``e_i``."""
    return Subspace.span(left_kernel(rows, target_dim), len(rows))


def preimage(rows: Sequence[Sequence[Scalar]], target: Subspace) -> Subspace:
    """``{x : x M in target}`` for the map ``M`` given by its rows."""
    return kernel([target.reduce(row) for row in rows], target.ambient_dim)


def map_subspace(space: Subspace, rows: Sequence[Sequence[Scalar]], target_dim: int) -> Subspace:
    """Image of a subspace of the source under the map given by its rows."""
    return Subspace.span([vector_times(v, rows, target_dim) for v in space.basis], target_dim)
