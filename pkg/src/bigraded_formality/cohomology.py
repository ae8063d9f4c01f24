"""
Bott-Chern, Aeppli, Dolbeault, anti-Dolbeault and de Rham cohomology,
the Bott-Chern/Aeppli duality pairing and the n-SD check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Tuple, Union

from .bigraded import AlgebraElement, Bidegree, BigradedAlgebra, SHIFTS, bidegrees_of_total
from .errors import InsufficientTruncation, PreconditionFailed
from .exactla import (
    Subspace,
    Vector,
    combination,
    format_scalar,
    image,
    kernel,
    left_kernel,
    rank,
)
from .parallel import parallel_map

# Configure logging
logger = logging.getLogger(__name__)

Kind = Literal["BC", "A", "Dolbeault", "antiDolbeault", "deRham"]
KINDS: Tuple[str, ...] = ("BC", "A", "Dolbeault", "antiDolbeault", "deRham")

# Degrees above the class degree that the closedness test needs.
HEADROOM = {"BC": 1, "A": 2, "Dolbeault": 1, "antiDolbeault": 1, "deRham": 1}


@dataclass(frozen=True)
class CohomologySpace:
    kind: str
    degree: Union[Bidegree, int]
    representatives: Tuple[AlgebraElement, ...]
    closed: Subspace
    exact: Subspace

    @property
    def dim(self) -> int:
        return len(self.representatives)


# -- subspaces of one bidegree -------------------------------------------------

def kernel_of(algebra: BigradedAlgebra, which: str, bd: Bidegree) -> Subspace:
    def build() -> Subspace:
        dp, dq = SHIFTS[which]
        target = bd.shifted(dp, dq)
        return kernel(algebra.diff_rows(which, bd), algebra.dim(target))

    return algebra.memo(("ker", which, bd), build)


def image_in(algebra: BigradedAlgebra, which: str, bd: Bidegree) -> Subspace:
    """Image of ``which`` landing in bidegree ``bd``."""

    def build() -> Subspace:
        dp, dq = SHIFTS[which]
        source = bd.shifted(-dp, -dq)
        if source.p < 0 or source.q < 0:
            return Subspace.zero(algebra.dim(bd))
        return image(algebra.diff_rows(which, source), algebra.dim(bd))

    return algebra.memo(("im", which, bd), build)


def bc_closed(algebra: BigradedAlgebra, bd: Bidegree) -> Subspace:
    return algebra.memo(("bc_closed", bd),
                        lambda: kernel_of(algebra, "del", bd).intersect(kernel_of(algebra, "delbar", bd)))


def aeppli_exact(algebra: BigradedAlgebra, bd: Bidegree) -> Subspace:
    return algebra.memo(("a_exact", bd),
                        lambda: image_in(algebra, "del", bd).sum(image_in(algebra, "delbar", bd)))


def require_headroom(algebra: BigradedAlgebra, kind: str, total: int) -> None:
    if algebra.kind != "free":
        return
    if total + HEADROOM[kind] > algebra.max_total:
        raise InsufficientTruncation(
            f"{kind} cohomology in degree {total} needs truncation at least {total + HEADROOM[kind]}, "
            f"{algebra.name} is truncated at {algebra.max_total}"
        )


def computable(algebra: BigradedAlgebra, kind: str, total: int) -> bool:
    return algebra.kind != "free" or total + HEADROOM[kind] <= algebra.max_total


# -- de Rham complex -----------------------------------------------------------

def total_basis(algebra: BigradedAlgebra, k: int) -> List[Tuple[Bidegree, object]]:
    if k < 0:
        return []
    return [(bd, key) for bd in bidegrees_of_total(k) for key in algebra.basis(bd)]


def total_vector(algebra: BigradedAlgebra, u: AlgebraElement, k: int) -> Vector:
    out: List = []
    for bd in bidegrees_of_total(k):
        out.extend(algebra.vector(u, bd))
    return tuple(out)


def total_element(algebra: BigradedAlgebra, k: int, v: Vector) -> AlgebraElement:
    return AlgebraElement(algebra, {key: c for (_, key), c in zip(total_basis(algebra, k), v)})


def total_d_rows(algebra: BigradedAlgebra, k: int) -> List[Vector]:
    return [total_vector(algebra, algebra.apply_diff(algebra.basis_element(key), "d"), k + 1)
            for _, key in total_basis(algebra, k)]


# -- cohomology --------------------------------------------------------------

def _quotient(algebra, kind, degree, closed: Subspace, exact: Subspace, to_element) -> CohomologySpace:
    reps = tuple(to_element(v) for v in closed.quotient_basis(exact))
    return CohomologySpace(kind, degree, reps, closed, exact)


def cohomology(algebra: BigradedAlgebra, kind: str, degree: Union[Bidegree, Tuple[int, int], int]) -> CohomologySpace:
    """
    Computes one cohomology space with RREF-least representatives.

    Args:
        algebra: A validated algebra.
        kind: One of BC, A, Dolbeault, antiDolbeault, deRham.
        degree: A bidegree, or a total degree for deRham.

    Returns:
        The CohomologySpace.

    Raises:
        InsufficientTruncation: If a free algebra is truncated too low.
    """
    if kind not in KINDS:
        raise ValueError(f"Unknown cohomology kind: {kind}")

    def build() -> CohomologySpace:
        if kind == "deRham":
            k = int(degree)  # type: ignore[arg-type]
            require_headroom(algebra, kind, k)
            n = len(total_basis(algebra, k))
            closed = kernel(total_d_rows(algebra, k), len(total_basis(algebra, k + 1))) if n else Subspace.zero(0)
            exact = image(total_d_rows(algebra, k - 1), n) if k >= 1 else Subspace.zero(n)
            return _quotient(algebra, kind, k, closed, exact, lambda v: total_element(algebra, k, v))

        bd = Bidegree(*degree)  # type: ignore[misc]
        require_headroom(algebra, kind, bd.total)
        if bd.p < 0 or bd.q < 0:
            empty = Subspace.zero(0)
            return CohomologySpace(kind, bd, (), empty, empty)
        if kind == "BC":
            closed, exact = bc_closed(algebra, bd), image_in(algebra, "deldelbar", bd)
        elif kind == "A":
            closed, exact = kernel_of(algebra, "deldelbar", bd), aeppli_exact(algebra, bd)
        elif kind == "Dolbeault":
            closed, exact = kernel_of(algebra, "delbar", bd), image_in(algebra, "delbar", bd)
        else:
            closed, exact = kernel_of(algebra, "del", bd), image_in(algebra, "del", bd)
        return _quotient(algebra, kind, bd, closed, exact, lambda v: algebra.element(bd, v))

    key = degree if kind == "deRham" else Bidegree(*degree)  # type: ignore[misc]
    return algebra.memo(("cohomology", kind, key), build)


def class_coordinates(space: CohomologySpace, u: AlgebraElement) -> Optional[Vector]:
    """Coordinates of the class of ``u`` against the representatives, None if ``u`` is not closed."""
    algebra = u.owner
    if space.kind == "deRham":
        v = total_vector(algebra, u, int(space.degree))  # type: ignore[arg-type]
    else:
        v = algebra.vector(u, space.degree)  # type: ignore[arg-type]
    if not space.closed.contains_vector(v):
        return None
    rows = [_vec(space, r) for r in space.representatives] + list(space.exact.basis)
    coeffs = combination(rows, v)
    if coeffs is None:
        return None
    return tuple(coeffs[: space.dim])


def _vec(space: CohomologySpace, r: AlgebraElement) -> Vector:
    if space.kind == "deRham":
        return total_vector(r.owner, r, int(space.degree))  # type: ignore[arg-type]
    return r.owner.vector(r, space.degree)  # type: ignore[arg-type]


def dims_table(algebra: BigradedAlgebra) -> Dict[str, Dict[str, int]]:
    """Dimensions of every cohomology kind over the computable range."""
    table: Dict[str, Dict[str, int]] = {k: {} for k in KINDS}
    bidegrees = algebra.bidegrees()

    def one(item):
        kind, bd = item
        return kind, str(bd), cohomology(algebra, kind, bd).dim

    work = [(kind, bd) for kind in KINDS[:4] for bd in bidegrees if computable(algebra, kind, bd.total)]
    for kind, label, dim in parallel_map(one, work, desc="cohomology"):
        table[kind][label] = dim
    for k in range(algebra.max_total + 1):
        if computable(algebra, "deRham", k):
            table["deRham"][str(k)] = cohomology(algebra, "deRham", k).dim
    return table


def euler_check(algebra: BigradedAlgebra) -> bool:
    """Alternating sums of de Rham and bidegree dimensions agree (finite kind)."""
    if algebra.kind != "finite":
        raise PreconditionFailed("the Euler characteristic check needs a finite bicomplex")
    chain = sum((-1) ** bd.total * algebra.dim(bd) for bd in algebra.bidegrees())
    homology = sum((-1) ** k * cohomology(algebra, "deRham", k).dim for k in range(algebra.max_total + 1))
    return chain == homology


# -- duality pairing ---------------------------------------------------------

@dataclass
class PairingBlock:
    bidegree: Bidegree
    matrix: List[List[str]]
    rows: int
    cols: int
    rank: int

    @property
    def perfect(self) -> bool:
        return self.rows == self.cols == self.rank


@dataclass
class PairingReport:
    n: int
    holds: bool
    omega: Optional[AlgebraElement] = None
    blocks: List[PairingBlock] = field(default_factory=list)
    failure: Optional[str] = None
    failing_bidegree: Optional[Bidegree] = None
    witness: Optional[AlgebraElement] = None


def omega_coordinate(algebra: BigradedAlgebra, n: int, u: AlgebraElement):
    """Coefficient of ω in the Aeppli class of ``u`` at (n,n)."""
    space = cohomology(algebra, "A", (n, n))
    coords = class_coordinates(space, u)
    if coords is None:
        raise PreconditionFailed(f"{u} is not ∂∂̄-closed at ({n},{n})")
    return coords[0]


def pairing_matrix(algebra: BigradedAlgebra, n: int, bd: Bidegree):
    bc = cohomology(algebra, "BC", bd).representatives
    aeppli = cohomology(algebra, "A", (n - bd.p, n - bd.q)).representatives
    return bc, aeppli, [[omega_coordinate(algebra, n, b * a) for a in aeppli] for b in bc]


def _vanishing_range(algebra: BigradedAlgebra, n: int) -> List[Bidegree]:
    if algebra.kind == "finite":
        return [bd for bd in algebra.occupied() if bd.p > n or bd.q > n]
    return [bd for bd in algebra.bidegrees() if bd.p > n or bd.q > n]


def pairing_check(algebra: BigradedAlgebra, n: int) -> PairingReport:
    """
    Checks the n-SD conditions: vanishing outside [0,n]², H_A^{n,n} one
    dimensional and perfect pairings H_BC^{p,q} × H_A^{n-p,n-q} → H_A^{n,n}.

    Failures are reported, not raised; the report carries the first failing
    bidegree and a class witnessing it.
    """
    if algebra.kind == "free" and 2 * n > algebra.max_total - 2:
        raise InsufficientTruncation(f"pairing check for n={n} needs truncation at least {2 * n + 2}")
    report = PairingReport(n=n, holds=False)

    for bd in _vanishing_range(algebra, n):
        for kind in ("BC", "A"):
            if not computable(algebra, kind, bd.total):
                continue
            space = cohomology(algebra, kind, bd)
            if space.dim:
                report.failure = f"H_{kind}{bd} is nonzero outside the [0,{n}] square"
                report.failing_bidegree = bd
                report.witness = space.representatives[0]
                return report

    top = cohomology(algebra, "A", (n, n))
    if top.dim != 1:
        report.failure = f"H_A({n},{n}) has dimension {top.dim}, expected 1"
        report.failing_bidegree = Bidegree(n, n)
        report.witness = top.representatives[1] if top.dim > 1 else None
        return report
    report.omega = top.representatives[0]

    if not algebra.has_product:
        raise PreconditionFailed(f"{algebra.name} has no multiplication, the pairing is undefined")

    for p in range(n + 1):
        for q in range(n + 1):
            bd = Bidegree(p, q)
            bc, aeppli, matrix = pairing_matrix(algebra, n, bd)
            r = rank(matrix, len(aeppli)) if matrix and aeppli else 0
            block = PairingBlock(bd, [[format_scalar(c) for c in row] for row in matrix], len(bc), len(aeppli), r)
            report.blocks.append(block)
            if block.perfect:
                continue
            report.failure = f"pairing at {bd} is {len(bc)}x{len(aeppli)} of rank {r}"
            report.failing_bidegree = bd
            report.witness = _unpaired(algebra, bc, aeppli, matrix)
            return report

    report.holds = True
    logger.info("%s satisfies %d-SD", algebra.name, n)
    return report


def _combine(algebra, coeffs, elements) -> AlgebraElement:
    out = algebra.zero()
    for c, u in zip(coeffs, elements):
        out = out + u * c
    return out


def _unpaired(algebra, bc, aeppli, matrix) -> Optional[AlgebraElement]:
    if not aeppli:
        return bc[0] if bc else None
    if not bc:
        return aeppli[0]
    null = left_kernel(matrix, len(aeppli))
    if null:
        return _combine(algebra, null[0], bc)
    transposed = [tuple(col) for col in zip(*matrix)]
    return _combine(algebra, left_kernel(transposed, len(bc))[0], aeppli)
