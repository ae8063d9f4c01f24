"""
Decomposition of finite bicomplexes into dots, squares and zigzags.

Squares are counted by the rank of ∂∂̄. Zigzags live on two adjacent
anti-diagonals; for each layer k the sources of degree k (a complement of
ker ∂ ∩ ker ∂̄) and all elements of degree k+1 form a zigzag quiver

    W_0 <- V_0 -> W_1 <- V_1 -> ... -> W_{k+1}

whose interval multiplicities follow from the ranks of the
limit-to-colimit maps over every sub-interval. Dots are what remains.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains.gaussiandomains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .bigraded import Bidegree
from .cohomology import bc_closed
from .errors import InternalContradiction, PreconditionFailed
from .exactla import Subspace, Vector, is_zero, kernel, rank, scalar, vector_times, zero_vector
from .finite import FiniteBicomplex

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Shape:
    """One indecomposable summand; ``cells`` lists the bidegree of each basis element."""

    kind: str  # dot | square | zigzag
    anchor: Bidegree
    cells: Tuple[Bidegree, ...]
    sources: Tuple[Bidegree, ...] = ()
    targets: Tuple[Bidegree, ...] = ()

    @property
    def length(self) -> int:
        return len(self.cells)


@dataclass
class ZigzagDecomposition:
    shapes: List[Shape] = field(default_factory=list)

    def count(self, kind: str) -> int:
        return sum(1 for s in self.shapes if s.kind == kind)

    @property
    def dots_and_squares_only(self) -> bool:
        return self.count("zigzag") == 0

    def dims(self) -> Dict[Bidegree, int]:
        out: Dict[Bidegree, int] = {}
        for s in self.shapes:
            for bd in s.cells:
                out[bd] = out.get(bd, 0) + 1
        return out


def _square_counts(bicomplex: FiniteBicomplex) -> Dict[Bidegree, int]:
    return {
        bd: rank(bicomplex.diff_rows("deldelbar", bd), bicomplex.dim(bd.shifted(1, 1)))
        for bd in bicomplex.occupied()
    }


class _Layer:
    """The zigzag quiver between total degrees k and k+1."""

    def __init__(self, bicomplex: FiniteBicomplex, k: int):
        self.k = k
        self.size = 2 * k + 3
        self.w_dims = [bicomplex.dim(Bidegree(p, k + 1 - p)) for p in range(k + 2)]
        self.v_maps: List[Tuple[List[Vector], List[Vector]]] = []  # (delbar into W_p, del into W_{p+1})
        for p in range(k + 1):
            bd = Bidegree(p, k - p)
            n = bicomplex.dim(bd)
            sources = Subspace.full(n).quotient_basis(bc_closed(bicomplex, bd))
            delbar_rows = bicomplex.diff_rows("delbar", bd)
            del_rows = bicomplex.diff_rows("del", bd)
            self.v_maps.append((
                [vector_times(v, delbar_rows, self.w_dims[p]) for v in sources],
                [vector_times(v, del_rows, self.w_dims[p + 1]) for v in sources],
            ))

    def bidegree(self, node: int) -> Bidegree:
        p = node // 2
        return Bidegree(p, self.k + 1 - p) if node % 2 == 0 else Bidegree(p, self.k - p)

    def is_source(self, node: int) -> bool:
        return node % 2 == 1

    def rank_invariant(self, a: int, b: int) -> int:
        """Rank of the map from the limit to the colimit of the restriction to ``[a, b]``."""
        if a == b:
            if self.is_source(a):
                return len(self.v_maps[a // 2][0])
            return self.w_dims[a // 2]
        w_nodes = [x for x in range(a, b + 1) if not self.is_source(x)]
        v_nodes = [x for x in range(a, b + 1) if self.is_source(x)]
        w_offset: Dict[int, int] = {}
        total = 0
        for x in w_nodes:
            w_offset[x] = total
            total += self.w_dims[x // 2]

        def embed(node: int, vec: Sequence) -> Vector:
            out = list(zero_vector(total))
            start = w_offset[node]
            for i, c in enumerate(vec):
                out[start + i] = c
            return tuple(out)

        # Relations of the colimit: both images of every interior source agree.
        relations = []
        for x in v_nodes:
            left, right = x - 1, x + 1
            if left >= a and right <= b:
                into_left, into_right = self.v_maps[x // 2]
                for u, w in zip(into_left, into_right):
                    relations.append(tuple(c1 - c2 for c1, c2 in zip(embed(left, u), embed(right, w))))
        colimit_relations = Subspace.span(relations, total)

        # Limit: families of source vectors whose images agree at interior sinks.
        v_offset: Dict[int, int] = {}
        v_total = 0
        for x in v_nodes:
            v_offset[x] = v_total
            v_total += len(self.v_maps[x // 2][0])
        constraint_rows: List[List] = [list(zero_vector(0)) for _ in range(v_total)]
        for x in w_nodes:
            left, right = x - 1, x + 1
            if left < a or right > b:
                continue
            dim = self.w_dims[x // 2]
            from_left = self.v_maps[left // 2][1]
            from_right = self.v_maps[right // 2][0]
            for row in range(v_total):
                constraint_rows[row].extend(zero_vector(dim))
            for i, img in enumerate(from_left):
                r = v_offset[left] + i
                tail = len(constraint_rows[r]) - dim
                for j, c in enumerate(img):
                    constraint_rows[r][tail + j] += c
            for i, img in enumerate(from_right):
                r = v_offset[right] + i
                tail = len(constraint_rows[r]) - dim
                for j, c in enumerate(img):
                    constraint_rows[r][tail + j] -= c
        width = len(constraint_rows[0]) if constraint_rows else 0
        limit = kernel([tuple(r) for r in constraint_rows], width) if v_total else Subspace.zero(0)

        # Evaluate the limit at node a and push into the colimit.
        images = []
        node = a if self.is_source(a) else a + 1
        into_left, into_right = self.v_maps[node // 2]
        if self.is_source(a):
            target, maps = a + 1, into_right
        else:
            target, maps = a, into_left
        for x in limit.basis:
            start = v_offset[node]
            coeffs = x[start:start + len(maps)]
            value = vector_times(coeffs, maps, self.w_dims[target // 2])
            images.append(colimit_relations.reduce(embed(target, value)))
        return rank(images, total) if images else 0


def _layer_intervals(bicomplex: FiniteBicomplex, k: int) -> Tuple[_Layer, Dict[Tuple[int, int], int]]:
    layer = _Layer(bicomplex, k)
    n = layer.size
    rk: Dict[Tuple[int, int], int] = {}

    def r(a: int, b: int) -> int:
        if a < 0 or b >= n:
            return 0
        if (a, b) not in rk:
            rk[(a, b)] = layer.rank_invariant(a, b)
        return rk[(a, b)]

    out: Dict[Tuple[int, int], int] = {}
    for a in range(n):
        for b in range(a + 1, n):
            m = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if m:
                out[(a, b)] = m
    return layer, out


def zigzag_decompose(bicomplex) -> ZigzagDecomposition:
    """
    Decomposes a finite bicomplex into indecomposable shapes.

    Returns:
        The shapes ordered dots first, then squares, then zigzags by length
        (longest first) and anchor.

    Raises:
        PreconditionFailed: For free algebras, whose full complex the
            truncation does not determine.
    """
    if bicomplex.kind != "finite":
        raise PreconditionFailed("zigzag decomposition needs a finite bicomplex")
    squares = _square_counts(bicomplex)
    zigzags: List[Shape] = []
    top = bicomplex.max_total
    for k in range(top + 1):
        layer, intervals = _layer_intervals(bicomplex, k)
        for (a, b), m in sorted(intervals.items()):
            if a % 2 == 0 and b == a + 2:
                m -= squares.get(Bidegree(a // 2, k - a // 2), 0)
            if a % 2 == 1 and b == a + 2:
                m -= squares.get(Bidegree(a // 2, k - 1 - a // 2), 0)
            if m < 0:
                raise InternalContradiction(f"negative interval multiplicity in layer {k} at [{a},{b}]")
            nodes = list(range(a, b + 1))
            cells = tuple(layer.bidegree(x) for x in nodes)
            shape = Shape(
                "zigzag",
                cells[0],
                cells,
                tuple(layer.bidegree(x) for x in nodes if layer.is_source(x)),
                tuple(layer.bidegree(x) for x in nodes if not layer.is_source(x)),
            )
            zigzags.extend([shape] * m)

    square_shapes = []
    for bd in sorted(squares, key=lambda d: (d.total, d.p)):
        cells = (bd, bd.shifted(1, 0), bd.shifted(0, 1), bd.shifted(1, 1))
        square_shapes.extend([Shape("square", bd, cells)] * squares[bd])

    used: Dict[Bidegree, int] = {}
    for s in square_shapes + zigzags:
        for bd in s.cells:
            used[bd] = used.get(bd, 0) + 1
    dots = []
    for bd in bicomplex.occupied():
        free = bicomplex.dim(bd) - used.get(bd, 0)
        if free < 0:
            raise InternalContradiction(f"shapes overfill bidegree {bd}")
        dots.extend([Shape("dot", bd, (bd,))] * free)

    zigzags.sort(key=lambda s: (-s.length, s.anchor.total, s.anchor.p))
    decomposition = ZigzagDecomposition(dots + square_shapes + zigzags)
    logger.info("Decomposed %s: %d dots, %d squares, %d zigzags", bicomplex.name,
                len(dots), len(square_shapes), len(zigzags))
    return decomposition


def zigzag_predicted_dims(decomposition: ZigzagDecomposition) -> Dict[Bidegree, Tuple[int, int]]:
    """Bott-Chern and Aeppli dimensions implied by the shapes: dots count for both, zigzag
    targets for Bott-Chern, zigzag sources for Aeppli, squares for neither."""
    out: Dict[Bidegree, List[int]] = {}
    for s in decomposition.shapes:
        if s.kind == "dot":
            entry = out.setdefault(s.anchor, [0, 0])
            entry[0] += 1
            entry[1] += 1
        elif s.kind == "zigzag":
            for bd in s.targets:
                out.setdefault(bd, [0, 0])[0] += 1
            for bd in s.sources:
                out.setdefault(bd, [0, 0])[1] += 1
    return {bd: (v[0], v[1]) for bd, v in out.items()}


# -- random bicomplexes ------------------------------------------------------

# A cell is (bidegree, del target, delbar target, delbar sign), targets by local index.
Cell = Tuple[Bidegree, Optional[int], Optional[int], int]


def _random_shape(rng: random.Random, box: int) -> List[Cell]:
    kind = rng.choice(["dot", "square", "zigzag", "zigzag"])
    p, q = rng.randrange(box), rng.randrange(box)
    if kind == "dot":
        return [(Bidegree(p, q), None, None, 1)]
    if kind == "square":
        # a, ∂a, ∂̄a, ∂∂̄a with ∂̄∂a = -∂∂̄a
        return [
            (Bidegree(p, q), 1, 2, 1),
            (Bidegree(p + 1, q), None, 3, -1),
            (Bidegree(p, q + 1), 3, None, 1),
            (Bidegree(p + 1, q + 1), None, None, 1),
        ]
    # sources in degree k, targets in degree k+1, alternating along the anti-diagonals
    length = rng.randint(2, 4)
    start_with_target = rng.random() < 0.5
    k = p + q
    col = p
    degrees: List[Bidegree] = []
    is_source: List[bool] = []
    for i in range(length):
        source = (i % 2 == 0) != start_with_target
        degrees.append(Bidegree(col, k - col) if source else Bidegree(col, k + 1 - col))
        is_source.append(source)
        if source:
            col += 1
    lift = max(0, -min(bd.q for bd in degrees))
    degrees = [bd.shifted(0, lift) for bd in degrees]
    cells: List[Cell] = []
    for i, bd in enumerate(degrees):
        if not is_source[i]:
            cells.append((bd, None, None, 1))
            continue
        delbar = i - 1 if i > 0 else None
        del_ = i + 1 if i + 1 < length else None
        cells.append((bd, del_, delbar, 1))
    return cells


def random_bicomplex(seed: int, max_basis: int = 16, box: int = 3) -> FiniteBicomplex:
    """
    A seeded random direct sum of dots, squares and zigzags, hidden by a
    random unipotent change of basis in every bidegree.
    """
    rng = random.Random(seed)
    cells: List[Cell] = []
    while True:
        shape = _random_shape(rng, box)
        if len(cells) + len(shape) > max_basis:
            break
        offset = len(cells)
        cells.extend((bd, None if d is None else d + offset, None if db is None else db + offset, s)
                     for bd, d, db, s in shape)
        if rng.random() < 0.2:
            break

    order = sorted(range(len(cells)), key=lambda i: (cells[i][0].total, cells[i][0].p, i))
    position = {old: new for new, old in enumerate(order)}
    degrees = [cells[i][0] for i in order]

    # new_r = sum_c U_rc old_c inside each bidegree, U unipotent; old_t = sum_s Uinv_ts new_s
    change: Dict[int, Dict[int, object]] = {}
    inverse: Dict[int, Dict[int, object]] = {}
    for bd in sorted(set(degrees), key=lambda d: (d.total, d.p)):
        members = [i for i, d in enumerate(degrees) if d == bd]
        n = len(members)
        u = [[scalar(1 if r == c else (rng.randint(-2, 2) if c > r else 0)) for c in range(n)] for r in range(n)]
        u_inv = DomainMatrix(u, (n, n), QQ_I).inv().to_list()
        for r, index in enumerate(members):
            change[index] = {members[c]: u[r][c] for c in range(n) if not is_zero(u[r][c])}
            inverse[index] = {members[c]: u_inv[r][c] for c in range(n) if not is_zero(u_inv[r][c])}

    old_maps: Dict[str, Dict[int, Dict[int, object]]] = {"del": {}, "delbar": {}}
    for i, (_, d, db, sign) in enumerate(cells):
        if d is not None:
            old_maps["del"][position[i]] = {position[d]: scalar(1)}
        if db is not None:
            old_maps["delbar"][position[i]] = {position[db]: scalar(sign)}

    maps = {}
    for which, old in old_maps.items():
        new_map: Dict[int, Dict[int, object]] = {}
        for row, coeffs in change.items():
            acc: Dict[int, object] = {}
            for j, u_rj in coeffs.items():
                for t, v in old.get(j, {}).items():
                    for s, c in inverse[t].items():
                        acc[s] = acc.get(s, scalar(0)) + u_rj * v * c
            cleaned = {t: c for t, c in acc.items() if not is_zero(c)}
            if cleaned:
                new_map[row] = cleaned
        maps[which] = new_map

    labels = [f"e{i}" for i in range(len(cells))]
    return FiniteBicomplex(f"random-{seed}", labels, degrees, maps["del"], maps["delbar"])
