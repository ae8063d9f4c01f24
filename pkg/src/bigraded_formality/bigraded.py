"""
Bigraded algebra interface shared by finite bicomplexes and truncated free
algebras.

An algebra exposes a basis per bidegree, the two differentials on basis
keys and (when it has one) a product on basis keys. Everything else,
elements, coordinate vectors, differential matrices, is built here once.
"""
from __future__ import annotations

import logging
import threading
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Tuple, TypeVar

from .errors import AmbientMismatch, DimensionMismatch
from .exactla import ONE, ZERO, Scalar, Vector, is_zero, zero_vector

# Configure logging
logger = logging.getLogger(__name__)

Key = Hashable
T = TypeVar("T")

DIFFERENTIALS = ("del", "delbar", "d", "deldelbar")
SHIFTS = {"del": (1, 0), "delbar": (0, 1), "deldelbar": (1, 1)}


class Bidegree(NamedTuple):
    p: int
    q: int

    @property
    def total(self) -> int:
        return self.p + self.q

    @property
    def parity(self) -> int:
        return (self.p + self.q) % 2

    def shifted(self, dp: int, dq: int) -> "Bidegree":
        return Bidegree(self.p + dp, self.q + dq)

    def plus(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p + other.p, self.q + other.q)

    def minus(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p - other.p, self.q - other.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def bidegrees_of_total(k: int) -> List[Bidegree]:
    return [Bidegree(p, k - p) for p in range(k + 1)]


def parse_bidegree(text: str) -> Bidegree:
    """Reads ``(p,q)`` as written by ``str(Bidegree)``."""
    parts = text.strip().strip("()").split(",")
    if len(parts) != 2:
        raise DimensionMismatch(f"not a bidegree: {text!r}")
    try:
        return Bidegree(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise DimensionMismatch(f"not a bidegree: {text!r}") from exc


def add_into(acc: Dict[Key, Scalar], key: Key, c: Scalar) -> None:
    v = acc.get(key, ZERO) + c
    if is_zero(v):
        acc.pop(key, None)
    else:
        acc[key] = v


class AlgebraElement:
    """A finite linear combination of basis keys of one algebra."""

    __slots__ = ("owner", "terms")

    def __init__(self, owner: "BigradedAlgebra", terms: Optional[Mapping[Key, Scalar]] = None):
        self.owner = owner
        self.terms: Dict[Key, Scalar] = {k: v for k, v in (terms or {}).items() if not is_zero(v)}

    def _same_owner(self, other: "AlgebraElement") -> None:
        if other.owner is not self.owner:
            raise AmbientMismatch("elements belong to different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_owner(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            add_into(acc, k, v)
        return AlgebraElement(self.owner, acc)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.owner, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.owner.multiply(self, other)
        return AlgebraElement(self.owner, {k: other * v for k, v in self.terms.items()})

    def __rmul__(self, other):
        return AlgebraElement(self.owner, {k: other * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.owner is other.owner and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> List[Bidegree]:
        return sorted({self.owner.key_bidegree(k) for k in self.terms})

    @property
    def bidegree(self) -> Optional[Bidegree]:
        """The bidegree of a nonzero homogeneous element, else None."""
        bds = self.bidegrees()
        return bds[0] if len(bds) == 1 else None

    def component(self, bd: Bidegree) -> "AlgebraElement":
        return AlgebraElement(
            self.owner, {k: v for k, v in self.terms.items() if self.owner.key_bidegree(k) == bd}
        )

    def __repr__(self) -> str:
        return f"AlgebraElement({self.owner.format(self)})"

    def __str__(self) -> str:
        return self.owner.format(self)


class BigradedAlgebra:
    """
    Base class for the two algebra kinds.

    Subclasses provide ``basis``, ``key_bidegree``, ``label``, ``diff_key``
    and, when a product exists, ``multiply_keys``. Caches are filled by
    computing outside a lock and publishing with ``setdefault`` under it, so
    concurrent readers always observe one value per key.
    """

    kind: str = "abstract"
    name: str = ""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cache: Dict[Tuple, object] = {}

    # -- subclass hooks ----------------------------------------------------

    def basis(self, bd: Bidegree) -> List[Key]:
        raise NotImplementedError

    def key_bidegree(self, key: Key) -> Bidegree:
        raise NotImplementedError

    def label(self, key: Key) -> str:
        raise NotImplementedError

    def diff_key(self, key: Key, which: str) -> Dict[Key, Scalar]:
        raise NotImplementedError

    def multiply_keys(self, a: Key, b: Key) -> Dict[Key, Scalar]:
        raise NotImplementedError

    def unit_key(self) -> Optional[Key]:
        raise NotImplementedError

    @property
    def max_total(self) -> int:
        """Largest total degree carrying basis elements (the truncation for free kind)."""
        raise NotImplementedError

    @property
    def has_product(self) -> bool:
        return True

    # -- caching -----------------------------------------------------------

    def memo(self, key: Tuple, factory: Callable[[], T]) -> T:
        cached = self._cache.get(key)
        if cached is not None:
            return cached  # type: ignore[return-value]
        value = factory()
        with self._lock:
            return self._cache.setdefault(key, value)  # type: ignore[return-value]

    # -- bases and coordinates ---------------------------------------------

    def dim(self, bd: Bidegree) -> int:
        return len(self.basis(bd))

    def index(self, bd: Bidegree) -> Dict[Key, int]:
        return self.memo(("index", bd), lambda: {k: i for i, k in enumerate(self.basis(bd))})

    def in_range(self, bd: Bidegree) -> bool:
        return bd.p >= 0 and bd.q >= 0 and bd.total <= self.max_total

    def bidegrees(self, max_total: Optional[int] = None) -> List[Bidegree]:
        top = self.max_total if max_total is None else min(max_total, self.max_total)
        return [bd for k in range(top + 1) for bd in bidegrees_of_total(k)]

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def one(self) -> AlgebraElement:
        unit = self.unit_key()
        if unit is None:
            return AlgebraElement(self)
        return AlgebraElement(self, {unit: ONE})

    def basis_element(self, key: Key) -> AlgebraElement:
        return AlgebraElement(self, {key: ONE})

    def element(self, bd: Bidegree, vector: Iterable[Scalar]) -> AlgebraElement:
        keys = self.basis(bd)
        vector = tuple(vector)
        if len(vector) != len(keys):
            raise DimensionMismatch(f"vector of length {len(vector)} at {bd} of dimension {len(keys)}")
        return AlgebraElement(self, dict(zip(keys, vector)))

    def vector(self, u: AlgebraElement, bd: Bidegree) -> Vector:
        """Coordinates of the ``bd`` component of ``u``."""
        index = self.index(bd)
        out = list(zero_vector(len(index)))
        for k, v in u.terms.items():
            i = index.get(k)
            if i is not None:
                out[i] = v
        return tuple(out)

    # -- operations ----------------------------------------------------------

    def multiply(self, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
        acc: Dict[Key, Scalar] = {}
        for a, ca in u.terms.items():
            for b, cb in v.terms.items():
                for k, c in self.multiply_keys(a, b).items():
                    add_into(acc, k, ca * cb * c)
        return AlgebraElement(self, acc)

    def _apply_pure(self, u: AlgebraElement, which: str) -> AlgebraElement:
        acc: Dict[Key, Scalar] = {}
        for a, ca in u.terms.items():
            for k, c in self.diff_key(a, which).items():
                add_into(acc, k, ca * c)
        return AlgebraElement(self, acc)

    def apply_diff(self, u: AlgebraElement, which: str) -> AlgebraElement:
        """Applies ``del``, ``delbar``, ``d`` or ``deldelbar`` (meaning ∂∂̄)."""
        if which in ("del", "delbar"):
            return self._apply_pure(u, which)
        if which == "d":
            return self._apply_pure(u, "del") + self._apply_pure(u, "delbar")
        if which == "deldelbar":
            return self._apply_pure(self._apply_pure(u, "delbar"), "del")
        raise ValueError(f"Unknown differential: {which}")

    def diff_rows(self, which: str, bd: Bidegree) -> List[Vector]:
        """Matrix of ``which`` from ``bd`` to its target bidegree, one row per basis key."""

        def build() -> List[Vector]:
            dp, dq = SHIFTS[which]
            target = bd.shifted(dp, dq)
            return [
                self.vector(self.apply_diff(self.basis_element(k), which), target)
                for k in self.basis(bd)
            ]

        return self.memo(("diff", which, bd), build)

    def format(self, u: AlgebraElement) -> str:
        from .presentation import format_terms

        return format_terms(
            [(self.label(k), c) for k, c in sorted(u.terms.items(), key=lambda kv: self.sort_key(kv[0]))]
        )

    def sort_key(self, key: Key):
        bd = self.key_bidegree(key)
        return (bd.total, bd.p, self.index(bd).get(key, 0))
