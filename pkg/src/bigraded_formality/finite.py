"""Finite bicomplexes given by an explicit basis, optionally with a product table."""
from __future__ import annotations

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bigraded import Bidegree, BigradedAlgebra
from .errors import PreconditionFailed
from .exactla import ONE, Scalar

# Configure logging
logger = logging.getLogger(__name__)

LinearMap = Dict[int, Dict[int, Scalar]]
ProductTable = Dict[Tuple[int, int], Dict[int, Scalar]]


class FiniteBicomplex(BigradedAlgebra):
    """
    A bicomplex on labelled basis elements.

    Basis keys are the declaration indices. With a product table the
    element of bidegree (0,0) is the unit; products missing from the table
    are zero.
    """

    kind = "finite"

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        bidegrees: Sequence[Bidegree],
        del_map: Mapping[int, Mapping[int, Scalar]],
        delbar_map: Mapping[int, Mapping[int, Scalar]],
        products: Optional[ProductTable] = None,
        unit: Optional[int] = None,
        sd_target: Optional[int] = None,
    ):
        super().__init__()
        self.name = name
        self.labels: Tuple[str, ...] = tuple(labels)
        self.degrees: Tuple[Bidegree, ...] = tuple(bidegrees)
        self._maps = {
            "del": {i: dict(v) for i, v in del_map.items() if v},
            "delbar": {i: dict(v) for i, v in delbar_map.items() if v},
        }
        self.products = None if products is None else {k: dict(v) for k, v in products.items() if v}
        self.unit = unit
        self.sd_target = sd_target

    @property
    def has_product(self) -> bool:
        return self.products is not None

    @property
    def max_total(self) -> int:
        return max((bd.total for bd in self.degrees), default=0)

    @property
    def size(self) -> int:
        return len(self.labels)

    def basis(self, bd: Bidegree) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d == bd]

    def occupied(self) -> List[Bidegree]:
        return sorted(set(self.degrees), key=lambda bd: (bd.total, bd.p))

    def key_bidegree(self, key: int) -> Bidegree:
        return self.degrees[key]

    def label(self, key: int) -> str:
        return self.labels[key]

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def unit_key(self) -> Optional[int]:
        return self.unit

    def diff_key(self, key: int, which: str) -> Dict[int, Scalar]:
        return dict(self._maps[which].get(key, {}))

    def multiply_keys(self, a: int, b: int) -> Dict[int, Scalar]:
        if self.products is None:
            raise PreconditionFailed(f"{self.name} carries no multiplication table")
        if a == self.unit:
            return {b: ONE}
        if b == self.unit:
            return {a: ONE}
        return dict(self.products.get((a, b), {}))

    def map_entries(self, which: str) -> LinearMap:
        return {i: dict(v) for i, v in self._maps[which].items()}
