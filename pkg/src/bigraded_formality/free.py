"""
Free graded-commutative bigraded algebras truncated at a total degree.

A monomial is a tuple of ``(generator index, exponent)`` pairs sorted by
index; odd generators appear with exponent one. Products carry the Koszul
sign of the odd factors that have to be moved past each other.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bigraded import AlgebraElement, Bidegree, BigradedAlgebra, add_into
from .errors import TruncationOverflow
from .exactla import ONE, ZERO, Scalar, Vector, scalar

# Configure logging
logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, int], ...]
RawPolynomial = Dict[Monomial, Scalar]

UNIT: Monomial = ()


@dataclass(frozen=True)
class Generator:
    name: str
    bidegree: Bidegree

    @property
    def total(self) -> int:
        return self.bidegree.total

    @property
    def odd(self) -> bool:
        return self.bidegree.parity == 1


def word_to_monomial(word: Sequence[int], odd: Sequence[bool]) -> Optional[Tuple[int, Monomial]]:
    """Sorts a word of generator indices; None when an odd generator repeats."""
    sign = 1
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            a, b = word[i], word[j]
            if odd[a] and odd[b]:
                if a == b:
                    return None
                if a > b:
                    sign = -sign
    counts: Dict[int, int] = {}
    for g in word:
        counts[g] = counts.get(g, 0) + 1
    return sign, tuple(sorted(counts.items()))


def monomial_word(m: Monomial) -> Tuple[int, ...]:
    return tuple(g for g, e in m for _ in range(e))


class FreeCbba(BigradedAlgebra):
    """
    ΛV on the declared generators, truncated at total degree ``truncation``.

    ``del_assign`` and ``delbar_assign`` map a generator index to its
    differential as a raw polynomial in monomials. Construction does not
    check the axioms; ``validation.validate`` does.
    """

    kind = "free"

    def __init__(
        self,
        name: str,
        generators: Sequence[Generator],
        del_assign: Mapping[int, RawPolynomial],
        delbar_assign: Mapping[int, RawPolynomial],
        truncation: int,
        sd_target: Optional[int] = None,
    ):
        super().__init__()
        self.name = name
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.truncation = truncation
        self.sd_target = sd_target
        self._odd = [g.odd for g in self.generators]
        self._assign = {
            "del": {i: dict(p) for i, p in del_assign.items() if p},
            "delbar": {i: dict(p) for i, p in delbar_assign.items() if p},
        }

    # -- structure ---------------------------------------------------------

    @property
    def max_total(self) -> int:
        return self.truncation

    def key_bidegree(self, key: Monomial) -> Bidegree:
        p = q = 0
        for g, e in key:
            bd = self.generators[g].bidegree
            p += e * bd.p
            q += e * bd.q
        return Bidegree(p, q)

    def monomial_total(self, key: Monomial) -> int:
        return sum(e * self.generators[g].total for g, e in key)

    def label(self, key: Monomial) -> str:
        if not key:
            return "1"
        return "*".join(self.generators[g].name for g in monomial_word(key))

    def unit_key(self) -> Monomial:
        return UNIT

    def generator_index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def generator_key(self, i: int) -> Monomial:
        return ((i, 1),)

    def generator_element(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, {self.generator_key(i): ONE})

    def generators_of(self, bd: Bidegree) -> List[int]:
        return [i for i, g in enumerate(self.generators) if g.bidegree == bd]

    def generators_of_total(self, k: int) -> List[int]:
        return [i for i, g in enumerate(self.generators) if g.total == k]

    def assignment(self, i: int, which: str) -> RawPolynomial:
        return dict(self._assign[which].get(i, {}))

    # -- bases -------------------------------------------------------------

    def _all_monomials(self) -> Dict[Bidegree, List[Monomial]]:
        def build() -> Dict[Bidegree, List[Monomial]]:
            buckets: Dict[Bidegree, List[Monomial]] = {}

            def walk(start: int, prefix: List[Tuple[int, int]], degree: int) -> None:
                key = tuple(prefix)
                buckets.setdefault(self.key_bidegree(key), []).append(key)
                for g in range(start, len(self.generators)):
                    step = self.generators[g].total
                    top = 1 if self._odd[g] else (self.truncation - degree) // step
                    for e in range(1, top + 1):
                        if degree + e * step > self.truncation:
                            break
                        walk(g + 1, prefix + [(g, e)], degree + e * step)

            walk(0, [], 0)
            for keys in buckets.values():
                keys.sort(key=lambda m: (sum(e for _, e in m), monomial_word(m)))
            logger.debug("Enumerated %d monomials of %s up to degree %d",
                         sum(len(v) for v in buckets.values()), self.name, self.truncation)
            return buckets

        return self.memo(("monomials",), build)

    def basis(self, bd: Bidegree) -> List[Monomial]:
        if bd.p < 0 or bd.q < 0:
            return []
        if bd.total > self.truncation:
            raise TruncationOverflow(f"bidegree {bd} lies beyond truncation {self.truncation} of {self.name}")
        return self._all_monomials().get(bd, [])

    # -- product and differentials -----------------------------------------

    def multiply_monomials(self, a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
        sign = 1
        merged = dict(a)
        for g, e in b:
            if g in merged and self._odd[g]:
                return None
            merged[g] = merged.get(g, 0) + e
        for ga, _ in a:
            if not self._odd[ga]:
                continue
            for gb, _ in b:
                if self._odd[gb] and ga > gb:
                    sign = -sign
        return sign, tuple(sorted(merged.items()))

    def multiply_keys(self, a: Monomial, b: Monomial) -> Dict[Monomial, Scalar]:
        total = self.monomial_total(a) + self.monomial_total(b)
        if total > self.truncation:
            raise TruncationOverflow(
                f"product {self.label(a)} * {self.label(b)} has degree {total} beyond truncation {self.truncation}"
            )
        result = self.multiply_monomials(a, b)
        if result is None:
            return {}
        sign, key = result
        return {key: ONE if sign > 0 else -ONE}

    def _multiply_raw(self, u: Mapping[Monomial, Scalar], v: Mapping[Monomial, Scalar]) -> RawPolynomial:
        acc: RawPolynomial = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for k, c in self.multiply_keys(a, b).items():
                    add_into(acc, k, ca * cb * c)
        return acc

    def diff_key(self, key: Monomial, which: str) -> Dict[Monomial, Scalar]:
        if not key:
            return {}
        if self.monomial_total(key) + 1 > self.truncation:
            raise TruncationOverflow(
                f"{which} of {self.label(key)} lands beyond truncation {self.truncation} of {self.name}"
            )
        acc: RawPolynomial = {}
        prefix_degree = 0
        for pos, (g, e) in enumerate(key):
            dg = self._assign[which].get(g)
            if dg:
                prefix = key[:pos] + (((g, e - 1),) if e > 1 else ())
                suffix = key[pos + 1:]
                sign = -1 if prefix_degree % 2 else 1
                coeff = scalar(sign * e)
                term = self._multiply_raw(self._multiply_raw({prefix: coeff}, dg), {suffix: ONE})
                for k, c in term.items():
                    add_into(acc, k, c)
            prefix_degree += e * self.generators[g].total
        return acc

    # -- generator coordinates ---------------------------------------------

    def linear_part(self, u: AlgebraElement, bd: Bidegree) -> Vector:
        """Coefficients of ``u`` on the generators of bidegree ``bd``."""
        gens = self.generators_of(bd)
        return tuple(u.terms.get(self.generator_key(i), ZERO) for i in gens)

    def from_linear(self, bd: Bidegree, coords: Sequence[Scalar]) -> AlgebraElement:
        gens = self.generators_of(bd)
        return AlgebraElement(self, {self.generator_key(i): c for i, c in zip(gens, coords)})

    def decomposable_part(self, u: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self, {k: c for k, c in u.terms.items() if sum(e for _, e in k) != 1})

    def is_minimal(self) -> bool:
        """True when ∂∂̄ of every generator has no linear term."""
        for i, g in enumerate(self.generators):
            if g.total + 2 > self.truncation:
                continue
            ddbar = self.apply_diff(self.generator_element(i), "deldelbar")
            if any(sum(e for _, e in k) == 1 for k in ddbar.terms):
                logger.debug("Generator %s has a linear term in its ddbar image", g.name)
                return False
        return True
