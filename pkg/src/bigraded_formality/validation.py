"""
Turns a parsed presentation into a checked algebra.

Every axiom is verified exhaustively: gradings of all assigned terms, the
generator order, ∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0 on every monomial or basis element
in range, and for finite products commutativity, associativity, unit and
the Leibniz rule.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple, Union

from .bigraded import Bidegree, add_into
from .config import get_settings
from .errors import (
    GradingViolation,
    LeibnizViolation,
    NonNilpotentOrder,
    NonSquareZero,
    ProductViolation,
    TruncationTooSmall,
)
from .exactla import ONE, Scalar
from .finite import FiniteBicomplex
from .free import FreeCbba, Generator, RawPolynomial, word_to_monomial
from .presentation import PresentationFile, parse_poly

# Configure logging
logger = logging.getLogger(__name__)

Algebra = Union[FiniteBicomplex, FreeCbba]


def default_truncation(presentation: PresentationFile) -> int:
    if presentation.truncation is not None:
        return presentation.truncation
    if presentation.sd_target is not None:
        return 2 * presentation.sd_target + 2
    return get_settings().default_truncation


def validate(presentation: PresentationFile) -> Algebra:
    """
    Builds and checks the algebra described by a presentation.

    Args:
        presentation: A parsed presentation.

    Returns:
        A FreeCbba or FiniteBicomplex satisfying every axiom.

    Raises:
        GradingViolation, NonNilpotentOrder, NonSquareZero, LeibnizViolation,
        ProductViolation, TruncationTooSmall.
    """
    if presentation.kind == "free":
        algebra: Algebra = _validate_free(presentation)
    else:
        algebra = _validate_finite(presentation)
    logger.info("Validated %s algebra %s", algebra.kind, algebra.name)
    return algebra


# -- free kind ---------------------------------------------------------------

def _validate_free(presentation: PresentationFile) -> FreeCbba:
    truncation = default_truncation(presentation)
    names = presentation.names
    generators = []
    for d in presentation.declarations:
        bd = Bidegree(d.p, d.q)
        if d.p < 0 or d.q < 0 or bd.total < 1:
            raise GradingViolation(f"generator {d.name} has bidegree {bd}; generators need p, q >= 0 and p+q >= 1",
                                   witness=d.name)
        if bd.total > truncation:
            raise TruncationTooSmall(f"generator {d.name} of degree {bd.total} exceeds truncation {truncation}")
        generators.append(Generator(d.name, bd))
    odd = [g.odd for g in generators]
    index = {name: i for i, name in enumerate(names)}

    assign: Dict[str, Dict[int, RawPolynomial]] = {"del": {}, "delbar": {}}
    for a in presentation.assignments:
        j = index[a.name]
        gen = generators[j]
        shift = (1, 0) if a.operator == "del" else (0, 1)
        expected = gen.bidegree.shifted(*shift)
        raw: RawPolynomial = {}
        for coeff, word in parse_poly(a.poly, names):
            idx = [index[w] for w in word]
            label = "*".join(word) if word else "1"
            sorted_word = word_to_monomial(idx, odd)
            if sorted_word is None:
                raise GradingViolation(
                    f"{a.operator} {a.name}: term {label} repeats an odd generator and vanishes by parity",
                    witness=label,
                )
            sign, mono = sorted_word
            term_bd = Bidegree(
                sum(generators[g].bidegree.p for g in idx), sum(generators[g].bidegree.q for g in idx)
            )
            if term_bd != expected:
                raise GradingViolation(
                    f"{a.operator} {a.name}: term {label} has bidegree {term_bd}, expected {expected}",
                    witness=label,
                )
            if expected.total > truncation:
                raise TruncationTooSmall(
                    f"{a.operator} {a.name} has degree {expected.total} beyond truncation {truncation}"
                )
            _check_order(generators, j, idx, label)
            add_into(raw, mono, coeff if sign > 0 else -coeff)
        if raw:
            assign[a.operator][j] = raw

    algebra = FreeCbba(
        presentation.name, generators, assign["del"], assign["delbar"], truncation, presentation.sd_target
    )
    _check_square_zero(algebra, algebra.bidegrees(truncation - 2))
    return algebra


def _check_order(generators: List[Generator], j: int, word: List[int], label: str) -> None:
    """A linear term may be any generator one degree up; products use earlier or lower generators."""
    k = generators[j].total
    if len(word) == 1:
        g = word[0]
        if generators[g].total == k + 1 or g < j:
            return
    else:
        if all(generators[g].total < k or (generators[g].total == k and g < j) for g in word):
            return
    raise NonNilpotentOrder(
        f"differential of {generators[j].name} uses {label}, which is not built from earlier generators",
        witness=label,
    )


# -- finite kind -------------------------------------------------------------

def _linear(algebra_names: List[str], poly: str, unit: Optional[int], where: str) -> Dict[int, Scalar]:
    index = {name: i for i, name in enumerate(algebra_names)}
    out: Dict[int, Scalar] = {}
    for coeff, word in parse_poly(poly, algebra_names):
        if len(word) > 1:
            raise GradingViolation(f"{where}: finite presentations are linear in basis labels", witness="*".join(word))
        if not word:
            if unit is None:
                raise GradingViolation(f"{where}: constant term without a unit element", witness="1")
            key = unit
        else:
            key = index[word[0]]
        add_into(out, key, coeff)
    return out


def _validate_finite(presentation: PresentationFile) -> FiniteBicomplex:
    names = presentation.names
    degrees = []
    for d in presentation.declarations:
        if d.p < 0 or d.q < 0:
            raise GradingViolation(f"basis element {d.name} has negative bidegree ({d.p},{d.q})", witness=d.name)
        degrees.append(Bidegree(d.p, d.q))

    unit: Optional[int] = None
    products: Optional[Dict[Tuple[int, int], Dict[int, Scalar]]] = None
    if presentation.products:
        units = [i for i, bd in enumerate(degrees) if bd == Bidegree(0, 0)]
        if len(units) != 1:
            raise ProductViolation(f"a multiplication table needs exactly one unit in bidegree (0,0), found {len(units)}")
        unit = units[0]

    maps: Dict[str, Dict[int, Dict[int, Scalar]]] = {"del": {}, "delbar": {}}
    for a in presentation.assignments:
        j = names.index(a.name)
        where = f"{a.operator} {a.name}"
        image = _linear(names, a.poly, unit, where)
        expected = degrees[j].shifted(*((1, 0) if a.operator == "del" else (0, 1)))
        for k in image:
            if degrees[k] != expected:
                raise GradingViolation(f"{where}: {names[k]} has bidegree {degrees[k]}, expected {expected}",
                                       witness=names[k])
        if image:
            maps[a.operator][j] = image

    if presentation.products:
        products = {}
        for m in presentation.products:
            a, b = names.index(m.left), names.index(m.right)
            where = f"mul {m.left} {m.right}"
            image = _linear(names, m.poly, unit, where)
            expected = degrees[a].plus(degrees[b])
            for k in image:
                if degrees[k] != expected:
                    raise GradingViolation(f"{where}: {names[k]} has bidegree {degrees[k]}, expected {expected}",
                                           witness=names[k])
            if unit in (a, b):
                other = b if a == unit else a
                if image != {other: ONE}:
                    raise ProductViolation(f"{where}: the unit must act as the identity", witness=m.left)
                continue
            sign = -1 if degrees[a].parity and degrees[b].parity else 1
            mirrored = {k: (v if sign > 0 else -v) for k, v in image.items()}
            if (b, a) in products and products[(b, a)] != mirrored:
                raise ProductViolation(f"{where}: inconsistent with graded commutativity", witness=f"{m.left}*{m.right}")
            products[(a, b)] = image
            if (b, a) not in products:
                products[(b, a)] = mirrored
            if a == b and sign < 0 and image:
                raise ProductViolation(f"{where}: an odd element must square to zero", witness=f"{m.left}*{m.right}")

    algebra = FiniteBicomplex(
        presentation.name, names, degrees, maps["del"], maps["delbar"], products, unit, presentation.sd_target
    )
    _check_square_zero(algebra, algebra.occupied())
    if algebra.has_product:
        _check_products(algebra)
    return algebra


# -- shared checks -----------------------------------------------------------

def _check_square_zero(algebra, bidegrees: List[Bidegree]) -> None:
    for bd in bidegrees:
        for key in algebra.basis(bd):
            m = algebra.basis_element(key)
            d1, d2 = algebra.apply_diff(m, "del"), algebra.apply_diff(m, "delbar")
            for value, what in (
                (algebra.apply_diff(d1, "del"), "del del"),
                (algebra.apply_diff(d2, "delbar"), "delbar delbar"),
                (algebra.apply_diff(d2, "del") + algebra.apply_diff(d1, "delbar"), "del delbar + delbar del"),
            ):
                if value:
                    raise NonSquareZero(f"{what} of {algebra.label(key)} is {value}, not zero",
                                        witness=algebra.label(key))


def _check_products(algebra: FiniteBicomplex) -> None:
    keys = list(range(algebra.size))
    elements = [algebra.basis_element(k) for k in keys]
    for a in keys:
        for b in keys:
            ab = elements[a] * elements[b]
            for c in keys:
                if (ab * elements[c]) != (elements[a] * (elements[b] * elements[c])):
                    witness = f"{algebra.label(a)}*{algebra.label(b)}*{algebra.label(c)}"
                    raise ProductViolation("multiplication is not associative", witness=witness)
            sign = -ONE if algebra.degrees[a].total % 2 else ONE
            for which in ("del", "delbar"):
                lhs = algebra.apply_diff(ab, which)
                rhs = algebra.apply_diff(elements[a], which) * elements[b] \
                    + (elements[a] * algebra.apply_diff(elements[b], which)) * sign
                if lhs != rhs:
                    raise LeibnizViolation(
                        f"{which} of {algebra.label(a)}*{algebra.label(b)} breaks the Leibniz rule",
                        witness=f"{algebra.label(a)}*{algebra.label(b)}",
                    )


def is_minimal(algebra: FreeCbba) -> bool:
    return algebra.is_minimal()
