"""
Presentation files: a line-oriented text format for free and finite algebras.

    name cp1-model
    truncation 6
    sd-target 1
    generator x bidegree (1,1)
    generator r bidegree (1,1)
    del r = 1 * rp
    mul a b = 1 * c

Polynomials are sums of scalar-weighted words, ``c * g1*g2``. Scalars are
Gaussian rationals written with ``i``. Parsing stores every polynomial in
its canonical text form, so ``parse(serialize(p)) == p``.
"""
from __future__ import annotations

import keyword
import logging
import re
from pathlib import Path
from tokenize import TokenError
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field
from sympy import Add, Float, I, Mul, Pow, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from sympy.polys.domains.gaussiandomains import QQ_I

from .errors import DuplicateName, PresentationSyntaxError, UnknownReference
from .exactla import Scalar, format_scalar, is_zero

# Configure logging
logger = logging.getLogger(__name__)

NAME_PATTERN = r"[A-Za-z][A-Za-z0-9_]*"
_NAME = re.compile(NAME_PATTERN)
_TRANSFORMS = standard_transformations + (convert_xor,)

_LINE_PATTERNS = {
    "name": re.compile(r"^name\s+(\S+)$"),
    "truncation": re.compile(r"^truncation\s+(\d+)$"),
    "sd-target": re.compile(r"^sd-target\s+(\d+)$"),
    "generator": re.compile(rf"^generator\s+({NAME_PATTERN})\s+bidegree\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$"),
    "basis": re.compile(rf"^basis\s+({NAME_PATTERN})\s+bidegree\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$"),
    "diff": re.compile(rf"^(del|delbar)\s+({NAME_PATTERN})\s*=\s*(.+)$"),
    "mul": re.compile(rf"^mul\s+({NAME_PATTERN})\s+({NAME_PATTERN})\s*=\s*(.+)$"),
}

Word = Tuple[str, ...]
Terms = List[Tuple[Scalar, Word]]


class Declaration(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    p: int
    q: int


class Assignment(BaseModel):
    model_config = ConfigDict(extra="forbid")
    operator: Literal["del", "delbar"]
    name: str
    poly: str


class ProductRule(BaseModel):
    model_config = ConfigDict(extra="forbid")
    left: str
    right: str
    poly: str


class PresentationFile(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    kind: Literal["free", "finite"]
    truncation: Optional[int] = Field(None, ge=0)
    sd_target: Optional[int] = Field(None, ge=0)
    declarations: List[Declaration] = Field(default_factory=list)
    assignments: List[Assignment] = Field(default_factory=list)
    products: List[ProductRule] = Field(default_factory=list)

    @property
    def names(self) -> List[str]:
        return [d.name for d in self.declarations]


# -- polynomials ---------------------------------------------------------------

def format_terms(terms: Sequence[Tuple[str, Scalar]]) -> str:
    """Formats ``(label, coefficient)`` pairs; the label ``1`` stands for the unit."""
    parts = []
    for label, c in terms:
        if is_zero(c):
            continue
        parts.append(format_scalar(c) if label == "1" else f"{format_scalar(c)} * {label}")
    return " + ".join(parts) if parts else "0"


def format_word_terms(terms: Terms) -> str:
    return format_terms([("*".join(word) if word else "1", c) for c, word in terms])


def _check_name(name: str, line: int) -> None:
    if keyword.iskeyword(name) or name == "i":
        raise PresentationSyntaxError(f"'{name}' is reserved and cannot name a generator", line)


def _scalar_from_sympy(expr, line: int, column: int) -> Scalar:
    if expr.atoms(Float):
        raise PresentationSyntaxError("floating-point coefficients are not allowed", line, column)
    try:
        return QQ_I.from_sympy(expr)
    except Exception as exc:  # sympy raises CoercionFailed and friends
        raise PresentationSyntaxError(f"coefficient {expr} is not a Gaussian rational", line, column) from exc


def parse_scalar(text: str, line: int = 0) -> Scalar:
    """Parses ``3/2``, ``-1/2+1/3*i`` and the like."""
    if _NAME.search(text.replace("i", "")):
        raise PresentationSyntaxError(f"not a scalar: {text!r}", line)
    try:
        expr = parse_expr(text, local_dict={"i": I}, transformations=_TRANSFORMS)
    except (SyntaxError, TokenError, TypeError) as exc:
        raise PresentationSyntaxError(f"cannot parse scalar {text!r}: {exc}", line) from exc
    return _scalar_from_sympy(expr.expand(), line, 1)


def parse_poly(text: str, names: Sequence[str], line: int = 0, column: int = 1) -> Terms:
    """
    Parses a polynomial in the declared names into ``(coefficient, word)``
    terms, collecting repeated words and keeping the written factor order.

    Args:
        text: The polynomial text.
        names: Names that may appear as factors.
        line: Line number used in error messages.
        column: Column where the polynomial starts.

    Returns:
        Terms ordered by word length, then by declaration order of the factors.
    """
    known = set(names)
    for match in _NAME.finditer(text):
        token = match.group(0)
        if token != "i" and token not in known:
            raise UnknownReference(f"line {line}: unknown name '{token}'")
    symbols = {name: Symbol(name, commutative=False) for name in names}
    symbols["i"] = I
    try:
        expr = parse_expr(text, local_dict=symbols, transformations=_TRANSFORMS)
    except (SyntaxError, TokenError, TypeError) as exc:
        raise PresentationSyntaxError(f"cannot parse polynomial {text!r}: {exc}", line, column) from exc

    collected: Dict[Word, Scalar] = {}
    for term in Add.make_args(expr.expand()):
        if term == 0:
            continue
        commutative, factors = term.args_cnc()
        coeff = _scalar_from_sympy(Mul(*commutative), line, column)
        word: List[str] = []
        for factor in factors:
            if isinstance(factor, Symbol):
                word.append(factor.name)
            elif isinstance(factor, Pow) and isinstance(factor.base, Symbol) and factor.exp.is_Integer \
                    and factor.exp > 0:
                word.extend([factor.base.name] * int(factor.exp))
            else:
                raise PresentationSyntaxError(f"unsupported factor {factor} in {text!r}", line, column)
        key = tuple(word)
        total = collected.get(key)
        collected[key] = coeff if total is None else total + coeff

    order = {name: i for i, name in enumerate(names)}
    terms = [(c, w) for w, c in collected.items() if not is_zero(c)]
    terms.sort(key=lambda cw: (len(cw[1]), [order[n] for n in cw[1]]))
    return terms


def canonical_poly(text: str, names: Sequence[str], line: int = 0, column: int = 1) -> str:
    return format_word_terms(parse_poly(text, names, line, column))


# -- files -----------------------------------------------------------------

def parse_text(text: str, default_name: str = "presentation") -> PresentationFile:
    """
    Parses presentation text.

    Declarations are collected first so that polynomials may mention names
    declared further down; every reference is then checked.
    """
    lines = [(n, raw.split("#", 1)[0].strip()) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, s) for n, s in lines if s]
    name = default_name
    truncation: Optional[int] = None
    sd_target: Optional[int] = None
    declarations: List[Declaration] = []
    kinds = set()
    pending: List[Tuple[int, str, re.Match]] = []

    for n, s in lines:
        for key, pattern in _LINE_PATTERNS.items():
            match = pattern.match(s)
            if match:
                break
        else:
            raise PresentationSyntaxError(f"unrecognized declaration {s!r}", n)
        if key == "name":
            name = match.group(1)
        elif key == "truncation":
            if truncation is not None:
                raise DuplicateName(f"line {n}: truncation declared twice")
            truncation = int(match.group(1))
        elif key == "sd-target":
            if sd_target is not None:
                raise DuplicateName(f"line {n}: sd-target declared twice")
            sd_target = int(match.group(1))
        elif key in ("generator", "basis"):
            label = match.group(1)
            _check_name(label, n)
            if label in {d.name for d in declarations}:
                raise DuplicateName(f"line {n}: '{label}' declared twice")
            kinds.add(key)
            declarations.append(Declaration(name=label, p=int(match.group(2)), q=int(match.group(3))))
        else:
            pending.append((n, key, match))

    if not declarations:
        raise PresentationSyntaxError("no generator or basis declarations", lines[-1][0] if lines else 1)
    if len(kinds) > 1:
        raise PresentationSyntaxError("a presentation declares either generators or basis elements, not both",
                                      lines[-1][0])
    kind = "free" if kinds == {"generator"} else "finite"
    names = [d.name for d in declarations]

    assignments: List[Assignment] = []
    products: List[ProductRule] = []
    seen = set()
    for n, key, match in pending:
        if key == "diff":
            operator, target, poly = match.group(1), match.group(2), match.group(3)
            if target not in names:
                raise UnknownReference(f"line {n}: unknown name '{target}'")
            if (operator, target) in seen:
                raise DuplicateName(f"line {n}: {operator} {target} assigned twice")
            seen.add((operator, target))
            assignments.append(Assignment(operator=operator, name=target,
                                          poly=canonical_poly(poly, names, n, match.start(3) + 1)))
        else:
            if kind != "finite":
                raise PresentationSyntaxError("mul lines belong to finite presentations", n)
            left, right, poly = match.group(1), match.group(2), match.group(3)
            for ref in (left, right):
                if ref not in names:
                    raise UnknownReference(f"line {n}: unknown name '{ref}'")
            if ("mul", left, right) in seen:
                raise DuplicateName(f"line {n}: product {left} {right} declared twice")
            seen.add(("mul", left, right))
            products.append(ProductRule(left=left, right=right,
                                        poly=canonical_poly(poly, names, n, match.start(3) + 1)))

    presentation = PresentationFile(
        name=name,
        kind=kind,
        truncation=truncation,
        sd_target=sd_target,
        declarations=declarations,
        assignments=assignments,
        products=products,
    )
    logger.debug("Parsed %s presentation %s with %d declarations", kind, name, len(declarations))
    return presentation


def parse(path: Union[str, Path]) -> PresentationFile:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"The file was not found at: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return parse_text(f.read(), default_name=path.stem)


def serialize(presentation: PresentationFile) -> str:
    word = "generator" if presentation.kind == "free" else "basis"
    out = [f"name {presentation.name}"]
    if presentation.truncation is not None:
        out.append(f"truncation {presentation.truncation}")
    if presentation.sd_target is not None:
        out.append(f"sd-target {presentation.sd_target}")
    out.extend(f"{word} {d.name} bidegree ({d.p},{d.q})" for d in presentation.declarations)
    out.extend(f"{a.operator} {a.name} = {a.poly}" for a in presentation.assignments)
    out.extend(f"mul {m.left} {m.right} = {m.poly}" for m in presentation.products)
    return "\n".join(out) + "\n"
