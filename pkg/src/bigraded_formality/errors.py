"""Exception hierarchy shared by the library and the command line.

Input and contract problems derive from ``ValueError`` so callers that only
know the standard library still catch them. Obstructions carry the element
that witnesses a negative verdict.
"""
from __future__ import annotations

from typing import Any, Optional


class FormalityError(Exception):
    """Base class for every error raised by this package."""


class InputError(FormalityError, ValueError):
    """The input (file, presentation, arguments) is unusable."""


class PresentationSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DuplicateName(InputError):
    pass


class UnknownReference(InputError):
    pass


class UnknownCorpusEntry(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class ValidationError(InputError):
    """An algebra axiom fails; ``witness`` names the offending basis element."""

    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message if witness is None else f"{message} (witness: {witness})")
        self.witness = witness


class NonSquareZero(ValidationError):
    pass


class LeibnizViolation(ValidationError):
    pass


class GradingViolation(ValidationError):
    pass


class NonNilpotentOrder(ValidationError):
    pass


class ProductViolation(ValidationError):
    pass


class ContractError(InputError):
    """A documented precondition of an operation does not hold."""


class TruncationOverflow(ContractError):
    pass


class InsufficientTruncation(ContractError):
    pass


class TruncationTooSmall(ContractError):
    pass


class PreconditionFailed(ContractError):
    pass


class HypothesesUnmet(ContractError):
    pass


class WidthViolated(ContractError):
    pass


class SpecialBranchInconsistent(ContractError):
    pass


class RestrictionContractViolated(ContractError):
    pass


class TargetNotDdbar(ContractError):
    pass


class ObstructionError(FormalityError):
    """A construction cannot proceed; the witness shows why."""

    def __init__(self, message: str, witness: Any = None, bidegree: Any = None):
        super().__init__(message)
        self.witness = witness
        self.bidegree = bidegree


class SplittingObstructed(ObstructionError):
    pass


class MorphismViolation(ObstructionError):
    pass


class PromotionObstructed(ObstructionError):
    pass


class NoSolution(ObstructionError):
    pass


class DdbarWitnessMissing(ObstructionError):
    pass


class CompletionObstructed(ObstructionError):
    pass


class InternalContradiction(FormalityError):
    """An implication that must hold failed; always a hard stop."""


class PairingSingular(InternalContradiction):
    pass
