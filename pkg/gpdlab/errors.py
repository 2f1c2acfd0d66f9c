"""
Exception hierarchy for Groupoid Lab.

Input problems (FormatError) are kept apart from failed mathematical checks
(AxiomError and its subclasses) so the CLI can map them to different exit codes.
"""

from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from .core import ValidationReport


class GpdError(Exception):
    """Base class for all Groupoid Lab errors."""


class FormatError(GpdError, ValueError):
    """Malformed table or text document (unknown ids, syntax, duplicates)."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AxiomError(GpdError):
    """A mathematical check or precondition failed."""

    def __init__(self, message: str, report: Optional["ValidationReport"] = None,
                 witnesses: Sequence[str] = ()):
        self.report = report
        self.witnesses = tuple(witnesses)
        super().__init__(message)


class CompletionError(AxiomError):
    """Closure of a partial table hit a contradiction or the size cap."""

    def __init__(self, message: str, chain: Sequence[str] = ()):
        self.chain = list(chain)
        if self.chain:
            message = f"{message} [{' ; '.join(self.chain)}]"
        super().__init__(message)


class EmbeddingError(AxiomError):
    """Preconditions of an embedding or recognition construction fail."""


class NotFunctorialError(AxiomError):
    """An element map is not a groupoid functor."""


class StrictnessError(AxiomError):
    """An operation requiring a strict partial action received a non-strict one."""


class UniversalityError(AxiomError):
    """No mediating morphism, or more than one, was found."""


class InvariantError(GpdError, RuntimeError):
    """Internal consistency check failed; indicates a bug, never repaired."""
