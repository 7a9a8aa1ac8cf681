"""Exception types shared across the package."""


class SumsetLabError(Exception):
    """Base class for all package-specific errors."""


class EmptyInput(SumsetLabError):
    """An operation that needs a nonempty set received an empty one."""


class DegenerateSet(SumsetLabError):
    """Normalization is undefined: both sets collapse to {0} after translation."""


class IndexMismatch(SumsetLabError):
    """A pair relation is indexed against sets of the wrong cardinality."""


class HypothesisViolated(SumsetLabError):
    """Input is too sparse/skewed for the requested guarantee to hold."""


class PreconditionViolated(SumsetLabError):
    """A stated structural precondition (endpoint membership, range, ...) fails."""


class EmptySet(SumsetLabError):
    """Stabilizer of the empty set is undefined."""


class NonPositiveElement(SumsetLabError):
    """Positive-part recovery received a non-positive element."""


class ShapeViolation(SumsetLabError):
    """Progressions are not in the canonical shapes required by the operation."""


class DiscretizationTooCoarse(SumsetLabError):
    """No cell passed the fill threshold, so nothing can be recovered."""


class BudgetExceeded(SumsetLabError):
    """The requested enumeration is larger than the configured instance budget."""


class InputFormatError(SumsetLabError):
    """Malformed input file; carries the name of the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"field {field!r}: {message}")
