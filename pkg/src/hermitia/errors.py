"""Exception taxonomy shared across the package."""


class HermitiaError(Exception):
    """Base class for all package-specific errors."""


class StructuralError(HermitiaError):
    """Incompatible shapes, dimensions, truncation orders, or index patterns."""


class OrderExhaustedError(HermitiaError):
    """A derivative was requested beyond the stored truncation order."""


class SingularSeriesError(HermitiaError):
    """Inversion of a series (or series matrix) whose constant term is singular."""


class DomainError(HermitiaError):
    """Evaluation outside a field's admissible domain (e.g. Hopf at z = 0)."""


class ValidationError(HermitiaError):
    """A constructed object violates a required invariant (e.g. positivity)."""


class ParseError(HermitiaError):
    """Malformed input file."""
