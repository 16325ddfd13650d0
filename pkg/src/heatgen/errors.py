"""Exception hierarchy shared by all heatgen modules."""


class HeatgenError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpaceSpec(HeatgenError):
    """Curvature datum violates a structural requirement (shape, symmetry,
    positive definiteness, or linear independence of the generators)."""


class DegenerateBasis(HeatgenError):
    """The derived connection generators are linearly dependent, so structure
    constants cannot be read off uniquely."""


class CommutatorOutsideSpan(HeatgenError):
    """A commutator of connection generators leaves their linear span; the
    datum does not close into a Lie algebra."""


class InternalInconsistency(HeatgenError):
    """Two independent computations of the same quantity disagreed.  This
    always indicates a bug, never bad input."""


class ValidationError(HeatgenError):
    """One or more structural identity checks failed for the datum."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(HeatgenError):
    """A space file could not be parsed (syntax, schema, or field content)."""


class UnknownSpace(HeatgenError):
    """Requested name is not in the builtin catalog."""


class OrderTooLarge(HeatgenError):
    """The requested expansion order exceeds the enumeration budget."""


class OrderMismatch(HeatgenError):
    """Coefficient lists of incompatible truncation orders were combined."""


class NonPositiveT(HeatgenError):
    """Evaluation time must be strictly positive."""
