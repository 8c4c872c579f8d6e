"""Exception hierarchy shared by every module."""


class SymdiscError(Exception):
    """Base class for all library errors."""


class UsageError(SymdiscError, ValueError):
    """Input has the wrong shape or violates a documented precondition."""


class ParseError(SymdiscError, ValueError):
    """A JSON or CSV document does not follow the documented schema."""


class NotAContraction(SymdiscError):
    """Operator norm exceeds one by more than the rank tolerance."""


class NumericalFailure(SymdiscError):
    """An iterative or deflation step missed its residual budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class BoundaryBand(SymdiscError):
    """|p| is too close to one for the explicit recovery formula."""


class NotRepresentable(SymdiscError):
    """The defect equation has no solution within tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class InvalidFundamentalData(SymdiscError):
    """Generator input is not a valid commuting normal tuple."""


class InvalidVarietyData(SymdiscError):
    """Pencil matrices fail the commutation or spectral conditions."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoCertificate(SymdiscError):
    """Every witness determinant vanishes at the query point."""


class ProjectionFailure(SymdiscError):
    """Numerical radius of the projected matrix is not below one."""


class HypothesisViolation(SymdiscError):
    """Inputs do not satisfy the wiring required by the inequality check."""

    def __init__(self, message, distance=float("nan")):
        super().__init__(message)
        self.distance = distance


class EvaluationFailure(SymdiscError):
    """Resolvent is numerically singular at the requested point."""


class PurityRequired(SymdiscError):
    """P has an eigenvalue on or outside the unit circle."""


class DilationFailure(SymdiscError):
    """Intertwining residuals exceed the truncation budget."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or {}


class ModelFailure(SymdiscError):
    """Model space rank does not match the source dimension."""
