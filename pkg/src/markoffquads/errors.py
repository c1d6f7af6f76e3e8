"""Exception types shared across the package."""


class MarkoffError(Exception):
    """Base class for every error raised by this package."""


class InvalidQuadError(MarkoffError, ValueError):
    """A 4-tuple does not satisfy the quad relation (a+b+c+d)^2 = abcd."""


class DomainError(MarkoffError, ValueError):
    """Input outside an operation's domain (signs, zeros, simplex, words)."""


class BranchCutError(MarkoffError, ValueError):
    """Input lies on (or within tolerance of) an excluded real segment."""


class DegenerateClassError(MarkoffError, ValueError):
    """Trace value corresponds to a parabolic or degenerate curve class."""


class BqViolationError(MarkoffError, ValueError):
    """A face product lies in [0, 4]; the identity sum is not defined."""


class BudgetExceededError(MarkoffError, RuntimeError):
    """An enumeration exceeded its cell or step budget."""
