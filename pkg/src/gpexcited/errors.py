"""Exception types shared across the package."""


class GPExcitedError(Exception):
    """Base class for all package errors."""


class NonBracketed(GPExcitedError):
    """Shooting bisection interval does not separate trajectory behaviors."""


class NoConvergence(GPExcitedError):
    """Iteration failed to reach tolerance; best iterate attached when known."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DomainError(GPExcitedError):
    """Parameter outside the admissible range of a formula."""


class UnderResolved(GPExcitedError):
    """Grid spacing too coarse for the feature being sampled."""


class BadTail(GPExcitedError):
    """Exponential tail fit failed or has a large residual."""


class MultiPeak(GPExcitedError):
    """Field lacks a single dominant peak."""


class GeometryViolated(GPExcitedError):
    """Constructed path does not exhibit the expected saddle geometry."""


class WrongBranch(GPExcitedError):
    """Converged to a critical point failing the natural-constraint checks."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(GPExcitedError):
    """Malformed configuration text."""


class RangeError(GPExcitedError):
    """Configuration value outside its valid range."""


class TrendViolation(GPExcitedError):
    """A monotone trend expected across a parameter sweep does not hold."""
