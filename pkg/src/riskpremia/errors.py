"""Semantic exception hierarchy.

Public functions never raise bare ValueError/RuntimeError; every failure mode
has a named class so callers (and the CLI exit-code mapping) can distinguish
bad inputs from numerical breakdowns.
"""


class RiskPremiaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RiskPremiaError, ValueError):
    """A function spec string, JSON object, or data file could not be parsed."""


class DomainError(RiskPremiaError, ValueError):
    """An argument lies outside the domain on which the operation is defined."""


class RangeError(RiskPremiaError, ValueError):
    """A target value lies outside the range of the function being inverted."""


class MonotonicityError(RiskPremiaError, ValueError):
    """Construction parameters violate strict monotonicity (U' > 0 or h' > 0)."""


class ConcavityError(RiskPremiaError, ValueError):
    """A concave transform's parameters do not give T'' < 0 on (0, 1)."""


class DegenerateError(RiskPremiaError, ArithmeticError):
    """A closed-form solution degenerates (vanishing denominator bracket)."""


class InfeasibleError(RiskPremiaError, ArithmeticError):
    """A probability premium leaves its admissible shift band."""


class BracketError(RiskPremiaError, ValueError):
    """A root bracket does not straddle a sign change."""


class MaxIterError(RiskPremiaError, RuntimeError):
    """Root refinement hit the iteration cap before reaching tolerance."""


class GridError(RiskPremiaError, ValueError):
    """A comparison grid is empty or otherwise unusable."""
