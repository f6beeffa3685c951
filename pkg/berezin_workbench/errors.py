"""
Exception types raised by the workbench.
"""

from typing import Optional


class WorkbenchError(Exception):
    """Base class of every error the workbench raises on purpose."""


class HermitianError(WorkbenchError, ValueError):
    """An operation that needs a Hermitian matrix received one that is not."""


class DimensionCapError(WorkbenchError):
    """A matrix (or a matrix about to be built) exceeds the dimension cap."""


class SiteMismatchError(WorkbenchError, ValueError):
    """Two polynomials, or a polynomial and its arguments, disagree on the site count."""


class PolynomialSyntaxError(WorkbenchError, ValueError):
    """Polynomial text that does not follow the grammar."""

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class SiteIndexError(PolynomialSyntaxError):
    """A variable names a site outside 1..sites."""


class ExponentOverflowError(PolynomialSyntaxError):
    """An exponent above the parser's cap."""


class ContourError(WorkbenchError, ValueError):
    """A resolvent contour that is invalid or touches a spectrum."""


class FactorizationError(WorkbenchError, ArithmeticError):
    """A product state failed to factorize on elementary tensors."""


class FitError(WorkbenchError, ValueError):
    """A rate fit was asked for on data it cannot fit."""


class ConfigError(WorkbenchError, ValueError):
    """An invalid run configuration."""
