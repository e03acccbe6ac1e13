"""Exception taxonomy shared across the package.

Two families matter for callers: misuse of the API (bad charts, off-surface
samples, malformed configs; CLI exit code 2) and numeric-domain failures
(non-finite values, excluded regions, blow-ups, and in particular degeneracy
of the constraint pairing matrix; CLI exit code 3).
"""

from __future__ import annotations


class DiracMechError(Exception):
    """Base class for everything raised deliberately by this package."""


class UsageError(DiracMechError, ValueError):
    """The caller violated a precondition (chart mismatch, bad arguments)."""


class ChartMismatchError(UsageError):
    """Fields and points passed to one operation live on different charts."""


class ConfigError(UsageError):
    """A scenario configuration failed schema validation or is inconsistent."""


class NumericDomainError(DiracMechError, ArithmeticError):
    """A value left the numeric domain (NaN/Inf, excluded region, blow-up)."""


class DegeneracyError(NumericDomainError):
    """The constraint pairing matrix is singular where it must be invertible.

    Carries the offending determinant and coordinates; flows attach the
    trajectory computed so far under ``partial_trajectory``.
    """

    def __init__(self, message, *, det=None, coords=None, partial_trajectory=None):
        super().__init__(message)
        self.det = det
        self.coords = coords
        self.partial_trajectory = partial_trajectory
