"""Exception hierarchy shared across the package.

Every error raised by the library derives from :class:`CmatError` so callers
can catch one base type; the CLI maps subtypes onto exit codes.
"""

from __future__ import annotations


class CmatError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(CmatError, ValueError):
    """A physical or numerical parameter is out of its valid domain."""


class UndefinedCooperativityError(CmatError):
    """Cooperativity C = g**2 / (2*kappa*gamma) queried with a zero decay rate."""


class DegenerateStateError(CmatError):
    """A closed-form state is undefined because its normalization vanishes."""


class SingularGapError(CmatError):
    """The adiabatic gap |omega_1| is zero, so the coupling ratio diverges."""


class IntegrationError(CmatError):
    """Time integration failed or violated an internal consistency check.

    Attributes
    ----------
    last_t : float or None
        Last time reached before the failure, when known.
    """

    def __init__(self, message: str, last_t: float | None = None):
        super().__init__(message)
        self.last_t = last_t


class ConfigError(CmatError):
    """A run configuration is malformed.  Carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
