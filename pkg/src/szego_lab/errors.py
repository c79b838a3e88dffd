"""Exception and warning types shared across the package."""

from __future__ import annotations


class SzegoLabError(Exception):
    """Base class for all package errors."""


class NonConvergence(SzegoLabError):
    """An iterative procedure failed to reach its tolerance."""


class IllConditioned(SzegoLabError):
    """A linear system is too ill-conditioned to solve reliably."""


class ConsistencyFailure(SzegoLabError):
    """Two independent routes to the same quantity disagree."""


class ExponentMismatch(SzegoLabError, ValueError):
    """Exponents do not satisfy the required Hoelder relation."""


class ConfigError(SzegoLabError, ValueError):
    """Malformed experiment configuration; ``key`` names the offending field."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class TruncationWarning(UserWarning):
    """Fourier tail of log W is not negligible at the chosen order."""
