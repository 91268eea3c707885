"""Exception types raised by the library."""

from __future__ import annotations


class SalpeterLabError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(SalpeterLabError, ValueError):
    pass


class DomainTooSmallError(SalpeterLabError, ValueError):
    """The periodic box does not leave enough margin around the profile support."""


class AccuracyError(SalpeterLabError, RuntimeError):
    """A quadrature did not reach the requested accuracy.

    ``achieved`` is the error estimate returned by the integrator and
    ``requested`` the tolerance it was asked to meet.
    """

    def __init__(self, message: str, achieved: float, requested: float):
        super().__init__(f"{message} (achieved error {achieved:.3e}, requested {requested:.3e})")
        self.achieved = achieved
        self.requested = requested


class BoundNotVerifiedError(SalpeterLabError):
    """A decay bound could not be confirmed on the sampled range."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
