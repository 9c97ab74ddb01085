"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid input -> 2, accuracy
contract breaches -> 3.
"""


class StringResonanceError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(StringResonanceError, ValueError):
    """An argument violates a documented precondition."""


class BracketError(StringResonanceError):
    """A root bracket does not enclose a sign change."""


class AccuracyError(StringResonanceError):
    """A numerical result failed its accuracy contract (mesh too coarse,
    discretized basis too incomplete, unresolved phase curve)."""


class NoResonanceError(StringResonanceError):
    """No real resonance angle exists for the requested (E, n, m)."""
