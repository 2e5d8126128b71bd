"""Exception hierarchy.

Every error carries a stable ``name`` attribute; the CLI prints it on stderr.
"""


class SkewError(Exception):
    """Base class for all mathematical failures raised by the kernel."""

    @property
    def name(self):
        return type(self).__name__


class DescriptorMismatch(SkewError):
    pass


class NotAUnit(SkewError):
    pass


class NoUniformiser(SkewError):
    pass


class PrecisionError(SkewError):
    """Raised when a computation cannot be certified at the requested level."""


class ShapeMismatch(SkewError):
    pass


class TwistMismatch(SkewError):
    pass


class ValueTooLow(SkewError):
    pass


class HypothesisViolated(SkewError):
    pass


class OrbitNotClosed(SkewError):
    pass


class NotInvertible(SkewError):
    pass


class NotCompatible(SkewError):
    pass


class NotSolvable(SkewError):
    pass


class InsufficientPrecision(SkewError):
    pass


class ReducedDegreeTooHigh(SkewError):
    pass


class UnknownSuite(SkewError):
    pass


class ParseError(Exception):
    """Malformed literal or expression; ``pos`` is a 0-based character offset."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos
