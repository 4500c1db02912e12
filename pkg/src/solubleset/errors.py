"""Exception types shared across the package."""


class SolubleSetError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatch(SolubleSetError):
    pass


class CapExceeded(SolubleSetError):
    pass


class NotEnumerated(SolubleSetError):
    pass


class NotSubgroup(SolubleSetError):
    pass


class NotPrime(SolubleSetError):
    pass


class NotSoluble(SolubleSetError):
    """Raised with the offending subtree when a solubility proof cannot be built."""


class NotFound(SolubleSetError):
    """No sub-isometry exists at the requested scale."""


class CollinearPoints(SolubleSetError):
    pass


class NotDivisible(SolubleSetError):
    pass


class UnsupportedShape(SolubleSetError):
    pass


class RatioOutOfRange(SolubleSetError):
    """Two-orbit hypothesis violated: wrong orbit count or ratio not in {1, 2}."""


class QTooSmall(SolubleSetError):
    pass


class BadTarget(SolubleSetError):
    pass


class NotSubpattern(SolubleSetError):
    pass


class NotIsoscelesTrapezium(SolubleSetError):
    pass


class DegenerateInput(SolubleSetError):
    pass


class BisectionFailed(SolubleSetError):
    pass


class ScaleMismatch(SolubleSetError):
    pass


class ScalarKindMismatch(SolubleSetError):
    pass


class SchemaError(SolubleSetError):
    """Malformed certificate JSON; carries the path of the offending node."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message
