"""Exception types raised across the package."""


class RamcyclesError(Exception):
    """Base class for all package errors."""


class NotPrime(RamcyclesError, ValueError):
    pass


class ReducibleModulus(RamcyclesError, ValueError):
    pass


class NoDefaultModulus(RamcyclesError, ValueError):
    pass


class ZeroElement(RamcyclesError, ZeroDivisionError):
    pass


class FieldMismatch(RamcyclesError, TypeError):
    pass


class NonzeroConstantInner(RamcyclesError, ValueError):
    pass


class NotInvertible(RamcyclesError, ValueError):
    pass


class TruncationTooSmall(RamcyclesError):
    pass


class CharMismatch(RamcyclesError, ValueError):
    pass


class ResitUndefined(RamcyclesError, ValueError):
    pass


class IndeterminateValuation(RamcyclesError):
    pass


class IndeterminatePolygon(RamcyclesError):
    pass


class DegreeCeiling(RamcyclesError):
    pass


class OrderMismatch(RamcyclesError, ValueError):
    """A user-supplied order q disagrees with the computed one."""


class ParseError(RamcyclesError, ValueError):
    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            message = f"{message}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)
