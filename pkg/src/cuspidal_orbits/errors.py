"""Exception hierarchy shared by every module."""


class Error(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(Error, ValueError):
    pass


class MixedNeedsPrimeField(Error, ValueError):
    pass


class BadModulus(Error, ValueError):
    pass


class NonUnit(Error, ArithmeticError):
    pass


class InsufficientPrecision(Error, ArithmeticError):
    """An answer depends on digits that were never computed."""


class PrecisionTooLow(InsufficientPrecision):
    pass


class DimensionTooLarge(Error, ValueError):
    pass


class NotFound(Error, LookupError):
    pass


class NotInNormalizer(Error, ValueError):
    pass


class ScalarEquivalent(Error, ValueError):
    pass


class InconclusiveFieldData(Error):
    pass


class NotSimple(Error, ValueError):
    pass


class NotInSubgroup(Error, ValueError):
    pass


class SizeGuard(Error, RuntimeError):
    """A requested enumeration exceeds the configured size bound."""


class NotAGroup(Error, ValueError):
    pass


class DomainMismatch(Error, ValueError):
    pass


class NotDivisible(Error, ArithmeticError):
    pass
