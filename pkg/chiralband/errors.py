# Exceptions raised by chiralband
#
# Every error derives from ChiralbandError and from the closest builtin,
# so callers can catch either. Overflow in exact integer arithmetic uses
# the builtin OverflowError directly.


class ChiralbandError(Exception):
    """Base class for all chiralband errors"""


class RankDeficient(ChiralbandError, ValueError):
    """Rows of an integer matrix are linearly dependent over the rationals"""


class NotPrimitive(ChiralbandError, ValueError):
    """The chiral set cannot be completed to a lattice basis"""


class NotHermitian(ChiralbandError, ValueError):
    pass


class NotPositiveDefinite(ChiralbandError, ValueError):
    pass


class BandTouching(ChiralbandError, ValueError):
    """A band function is not isolated from its neighbours at a point,
    so its Hessian is undefined there"""


class GridTooLarge(ChiralbandError, ValueError):
    pass


class EmptyLevelSet(ChiralbandError, ValueError):
    """A band edge has no level-set representatives, so no verdict can
    be reached for it"""


class WrongShape(ChiralbandError, ValueError):
    pass


class ParseError(ChiralbandError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ValidationError(ChiralbandError, ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ConfigError(ChiralbandError, ValueError):
    pass


class UsageError(ChiralbandError, ValueError):
    """Malformed command-line argument"""
