"""Exception types raised across the package."""


class DrinfeldError(Exception):
    """Base class for every error raised by this package."""


class InversionOfApparentZero(DrinfeldError):
    """A series with no known nonzero digit was inverted."""


class ZeroDenominator(DrinfeldError):
    pass


class ZeroInput(DrinfeldError):
    pass


class DivisionByZero(DrinfeldError):
    pass


class InsufficientPrecision(DrinfeldError):
    pass


class WindowTooNarrow(DrinfeldError):
    pass


class CapExceeded(DrinfeldError):
    """A configured size limit (field size, tree radius, ...) was exceeded."""


class OracleFailure(DrinfeldError):
    pass


class NonStabilizing(DrinfeldError):
    """Riemann sums stopped gaining precision as the level grew."""


class UnsupportedEdgeExponent(DrinfeldError):
    pass


class UnsupportedAdmissibility(DrinfeldError):
    pass
