"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Mode index or mode count does not fit the state it is applied to."""


class ZeroStateError(ArithmeticError):
    """A state has (numerically) vanishing norm and cannot be normalized."""


class DegenerateMeasurementError(ArithmeticError):
    """A heralding measurement is undefined for the given parameters."""


class TruncationWarning(UserWarning):
    """Photon-number truncation discards more weight than the configured bound."""
