class InvalidInputError(ValueError):
    """Non-finite or out-of-domain argument."""


class AddressError(ValueError):
    """Address code or cell coordinate outside the 64x64 array."""


class CalibrationError(RuntimeError):
    """A calibration search did not meet its target."""
