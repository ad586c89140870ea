"""Exception types shared across the package."""


class HarbenchError(Exception):
    """Base class for every error raised by harbench."""


# --- data errors -----------------------------------------------------------

class MalformedLineError(HarbenchError):
    """A raw data line with the wrong field count or an unparseable value."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class EmptyFileError(HarbenchError):
    """A subject file contained no samples."""


class CacheFormatError(HarbenchError):
    """A cache or checkpoint file failed its header or size checks."""


class InsufficientSubjectsError(HarbenchError):
    """Fewer than two eligible subjects; cross-validation is impossible."""


class EmptyInputError(HarbenchError):
    """An operation that needs at least one window received none."""


class ChannelMismatchError(HarbenchError):
    """Channel count of the input does not match the fitted/expected count."""


class LeakageError(HarbenchError):
    """A subject appears on both sides of a train/validation split."""


# --- numerical errors ------------------------------------------------------

class ShapeMismatchError(HarbenchError):
    """Array shapes are inconsistent with the network architecture."""


class NonFiniteInputError(HarbenchError):
    """An input batch contains NaN or infinite values."""


class UnsupportedModalityError(HarbenchError):
    """Requested input channel count is not one of the supported modalities."""


class NonFiniteGradientError(HarbenchError):
    """A gradient contains NaN or infinite values."""


class DivergedLossError(HarbenchError):
    """The validation loss became non-finite during training."""


# --- configuration errors --------------------------------------------------

class UnknownKeyError(HarbenchError):
    """A configuration file contains a key this package does not define."""

    def __init__(self, key: str):
        super().__init__(f"unknown configuration key '{key}'")
        self.key = key


class InvalidValueError(HarbenchError):
    """A configuration value failed to parse or violates its constraints."""

    def __init__(self, key: str, reason: str = ""):
        msg = f"invalid value for '{key}'"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.key = key
