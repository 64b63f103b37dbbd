"""Shared exception types."""


class GroupMismatchError(ValueError):
    """Operands belong to different groups."""


class WindowExceededError(ValueError):
    """A membership query fell outside the region a set is defined on."""


class CapExceededError(RuntimeError):
    """A configured resource cap (cylinder count, window size) was hit."""


class ConfigError(ValueError):
    """Experiment configuration failed to parse or validate."""


class NoConvergentSubsequenceError(RuntimeError):
    """No subsequence of the schedule meets the oscillation tolerance."""
