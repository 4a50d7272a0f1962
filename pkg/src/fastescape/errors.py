"""Shared exception types."""


class RangeError(Exception):
    """An evaluator was asked for a value beyond its representable or certified range.

    Orbit drivers catch this and mark the orbit range-truncated instead of
    fabricating a value.
    """


class ThresholdNotFound(ValueError):
    """No admissible threshold point was found inside the search window."""
