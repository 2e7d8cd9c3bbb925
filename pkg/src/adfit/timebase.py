"""Millisecond time grid.

All interval geometry in the engine runs on integer milliseconds so that
comparisons are exact; public dataclasses keep seconds as floats snapped
to this grid.
"""

MS = 1000


def ms(seconds: float) -> int:
    """Quantize a time in seconds to integer milliseconds."""
    return int(round(seconds * MS))


def sec(milliseconds: int) -> float:
    return milliseconds / MS


def snap(seconds: float) -> float:
    """Snap a float time onto the 1 ms grid."""
    return ms(seconds) / MS
