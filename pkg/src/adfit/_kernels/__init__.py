"""Placement-sweep kernel selection.

The compiled Cython kernel is preferred when built; the numpy fallback
is bit-for-bit equivalent. Set ADFIT_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the parity tests).
"""
import os

from .sweep_py import INF_UNITS, backward_sweep as _sweep_py

if os.environ.get("ADFIT_PURE_PYTHON"):
    backward_sweep = _sweep_py
    BACKEND = "python"
else:
    try:
        from ._sweep_cy import backward_sweep  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        backward_sweep = _sweep_py
        BACKEND = "python"

backward_sweep_py = _sweep_py

__all__ = ["backward_sweep", "backward_sweep_py", "BACKEND", "INF_UNITS"]
