"""Kernel backend selection.

The compiled Cython extension is preferred; the NumPy reference
implementation is the fallback. Setting FRACSPACE_PURE=1 in the
environment forces the reference backend (useful for debugging and for
benchmarking one against the other).
"""
import os

from . import _ref

if os.environ.get("FRACSPACE_PURE"):
    _impl = _ref
    BACKEND = "reference"
else:
    try:
        from . import _fast as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _ref
        BACKEND = "reference"

k2_batch = _impl.k2_batch

__all__ = ["k2_batch", "BACKEND"]
