"""Kernel backend selection.

Imports the compiled extension when it has been built, otherwise falls
back to the pure-numpy implementation.  Set SOFTFOCUS_FORCE_FALLBACK=1 to
force the numpy path (used by the benchmark and the parity tests).
"""

import os

from . import numpy_impl

if os.environ.get("SOFTFOCUS_FORCE_FALLBACK"):
    _impl = numpy_impl
    BACKEND = "numpy"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        _impl = numpy_impl
        BACKEND = "numpy"

rasterize_potential_grid = _impl.rasterize_potential_grid
gaussian_max_grid = _impl.gaussian_max_grid
weiszfeld_batch = _impl.weiszfeld_batch

__all__ = [
    "BACKEND",
    "rasterize_potential_grid",
    "gaussian_max_grid",
    "weiszfeld_batch",
    "numpy_impl",
]
