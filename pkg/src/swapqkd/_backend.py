"""Kernel selection.

The compiled kernels are used when the extension was built; setting
``SWAPQKD_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

if os.environ.get("SWAPQKD_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
