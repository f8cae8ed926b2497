"""Select the compiled kernels when available, else the pure-Python ones.

Set ``KNOTFACTOR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
adjacent_pairs = _kernels_py.adjacent_pairs

if not os.environ.get("KNOTFACTOR_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        adjacent_pairs = _compiled.adjacent_pairs
        BACKEND = "cython"
