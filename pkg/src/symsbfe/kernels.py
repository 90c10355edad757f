"""Kernel backend selection.

The compiled extension is used when it imports; set ``SYMSBFE_PURE_PYTHON=1``
to force the fallback.  Both backends expose the same four functions.
"""
import os

from . import _kernels_py

if os.environ.get("SYMSBFE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"

ones_distribution = _impl.ones_distribution
class_weight = _impl.class_weight
solve = _impl.solve
evaluate_policy = _impl.evaluate_policy

__all__ = ["BACKEND", "ones_distribution", "class_weight", "solve", "evaluate_policy"]
