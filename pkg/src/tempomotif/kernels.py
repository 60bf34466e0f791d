"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when
``TEMPOMOTIF_PURE_PYTHON=1`` is set, the pure-Python twin is used.
Both backends return identical results for identical inputs.
"""

import os

from . import _kernels_py

if os.environ.get("TEMPOMOTIF_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
count_from_edge = _impl.count_from_edge
wedge_sum = _impl.wedge_sum


def backends():
    """Available backend modules keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
