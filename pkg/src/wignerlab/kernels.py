"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set WIGNERLAB_PURE=1 to
force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("WIGNERLAB_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
lhv_margins = _impl.lhv_margins
spin_margins = _impl.spin_margins
spin_grid_argmax = _impl.spin_grid_argmax
ratio_violation_count = _impl.ratio_violation_count

__all__ = [
    "BACKEND",
    "lhv_margins",
    "spin_margins",
    "spin_grid_argmax",
    "ratio_violation_count",
]
