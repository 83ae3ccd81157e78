"""Kernel backend selection.

At import time the compiled extension is preferred; the NumPy fallback is
used when the extension is missing or when ``AUTOVIZ_FORCE_PY_KERNELS`` is
set (the benchmark uses this to time both backends in one process).
"""

from __future__ import annotations

import os

from autoviz import _kernels_py

BACKEND = "python"
kde_gaussian = _kernels_py.kde_gaussian
masked_distances = _kernels_py.masked_distances

if not os.environ.get("AUTOVIZ_FORCE_PY_KERNELS"):
    try:
        from autoviz import _ckernels

        BACKEND = "compiled"
        kde_gaussian = _ckernels.kde_gaussian
        masked_distances = _ckernels.masked_distances
    except ImportError:
        pass
