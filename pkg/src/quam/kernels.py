"""Kernel backend selection.

The compiled Cython extension is used when it has been built; otherwise the
numpy fallback is imported. Set ``QUAM_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("QUAM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

controlled_swap = _impl.controlled_swap
controlled_unitary = _impl.controlled_unitary
negate = _impl.negate
diffuse = _impl.diffuse

BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl
else:
    try:
        from . import _kernels as _compiled

        BACKENDS["cython"] = _compiled
    except ImportError:
        pass
