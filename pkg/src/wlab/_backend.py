"""Pick the compiled kernels when available, numpy otherwise.

Set WLAB_BACKEND=python to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("WLAB_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _ck

        kernels = _ck
        BACKEND = "cython"
    except ImportError:
        pass
