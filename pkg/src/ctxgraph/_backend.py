"""Select the graph-kernel backend at import time.

The compiled ``_core`` extension is used when it imports; otherwise, or when
the environment variable ``CTX_PURE_PYTHON`` is set to a non-empty value, the
pure-Python ``_pycore`` is used.  Both expose the same functions.
"""

import os

if os.environ.get("CTX_PURE_PYTHON"):
    from . import _pycore as kernels

    BACKEND = "python"
else:
    try:
        from . import _core as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pycore as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
