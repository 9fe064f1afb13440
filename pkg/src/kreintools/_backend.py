"""Select the compiled region kernels when available.

Set ``KREINTOOLS_PURE=1`` to force the numpy implementation.
"""

import os

from . import _kernels_py

kernels = _kernels_py
NAME = "python"

if os.environ.get("KREINTOOLS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        NAME = "cython"


def get(name: str):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels as compiled

        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")
