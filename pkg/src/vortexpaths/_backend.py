"""Pick the kernel implementation at import time.

The compiled extension is used when it is importable, unless the
environment variable ``VORTEXPATHS_PURE_PYTHON`` is set to a non-empty
value other than ``0``.
"""

import os

from . import _pykernels


def _select():
    flag = os.environ.get("VORTEXPATHS_PURE_PYTHON", "")
    if flag and flag != "0":
        return _pykernels
    try:
        from . import _kernels
    except ImportError:
        return _pykernels
    return _kernels


kernels = _select()
BACKEND = kernels.NAME


def available_backends():
    """Return ``{name: module}`` for every importable implementation."""
    out = {_pykernels.NAME: _pykernels}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out[_kernels.NAME] = _kernels
    return out
