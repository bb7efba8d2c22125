"""Select the kernel core: compiled extension if importable, else numpy.

Set ``ULAMC_PURE_PYTHON=1`` to force the numpy implementation.
"""
import os

from . import _pykernels

pure = _pykernels

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is None or os.environ.get("ULAMC_PURE_PYTHON", "").strip() not in ("", "0"):
    core = _pykernels
else:
    core = compiled

NAME = core.NAME
