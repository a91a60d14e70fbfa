"""Backend selection for the separation kernel.

The compiled extension is used when it imports and the graph fits in 64
nodes; otherwise the pure-Python module runs.  Setting ``CGMEEK_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _kernel_py

_compiled = None
if os.environ.get("CGMEEK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _pick(n):
    if _compiled is not None and n <= 64:
        return _compiled
    return _kernel_py


def reach_separated(und, ch, pa, xmask, ymask, zmask):
    return _pick(len(und)).reach_separated(und, ch, pa, xmask, ymask, zmask)


def separated_pairs(und, ch, pa):
    return _pick(len(und)).separated_pairs(und, ch, pa)
