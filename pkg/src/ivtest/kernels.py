"""Select the kernel backend at import time.

The compiled ``_speedups`` extension is used when it was built; otherwise
the pure-Python module.  Setting ``IVTEST_PURE_PYTHON=1`` forces the
fallback.
"""

import os

from . import _purepy

BACKEND = "python"
_impl = _purepy

if not os.environ.get("IVTEST_PURE_PYTHON"):
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _purepy

pivot_update = _impl.pivot_update
sparse_column = _impl.sparse_column
price = _impl.price
ratio_test = _impl.ratio_test
dd_add_row = _impl.dd_add_row
phase_one = _impl.phase_one


def backends() -> dict:
    """All importable backends by name, for tests and benchmarks."""
    out = {"python": _purepy}
    try:
        from . import _speedups

        out["cython"] = _speedups
    except ImportError:
        pass
    return out
