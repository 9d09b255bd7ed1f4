"""Statevector kernel backend, selected once at import.

The compiled extension is used when present; otherwise the numpy fallback.
Set ``SABLAB_PURE_PYTHON=1`` to force the fallback.  ``backend`` names the
active implementation, and ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import _pykernels

_impl = None
if os.environ.get("SABLAB_PURE_PYTHON", "0") != "1":
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None
if _impl is None:
    _impl = _pykernels
    backend = "python"
else:
    backend = "compiled"

apply_block = _impl.apply_block
permute_rows = _impl.permute_rows

__all__ = ["apply_block", "permute_rows", "backend"]
