"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise, or
when ``FRACSCATTER_PURE_PYTHON`` is set to a non-empty value other than
``0``, the numpy implementation in ``_pykernels`` is used. Both expose the
same four functions.
"""
from __future__ import annotations

import os

from . import _pykernels

_force_pure = os.environ.get("FRACSCATTER_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels
        BACKEND = "python"

barrier_log_observables = _impl.barrier_log_observables
delta_log_observables = _impl.delta_log_observables
golden_barrier = _impl.golden_barrier
golden_delta = _impl.golden_delta
golden_section = _pykernels.golden_section

# rows of every observable block
ROW_R, ROW_T, ROW_M22, ROW_C = 0, 1, 2, 3


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
