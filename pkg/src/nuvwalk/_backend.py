"""Kernel backend selection.

Prefers the compiled extension; falls back to the NumPy implementation when
the extension is missing or ``NUVWALK_PURE=1`` is set.  Both backends expose
the same functions and produce bit-identical results (see tests/test_backends).
"""

from __future__ import annotations

import os

if os.environ.get("NUVWALK_PURE") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name() -> str:
    """Either "compiled" (Cython extension) or "python" (NumPy fallback)."""
    return kernels.BACKEND
