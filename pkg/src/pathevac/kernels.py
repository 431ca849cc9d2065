"""Kernel selection: compiled extension when built, pure Python otherwise.

PATHEVAC_PURE=1 forces the pure-Python kernel even when the extension is
available (used by the backend benchmark and the parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("PATHEVAC_PURE") == "1":
    from . import _dppure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _dpcore as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _dppure as _impl
        BACKEND = "pure"

solve_packing_dp = _impl.solve_packing_dp


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return BACKEND
