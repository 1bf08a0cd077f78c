"""Kernel backend selection.

The compiled extension ``alphanorm._kernels`` is preferred; the pure-Python
twin ``alphanorm._kernels_py`` is the fallback.  Set ``ALPHANORM_BACKEND`` to
``compiled`` or ``python`` to force a choice (forcing ``compiled`` raises if
the extension is unavailable).  Both twins expose the same API and stream
layout, so results agree to floating-point noise and RNG output is
bit-identical.
"""

from __future__ import annotations

import os

_choice = os.environ.get("ALPHANORM_BACKEND", "").strip().lower()

if _choice not in ("", "compiled", "python"):
    raise ImportError(
        f"ALPHANORM_BACKEND must be 'compiled' or 'python', got {_choice!r}")

if _choice == "python":
    from alphanorm import _kernels_py as kernels
else:
    try:
        from alphanorm import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        from alphanorm import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND: str = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
