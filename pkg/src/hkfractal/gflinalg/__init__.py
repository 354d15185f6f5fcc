"""Rank kernels over F_p with a compiled fast path.

The compiled extension is preferred when importable; set HKFRACTAL_PURE=1 in
the environment to force the NumPy fallback. Both expose the same two
functions and agree exactly (see tests), differing only in speed.
"""

from __future__ import annotations

import os

if os.environ.get("HKFRACTAL_PURE"):
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "speedups"
    except ImportError:
        from . import pure as _impl

        BACKEND = "pure"

gf2_rank = _impl.gf2_rank
gfp_rank = _impl.gfp_rank


def backend_name() -> str:
    return BACKEND


__all__ = ["gf2_rank", "gfp_rank", "backend_name", "BACKEND"]
