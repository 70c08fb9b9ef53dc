"""Tick-kernel backend selection: compiled extension when available,
pure-Python twin otherwise. Both produce bit-identical states (integer-only
dynamics); set HIERRTS_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import reference

if os.environ.get("HIERRTS_PURE_PYTHON", "") == "1":
    sim_tick = reference.sim_tick
    BACKEND = "python"
else:
    try:
        from ._fastcore import sim_tick  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        sim_tick = reference.sim_tick
        BACKEND = "python"

__all__ = ["sim_tick", "BACKEND", "reference"]
