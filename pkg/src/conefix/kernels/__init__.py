"""Pair-evaluation kernels with a compiled core and a pure-numpy fallback.

The backend is picked once at import time: the compiled extension when it
built, the numpy fallback otherwise.  Set CONEFIX_BACKEND=python to force
the fallback or CONEFIX_BACKEND=compiled to fail loudly when the extension
is missing.  Both implement the same contract (see _fallback's docstring)
and agree bit for bit; ``BACKEND`` names the active one.
"""

import os

from . import _fallback

N_FAMILIES = _fallback.N_FAMILIES
DISJUNCTIVE = _fallback.DISJUNCTIVE
SINGLE_PARAM_FIT = _fallback.SINGLE_PARAM_FIT

_requested = os.environ.get("CONEFIX_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise ValueError(
        f"CONEFIX_BACKEND must be 'compiled' or 'python', not {_requested!r}"
    )

if _requested == "python":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _fallback
        BACKEND = "python"

condition_slacks = _impl.condition_slacks
minimal_ratios = _impl.minimal_ratios
