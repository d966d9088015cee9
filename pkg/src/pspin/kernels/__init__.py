"""Backend selection for the hot kernels.

The numba backend is used when available; set PSPIN_NO_NUMBA=1 to force the
pure-numpy path (same contracts, no JIT).  ``BACKEND`` names the active one.
"""

import os

_NAMES = [
    "popcount_words",
    "hamming_words",
    "overlaps",
    "abs_pow_sum",
    "delta_raw",
    "delta_raw_all",
    "sweep_flips",
    "best_flip",
    "all_states_lm_mask",
    "all_states_ground",
    "scan_swaps_max",
    "scan_swaps_lm",
    "batch_abs_pow_sums",
]


def _want_numpy():
    return os.environ.get("PSPIN_NO_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )


if _want_numpy():
    from . import _numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # numba not installed
        from . import _numpy as _impl

        BACKEND = "numpy"

globals().update({name: getattr(_impl, name) for name in _NAMES})

__all__ = _NAMES + ["BACKEND"]
