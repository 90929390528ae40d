"""Hot loops, each in two interchangeable implementations.

``numba_impl`` holds ``@njit`` versions and ``numpy_impl`` vectorised
fallbacks with identical signatures.  The active backend is chosen once at
import time: numba when importable, unless ``IAS_NUMBA=0`` is set.
``IAS_THREADS`` caps numba's worker count (0 or unset = numba's default).
"""

import os

from . import numpy_impl

__all__ = ["backend", "rk4_riccati", "local_hessian_det", "marching_segments",
           "numpy_impl", "numba_impl", "HAVE_NUMBA"]

try:
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # OpenMP is safe for concurrent callers and avoids the TBB version probe
        numba.config.THREADING_LAYER = "omp"
    from . import numba_impl
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None
    HAVE_NUMBA = False

_want = os.environ.get("IAS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
backend = numba_impl if (HAVE_NUMBA and _want) else numpy_impl

if HAVE_NUMBA and backend is numba_impl:
    _threads = int(os.environ.get("IAS_THREADS", "0") or 0)
    if _threads > 0:
        numba.set_num_threads(min(_threads, numba.config.NUMBA_NUM_THREADS))

rk4_riccati = backend.rk4_riccati
local_hessian_det = backend.local_hessian_det
marching_segments = backend.marching_segments
