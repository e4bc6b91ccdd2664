"""Numeric backend selection.

Hot kernels ship in two flavours: numba ``@njit`` implementations and pure
numpy fallbacks. The active backend is chosen once at import time from the
``NOMTAX_BACKEND`` environment variable:

* ``auto`` (default) — use numba when it imports cleanly, else numpy;
* ``numba``          — require numba, raise if unavailable;
* ``numpy``          — force the pure-numpy path.

The chosen backend is recorded in run manifests because the two paths may
differ in float summation order at the last ulp.
"""

from __future__ import annotations

import os

_ENV_VAR = "NOMTAX_BACKEND"

_requested = os.environ.get(_ENV_VAR, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"{_ENV_VAR} must be one of auto/numba/numpy, got {_requested!r}"
    )

_numba_error: Exception | None = None
if _requested in ("auto", "numba"):
    try:
        import numba  # noqa: F401

        BACKEND = "numba"
    except Exception as exc:  # pragma: no cover - env dependent
        _numba_error = exc
        BACKEND = "numpy"
else:
    BACKEND = "numpy"

if _requested == "numba" and BACKEND != "numba":  # pragma: no cover
    raise RuntimeError(f"{_ENV_VAR}=numba but numba failed to import: {_numba_error}")


def active_backend() -> str:
    """Name of the kernel backend in use ('numba' or 'numpy')."""
    return BACKEND
