"""Kernel backend selection.

The compiled extension is preferred when importable; set the environment
variable ``RELUDIST_PURE=1`` before import to force the pure-numpy fallback
(used by the backend-parity tests and the benchmark). Both backends expose
``gaussian_entries(seed, m, n)`` and ``pair_trial(seed, m, x, y)``.
"""

from __future__ import annotations

import os

if os.environ.get("RELUDIST_PURE") == "1":
    from . import _pykernels as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

BACKEND_NAME: str = _impl.BACKEND_NAME
gaussian_entries = _impl.gaussian_entries
pair_trial = _impl.pair_trial
