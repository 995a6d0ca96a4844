"""Pure-numpy implementations of the hot kernels.

Fallback for environments where the compiled extension is unavailable.
Semantics match ``reludist._kernels``; numerical results agree with the
compiled kernels to relative 1e-12 (numpy uses pairwise/BLAS summation
where the compiled loop sums strictly left to right).
"""

from __future__ import annotations

import math

import numpy as np

from . import rng

BACKEND_NAME = "pure-python"


def gaussian_entries(seed: int, m: int, n: int) -> np.ndarray:
    """m x n matrix with i.i.d. N(0, 1/m) entries, counter-based on (seed, i, j)."""
    rows = np.arange(m, dtype=np.uint64)
    cols = np.arange(n, dtype=np.uint64)
    words = rng.entry_words(seed, rows, cols)
    scale = 1.0 / math.sqrt(m)
    return rng.inv_phi(((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53) * scale


def pair_trial(seed: int, m: int, x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """One realization of the layer applied to the pair (x, y).

    Returns (||rho(Mx) - rho(My)||^2, rho(Mx).rho(My), ||rho(Mx)||^2,
    ||rho(My)||^2). Columns where both x and y vanish contribute nothing to
    the row dot products and are skipped; the counter-based generator makes
    the skipped computation identical to the dense one.
    """
    active = np.flatnonzero((x != 0.0) | (y != 0.0))
    if active.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    rows = np.arange(m, dtype=np.uint64)
    words = rng.entry_words(seed, rows, active.astype(np.uint64))
    scale = 1.0 / math.sqrt(m)
    ent = rng.inv_phi(((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53) * scale
    a = ent @ x[active]
    b = ent @ y[active]
    ra = np.maximum(a, 0.0)
    rb = np.maximum(b, 0.0)
    d = ra - rb
    return float(d @ d), float(ra @ rb), float(ra @ ra), float(rb @ rb)
