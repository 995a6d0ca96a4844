"""Random Gaussian layers and the ReLU forward map.

A layer is an m x n matrix with i.i.d. N(0, 1/m) entries regenerated
deterministically from its seed (see ``reludist.rng`` for the generator).
Layers and stacks are immutable and safe to share across threads.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import backend
from .errors import DimensionMismatch, SizeOverflow

#: Maximum number of matrix elements a single layer may hold.
ELEMENT_CAP = 2 ** 28

_MAGIC = b"RLDLAYER"


@dataclass(frozen=True)
class GaussianLayer:
    rows_m: int
    cols_n: int
    entries: np.ndarray
    seed: int

    def __post_init__(self):
        if self.entries.shape != (self.rows_m, self.cols_n):
            raise DimensionMismatch(
                f"entries shape {self.entries.shape} != ({self.rows_m}, {self.cols_n})"
            )
        self.entries.setflags(write=False)


def sample_layer(n: int, m: int, seed: int) -> GaussianLayer:
    """Sample an m x n layer; entry (i, j) depends only on (seed, i, j, m)."""
    if n < 1 or m < 1:
        raise DimensionMismatch("layer dimensions must be >= 1")
    if m * n > ELEMENT_CAP:
        raise SizeOverflow(f"{m}x{n} exceeds the element cap {ELEMENT_CAP}")
    return GaussianLayer(rows_m=m, cols_n=n, entries=backend.gaussian_entries(seed, m, n), seed=seed)


def relu_forward(layer: GaussianLayer, x: np.ndarray) -> np.ndarray:
    """rho(Mx) with rho(t) = max(t, 0) entrywise."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (layer.cols_n,):
        raise DimensionMismatch(f"input dim {x.shape} != ({layer.cols_n},)")
    return np.maximum(layer.entries @ x, 0.0)


def sq_dist_realization(layer: GaussianLayer, x: np.ndarray, y: np.ndarray) -> float:
    """||rho(Mx) - rho(My)||^2 summed left to right over rows i = 1..m."""
    d = relu_forward(layer, x) - relu_forward(layer, y)
    total = 0.0
    for v in d:
        total += v * v
    return total


@dataclass(frozen=True)
class LayerStack:
    """Ordered composition of layers; the empty stack acts as the identity."""

    layers: tuple[GaussianLayer, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for k in range(1, len(self.layers)):
            if self.layers[k].cols_n != self.layers[k - 1].rows_m:
                raise DimensionMismatch(
                    f"layer {k} expects dim {self.layers[k].cols_n}, "
                    f"layer {k - 1} outputs {self.layers[k - 1].rows_m}"
                )


def stack_forward(stack: LayerStack, x: np.ndarray) -> np.ndarray:
    """Sequential application rho(M_L ... rho(M_1 x))."""
    out = np.asarray(x, dtype=np.float64)
    for k, layer in enumerate(stack.layers):
        if out.shape != (layer.cols_n,):
            raise DimensionMismatch(f"dim {out.shape} does not match layer {k}")
        out = relu_forward(layer, out)
    return out


def save_layer(path: str | Path, layer: GaussianLayer, fmt: str = "binary") -> None:
    """Dump a layer as a test fixture.

    Binary: magic + header (m, n, seed as little-endian uint64) + row-major
    little-endian float64 entries. CSV: a "m,n,seed" header line then one
    row of entries per line. Regeneration from the seed stays canonical;
    CSV round-trips are not exact to the last bit.
    """
    path = Path(path)
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<QQQ", layer.rows_m, layer.cols_n, layer.seed))
            fh.write(layer.entries.astype("<f8").tobytes())
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([layer.rows_m, layer.cols_n, layer.seed])
            for row in layer.entries:
                writer.writerow([f"{v:.17g}" for v in row])
    else:
        raise ValueError(f"unknown layer dump format {fmt!r}")


def load_layer(path: str | Path) -> GaussianLayer:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(len(_MAGIC))
        if head == _MAGIC:
            m, n, seed = struct.unpack("<QQQ", fh.read(24))
            data = np.frombuffer(fh.read(), dtype="<f8").astype(np.float64)
            return GaussianLayer(int(m), int(n), data.reshape(int(m), int(n)), int(seed))
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        m, n, seed = (int(v) for v in next(reader))
        data = np.array([[float(v) for v in row] for row in reader], dtype=np.float64)
    return GaussianLayer(m, n, data.reshape(m, n), seed)
