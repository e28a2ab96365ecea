"""Reproducible random-number streams for parallel Monte Carlo.

Each trajectory (trial of a sweep, cell of an array, or 0 for single runs)
owns one counter-based stream keyed by (master_seed, stream_id).  Stream
creation is O(1) and order-independent, so any partitioning of trials over
workers draws exactly the same numbers.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """Gaussian stream keyed by (master_seed, stream_id), Philox-backed."""

    def __init__(self, master_seed: int, stream_id: int = 0):
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        key = np.array(
            [self.master_seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def gaussian(self) -> float:
        """Next standard-normal variate."""
        return float(self._gen.standard_normal())

    def normals(self, shape) -> np.ndarray:
        """Block of standard normals; consecutive blocks continue the stream."""
        return self._gen.standard_normal(shape)

    def spawn(self, stream_id: int) -> "RngStream":
        return RngStream(self.master_seed, stream_id)

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"
