"""Steering-vector codebooks on an inverse-cosine angle grid.

Beam indices are 1-based in the public API.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import steering_vector


@dataclass(frozen=True, eq=False)
class Codebook:
    grid_angles: np.ndarray
    n: int

    @property
    def size(self) -> int:
        return self.grid_angles.size

    @property
    def cosines(self) -> np.ndarray:
        return np.cos(self.grid_angles)

    def beams(self) -> np.ndarray:
        """All beam vectors, one per row, shape ``(M, n)``."""
        return steering_vector(self.n, self.grid_angles)


def grid_cosines(m: int) -> np.ndarray:
    """Cosines of the grid angles: ``1 - 2(p-1)/(m-1)`` for ``p = 1..m``."""
    if m < 2:
        raise ValueError(f"codebook needs at least 2 beams, got {m}")
    return 1.0 - 2.0 * np.arange(m) / (m - 1)


def build_codebook(m: int, n: int) -> Codebook:
    if n < 1:
        raise ValueError(f"antenna count must be >= 1, got {n}")
    c = grid_cosines(m)
    # pin endpoints: arccos of a rounded +-1 must not drift off 0 / pi
    c[0], c[-1] = 1.0, -1.0
    angles = np.arccos(c)
    angles.setflags(write=False)
    return Codebook(grid_angles=angles, n=int(n))


def beam_vector(cb: Codebook, index: int) -> np.ndarray:
    if not 1 <= index <= cb.size:
        raise IndexError(f"beam index {index} outside 1..{cb.size}")
    return steering_vector(cb.n, cb.grid_angles[index - 1])
