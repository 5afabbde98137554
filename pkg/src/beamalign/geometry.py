"""Node positions and path angles for the planar multipath scenario.

Nodes are stored row-wise as ``[TX, R_1, ..., R_{L-1}, RX]``; a position
matrix with ``L + 1`` rows describes ``L`` paths (the LoS path plus one
point-scatterer path per reflector).

Angles are measured between the ray ``q -> p`` and the vertical (north)
axis through ``q`` and folded into ``[0, pi]``. The arrays are therefore
modelled as vertical ULAs: a horizontal LoS link is broadside.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class PathAngles:
    """AoDs and AoAs in radians, entry 0 is the LoS path."""

    aods: np.ndarray
    aoas: np.ndarray

    @property
    def n_paths(self) -> int:
        return len(self.aods)


@dataclass(frozen=True, eq=False)
class PositionMatrix:
    """Node coordinates, one row ``(x, y)`` per node in meters.

    Row order is fixed: TX first, then the reflectors, then RX.
    """

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 2 or coords.shape[0] < 2:
            raise ValueError(
                f"position matrix must have shape (L+1, 2) with L >= 1, got {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise ValueError("position matrix contains non-finite coordinates")
        tx, rx = coords[0], coords[-1]
        if np.array_equal(tx, rx):
            raise ValueError("TX and RX positions coincide")
        for i, r in enumerate(coords[1:-1], start=1):
            if np.array_equal(r, tx) or np.array_equal(r, rx):
                raise ValueError(f"reflector R_{i} coincides with an endpoint")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_points(
        cls,
        tx: Sequence[float],
        reflectors: Sequence[Sequence[float]],
        rx: Sequence[float],
    ) -> "PositionMatrix":
        rows = [tuple(tx), *[tuple(r) for r in reflectors], tuple(rx)]
        return cls(np.array(rows, dtype=float))

    @property
    def n_paths(self) -> int:
        return self.coords.shape[0] - 1

    @property
    def tx(self) -> Point2:
        return Point2(*self.coords[0])

    @property
    def rx(self) -> Point2:
        return Point2(*self.coords[-1])

    @property
    def reflectors(self) -> list[Point2]:
        return [Point2(*r) for r in self.coords[1:-1]]

    def translated(self, offset: Sequence[float]) -> "PositionMatrix":
        return PositionMatrix(self.coords + np.asarray(offset, dtype=float))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PositionMatrix):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def to_list(self) -> list[list[float]]:
        return self.coords.tolist()


def angle_to_vertical(p: Sequence[float], q: Sequence[float]) -> float:
    """Angle in ``[0, pi]`` between the ray ``q -> p`` and north.

    Raises ``ValueError`` when the two points coincide.
    """
    dx = float(p[0]) - float(q[0])
    dy = float(p[1]) - float(q[1])
    if dx == 0.0 and dy == 0.0:
        raise ValueError(f"angle undefined for coincident points {tuple(p)}")
    return abs(float(np.arctan2(dx, dy)))


def batch_path_angles(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`path_angles` over stacked position matrices.

    Parameters
    ----------
    coords : array of shape (..., L+1, 2)

    Returns
    -------
    aods, aoas : arrays of shape (..., L)
    """
    coords = np.asarray(coords, dtype=float)
    tx = coords[..., :1, :]
    rx = coords[..., -1:, :]
    # AoD targets: RX, then the reflectors; AoA targets: TX, then the reflectors.
    dep = np.concatenate([rx, coords[..., 1:-1, :]], axis=-2) - tx
    arr = np.concatenate([tx, coords[..., 1:-1, :]], axis=-2) - rx
    aods = np.abs(np.arctan2(dep[..., 0], dep[..., 1]))
    aoas = np.abs(np.arctan2(arr[..., 0], arr[..., 1]))
    return aods, aoas


def path_angles(pos: PositionMatrix) -> PathAngles:
    """AoD/AoA pair for each path of ``pos`` (LoS first)."""
    aods, aoas = batch_path_angles(pos.coords)
    return PathAngles(aods=aods, aoas=aoas)
