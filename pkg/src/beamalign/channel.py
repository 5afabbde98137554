"""Narrowband geometric channel with critically spaced ULAs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import PathAngles

POWER_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ArrayConfig:
    n_tx: int
    n_rx: int

    def __post_init__(self):
        if int(self.n_tx) < 1 or int(self.n_rx) < 1:
            raise ValueError(f"antenna counts must be >= 1, got {self.n_tx}, {self.n_rx}")


@dataclass(frozen=True, eq=False)
class PathProfile:
    """Average path powers, LoS first. Powers must sum to one."""

    powers: np.ndarray

    def __post_init__(self):
        powers = np.array(self.powers, dtype=float).reshape(-1)
        if powers.size < 1:
            raise ValueError("path profile needs at least one path")
        if np.any(powers < 0) or not np.all(np.isfinite(powers)):
            raise ValueError(f"path powers must be finite and non-negative, got {powers}")
        if abs(powers.sum() - 1.0) > POWER_SUM_TOL:
            raise ValueError(f"path powers must sum to 1, got {powers.sum()!r}")
        powers.setflags(write=False)
        object.__setattr__(self, "powers", powers)

    @classmethod
    def unnormalized(cls, powers: Sequence[float]) -> "PathProfile":
        """Profile without the unit-sum check, e.g. an all-zero profile."""
        obj = object.__new__(cls)
        arr = np.array(powers, dtype=float).reshape(-1)
        if np.any(arr < 0):
            raise ValueError("path powers must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(obj, "powers", arr)
        return obj

    def scaled(self, factor: float) -> "PathProfile":
        return PathProfile.unnormalized(self.powers * factor)

    @property
    def n_paths(self) -> int:
        return self.powers.size

    def __eq__(self, other):
        if not isinstance(other, PathProfile):
            return NotImplemented
        return np.array_equal(self.powers, other.powers)


def steering_vector(n: int, angle: float | np.ndarray) -> np.ndarray:
    """ULA response ``exp(-i pi k cos(angle)) / sqrt(n)``, ``k = 0..n-1``.

    A vector of angles yields one steering vector per row.
    """
    if n < 1:
        raise ValueError(f"antenna count must be >= 1, got {n}")
    k = np.arange(n)
    phase = np.multiply.outer(np.cos(angle), k)
    return np.exp(-1j * np.pi * phase) / np.sqrt(n)


def sample_path_gains(profile: PathProfile, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw ``alpha_l ~ CN(0, sigma_l^2)``; ``size`` prepends batch axes."""
    shape = (profile.n_paths,) if size is None else (*np.atleast_1d(size), profile.n_paths)
    scale = np.sqrt(profile.powers / 2.0)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * scale


def synthesize_channel(cfg: ArrayConfig, angles: PathAngles, gains: np.ndarray) -> np.ndarray:
    """Channel matrix ``H`` of shape ``(n_rx, n_tx)``.

    ``gains`` may carry leading batch axes, in which case the result has
    shape ``(..., n_rx, n_tx)``.
    """
    gains = np.asarray(gains)
    n_paths = angles.n_paths
    if gains.shape[-1] != n_paths or len(angles.aoas) != n_paths:
        raise ValueError(
            f"path count mismatch: {gains.shape[-1]} gains, {n_paths} AoDs, {len(angles.aoas)} AoAs"
        )
    a_rx = steering_vector(cfg.n_rx, angles.aoas)  # (L, n_rx)
    a_tx = steering_vector(cfg.n_tx, angles.aods)  # (L, n_tx)
    h = np.einsum("...l,lr,lt->...rt", gains, a_rx, a_tx.conj())
    return np.sqrt(cfg.n_tx * cfg.n_rx) * h
