"""Distributed noisy position information.

Each side (TX, RX) holds its own estimate of every node position. Errors
are independent per node and uniform over a disk whose radius depends on
the node and on which side makes the estimate. The TX position is known
exactly by both sides.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .geometry import PositionMatrix


class Side(str, enum.Enum):
    TX = "tx"
    RX = "rx"

    @property
    def other(self) -> "Side":
        return Side.RX if self is Side.TX else Side.TX


def sample_disk(radius: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Offset(s) uniform over the closed disk of the given radius.

    Uses the polar inverse CDF, so exactly two uniforms are drawn per
    offset. ``size`` prepends batch axes to the trailing ``(2,)`` axis.
    """
    radius = np.asarray(radius, dtype=float)
    if np.any(radius < 0):
        raise ValueError(f"disk radius must be non-negative, got {radius}")
    shape = np.broadcast_shapes(() if size is None else tuple(np.atleast_1d(size)), radius.shape)
    u = rng.random(shape)
    v = rng.random(shape)
    rho = radius * np.sqrt(u)
    ang = 2.0 * np.pi * v
    return np.stack([rho * np.cos(ang), rho * np.sin(ang)], axis=-1)


@dataclass(frozen=True, eq=False)
class ErrorModel:
    """Per-node error radii as seen from each side.

    Both radius vectors follow the node order ``[TX, R_1, ..., RX]``.
    Subclasses may override :meth:`sample_errors` to swap the per-node
    distribution while keeping the shape contract.
    """

    radii_tx: np.ndarray
    radii_rx: np.ndarray

    def __post_init__(self):
        rt = np.array(self.radii_tx, dtype=float).reshape(-1)
        rr = np.array(self.radii_rx, dtype=float).reshape(-1)
        if rt.shape != rr.shape:
            raise ValueError(f"radii_tx and radii_rx differ in length: {rt.size} vs {rr.size}")
        if rt.size < 2:
            raise ValueError("error model needs at least TX and RX entries")
        for name, r in (("radii_tx", rt), ("radii_rx", rr)):
            if np.any(r < 0) or not np.all(np.isfinite(r)):
                raise ValueError(f"{name} must be finite and non-negative, got {r.tolist()}")
            if r[0] != 0:
                raise ValueError(f"{name}[0] (the TX position) must be 0, got {r[0]}")
            r.setflags(write=False)
        object.__setattr__(self, "radii_tx", rt)
        object.__setattr__(self, "radii_rx", rr)

    @classmethod
    def exact(cls, n_nodes: int) -> "ErrorModel":
        return cls(np.zeros(n_nodes), np.zeros(n_nodes))

    @property
    def n_nodes(self) -> int:
        return self.radii_tx.size

    def radii(self, side: Side) -> np.ndarray:
        return self.radii_tx if Side(side) is Side.TX else self.radii_rx

    def is_exact(self, side: Side) -> bool:
        """True when the side's estimates carry no error at all."""
        return not np.any(self.radii(side))

    def sample_errors(self, side: Side, rng: np.random.Generator, size=None) -> np.ndarray:
        """Error matrix of shape ``(*size, n_nodes, 2)``."""
        batch = () if size is None else tuple(np.atleast_1d(size))
        return sample_disk(self.radii(side), rng, size=(*batch, self.n_nodes))

    def __eq__(self, other):
        if not isinstance(other, ErrorModel):
            return NotImplemented
        return np.array_equal(self.radii_tx, other.radii_tx) and np.array_equal(
            self.radii_rx, other.radii_rx
        )


@dataclass(frozen=True)
class NoisyView:
    positions: PositionMatrix
    side: Side


def _check_shape(n_nodes: int, model: ErrorModel):
    if n_nodes != model.n_nodes:
        raise ValueError(f"error model covers {model.n_nodes} nodes, positions have {n_nodes}")


def make_noisy_view(
    true_pos: PositionMatrix, model: ErrorModel, side: Side, rng: np.random.Generator
) -> NoisyView:
    """The estimate ``P + E`` held by ``side``."""
    side = Side(side)
    _check_shape(true_pos.coords.shape[0], model)
    err = model.sample_errors(side, rng)
    return NoisyView(PositionMatrix(true_pos.coords + err), side)


def sample_conditional_truths(
    view: NoisyView, model: ErrorModel, rng: np.random.Generator, n: int
) -> np.ndarray:
    """``n`` hypothetical true position matrices ``P_hat - E``, shape ``(n, L+1, 2)``."""
    _check_shape(view.positions.coords.shape[0], model)
    err = model.sample_errors(view.side, rng, size=n)
    return view.positions.coords - err


def sample_conditional_truth(view: NoisyView, model: ErrorModel, rng: np.random.Generator) -> PositionMatrix:
    """One hypothetical truth drawn around the view with the viewer's own error law."""
    return PositionMatrix(sample_conditional_truths(view, model, rng, 1)[0])


def sample_other_side_views(
    truths: np.ndarray, other_side: Side, model: ErrorModel, rng: np.random.Generator, n: int
) -> np.ndarray:
    """``n`` simulated estimates by ``other_side`` around each of ``truths``.

    ``truths`` has shape ``(..., L+1, 2)``; the result has shape
    ``(..., n, L+1, 2)``.
    """
    truths = np.asarray(truths, dtype=float)
    _check_shape(truths.shape[-2], model)
    batch = truths.shape[:-2]
    err = model.sample_errors(Side(other_side), rng, size=(*batch, n))
    return truths[..., None, :, :] + err


def sample_other_side_view(
    hypothetical_truth: PositionMatrix,
    other_side: Side,
    model: ErrorModel,
    rng: np.random.Generator,
) -> NoisyView:
    """What ``other_side`` would estimate if the truth were ``hypothetical_truth``."""
    coords = sample_other_side_views(hypothetical_truth.coords, other_side, model, rng, 1)[0]
    return NoisyView(PositionMatrix(coords), Side(other_side))
