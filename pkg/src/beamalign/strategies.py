"""Beam pre-selection strategies.

Every strategy scores each of its own beams, sorts the scores in
descending order (stable, so the lower index wins exact ties) and keeps
the first ``D``. A beam's score is the best gain it can reach against any
beam of the other side, averaged over whatever position uncertainty the
strategy accounts for:

* idealized -- true positions, both sides;
* naive -- the side's own noisy estimate taken at face value;
* one-step -- averaged over hypothetical truths around the own estimate;
* two-step -- additionally predicts the other side's one-step choice and
  only scores against those beams.

Gain matrices are stored ``(M_RX, M_TX)``. Internally each side works on
an "own-last" view: the TX uses ``G`` directly, the RX uses ``G.T``, so
that own-beam scores are always a max over axis ``-2``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channel import PathProfile
from .codebook import Codebook
from .gain import gain_matrix
from .geometry import PositionMatrix
from .uncertainty import (
    ErrorModel,
    NoisyView,
    Side,
    sample_conditional_truths,
    sample_other_side_views,
)

DEFAULT_MC_ITERATIONS = 1000
# upper bound on the float64 scratch used by one batch of inner gain matrices
_CHUNK_BYTES = 64 * 2**20


class Strategy(str, enum.Enum):
    IDEALIZED = "idealized"
    NAIVE = "naive"
    ONE_STEP = "one-step"
    TWO_STEP = "two-step"


@dataclass(frozen=True)
class StrategyConfig:
    """Pre-selection budgets and Monte-Carlo sample counts.

    ``mc_inner_iterations`` sets the inner loop of the two-step strategy;
    ``None`` reuses ``mc_iterations``.
    """

    d_tx: int
    d_rx: int
    mc_iterations: int = DEFAULT_MC_ITERATIONS
    mc_inner_iterations: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.d_tx < 1 or self.d_rx < 1:
            raise ValueError(f"beam budgets must be >= 1, got d_tx={self.d_tx}, d_rx={self.d_rx}")
        if self.mc_iterations < 1:
            raise ValueError(f"mc_iterations must be >= 1, got {self.mc_iterations}")
        if self.mc_inner_iterations is not None and self.mc_inner_iterations < 1:
            raise ValueError(f"mc_inner_iterations must be >= 1, got {self.mc_inner_iterations}")

    @property
    def inner_iterations(self) -> int:
        return self.mc_iterations if self.mc_inner_iterations is None else self.mc_inner_iterations

    def budget(self, side: Side) -> int:
        return self.d_tx if Side(side) is Side.TX else self.d_rx

    def check(self, cb_tx: Codebook, cb_rx: Codebook):
        if self.d_tx > cb_tx.size or self.d_rx > cb_rx.size:
            raise ValueError(
                f"budgets ({self.d_tx}, {self.d_rx}) exceed codebook sizes ({cb_tx.size}, {cb_rx.size})"
            )


@dataclass(frozen=True)
class BeamSelection:
    """Ordered, 1-based beam indices pre-selected by one side."""

    indices: tuple[int, ...]
    side: Side

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValueError("a beam selection cannot be empty")
        if min(idx) < 1:
            raise ValueError(f"beam indices are 1-based, got {idx}")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate beam indices in {idx}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "side", Side(self.side))

    def __len__(self):
        return len(self.indices)

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.indices) - 1


def _own_last(g: np.ndarray, side: Side) -> np.ndarray:
    return g if side is Side.TX else np.swapaxes(g, -1, -2)


def beam_scores(g: np.ndarray, side: Side) -> np.ndarray:
    """Best reachable gain of each of ``side``'s beams."""
    return _own_last(g, Side(side)).max(axis=-2)


def rank_beams(scores: np.ndarray) -> np.ndarray:
    """0-based beam order, descending score, lower index first on ties."""
    return np.argsort(-np.asarray(scores), axis=-1, kind="stable")


def select_from_scores(scores: np.ndarray, d: int, side: Side) -> BeamSelection:
    order = rank_beams(scores)
    if d > order.size:
        raise ValueError(f"budget {d} exceeds codebook size {order.size}")
    return BeamSelection(tuple(order[:d] + 1), Side(side))


def idealized_scores(true_pos: PositionMatrix, profile: PathProfile, cb_tx: Codebook, cb_rx: Codebook):
    """TX and RX beam scores under the true positions."""
    g = gain_matrix(true_pos, profile, cb_tx, cb_rx)
    return beam_scores(g, Side.TX), beam_scores(g, Side.RX)


def select_idealized(
    true_pos: PositionMatrix,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    cfg: StrategyConfig,
) -> tuple[BeamSelection, BeamSelection]:
    cfg.check(cb_tx, cb_rx)
    s_tx, s_rx = idealized_scores(true_pos, profile, cb_tx, cb_rx)
    return select_from_scores(s_tx, cfg.d_tx, Side.TX), select_from_scores(s_rx, cfg.d_rx, Side.RX)


def naive_scores(view: NoisyView, profile: PathProfile, cb_tx: Codebook, cb_rx: Codebook) -> np.ndarray:
    g = gain_matrix(view.positions, profile, cb_tx, cb_rx)
    return beam_scores(g, view.side)


def select_naive(
    view: NoisyView,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    cfg: StrategyConfig,
) -> BeamSelection:
    """Idealized selection computed on the side's own estimate."""
    cfg.check(cb_tx, cb_rx)
    scores = naive_scores(view, profile, cb_tx, cb_rx)
    return select_from_scores(scores, cfg.budget(view.side), view.side)


def one_step_scores(
    view: NoisyView,
    model: ErrorModel,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    n_iter: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Own-beam scores averaged over ``n_iter`` hypothetical truths."""
    if model.is_exact(view.side):
        n_iter = 1
    truths = sample_conditional_truths(view, model, rng, n_iter)
    g = gain_matrix(truths, profile, cb_tx, cb_rx)
    return beam_scores(g, view.side).mean(axis=0)


def select_one_step(
    view: NoisyView,
    model: ErrorModel,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    cfg: StrategyConfig,
    rng: np.random.Generator,
) -> BeamSelection:
    cfg.check(cb_tx, cb_rx)
    scores = one_step_scores(view, model, profile, cb_tx, cb_rx, cfg.mc_iterations, rng)
    return select_from_scores(scores, cfg.budget(view.side), view.side)


def two_step_scores(
    view: NoisyView,
    model: ErrorModel,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    d_other: int,
    n_outer: int,
    n_inner: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Own-beam scores against the other side's predicted one-step beams.

    For each hypothetical truth, the other side's estimates are simulated
    ``n_inner`` times; their averaged naive scores give the other side's
    predicted top-``d_other`` beams, and each own beam is scored by its
    best gain (under the hypothetical truth) against just those beams.
    """
    side = view.side
    other = side.other
    if model.is_exact(side):
        n_outer = 1
    if model.is_exact(other):
        n_inner = 1
    m_own = (cb_tx if side is Side.TX else cb_rx).size
    m_other = (cb_rx if side is Side.TX else cb_tx).size
    if not 1 <= d_other <= m_other:
        raise ValueError(f"other-side budget {d_other} outside 1..{m_other}")

    truths = sample_conditional_truths(view, model, rng, n_outer)
    g_hat = _own_last(gain_matrix(truths, profile, cb_tx, cb_rx), side)  # (n_outer, m_other, m_own)

    chunk = max(1, _CHUNK_BYTES // (8 * n_inner * m_own * m_other))
    total = np.zeros(m_own)
    for start in range(0, n_outer, chunk):
        stop = min(start + chunk, n_outer)
        others = sample_other_side_views(truths[start:stop], other, model, rng, n_inner)
        g_inner = _own_last(gain_matrix(others, profile, cb_tx, cb_rx), side)
        # other side's naive scores per inner draw, averaged over the inner loop
        predicted = g_inner.max(axis=-1).mean(axis=1)  # (chunk, m_other)
        keep = rank_beams(predicted)[:, :d_other]
        rows = np.take_along_axis(g_hat[start:stop], keep[:, :, None], axis=1)
        total += rows.max(axis=1).sum(axis=0)
    return total / n_outer


def select_two_step(
    view: NoisyView,
    model: ErrorModel,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    cfg: StrategyConfig,
    rng: np.random.Generator,
) -> BeamSelection:
    cfg.check(cb_tx, cb_rx)
    scores = two_step_scores(
        view,
        model,
        profile,
        cb_tx,
        cb_rx,
        d_other=cfg.budget(view.side.other),
        n_outer=cfg.mc_iterations,
        n_inner=cfg.inner_iterations,
        rng=rng,
    )
    return select_from_scores(scores, cfg.budget(view.side), view.side)
