"""Rate evaluation and the Monte-Carlo experiment engine.

Each trial draws one noisy view per side around the fixed true geometry.
All strategies in a trial see the same two views, so per-trial rates are
paired across strategies. Random streams are derived from
``(seed, trial, stream)`` so a strategy's results do not depend on which
other strategies run alongside it.

Rates use the average gain matrix of the true positions:
``log2(1 + G[q, p] * 10**(snr_db / 10))``, i.e. ``N0 = 10**(-snr_db / 10)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel import PathProfile
from .codebook import Codebook
from .gain import gain_matrix
from .geometry import PositionMatrix
from .scenario import Scenario, SweepSpec
from .strategies import (
    BeamSelection,
    Strategy,
    beam_scores,
    naive_scores,
    one_step_scores,
    rank_beams,
    two_step_scores,
)
from .uncertainty import NoisyView, Side, make_noisy_view

log = logging.getLogger(__name__)

_STREAM_VIEWS = 0
_STREAM = {Strategy.IDEALIZED: 1, Strategy.NAIVE: 2, Strategy.ONE_STEP: 3, Strategy.TWO_STEP: 4}


def snr_to_n0(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class RateSample:
    rate: float
    best_pair: tuple[int, int]  # (TX beam, RX beam), 1-based


@dataclass(frozen=True)
class ExperimentResult:
    strategy: Strategy
    mean_rate: float
    std_error: float
    n_trials: int
    sweep_value: float


def rate_from_gain(g: np.ndarray, sel_tx: BeamSelection, sel_rx: BeamSelection, n0: float) -> RateSample:
    """Best rate over the selected beam pairs of a precomputed gain matrix."""
    if n0 <= 0:
        raise ValueError(f"noise power must be positive, got {n0}")
    q = np.sort(sel_rx.zero_based())
    p = np.sort(sel_tx.zero_based())
    sub = g[np.ix_(q, p)]
    # argmax returns the first maximum in row-major order: lowest (q, p)
    qi, pi = np.unravel_index(int(np.argmax(sub)), sub.shape)
    best = float(sub[qi, pi])
    return RateSample(rate=float(np.log2(1.0 + best / n0)), best_pair=(int(p[pi]) + 1, int(q[qi]) + 1))


def achieved_rate(
    sel_tx: BeamSelection,
    sel_rx: BeamSelection,
    true_pos: PositionMatrix,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    n0: float,
) -> RateSample:
    """Rate of the best selected pair under the true average gains."""
    if sel_tx.side is not Side.TX or sel_rx.side is not Side.RX:
        raise ValueError("expected a TX selection and an RX selection")
    g = gain_matrix(true_pos, profile, cb_tx, cb_rx)
    return rate_from_gain(g, sel_tx, sel_rx, n0)


def _rng(seed: int, trial: int, stream: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial, stream, *extra]))


def draw_views(scenario: Scenario, seed: int, trial: int) -> tuple[NoisyView, NoisyView]:
    rng = _rng(seed, trial, _STREAM_VIEWS)
    v_tx = make_noisy_view(scenario.positions, scenario.errors, Side.TX, rng)
    v_rx = make_noisy_view(scenario.positions, scenario.errors, Side.RX, rng)
    return v_tx, v_rx


def _orderings(
    strategy: Strategy,
    scenario: Scenario,
    views: tuple[NoisyView, NoisyView],
    g_true: np.ndarray,
    seed: int,
    trial: int,
    budgets: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray]:
    """Full 0-based beam orderings (TX, RX) produced by one strategy."""
    cb_tx, cb_rx = scenario.codebooks
    profile, model, cfg = scenario.profile, scenario.errors, scenario.strategy
    if strategy is Strategy.IDEALIZED:
        return rank_beams(beam_scores(g_true, Side.TX)), rank_beams(beam_scores(g_true, Side.RX))
    if strategy is Strategy.NAIVE:
        return tuple(rank_beams(naive_scores(v, profile, cb_tx, cb_rx)) for v in views)
    if strategy is Strategy.ONE_STEP:
        rng = _rng(seed, trial, _STREAM[strategy])
        return tuple(
            rank_beams(one_step_scores(v, model, profile, cb_tx, cb_rx, cfg.mc_iterations, rng))
            for v in views
        )
    if strategy is Strategy.TWO_STEP:
        d_tx, d_rx = budgets
        rng = _rng(seed, trial, _STREAM[strategy], d_tx, d_rx)
        out = []
        for v, d_other in ((views[0], d_rx), (views[1], d_tx)):
            s = two_step_scores(
                v, model, profile, cb_tx, cb_rx, d_other,
                cfg.mc_iterations, cfg.inner_iterations, rng,
            )
            out.append(rank_beams(s))
        return tuple(out)
    raise ValueError(f"unknown strategy {strategy!r}")


def _as_strategies(strategies) -> list[Strategy]:
    if isinstance(strategies, (str, Strategy)):
        strategies = [strategies]
    out = [Strategy(s) for s in strategies]
    if not out:
        raise ValueError("no strategies requested")
    return out


def run_trials(
    scenario: Scenario,
    strategies: Strategy | Iterable[Strategy],
    sweep: SweepSpec | None = None,
    n_trials: int = 1000,
    seed: int | None = None,
) -> dict[Strategy, np.ndarray]:
    """Per-trial rates, ``{strategy: array (n_trials, n_sweep_points)}``.

    Rows are paired across strategies (same noisy views per trial).
    """
    strategies = _as_strategies(strategies)
    sweep = scenario.sweep if sweep is None else sweep
    seed = scenario.strategy.seed if seed is None else seed
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if sweep.axis not in ("snr", "d"):
        raise ValueError(f"invalid sweep axis {sweep.axis!r}")
    cb_tx, cb_rx = scenario.codebooks
    g_true = gain_matrix(scenario.positions, scenario.profile, cb_tx, cb_rx)
    cfg = scenario.strategy

    if sweep.axis == "snr":
        points = [((cfg.d_tx, cfg.d_rx), snr_to_n0(v)) for v in sweep.values]
    else:
        if max(sweep.values) > min(cb_tx.size, cb_rx.size):
            raise ValueError("beam-count sweep exceeds codebook size")
        points = [((int(v), int(v)), snr_to_n0(scenario.snr_db)) for v in sweep.values]

    out = {s: np.empty((n_trials, len(points))) for s in strategies}
    for t in range(n_trials):
        views = draw_views(scenario, seed, t)
        for s in strategies:
            cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
            for j, (budgets, n0) in enumerate(points):
                # only the two-step ordering depends on the budgets
                key = budgets if s is Strategy.TWO_STEP else (0, 0)
                if key not in cache:
                    cache[key] = _orderings(s, scenario, views, g_true, seed, t, budgets)
                o_tx, o_rx = cache[key]
                sel_tx = BeamSelection(tuple(o_tx[: budgets[0]] + 1), Side.TX)
                sel_rx = BeamSelection(tuple(o_rx[: budgets[1]] + 1), Side.RX)
                out[s][t, j] = rate_from_gain(g_true, sel_tx, sel_rx, n0).rate
        if (t + 1) % 500 == 0:
            log.info("completed %d/%d trials", t + 1, n_trials)
    return out


def summarize(rates: dict[Strategy, np.ndarray], sweep: SweepSpec) -> list[ExperimentResult]:
    results = []
    for s, r in rates.items():
        n = r.shape[0]
        mean = r.mean(axis=0)
        se = r.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(r.shape[1])
        for j, v in enumerate(sweep.values):
            results.append(ExperimentResult(s, float(mean[j]), float(se[j]), n, float(v)))
    return results


def run_experiment(
    scenario: Scenario,
    strategy: Strategy | Iterable[Strategy],
    sweep: SweepSpec | None = None,
    n_trials: int = 1000,
    seed: int | None = None,
) -> list[ExperimentResult]:
    """Mean rate and standard error per (strategy, sweep point)."""
    sweep = scenario.sweep if sweep is None else sweep
    rates = run_trials(scenario, strategy, sweep, n_trials, seed)
    return summarize(rates, sweep)


def paired_gap(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Mean and standard error of the paired difference ``a - b``."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if d.size < 2:
        return float(d.mean()), float("inf")
    return float(d.mean()), float(d.std(ddof=1) / np.sqrt(d.size))


@dataclass(frozen=True)
class Snapshot:
    scenario: Scenario
    seed: int
    views: tuple[NoisyView, NoisyView]
    selections: dict[Strategy, tuple[BeamSelection, BeamSelection]]

    def to_dict(self) -> dict:
        cb_tx, cb_rx = self.scenario.codebooks

        def beams(sel: BeamSelection, cb: Codebook):
            return [{"index": i, "angle": float(cb.grid_angles[i - 1])} for i in sel.indices]

        return {
            "scenario": self.scenario.name,
            "param_hash": self.scenario.param_hash(),
            "seed": self.seed,
            "true_positions": self.scenario.positions.to_list(),
            "views": {v.side.value: v.positions.to_list() for v in self.views},
            "selections": {
                s.value: {"tx": beams(tx, cb_tx), "rx": beams(rx, cb_rx)}
                for s, (tx, rx) in self.selections.items()
            },
        }


def snapshot_beams(
    scenario: Scenario,
    strategies: Sequence[Strategy] | None = None,
    seed: int | None = None,
) -> Snapshot:
    """One realization's selections for each strategy, with the views behind them."""
    strategies = list(Strategy) if strategies is None else _as_strategies(strategies)
    seed = scenario.strategy.seed if seed is None else seed
    cb_tx, cb_rx = scenario.codebooks
    g_true = gain_matrix(scenario.positions, scenario.profile, cb_tx, cb_rx)
    views = draw_views(scenario, seed, 0)
    budgets = (scenario.strategy.d_tx, scenario.strategy.d_rx)
    sels = {}
    for s in strategies:
        o_tx, o_rx = _orderings(s, scenario, views, g_true, seed, 0, budgets)
        sels[s] = (
            BeamSelection(tuple(o_tx[: budgets[0]] + 1), Side.TX),
            BeamSelection(tuple(o_rx[: budgets[1]] + 1), Side.RX),
        )
    return Snapshot(scenario, seed, views, sels)
