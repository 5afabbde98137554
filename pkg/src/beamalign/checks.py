"""Self-checks against independent oracles, run by ``beamalign validate``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channel import PathProfile
from .codebook import build_codebook
from .gain import fejer_gain, gain_matrix, monte_carlo_gain
from .geometry import PositionMatrix
from .strategies import StrategyConfig, select_idealized


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_positions(rng: np.random.Generator, n_paths: int, extent: float = 100.0) -> PositionMatrix:
    """Random planar geometry with ``n_paths`` paths inside a square box."""
    while True:
        pts = rng.uniform(-extent, extent, size=(n_paths + 1, 2))
        try:
            return PositionMatrix(pts)
        except ValueError:
            continue


def random_profile(rng: np.random.Generator, n_paths: int) -> PathProfile:
    w = rng.dirichlet(np.ones(n_paths))
    w[-1] = 1.0 - w[:-1].sum()
    return PathProfile(np.clip(w, 0.0, None))


def exhaustive_best_rate(g: np.ndarray, d_tx: int, d_rx: int, n0: float) -> float:
    """Best max-over-pairs rate over every pair of beam subsets."""
    m_rx, m_tx = g.shape
    best = -np.inf
    for rows in itertools.combinations(range(m_rx), d_rx):
        sub_rows = g[list(rows)]
        for cols in itertools.combinations(range(m_tx), d_tx):
            best = max(best, float(sub_rows[:, list(cols)].max()))
    return float(np.log2(1.0 + best / n0))


def greedy_rate(g: np.ndarray, sel, n0: float) -> float:
    """Max-over-pairs rate of a ``(tx, rx)`` selection."""
    tx, rx = sel
    return float(np.log2(1.0 + g[np.ix_(rx.zero_based(), tx.zero_based())].max() / n0))


def check_fejer_singularity() -> CheckResult:
    bad = []
    for n in (1, 4, 8, 64, 256):
        for d in (0.0, 2.0, -2.0):
            if fejer_gain(n, d) != n:
                bad.append(f"n={n} delta={d}")
        for d in (1e-8, -1e-8):
            if not abs(fejer_gain(n, d) - n) < 1e-6 * n:
                bad.append(f"n={n} delta={d}")
    return CheckResult("fejer-singularity", not bad, "exact peaks" if not bad else ", ".join(bad))


def check_gain_oracle(n_instances: int = 20, n_samples: int = 100_000, seed: int = 0) -> CheckResult:
    """Closed-form gains vs the channel-sampling estimate on small random instances."""
    rng = np.random.default_rng(seed)
    worst_z = 0.0
    worst_rel = 0.0
    for _ in range(n_instances):
        n = int(rng.choice([4, 8]))
        n_paths = int(rng.integers(1, 4))
        pos = random_positions(rng, n_paths)
        profile = random_profile(rng, n_paths)
        cb = build_codebook(8, n)
        closed = gain_matrix(pos, profile, cb, cb)
        mc, se = monte_carlo_gain(pos, profile, cb, cb, n_samples, rng, return_stderr=True)
        z = np.abs(mc - closed) / np.where(se > 0, se, np.inf)
        worst_z = max(worst_z, float(z.max()))
        big = closed > 0.01 * closed.max()
        worst_rel = max(worst_rel, float((np.abs(mc - closed)[big] / closed[big]).max()))
    ok = worst_z <= 3.0 and worst_rel <= 0.05
    return CheckResult(
        "gain-closed-form-vs-monte-carlo",
        ok,
        f"{n_instances} instances, max |z|={worst_z:.2f} (<=3), max rel err={worst_rel:.4f} (<=0.05)",
    )


def check_greedy_vs_exhaustive(n_instances: int = 50, seed: int = 0, m: int = 8, d: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    n0 = 0.1
    mismatches = 0
    for _ in range(n_instances):
        n_paths = int(rng.integers(1, 4))
        pos = random_positions(rng, n_paths)
        profile = random_profile(rng, n_paths)
        cb = build_codebook(m, int(rng.choice([4, 8])))
        g = gain_matrix(pos, profile, cb, cb)
        sel = select_idealized(pos, profile, cb, cb, StrategyConfig(d, d, 1))
        if greedy_rate(g, sel, n0) != exhaustive_best_rate(g, d, d, n0):
            mismatches += 1
    return CheckResult(
        "greedy-vs-exhaustive", mismatches == 0, f"{n_instances - mismatches}/{n_instances} instances agree"
    )


def run_all(seed: int = 0, n_samples: int = 100_000) -> list[CheckResult]:
    return [
        check_fejer_singularity(),
        check_gain_oracle(n_samples=n_samples, seed=seed),
        check_greedy_vs_exhaustive(seed=seed),
    ]
