"""Average beam-gain matrices.

``G[q, p]`` is the average power seen with RX beam ``q`` and TX beam ``p``
(0-based storage, rows are RX beams). The closed form sums, over paths,
the path power times the TX and RX Fejer-kernel array gains. The
Monte-Carlo estimator averages ``|w_q^H H g_p|^2`` over synthetic channel
draws and never touches the closed form.
"""
from __future__ import annotations

import numpy as np

from .channel import ArrayConfig, PathProfile, sample_path_gains, synthesize_channel
from .codebook import Codebook
from .geometry import PathAngles, PositionMatrix, batch_path_angles, path_angles

SINGULAR_TOL = 1e-9


def fejer_gain(n: int, delta):
    """``sin^2(pi n delta / 2) / (n sin^2(pi delta / 2))``, equal to ``n`` at even ``delta``.

    Accepts scalars or arrays. The removable singularity at
    ``delta = 0 (mod 2)`` is returned as exactly ``n``.
    """
    if n < 1:
        raise ValueError(f"antenna count must be >= 1, got {n}")
    delta = np.asarray(delta, dtype=float)
    half = 0.5 * np.pi * delta
    den = np.sin(half)
    singular = np.abs(den) < SINGULAR_TOL
    safe_den = np.where(singular, 1.0, den)
    val = np.sin(n * half) ** 2 / (n * safe_den**2)
    out = np.where(singular, float(n), val)
    return out if out.ndim else float(out)


def gain_from_angles(
    aods: np.ndarray,
    aoas: np.ndarray,
    powers: np.ndarray,
    cb_tx: Codebook,
    cb_rx: Codebook,
) -> np.ndarray:
    """Closed-form gain for stacked angle sets.

    ``aods`` and ``aoas`` have shape ``(..., L)``; the result has shape
    ``(..., M_RX, M_TX)``.
    """
    aods = np.asarray(aods, dtype=float)
    aoas = np.asarray(aoas, dtype=float)
    powers = np.asarray(powers, dtype=float)
    if aods.shape[-1] != powers.size or aoas.shape[-1] != powers.size:
        raise ValueError(
            f"path count mismatch: {aods.shape[-1]} AoDs, {aoas.shape[-1]} AoAs, {powers.size} powers"
        )
    d_tx = cb_tx.cosines - np.cos(aods)[..., :, None]
    d_rx = np.cos(aoas)[..., :, None] - cb_rx.cosines
    f_tx = fejer_gain(cb_tx.n, d_tx)  # (..., L, M_TX)
    f_rx = fejer_gain(cb_rx.n, d_rx) * powers[:, None]  # (..., L, M_RX)
    return np.matmul(np.swapaxes(f_rx, -1, -2), f_tx)


def gain_matrix(
    pos: PositionMatrix | np.ndarray,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
) -> np.ndarray:
    """Average beam-gain matrix of shape ``(M_RX, M_TX)``.

    ``pos`` may also be a stacked coordinate array ``(..., L+1, 2)``.
    """
    coords = pos.coords if isinstance(pos, PositionMatrix) else np.asarray(pos, dtype=float)
    if coords.shape[-2] - 1 != profile.n_paths:
        raise ValueError(
            f"profile has {profile.n_paths} paths but positions define {coords.shape[-2] - 1}"
        )
    aods, aoas = batch_path_angles(coords)
    return gain_from_angles(aods, aoas, profile.powers, cb_tx, cb_rx)


def monte_carlo_gain(
    pos: PositionMatrix,
    profile: PathProfile,
    cb_tx: Codebook,
    cb_rx: Codebook,
    n_samples: int,
    rng: np.random.Generator,
    return_stderr: bool = False,
    chunk: int = 4096,
):
    """Sample-mean estimate of ``E|w_q^H H g_p|^2`` over path-gain draws.

    With ``return_stderr`` the elementwise standard error of the mean is
    returned alongside the estimate.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if pos.n_paths != profile.n_paths:
        raise ValueError(
            f"profile has {profile.n_paths} paths but positions define {pos.n_paths}"
        )
    angles: PathAngles = path_angles(pos)
    cfg = ArrayConfig(n_tx=cb_tx.n, n_rx=cb_rx.n)
    w_conj = cb_rx.beams().conj()  # (M_RX, N_RX), rows are w_q^H
    g = cb_tx.beams().T  # (N_TX, M_TX), columns are g_p
    total = np.zeros((cb_rx.size, cb_tx.size))
    total_sq = np.zeros_like(total)
    done = 0
    while done < n_samples:
        k = min(chunk, n_samples - done)
        alphas = sample_path_gains(profile, rng, size=k)
        h = synthesize_channel(cfg, angles, alphas)
        power = np.abs(w_conj @ h @ g) ** 2
        total += power.sum(axis=0)
        total_sq += (power**2).sum(axis=0)
        done += k
    mean = total / n_samples
    if not return_stderr:
        return mean
    if n_samples < 2:
        return mean, np.full_like(mean, np.inf)
    var = np.maximum(total_sq - n_samples * mean**2, 0.0) / (n_samples - 1)
    return mean, np.sqrt(var / n_samples)
