"""Scenario description, built-in parameter sets and JSON (de)serialization.

A scenario file is a single JSON object. Every key is optional; missing
keys take the defaults below. ``parameter_set`` names a built-in set of
error radii and path powers, and explicitly given ``errors`` or
``path_powers`` override it::

    {
      "name": "fig3",
      "parameter_set": "params-A",
      "positions": {"tx": [0, 0], "reflectors": [[50, 40], [45, -30]], "rx": [100, 0]},
      "path_powers": [0.4, 0.3, 0.3],
      "arrays": {"n_tx": 64, "n_rx": 64},
      "codebook": {"m_tx": 64, "m_rx": 64},
      "errors": {"radii_tx": [0, 11, 15, 13], "radii_rx": [0, 18, 17, 7]},
      "strategy": {"d_tx": 4, "d_rx": 4, "mc_iterations": 1000,
                   "mc_inner_iterations": null, "seed": 0},
      "sweep": "snr:-10:30:5",
      "snr_db": 10
    }

Radii are listed per node in the order ``[TX, R_1, ..., R_{L-1}, RX]``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

from .channel import ArrayConfig, PathProfile
from .codebook import Codebook, build_codebook
from .geometry import PositionMatrix
from .strategies import DEFAULT_MC_ITERATIONS, StrategyConfig
from .uncertainty import ErrorModel


class ScenarioError(ValueError):
    """Invalid scenario input; the message starts with the offending field."""


@dataclass(frozen=True)
class NamedParameterSet:
    name: str
    radii_tx: tuple[float, ...]
    radii_rx: tuple[float, ...]
    path_powers: tuple[float, ...]


PARAMETER_SETS = {
    # node order [TX, R_1, R_2, RX]
    "params-A": NamedParameterSet(
        "params-A", radii_tx=(0, 11, 15, 13), radii_rx=(0, 18, 17, 7), path_powers=(0.4, 0.3, 0.3)
    ),
    "params-B": NamedParameterSet(
        "params-B", radii_tx=(0, 8, 18, 7), radii_rx=(0, 11, 8, 3), path_powers=(0.0, 0.5, 0.5)
    ),
}

# TX-RX distance of 100 m; reflector coordinates are simulator defaults.
DEFAULT_POSITIONS = {"tx": [0.0, 0.0], "reflectors": [[50.0, 40.0], [45.0, -30.0]], "rx": [100.0, 0.0]}
DEFAULT_PARAMETER_SET = "params-A"
DEFAULT_ANTENNAS = 64
DEFAULT_BEAMS = 64
DEFAULT_BUDGET = 4
DEFAULT_SWEEP = "snr:-10:30:5"
DEFAULT_SNR_DB = 10.0


@dataclass(frozen=True)
class SweepSpec:
    """Swept axis (``"snr"`` in dB or ``"d"`` beams per side) and its points."""

    axis: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.axis not in ("snr", "d"):
            raise ValueError(f"unknown sweep axis {self.axis!r}, expected 'snr' or 'd'")
        if not self.values:
            raise ValueError("sweep has no points")
        if self.axis == "d" and any(v < 1 or v != int(v) for v in self.values):
            raise ValueError(f"beam-count sweep needs positive integers, got {self.values}")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """Parse ``snr:<lo>:<hi>[:<step>]`` or ``d:<lo>:<hi>[:<step>]`` (inclusive)."""
        parts = text.strip().split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"malformed sweep {text!r}, expected axis:lo:hi[:step]")
        axis = parts[0].lower()
        try:
            lo, hi = float(parts[1]), float(parts[2])
            step = float(parts[3]) if len(parts) == 4 else (5.0 if axis == "snr" else 1.0)
        except ValueError:
            raise ValueError(f"malformed sweep {text!r}: bounds must be numbers") from None
        if step <= 0 or hi < lo:
            raise ValueError(f"malformed sweep {text!r}: need lo <= hi and step > 0")
        n = int(np.floor((hi - lo) / step + 1e-9)) + 1
        values = tuple(float(lo + i * step) for i in range(n))
        if axis == "d":
            values = tuple(float(int(round(v))) for v in values)
        return cls(axis, values)

    def __str__(self):
        vals = self.values
        step = vals[1] - vals[0] if len(vals) > 1 else 1.0
        return f"{self.axis}:{_num(vals[0])}:{_num(vals[-1])}:{_num(step)}"


def _num(v: float):
    return int(v) if float(v).is_integer() else v


@dataclass(frozen=True)
class Scenario:
    positions: PositionMatrix
    profile: PathProfile
    arrays: ArrayConfig
    m_tx: int
    m_rx: int
    errors: ErrorModel
    strategy: StrategyConfig
    sweep: SweepSpec = field(default_factory=lambda: SweepSpec.parse(DEFAULT_SWEEP))
    snr_db: float = DEFAULT_SNR_DB
    name: str = "default"
    parameter_set: str | None = None

    def __post_init__(self):
        if self.profile.n_paths != self.positions.n_paths:
            raise ScenarioError(
                f"path_powers: {self.profile.n_paths} powers for {self.positions.n_paths} paths"
            )
        if self.errors.n_nodes != self.positions.n_paths + 1:
            raise ScenarioError(
                f"errors: {self.errors.n_nodes} radii per side for {self.positions.n_paths + 1} nodes"
            )
        if self.m_tx < 2 or self.m_rx < 2:
            raise ScenarioError(f"codebook: need at least 2 beams, got ({self.m_tx}, {self.m_rx})")
        if self.strategy.d_tx > self.m_tx or self.strategy.d_rx > self.m_rx:
            raise ScenarioError("strategy: beam budgets exceed codebook sizes")
        if self.sweep.axis == "d" and max(self.sweep.values) > min(self.m_tx, self.m_rx):
            raise ScenarioError("sweep: beam count exceeds codebook size")

    @cached_property
    def codebooks(self) -> tuple[Codebook, Codebook]:
        return build_codebook(self.m_tx, self.arrays.n_tx), build_codebook(self.m_rx, self.arrays.n_rx)

    def to_dict(self) -> dict[str, Any]:
        return scenario_to_dict(self)

    def param_hash(self) -> str:
        """Short digest of the canonical JSON form."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _wrap(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _point(value, path: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{path}: expected [x, y]")
    try:
        out = [float(value[0]), float(value[1])]
    except (TypeError, ValueError):
        raise ScenarioError(f"{path}: coordinates must be numbers") from None
    if not all(np.isfinite(out)):
        raise ScenarioError(f"{path}: coordinates must be finite")
    return out


def _radii(value, path: str) -> list[float]:
    if not isinstance(value, (list, tuple)):
        raise ScenarioError(f"{path}: expected a list of radii")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"{path}[{i}]: radius must be a number")
        if not np.isfinite(v) or v < 0:
            raise ScenarioError(f"{path}[{i}]: radius must be finite and non-negative, got {v}")
        out.append(float(v))
    return out


def _positive_int(value, path: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioError(f"{path}: expected an integer >= {minimum}, got {value!r}")
    return value


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """Validate a decoded scenario document and apply defaults."""
    if not isinstance(data, dict):
        raise ScenarioError("<root>: scenario must be a JSON object")
    known = {
        "name", "parameter_set", "positions", "path_powers", "arrays",
        "codebook", "errors", "strategy", "sweep", "snr_db",
    }
    unknown = sorted(set(data) - known)
    if unknown:
        raise ScenarioError(f"{unknown[0]}: unknown field")

    set_name = data.get("parameter_set")
    if set_name is None and ("errors" not in data or "path_powers" not in data):
        set_name = DEFAULT_PARAMETER_SET
    if set_name is not None and set_name not in PARAMETER_SETS:
        raise ScenarioError(
            f"parameter_set: unknown set {set_name!r}, expected one of {sorted(PARAMETER_SETS)}"
        )
    named = PARAMETER_SETS.get(set_name) if set_name else None

    pos_d = data.get("positions", DEFAULT_POSITIONS)
    if not isinstance(pos_d, dict):
        raise ScenarioError("positions: expected an object with tx, reflectors, rx")
    tx = _point(pos_d.get("tx", DEFAULT_POSITIONS["tx"]), "positions.tx")
    rx = _point(pos_d.get("rx", DEFAULT_POSITIONS["rx"]), "positions.rx")
    refl_raw = pos_d.get("reflectors", DEFAULT_POSITIONS["reflectors"])
    if not isinstance(refl_raw, (list, tuple)):
        raise ScenarioError("positions.reflectors: expected a list of [x, y]")
    refl = [_point(r, f"positions.reflectors[{i}]") for i, r in enumerate(refl_raw)]
    positions = _wrap("positions", PositionMatrix.from_points, tx, refl, rx)

    powers = data.get("path_powers", named.path_powers if named else None)
    if not isinstance(powers, (list, tuple)):
        raise ScenarioError("path_powers: expected a list of non-negative numbers")
    for i, p in enumerate(powers):
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not np.isfinite(p) or p < 0:
            raise ScenarioError(f"path_powers[{i}]: must be a non-negative number, got {p!r}")
    profile = _wrap("path_powers", PathProfile, powers)

    arrays_d = data.get("arrays", {})
    if not isinstance(arrays_d, dict):
        raise ScenarioError("arrays: expected an object")
    arrays = ArrayConfig(
        n_tx=_positive_int(arrays_d.get("n_tx", DEFAULT_ANTENNAS), "arrays.n_tx"),
        n_rx=_positive_int(arrays_d.get("n_rx", DEFAULT_ANTENNAS), "arrays.n_rx"),
    )

    cb_d = data.get("codebook", {})
    if not isinstance(cb_d, dict):
        raise ScenarioError("codebook: expected an object")
    m_tx = _positive_int(cb_d.get("m_tx", DEFAULT_BEAMS), "codebook.m_tx", 2)
    m_rx = _positive_int(cb_d.get("m_rx", DEFAULT_BEAMS), "codebook.m_rx", 2)

    err_d = data.get("errors", {})
    if not isinstance(err_d, dict):
        raise ScenarioError("errors: expected an object with radii_tx and radii_rx")
    radii_tx = err_d.get("radii_tx", named.radii_tx if named else None)
    radii_rx = err_d.get("radii_rx", named.radii_rx if named else None)
    if radii_tx is None or radii_rx is None:
        raise ScenarioError("errors: radii_tx and radii_rx are required without a parameter_set")
    radii_tx = _radii(radii_tx, "errors.radii_tx")
    radii_rx = _radii(radii_rx, "errors.radii_rx")
    n_nodes = positions.n_paths + 1
    for key, r in (("radii_tx", radii_tx), ("radii_rx", radii_rx)):
        if len(r) != n_nodes:
            raise ScenarioError(f"errors.{key}: expected {n_nodes} radii (one per node), got {len(r)}")
        if r[0] != 0:
            raise ScenarioError(f"errors.{key}[0]: the TX position is known exactly, radius must be 0")
    errors = ErrorModel(radii_tx, radii_rx)

    st_d = data.get("strategy", {})
    if not isinstance(st_d, dict):
        raise ScenarioError("strategy: expected an object")
    inner = st_d.get("mc_inner_iterations")
    strategy = StrategyConfig(
        d_tx=_positive_int(st_d.get("d_tx", DEFAULT_BUDGET), "strategy.d_tx"),
        d_rx=_positive_int(st_d.get("d_rx", DEFAULT_BUDGET), "strategy.d_rx"),
        mc_iterations=_positive_int(st_d.get("mc_iterations", DEFAULT_MC_ITERATIONS), "strategy.mc_iterations"),
        mc_inner_iterations=None if inner is None else _positive_int(inner, "strategy.mc_inner_iterations"),
        seed=_positive_int(st_d.get("seed", 0), "strategy.seed", 0),
    )

    sweep_raw = data.get("sweep", DEFAULT_SWEEP)
    if not isinstance(sweep_raw, str):
        raise ScenarioError("sweep: expected a string such as 'snr:-10:30:5' or 'd:1:8'")
    sweep = _wrap("sweep", SweepSpec.parse, sweep_raw)

    snr_db = data.get("snr_db", DEFAULT_SNR_DB)
    if isinstance(snr_db, bool) or not isinstance(snr_db, (int, float)) or not np.isfinite(snr_db):
        raise ScenarioError(f"snr_db: expected a finite number, got {snr_db!r}")

    name = data.get("name", set_name or "custom")
    if not isinstance(name, str):
        raise ScenarioError("name: expected a string")

    return Scenario(
        positions=positions,
        profile=profile,
        arrays=arrays,
        m_tx=m_tx,
        m_rx=m_rx,
        errors=errors,
        strategy=strategy,
        sweep=sweep,
        snr_db=float(snr_db),
        name=name,
        parameter_set=set_name,
    )


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    """Fully expanded document; ``scenario_from_dict`` inverts it exactly."""
    coords = s.positions.coords
    return {
        "name": s.name,
        "parameter_set": s.parameter_set,
        "positions": {
            "tx": coords[0].tolist(),
            "reflectors": coords[1:-1].tolist(),
            "rx": coords[-1].tolist(),
        },
        "path_powers": s.profile.powers.tolist(),
        "arrays": {"n_tx": s.arrays.n_tx, "n_rx": s.arrays.n_rx},
        "codebook": {"m_tx": s.m_tx, "m_rx": s.m_rx},
        "errors": {"radii_tx": s.errors.radii_tx.tolist(), "radii_rx": s.errors.radii_rx.tolist()},
        "strategy": {
            "d_tx": s.strategy.d_tx,
            "d_rx": s.strategy.d_rx,
            "mc_iterations": s.strategy.mc_iterations,
            "mc_inner_iterations": s.strategy.mc_inner_iterations,
            "seed": s.strategy.seed,
        },
        "sweep": str(s.sweep),
        "snr_db": s.snr_db,
    }


def builtin_scenario(name: str = DEFAULT_PARAMETER_SET, **overrides) -> Scenario:
    """Default geometry with a named parameter set; ``overrides`` are top-level document keys."""
    if name not in PARAMETER_SETS:
        raise ScenarioError(f"parameter_set: unknown set {name!r}")
    return scenario_from_dict({"parameter_set": name, **overrides})


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"<file>: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"<file>: {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return scenario_from_dict(data)


def write_scenario(s: Scenario, path: str | Path):
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")
