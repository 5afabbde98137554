"""Robust location-aided beam pre-selection for mmWave links."""
from .channel import ArrayConfig, PathProfile, steering_vector, synthesize_channel
from .codebook import Codebook, beam_vector, build_codebook
from .evaluation import ExperimentResult, achieved_rate, run_experiment, run_trials, snapshot_beams
from .gain import fejer_gain, gain_matrix, monte_carlo_gain
from .geometry import PathAngles, PositionMatrix, angle_to_vertical, path_angles
from .scenario import Scenario, ScenarioError, SweepSpec, builtin_scenario, load_scenario, write_scenario
from .strategies import (
    BeamSelection,
    Strategy,
    StrategyConfig,
    select_idealized,
    select_naive,
    select_one_step,
    select_two_step,
)
from .uncertainty import ErrorModel, NoisyView, Side, make_noisy_view

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig", "BeamSelection", "Codebook", "ErrorModel", "ExperimentResult", "NoisyView",
    "PathAngles", "PathProfile", "PositionMatrix", "Scenario", "ScenarioError", "Side", "Strategy",
    "StrategyConfig", "SweepSpec", "achieved_rate", "angle_to_vertical", "beam_vector", "build_codebook",
    "builtin_scenario", "fejer_gain", "gain_matrix", "load_scenario", "make_noisy_view",
    "monte_carlo_gain", "path_angles", "run_experiment", "run_trials", "select_idealized",
    "select_naive", "select_one_step", "select_two_step", "snapshot_beams", "steering_vector",
    "synthesize_channel", "write_scenario",
]
