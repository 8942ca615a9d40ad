"""Experiment runner: lambda sweeps, tables, curve data and SVG plots."""

from .config import ExperimentConfig, default_lambda_grid
from .outputs import emit_metadata, emit_tables
from .plots import emit_plots, operator_curves
from .runner import SweepResult, run_experiment
