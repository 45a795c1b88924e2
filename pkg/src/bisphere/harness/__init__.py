"""Scripted experiments, exponent fitting and reports."""

from __future__ import annotations

from .experiments import (
    alpha_p,
    classify_growth,
    minor_arc_samples,
    run_error_decay_experiment,
    run_holder_sweep,
    run_multiplier_comparison,
    run_scaling_experiment,
    run_sharpness_experiment,
    run_weyl_experiment,
)
from .records import ExperimentRecord, LogLogFit, SweepGrid, fit_loglog
from .report import emit_report, read_report_csv

__all__ = [
    "ExperimentRecord", "LogLogFit", "SweepGrid", "alpha_p", "classify_growth",
    "emit_report", "fit_loglog", "minor_arc_samples", "read_report_csv",
    "run_error_decay_experiment", "run_holder_sweep", "run_multiplier_comparison",
    "run_scaling_experiment", "run_sharpness_experiment", "run_weyl_experiment",
]
