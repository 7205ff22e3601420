"""Reproducible refinement studies, rate fitting and the abstract property battery."""

from feeclab.studies.battery import BatteryReport, perturbation_sweep, run_battery, run_trial
from feeclab.studies.commands import (
    GEOMETRY_COLUMNS,
    StudyResult,
    clusters,
    cmd_abstract,
    cmd_eigen,
    cmd_geom,
    cmd_mesh,
    cmd_solve,
    cmd_study,
    eigen_checks,
    study_targets,
)
from feeclab.studies.config import StudyConfig
from feeclab.studies.rates import LimitCheck, RateTable, RateTarget, Verdict, fit_rate
from feeclab.studies.runner import LevelRunner
from feeclab.studies.solve import LevelResult, harmonic_gap, solve_level

__all__ = [
    "GEOMETRY_COLUMNS",
    "BatteryReport",
    "LevelResult",
    "LevelRunner",
    "LimitCheck",
    "RateTable",
    "RateTarget",
    "StudyConfig",
    "StudyResult",
    "Verdict",
    "clusters",
    "cmd_abstract",
    "cmd_eigen",
    "cmd_geom",
    "cmd_mesh",
    "cmd_solve",
    "cmd_study",
    "eigen_checks",
    "fit_rate",
    "harmonic_gap",
    "perturbation_sweep",
    "run_battery",
    "run_trial",
    "solve_level",
    "study_targets",
]
