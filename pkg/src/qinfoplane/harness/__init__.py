"""Experiment harness: config files, alpha x seed sweeps and result files."""
from .config import (
    ALPHA_WARN,
    DataConfig,
    Experiment,
    ExperimentConfig,
    ModelConfig,
    load_config,
    parse_config,
)
from .runner import (
    CellResult,
    SweepResult,
    aggregate,
    build_model,
    build_splits,
    emit,
    report,
    run,
    run_cell,
)

__all__ = [
    "ALPHA_WARN",
    "CellResult",
    "DataConfig",
    "Experiment",
    "ExperimentConfig",
    "ModelConfig",
    "SweepResult",
    "aggregate",
    "build_model",
    "build_splits",
    "emit",
    "load_config",
    "parse_config",
    "report",
    "run",
    "run_cell",
]
