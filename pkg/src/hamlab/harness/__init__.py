"""Experiment registry and command line runner."""
from . import experiments  # noqa: F401
from .core import REGISTRY, ConfigError, RunResult, load_config, resolve_params, run_experiment
from .report import ReportError, report, summarize

__all__ = ["REGISTRY", "ConfigError", "ReportError", "RunResult", "load_config", "report",
           "resolve_params", "run_experiment", "summarize"]
