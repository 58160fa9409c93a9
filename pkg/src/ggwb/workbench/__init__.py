"""Scenario registry, check orchestration and reporting."""

from .scenario import Scenario, load_scenario, builtin_names, load_builtin
from .checks import run_checks, CHECKS
from .report import Report, emit_report

__all__ = [
    "Scenario",
    "load_scenario",
    "builtin_names",
    "load_builtin",
    "run_checks",
    "CHECKS",
    "Report",
    "emit_report",
]
