"""
copestop - optimal stopping for COPE-style inter-flow network coding

A policy library for the to-send-or-not-to-send rule, numeric oracles that
check it, and a seeded discrete-event simulator that compares it with
immediate-send and no-coding forwarding.
"""

__version__ = "1.1.0"

from .schema import (
    Decision,
    PolicyName,
    PolicyParams,
    ValueSolution,
    ScenarioConfig,
    FinalEstimates,
    MetricsReport,
    RunRecord,
)
from .policy import decide, threshold, value_iteration
from .simulation import Simulator, run
from .experiments import parse_config, run_matrix
from .exporters import emit_csv, emit_qq_data

__all__ = [
    "Decision",
    "PolicyName",
    "PolicyParams",
    "ValueSolution",
    "ScenarioConfig",
    "FinalEstimates",
    "MetricsReport",
    "RunRecord",
    "decide",
    "threshold",
    "value_iteration",
    "Simulator",
    "run",
    "parse_config",
    "run_matrix",
    "emit_csv",
    "emit_qq_data",
]
