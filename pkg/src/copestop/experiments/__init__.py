"""Scenario configuration, matrix execution and acceptance checks"""

from .config import parse_config, render_config, with_overrides
from .matrix import MatrixCell, derive_cell_seeds, plan_cells, run_cell, run_matrix
from .acceptance import CheckResult, run_acceptance, run_relay_exchange

__all__ = [
    "parse_config",
    "render_config",
    "with_overrides",
    "MatrixCell",
    "derive_cell_seeds",
    "plan_cells",
    "run_cell",
    "run_matrix",
    "CheckResult",
    "run_acceptance",
    "run_relay_exchange",
]
