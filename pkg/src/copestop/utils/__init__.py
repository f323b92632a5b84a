"""Utility modules for copestop"""

from .hashing import canonical_json, compute_report_hash, derive_seed, splitmix64
from .logging_config import LogContext, StructuredFormatter, setup_logging, worker_logging_args

__all__ = [
    "canonical_json",
    "compute_report_hash",
    "derive_seed",
    "splitmix64",
    "LogContext",
    "StructuredFormatter",
    "setup_logging",
    "worker_logging_args",
]
