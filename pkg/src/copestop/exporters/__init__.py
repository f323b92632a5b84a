"""Export layer for run results"""

from .base import Exporter
from .csv_exporter import CsvExporter, emit_csv, records_frame
from .qq_exporter import QQExporter, QQSummary, emit_qq_data, exponential_ks
from .trace_exporter import TraceExporter, export_trace

__all__ = [
    "Exporter",
    "CsvExporter",
    "emit_csv",
    "records_frame",
    "QQExporter",
    "QQSummary",
    "emit_qq_data",
    "exponential_ks",
    "TraceExporter",
    "export_trace",
]
