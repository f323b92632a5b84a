"""
Per-event trace export to Parquet (columns: time, kind, node, detail).
"""

import logging
from pathlib import Path
from typing import Any, Dict, List

from .base import Exporter

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("time", "kind", "node", "detail")


class TraceExporter(Exporter):
    """Exports a simulator event trace to Parquet"""

    def export(self, data: List[Dict[str, Any]], path: Path) -> Path:
        try:
            import pandas as pd
            import pyarrow as pa  # noqa: F401  # side-effect: enables engine='pyarrow' in pandas
        except ImportError:
            logger.error("Trace export requires pandas and pyarrow")
            raise RuntimeError("Install with: pip install pandas pyarrow")

        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(list(data), columns=list(TRACE_COLUMNS))
        frame = frame.astype({"time": "float64", "kind": "string", "node": "int64", "detail": "string"})
        frame.to_parquet(path, engine="pyarrow", index=False)
        logger.info(f"Wrote {len(frame)} trace events to {path}")
        return path


def export_trace(trace: List[Dict[str, Any]], path: Path) -> Path:
    return TraceExporter().export(trace, path)
