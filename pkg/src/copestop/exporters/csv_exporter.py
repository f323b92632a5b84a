"""
Results CSV.

One row per RunRecord, columns in the frozen CSV_COLUMNS order, floats via
CSV_FLOAT_FORMAT, '\n' line endings. Identical records give identical bytes.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List

import pandas as pd

from .._stability_constants import (
    CSV_COLUMNS,
    CSV_ENCODING,
    CSV_FLOAT_FORMAT,
    CSV_LINE_TERMINATOR,
)
from ..errors import ContractError
from ..schema import RunRecord
from ..utils.hashing import canonical_json
from .base import Exporter

logger = logging.getLogger(__name__)


def record_row(record: RunRecord) -> Dict[str, Any]:
    """Flatten a RunRecord into CSV_COLUMNS"""
    report = record.report
    estimates = report.final_estimates
    return {
        "scenario": record.scenario,
        "seed": record.seed,
        "row_seed": str(record.row_seed),
        "cell_seed": str(record.cell_seed),
        "policy": record.policy.value,
        "flow_count": record.flow_count,
        "horizon": report.horizon,
        "coding_gain": report.coding_gain,
        "zero_transmissions": str(report.zero_transmissions).lower(),
        "mean_e2e_delay": report.mean_e2e_delay,
        "throughput": report.throughput,
        "energy_per_node": report.energy_per_node,
        "energy_per_delivered": report.energy_per_delivered,
        "transmissions": report.transmissions,
        "failed_transmissions": report.failed_transmissions,
        "generated": report.generated,
        "delivered": report.delivered,
        "in_flight": report.in_flight,
        "dropped": report.drops,
        "unroutable": report.unroutable,
        "decode_failures": report.decode_failures,
        "degree_histogram": canonical_json({str(k): v for k, v in report.degree_histogram.items()}),
        "lambda_t_estimate": estimates.lambda_t,
        "lambda_d_estimate": estimates.lambda_d,
        "p_p": estimates.p_p,
        "p_r": estimates.p_r,
        "rng_algorithm": report.rng_algorithm,
        "busy_opportunities": report.busy_opportunities,
        "waits": report.waits,
    }


def records_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = [record_row(r) for r in records]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS))


class CsvExporter(Exporter):
    """Writes RunRecords to the results CSV"""

    def export(self, data: Iterable[RunRecord], path: Path) -> Path:
        records = list(data)
        if not records:
            raise ContractError("refusing to write a results CSV without records")
        path = Path(path)
        frame = records_frame(records)
        frame.to_csv(
            path,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator=CSV_LINE_TERMINATOR,
            encoding=CSV_ENCODING,
        )
        logger.info(f"Wrote {len(records)} records to {path}")
        return path


def emit_csv(records: Iterable[RunRecord], path: Path) -> Path:
    """Convenience wrapper around CsvExporter"""
    return CsvExporter().export(records, path)
