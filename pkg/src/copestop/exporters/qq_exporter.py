"""
QQ data for inter-opportunity times against an exponential law.

Output: a `theoretical,empirical` CSV of matched quantiles, plotting
positions (i - 0.5)/n, followed by one comment line carrying the
Kolmogorov-Smirnov statistic.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from .._stability_constants import (
    CSV_ENCODING,
    CSV_FLOAT_FORMAT,
    CSV_LINE_TERMINATOR,
    QQ_MIN_SAMPLES,
)
from ..errors import ParameterDomainError
from .base import Exporter

logger = logging.getLogger(__name__)

# Deviation is measured on the central part of the distribution; the extreme
# order statistics of an exponential sample scatter by O(1/rate).
QQ_DEVIATION_BAND = (0.01, 0.99)


@dataclass(frozen=True)
class QQSummary:
    n: int
    rate: float
    ks_statistic: float
    p_value: float
    max_deviation: float
    quantile_range: float

    @property
    def relative_deviation(self) -> float:
        return self.max_deviation / self.quantile_range if self.quantile_range > 0 else 0.0


def exponential_ks(samples: Sequence[float], rate: float) -> Tuple[float, float]:
    """One-sample KS test against Exp(rate); returns (statistic, p-value)"""
    if rate <= 0.0:
        raise ParameterDomainError(f"rate must be > 0, got {rate}")
    result = stats.kstest(np.asarray(samples, dtype=float), "expon", args=(0.0, 1.0 / rate))
    return float(result.statistic), float(result.pvalue)


def qq_points(samples: Sequence[float], rate: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(plotting positions, theoretical quantiles, sorted samples)"""
    empirical = np.sort(np.asarray(samples, dtype=float))
    n = len(empirical)
    positions = (np.arange(1, n + 1) - 0.5) / n
    theoretical = stats.expon.ppf(positions, loc=0.0, scale=1.0 / rate)
    return positions, theoretical, empirical


class QQExporter(Exporter):
    """Writes QQ data for samples against an exponential with a given rate"""

    def __init__(self, rate: float):
        if rate <= 0.0:
            raise ParameterDomainError(f"rate must be > 0, got {rate}")
        self.rate = rate
        self.summary: Optional[QQSummary] = None

    def export(self, data: Sequence[float], path: Path) -> Path:
        if len(data) < QQ_MIN_SAMPLES:
            raise ParameterDomainError(
                f"QQ data needs at least {QQ_MIN_SAMPLES} samples, got {len(data)}"
            )
        path = Path(path)
        positions, theoretical, empirical = qq_points(data, self.rate)
        statistic, p_value = exponential_ks(empirical, self.rate)

        lo, hi = QQ_DEVIATION_BAND
        band = (positions >= lo) & (positions <= hi)
        deviation = float(np.max(np.abs(theoretical[band] - empirical[band])))
        self.summary = QQSummary(
            n=len(empirical),
            rate=self.rate,
            ks_statistic=statistic,
            p_value=p_value,
            max_deviation=deviation,
            quantile_range=float(empirical[-1] - empirical[0]),
        )

        frame = pd.DataFrame({"theoretical": theoretical, "empirical": empirical})
        frame.to_csv(
            path,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator=CSV_LINE_TERMINATOR,
            encoding=CSV_ENCODING,
        )
        with open(path, "a", encoding=CSV_ENCODING, newline="") as f:
            f.write(
                f"# ks_statistic={statistic:.10g},p_value={p_value:.10g},"
                f"n={len(empirical)},rate={self.rate:.10g}{CSV_LINE_TERMINATOR}"
            )

        logger.info(f"Wrote {len(empirical)} QQ points to {path} (KS={statistic:.4g}, p={p_value:.4g})")
        return path


def emit_qq_data(samples: Sequence[float], rate: float, path: Path) -> QQSummary:
    """Write QQ data and return its goodness-of-fit summary"""
    exporter = QQExporter(rate)
    exporter.export(samples, path)
    return exporter.summary
