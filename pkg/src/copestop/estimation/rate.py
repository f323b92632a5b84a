"""
Online rate estimation: opportunity counting (λ_t) and the empirical degree
growth probabilities p_p and p_r that compose λ_d.
"""

from dataclasses import dataclass

from ..errors import ClockRegressionError, ParameterDomainError, UndefinedElapsedError
from ..policy.closed_form import compose_degree_growth_rate


@dataclass
class RateCounter:
    """Counts events since start_time; λ = count / elapsed"""

    start_time: float = 0.0
    event_count: int = 0

    def record(self, now: float) -> "RateCounter":
        if now < self.start_time:
            raise ClockRegressionError(
                f"event at {now} precedes counter start {self.start_time}"
            )
        self.event_count += 1
        return self

    def estimate(self, now: float) -> float:
        if now <= self.start_time:
            raise UndefinedElapsedError(
                f"elapsed time is undefined at {now} for a counter started at {self.start_time}"
            )
        if self.event_count == 0:
            return 0.0
        return self.event_count / (now - self.start_time)


def rate_record(counter: RateCounter, now: float) -> RateCounter:
    return counter.record(now)


def rate_estimate(counter: RateCounter, now: float) -> float:
    return counter.estimate(now)


@dataclass
class DegreeGrowthStats:
    """
    Empirical attribution of best-degree increments to their trigger.

    A data packet (arrival, reception or overheard native) that raised the
    head's best degree counts toward p_p; a reception report that did counts
    toward p_r.
    """

    window: float = 1.0
    data_events: int = 0
    data_increments: int = 0
    report_events: int = 0
    report_increments: int = 0

    def record_data(self, raised: bool) -> None:
        self.data_events += 1
        if raised:
            self.data_increments += 1

    def record_report(self, raised: bool) -> None:
        self.report_events += 1
        if raised:
            self.report_increments += 1

    @property
    def observed_p_p(self) -> float:
        return self.data_increments / self.data_events if self.data_events else 0.0

    @property
    def observed_p_r(self) -> float:
        return self.report_increments / self.report_events if self.report_events else 0.0

    @property
    def data_rate(self) -> float:
        return self.data_events / self.window

    @property
    def report_rate(self) -> float:
        return self.report_events / self.window

    def reset(self, window: float) -> None:
        self.window = window
        self.data_events = self.data_increments = 0
        self.report_events = self.report_increments = 0


def degree_growth_estimate(stats: DegreeGrowthStats, lambda_p: float, lambda_r: float) -> float:
    """
    λ_r·p_r + λ_p·p_p with the observed probabilities.

    Raises:
        ParameterDomainError: window <= 0 or a negative rate
    """
    if stats.window <= 0.0:
        raise ParameterDomainError(f"measurement window must be > 0, got {stats.window}")
    return compose_degree_growth_rate(lambda_r, stats.observed_p_r, lambda_p, stats.observed_p_p)
