"""Run tallies and the end-of-run metrics report"""

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Sequence, Set

from ..errors import ConsistencyError
from ..schema import FinalEstimates, MetricsReport
from .energy import PowerModel, account_energy
from .node import NodeState


@dataclass(slots=True)
class TxRecord:
    """One broadcast; decoded counts intended next hops that recovered their native"""

    degree: int
    decoded: int = 0


@dataclass
class RunTally:
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    unroutable: int = 0
    decode_failures: int = 0
    retransmissions: int = 0
    busy_opportunities: int = 0
    waits: int = 0
    delay_total: float = 0.0
    transmissions: List[TxRecord] = field(default_factory=list)
    live: Set[int] = field(default_factory=set)


def _safe_mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


def final_estimates(nodes: Sequence[NodeState], horizon: float) -> FinalEstimates:
    """Network means of the per-node estimator state"""
    data_events = sum(n.lifetime_stats.data_events for n in nodes)
    data_hits = sum(n.lifetime_stats.data_increments for n in nodes)
    report_events = sum(n.lifetime_stats.report_events for n in nodes)
    report_hits = sum(n.lifetime_stats.report_increments for n in nodes)
    return FinalEstimates(
        lambda_t=_safe_mean([n.tx_counter.estimate(horizon) for n in nodes]) if horizon > 0 else 0.0,
        lambda_d=_safe_mean([max(0.0, n.lms.predict()) for n in nodes]),
        p_p=data_hits / data_events if data_events else 0.0,
        p_r=report_hits / report_events if report_events else 0.0,
    )


def collect_metrics(
    tally: RunTally,
    nodes: Sequence[NodeState],
    horizon: float,
    bitrate: float,
    power: PowerModel = PowerModel(),
) -> MetricsReport:
    """
    Summarise a finished run.

    Failed transmissions (no intended next hop decoded) stay out of the
    coding-gain ratio but count everywhere else.

    Raises:
        ConsistencyError: generated != delivered + in flight + dropped + unroutable
    """
    in_flight = len(tally.live)
    accounted = tally.delivered + in_flight + tally.dropped + tally.unroutable
    if tally.generated != accounted:
        raise ConsistencyError(
            f"packet conservation violated: generated {tally.generated}, accounted {accounted}"
        )

    successful = [t for t in tally.transmissions if t.decoded > 0]
    if successful:
        coding_gain = sum(t.degree for t in successful) / len(successful)
    else:
        coding_gain = 1.0

    node_energy = [account_energy(n.radio, horizon, bitrate, power).total for n in nodes]
    total_energy = math.fsum(node_energy)

    return MetricsReport(
        horizon=horizon,
        coding_gain=coding_gain,
        zero_transmissions=not successful,
        mean_e2e_delay=tally.delay_total / tally.delivered if tally.delivered else None,
        throughput=tally.delivered / horizon if horizon > 0 else 0.0,
        energy_per_node=total_energy / len(nodes) if nodes else 0.0,
        energy_per_delivered=total_energy / tally.delivered if tally.delivered else None,
        node_energy=node_energy,
        transmissions=len(tally.transmissions),
        failed_transmissions=len(tally.transmissions) - len(successful),
        degree_histogram=dict(sorted(Counter(t.degree for t in tally.transmissions).items())),
        generated=tally.generated,
        delivered=tally.delivered,
        in_flight=in_flight,
        drops=tally.dropped,
        unroutable=tally.unroutable,
        decode_failures=tally.decode_failures,
        busy_opportunities=tally.busy_opportunities,
        waits=tally.waits,
        final_estimates=final_estimates(nodes, horizon),
    )
