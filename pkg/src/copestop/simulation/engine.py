"""
Discrete-event engine.

Coordinates: Topology → Flows → Nodes → Event loop → Metrics

One Simulator instance is one run: strictly single threaded, with every
random draw taken from a purpose-specific seeded stream so that identical
(config, seed) pairs replay identically.
"""

import logging
import time
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .._stability_constants import (
    PAYLOAD_TAG_BITS,
    STREAM_ARRIVALS,
    STREAM_FLOWS,
    STREAM_LINK_LOSS,
    STREAM_OPPORTUNITIES,
    STREAM_PAYLOAD,
    STREAM_REPORTS,
)
from ..coding import CodedPacket, Packet, apply_reception_report, decode, encode, recoverable
from ..errors import DecodeFailureError, UnroutableError
from ..estimation import LmsFilter, degree_growth_estimate, rate_record
from ..estimation.rate import DegreeGrowthStats
from ..schema import MetricsReport, ScenarioConfig
from .events import Event, EventKind, EventQueue
from .metrics import RunTally, TxRecord, collect_metrics
from .node import NodeState
from .policies import TransmissionPolicy, make_policy
from .streams import StreamBank, sample_interval
from .topology import Flow, Topology, build_topology, route_next_hop, select_flows

logger = logging.getLogger(__name__)


class Simulator:
    """
    Seeded discrete-event simulation of coded forwarding.

    Scripted use: pass a topology and flows, set processes=False and inject
    events before run(); injected events happen once and do not renew.
    """

    def __init__(
        self,
        config: ScenarioConfig,
        seed: Optional[int] = None,
        *,
        link_seed: Optional[int] = None,
        topology: Optional[Topology] = None,
        flows: Optional[Sequence[Flow]] = None,
        policy: Optional[TransmissionPolicy] = None,
        processes: bool = True,
    ):
        """
        Args:
            config: Validated scenario
            seed: Seed of the topology, flow and event streams (defaults to config.seed)
            link_seed: Seed of the link-loss stream (defaults to seed)
            topology: Fixed topology instead of a random placement
            flows: Fixed flows instead of random ones
            policy: Transmission scheme (defaults to config.policy)
            processes: Generate arrivals, opportunities and reports
        """
        self.config = config
        self.seed = config.seed if seed is None else seed
        self.streams = StreamBank(self.seed)
        self.link_streams = StreamBank(self.seed if link_seed is None else link_seed)
        self.policy = policy or make_policy(config.policy)
        self.processes = processes

        self.topology = topology
        self.flows: List[Flow] = list(flows) if flows is not None else []
        self._fixed_flows = flows is not None
        self.nodes: List[NodeState] = []

        self.queue = EventQueue()
        self.now = 0.0
        self.tally = RunTally()
        self.registry: Dict[int, Packet] = {}
        self.trace: List[Dict[str, Any]] = []
        self.timing: Dict[str, float] = {}

        self._prepared = False
        self._next_packet_id = 0
        self._purge_pending: List[int] = []
        self._next_hops: Dict[Tuple[int, int], int] = {}
        self._packet_bits = config.packet_size_bytes * 8

    # ------------------------------------------------------------------ setup

    def prepare(self) -> None:
        """Build topology, flows and node state once"""
        if self._prepared:
            return

        stage_start = time.time()
        self._stage_topology()
        self.timing["topology"] = time.time() - stage_start

        stage_start = time.time()
        self._stage_flows()
        self._stage_nodes()
        self.timing["flows"] = time.time() - stage_start

        self._prepared = True

    def _stage_topology(self) -> None:
        """Stage 1: Place nodes"""
        logger.info("Stage 1/4: Building topology")
        if self.topology is None:
            cfg = self.config
            self.topology = build_topology(
                cfg.node_count,
                (cfg.field_width, cfg.field_height),
                cfg.rho,
                self.seed,
                cfg.max_topology_retries,
            )
        logger.info(f"Topology: {self.topology.node_count} nodes, rho={self.topology.radius_rho}")

    def _stage_flows(self) -> None:
        """Stage 2: Pick flows"""
        logger.info("Stage 2/4: Selecting flows")
        if not self._fixed_flows:
            cfg = self.config
            self.flows = select_flows(
                self.topology,
                cfg.flow_count,
                cfg.packet_rate,
                self.streams.get(STREAM_FLOWS),
                min_hops=cfg.min_flow_hops,
                max_attempts=cfg.max_flow_attempts,
            )
        hops = [f.hops for f in self.flows]
        logger.info(f"Selected {len(self.flows)} flows, hops={hops}")

    def _stage_nodes(self) -> None:
        cfg = self.config
        self.nodes = [
            NodeState(
                node_id=v,
                neighbors=self.topology.neighbors(v),
                buffer_size=cfg.buffer_size,
                policy_params=cfg.policy_params(),
                lms=LmsFilter(cfg.lms_taps, cfg.lms_step),
                window_stats=DegreeGrowthStats(window=cfg.measurement_tick),
                lifetime_stats=DegreeGrowthStats(window=cfg.horizon),
            )
            for v in range(self.topology.node_count)
        ]

    def inject(self, kind: EventKind, at: float, node: int = -1, payload: Any = None) -> None:
        """
        Schedule a one-off event before run().

        PACKET_ARRIVAL takes the flow id as payload; node defaults to its source.
        """
        self.prepare()
        if kind is EventKind.PACKET_ARRIVAL and node < 0:
            node = self.flows[payload].source
        self.queue.push(Event(at, kind, node, payload, renew=False))

    def _schedule_processes(self) -> None:
        cfg = self.config
        if self.processes:
            for flow in self.flows:
                self._schedule_arrival(flow, 0.0)
            for node in self.nodes:
                self._schedule_renewal(
                    EventKind.TX_OPPORTUNITY, node.node_id, 0.0, cfg.opportunity_rate, STREAM_OPPORTUNITIES
                )
                self._schedule_renewal(
                    EventKind.RECEPTION_REPORT, node.node_id, 0.0, cfg.report_rate, STREAM_REPORTS
                )
        self.queue.push(Event(cfg.measurement_tick, EventKind.MEASUREMENT_TICK))

    def _schedule_arrival(self, flow: Flow, after: float) -> None:
        rng = self.streams.get(STREAM_ARRIVALS, flow.flow_id)
        gap = sample_interval(EventKind.PACKET_ARRIVAL, flow.packet_rate, rng)
        self.queue.push(Event(after + gap, EventKind.PACKET_ARRIVAL, flow.source, flow.flow_id))

    def _schedule_renewal(
        self, kind: EventKind, node: int, after: float, rate: float, purpose: int
    ) -> None:
        gap = sample_interval(kind, rate, self.streams.get(purpose, node))
        self.queue.push(Event(after + gap, kind, node))

    # ------------------------------------------------------------------- run

    def run(self) -> MetricsReport:
        """
        Process events up to the horizon and summarise the run.

        Returns:
            MetricsReport
        """
        self.prepare()
        self._schedule_processes()

        logger.info("Stage 3/4: Running event loop")
        stage_start = time.time()
        horizon = self.config.horizon
        processed = 0
        while self.queue and self.queue.peek_time() <= horizon:
            self.step(self.queue.pop())
            processed += 1
        self.now = horizon
        self._flush_purge()
        self.timing["events"] = time.time() - stage_start
        logger.info(f"Processed {processed} events in {self.timing['events']:.2f}s")

        logger.info("Stage 4/4: Collecting metrics")
        report = collect_metrics(self.tally, self.nodes, horizon, self.config.bitrate)
        logger.info(
            f"Run complete: gain={report.coding_gain:.4f}, delivered={report.delivered}, "
            f"transmissions={report.transmissions}"
        )
        return report

    def step(self, event: Event) -> None:
        """Dispatch one event"""
        if event.time > self.now:
            self._flush_purge()
            self.now = event.time

        if self.config.record_trace:
            self.trace.append(
                {"time": event.time, "kind": event.kind.name, "node": event.node, "detail": ""}
            )

        handler = self._handlers[event.kind]
        handler(self, event)

    # -------------------------------------------------------------- handlers

    def _on_packet_arrival(self, event: Event) -> None:
        flow = self.flows[event.payload]
        packet = Packet(
            packet_id=self._next_packet_id,
            flow_id=flow.flow_id,
            source=flow.source,
            destination=flow.destination,
            next_hop=flow.route[1],
            size_bytes=self.config.packet_size_bytes,
            created_at=self.now,
            payload_tag=self._payload_tag(),
        )
        self._next_packet_id += 1
        self.registry[packet.packet_id] = packet
        self.tally.generated += 1
        self.tally.live.add(packet.packet_id)

        node = self.nodes[flow.source]
        self._enqueue(node, packet)
        self._note_data(node)

        if event.renew:
            self._schedule_arrival(flow, self.now)

    def _on_tx_opportunity(self, event: Event) -> None:
        node = self.nodes[event.node]
        rate_record(node.tx_counter, self.now)
        if event.renew:
            if node.last_opportunity is not None:
                node.opportunity_gaps.append(self.now - node.last_opportunity)
            node.last_opportunity = self.now

        self.on_tx_opportunity(node, self.now)

        if event.renew:
            self._schedule_renewal(
                EventKind.TX_OPPORTUNITY,
                node.node_id,
                self.now,
                self.config.opportunity_rate,
                STREAM_OPPORTUNITIES,
            )

    def on_tx_opportunity(self, node: NodeState, now: float) -> Optional[CodedPacket]:
        """
        Consult the transmission scheme and broadcast if it says so.

        On Send the members leave the queue, await per-native ACKs, and the
        cached best option is recomputed for the new head.

        Returns:
            The broadcast coded packet, or None when nothing was sent
        """
        if not node.output_queue:
            return None
        self.tally.busy_opportunities += 1
        option = self.policy.select(node)
        if option is None:
            self.tally.waits += 1
            return None

        coded = encode(option, node.pool, transmitter=node.node_id, knowledge=node.knowledge)
        for packet in node.remove_from_queue(coded.native_ids):
            node.pending_retransmissions[packet.packet_id] = packet
            self.queue.push(
                Event(
                    now + self.config.ack_timeout,
                    EventKind.ACK_TIMEOUT,
                    node.node_id,
                    packet.packet_id,
                    renew=False,
                )
            )
        record = TxRecord(degree=coded.degree)
        self.tally.transmissions.append(record)
        node.radio.transmitted_bits += self._packet_bits
        node.refresh_option()

        loss = self.config.loss_probability
        rng = self.link_streams.get(STREAM_LINK_LOSS, node.node_id) if loss > 0.0 else None
        for neighbor in sorted(node.neighbors):
            if rng is not None and rng.random() < loss:
                continue
            self.queue.push(Event(now, EventKind.DELIVERY, neighbor, (coded, record), renew=False))

        if self.config.record_trace:
            self.trace[-1]["detail"] = f"send degree={coded.degree} natives={sorted(coded.native_ids)}"
        return coded

    def _on_delivery(self, event: Event) -> None:
        coded, record = event.payload
        receiver = self.nodes[event.node]
        sender = self.nodes[coded.transmitter]
        receiver.radio.received_bits += self._packet_bits
        receiver.knowledge.learn(coded.transmitter, coded.native_ids)

        if event.node in coded.per_next_hop:
            try:
                native = decode(coded, event.node, receiver.pool_ids, self.registry)
            except DecodeFailureError as e:
                self.tally.decode_failures += 1
                logger.debug(f"t={self.now:.6f}: {e}")
            else:
                record.decoded += 1
                sender.pending_retransmissions.pop(native.packet_id, None)
                sender.knowledge.learn(event.node, (native.packet_id,))
                self._arrive(receiver, native)
        else:
            for packet_id in recoverable(coded, receiver.pool_ids):
                packet = self.registry.get(packet_id)
                if packet is not None:
                    receiver.pool[packet_id] = packet

        self._note_data(receiver)

    def _on_reception_report(self, event: Event) -> None:
        reporter = self.nodes[event.node]
        listing = reporter.pool_ids
        for v in sorted(reporter.neighbors):
            listener = self.nodes[v]
            apply_reception_report(listener.knowledge, reporter.node_id, listing)
            raised = listener.refresh_option()
            listener.window_stats.record_report(raised)
            listener.lifetime_stats.record_report(raised)

        if event.renew:
            self._schedule_renewal(
                EventKind.RECEPTION_REPORT,
                reporter.node_id,
                self.now,
                self.config.report_rate,
                STREAM_REPORTS,
            )

    def _on_ack_timeout(self, event: Event) -> None:
        node = self.nodes[event.node]
        packet = node.pending_retransmissions.pop(event.payload, None)
        if packet is None:
            return
        self.tally.retransmissions += 1
        pushed_out = node.requeue_head(packet)
        if pushed_out is not None:
            self._drop(pushed_out, "retransmission overflow")
        node.refresh_option()

    def _on_measurement_tick(self, event: Event) -> None:
        cfg = self.config
        for node in self.nodes:
            stats = node.window_stats
            observed = degree_growth_estimate(stats, stats.data_rate, stats.report_rate)
            node.lms.update(observed)
            lambda_d = max(0.0, node.lms.predict())
            lambda_t = node.tx_counter.estimate(self.now)
            node.policy_params = cfg.policy_params(
                lambda_d=lambda_d, lambda_t=lambda_t if lambda_t > 0.0 else None
            )
            stats.reset(cfg.measurement_tick)
        if logger.isEnabledFor(logging.DEBUG):
            mean_d = sum(n.policy_params.lambda_d for n in self.nodes) / len(self.nodes)
            logger.debug(f"t={self.now:.3f}: refreshed estimates, mean lambda_d={mean_d:.4f}")
        self.queue.push(Event(self.now + cfg.measurement_tick, EventKind.MEASUREMENT_TICK))

    _handlers = {
        EventKind.PACKET_ARRIVAL: _on_packet_arrival,
        EventKind.TX_OPPORTUNITY: _on_tx_opportunity,
        EventKind.RECEPTION_REPORT: _on_reception_report,
        EventKind.DELIVERY: _on_delivery,
        EventKind.ACK_TIMEOUT: _on_ack_timeout,
        EventKind.MEASUREMENT_TICK: _on_measurement_tick,
    }

    # --------------------------------------------------------------- helpers

    def _payload_tag(self) -> int:
        raw = self.streams.get(STREAM_PAYLOAD).bytes(PAYLOAD_TAG_BITS // 8)
        return int.from_bytes(raw, "big")

    def _enqueue(self, node: NodeState, packet: Packet) -> None:
        if not node.enqueue(packet):
            self._drop(packet, "queue overflow")

    def _drop(self, packet: Packet, reason: str) -> None:
        self.tally.dropped += 1
        self.tally.live.discard(packet.packet_id)
        self._purge_pending.append(packet.packet_id)
        logger.debug(f"t={self.now:.6f}: dropped packet {packet.packet_id} ({reason})")

    def _note_data(self, node: NodeState) -> None:
        raised = node.refresh_option()
        node.window_stats.record_data(raised)
        node.lifetime_stats.record_data(raised)

    def _arrive(self, node: NodeState, native: Packet) -> None:
        """Deliver at the destination or forward toward it"""
        if native.destination == node.node_id:
            self.tally.delivered += 1
            self.tally.delay_total += self.now - native.created_at
            self.tally.live.discard(native.packet_id)
            self._purge_pending.append(native.packet_id)
            return

        key = (node.node_id, native.destination)
        next_hop = self._next_hops.get(key)
        if next_hop is None:
            try:
                next_hop = route_next_hop(node.node_id, native.destination, self.topology)
            except UnroutableError as e:
                self.tally.unroutable += 1
                self.tally.live.discard(native.packet_id)
                self._purge_pending.append(native.packet_id)
                logger.debug(f"t={self.now:.6f}: {e}")
                return
            self._next_hops[key] = next_hop
        self._enqueue(node, replace(native, next_hop=next_hop))

    def _flush_purge(self) -> None:
        if not self._purge_pending:
            return
        ids = self._purge_pending
        self._purge_pending = []
        for pid in ids:
            self.registry.pop(pid, None)
        for node in self.nodes:
            node.forget(ids)

    def opportunity_intervals(self) -> List[float]:
        """Pooled inter-opportunity gaps of every node, in node order"""
        return [gap for node in self.nodes for gap in node.opportunity_gaps]


def run(config: ScenarioConfig, seed: Optional[int] = None, link_seed: Optional[int] = None) -> MetricsReport:
    """Simulate one scenario; identical (config, seed) give identical reports"""
    return Simulator(config, seed, link_seed=link_seed).run()
