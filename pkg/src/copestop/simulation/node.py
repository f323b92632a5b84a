"""Per-node simulation state"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..coding import CodingOption, NeighborKnowledge, Packet, find_best_coding_option
from ..estimation import DegreeGrowthStats, LmsFilter, RateCounter
from ..schema import PolicyParams
from .energy import RadioActivity


@dataclass
class NodeState:
    """
    Everything one node owns during a run.

    pool holds every native the node can use to cancel XOR terms: its queue,
    natives awaiting an ACK, natives it sent or forwarded, and overheard ones.
    """

    node_id: int
    neighbors: frozenset
    buffer_size: int
    policy_params: PolicyParams
    lms: LmsFilter
    knowledge: Optional[NeighborKnowledge] = None
    output_queue: List[Packet] = field(default_factory=list)
    pool: Dict[int, Packet] = field(default_factory=dict)
    pending_retransmissions: Dict[int, Packet] = field(default_factory=dict)
    tx_counter: RateCounter = field(default_factory=RateCounter)
    window_stats: DegreeGrowthStats = field(default_factory=DegreeGrowthStats)
    lifetime_stats: DegreeGrowthStats = field(default_factory=DegreeGrowthStats)
    radio: RadioActivity = field(default_factory=RadioActivity)
    best_option_cache: Optional[CodingOption] = None
    last_opportunity: Optional[float] = None
    opportunity_gaps: List[float] = field(default_factory=list)

    def __post_init__(self):
        if self.knowledge is None:
            self.knowledge = NeighborKnowledge(neighbors=frozenset(self.neighbors))

    @property
    def best_degree(self) -> int:
        """Degree of the cached option; 0 when the queue is empty"""
        return self.best_option_cache.degree if self.best_option_cache else 0

    @property
    def pool_ids(self) -> frozenset:
        return frozenset(self.pool)

    def enqueue(self, packet: Packet) -> bool:
        """Append at the tail; False when the buffer is full"""
        if len(self.output_queue) >= self.buffer_size:
            return False
        self.output_queue.append(packet)
        self.pool[packet.packet_id] = packet
        return True

    def requeue_head(self, packet: Packet) -> Optional[Packet]:
        """Put a retransmission at the head; returns the tail packet pushed out, if any"""
        self.output_queue.insert(0, packet)
        self.pool[packet.packet_id] = packet
        if len(self.output_queue) > self.buffer_size:
            return self.output_queue.pop()
        return None

    def remove_from_queue(self, packet_ids: frozenset) -> List[Packet]:
        removed = [p for p in self.output_queue if p.packet_id in packet_ids]
        self.output_queue = [p for p in self.output_queue if p.packet_id not in packet_ids]
        return removed

    def refresh_option(self) -> bool:
        """
        Recompute the best option for the current head.

        Returns:
            True when the degree grew for the same head. An empty queue or a
            new head starts over at degree 1 and never counts as growth.
        """
        previous = self.best_option_cache
        if self.output_queue:
            head = self.output_queue[0]
            self.best_option_cache = find_best_coding_option(head, self.output_queue, self.knowledge)
        else:
            self.best_option_cache = None
        current = self.best_option_cache
        if previous is None or current is None or previous.head != current.head:
            return False
        return current.degree > previous.degree

    def forget(self, packet_ids) -> None:
        """Drop end-of-life natives from the pool and from neighbour knowledge"""
        for pid in packet_ids:
            self.pool.pop(pid, None)
        self.knowledge.purge(packet_ids)
