"""What a node believes each neighbour holds"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Set

from ..errors import TopologyError


@dataclass
class NeighborKnowledge:
    """
    known[v] is the set of packet ids neighbour v is believed to hold,
    learnt from overhearing v's transmissions and from v's reception reports.
    """

    neighbors: frozenset
    known: Dict[int, Set[int]] = field(default_factory=dict)

    def __post_init__(self):
        for v in self.neighbors:
            self.known.setdefault(v, set())

    def learn(self, neighbor: int, packet_ids: Iterable[int]) -> None:
        if neighbor not in self.neighbors:
            raise TopologyError(f"node {neighbor} is not a neighbour")
        self.known[neighbor].update(packet_ids)

    def holds(self, neighbor: int, packet_id: int) -> bool:
        return packet_id in self.known.get(neighbor, ())

    def holds_all(self, neighbor: int, packet_ids: Iterable[int]) -> bool:
        held = self.known.get(neighbor)
        if held is None:
            return False
        return all(p in held for p in packet_ids)

    def purge(self, packet_ids: Iterable[int]) -> None:
        """Forget packets that reached end of life"""
        ids = set(packet_ids)
        for held in self.known.values():
            held -= ids


def apply_reception_report(
    knowledge: NeighborKnowledge, reporter: int, packet_ids: Iterable[int]
) -> NeighborKnowledge:
    """
    Union a reception report into the reporter's known set.

    Raises:
        TopologyError: reporter is not a neighbour
    """
    knowledge.learn(reporter, packet_ids)
    return knowledge
