"""
Coding-option search over a node's output queue.

An option is decodable when every member's next hop already holds every
other member, so XOR cancellation leaves exactly its own native.
"""

import itertools
import logging
from typing import Mapping, Optional, Sequence

from ..errors import ConsistencyError, OracleScopeError
from .knowledge import NeighborKnowledge
from .packets import CodingOption, Packet

logger = logging.getLogger(__name__)

EXHAUSTIVE_QUEUE_LIMIT = 12


def _resolve(packet_id: int, packets: Mapping[int, Packet]) -> Packet:
    try:
        return packets[packet_id]
    except KeyError:
        raise ConsistencyError(f"packet {packet_id} is not in the packet table") from None


def is_decodable(
    option: CodingOption, knowledge: NeighborKnowledge, packets: Mapping[int, Packet]
) -> bool:
    """
    True iff each member's next hop is known to hold all other members.

    Raises:
        ConsistencyError: a member id does not resolve
    """
    members = [_resolve(pid, packets) for pid in option.members]
    if len(members) == 1:
        return True
    hops = {p.next_hop for p in members}
    if len(hops) != len(members):
        return False
    for p in members:
        others = [q.packet_id for q in members if q.packet_id != p.packet_id]
        if not knowledge.holds_all(p.next_hop, others):
            return False
    return True


def _compatible(candidate: Packet, chosen: Sequence[Packet], knowledge: NeighborKnowledge) -> bool:
    """Whether adding candidate to an already decodable set keeps it decodable"""
    for p in chosen:
        if p.next_hop == candidate.next_hop:
            return False
        if not knowledge.holds(p.next_hop, candidate.packet_id):
            return False
    return knowledge.holds_all(candidate.next_hop, (p.packet_id for p in chosen))


def find_best_coding_option(
    head: Packet, queue: Sequence[Packet], knowledge: NeighborKnowledge
) -> CodingOption:
    """
    Greedy scan in queue order: a packet joins when its next hop is new and
    the enlarged set stays decodable. Always contains head.
    """
    chosen = [head]
    for candidate in queue:
        if candidate.packet_id == head.packet_id:
            continue
        if _compatible(candidate, chosen, knowledge):
            chosen.append(candidate)
    return CodingOption(tuple(p.packet_id for p in chosen))


def exhaustive_best_option(
    head: Packet,
    queue: Sequence[Packet],
    knowledge: NeighborKnowledge,
    limit: Optional[int] = None,
) -> CodingOption:
    """
    Maximum-degree decodable option containing head; equal-degree options
    resolve to the lexicographically smallest by queue position.

    Raises:
        OracleScopeError: queue longer than the search guard
    """
    limit = EXHAUSTIVE_QUEUE_LIMIT if limit is None else limit
    if len(queue) > limit:
        raise OracleScopeError(f"exhaustive search is limited to {limit} packets, got {len(queue)}")

    packets = {p.packet_id: p for p in queue}
    packets[head.packet_id] = head
    rest = [p.packet_id for p in queue if p.packet_id != head.packet_id]

    for size in range(len(rest), 0, -1):
        for combo in itertools.combinations(rest, size):
            option = CodingOption((head.packet_id,) + combo)
            if is_decodable(option, knowledge, packets):
                return option
    return CodingOption((head.packet_id,))
