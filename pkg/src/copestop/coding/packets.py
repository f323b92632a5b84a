"""
Native packets, XOR-coded packets and coding options.

These are hot-path objects created per packet and per transmission, so they
are slotted dataclasses rather than pydantic models.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple


@dataclass(frozen=True, slots=True)
class Packet:
    """
    A native packet as held by one node.

    packet_id is stable across hops; next_hop changes as the packet is
    forwarded (dataclasses.replace).
    """

    packet_id: int
    flow_id: int
    source: int
    destination: int
    next_hop: int
    size_bytes: int
    created_at: float
    payload_tag: int


@dataclass(frozen=True, slots=True)
class CodedPacket:
    """XOR of natives with pairwise-distinct next hops"""

    transmitter: int
    native_ids: FrozenSet[int]
    per_next_hop: Dict[int, int] = field(hash=False)
    xor_tag: int
    size_bytes: int

    @property
    def degree(self) -> int:
        return len(self.native_ids)

    @property
    def is_native(self) -> bool:
        return len(self.native_ids) == 1


@dataclass(frozen=True, slots=True)
class CodingOption:
    """
    Candidate set of output-queue packets, head-of-line first.

    members keeps queue order so ties resolve deterministically.
    """

    members: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.members)

    @property
    def head(self) -> int:
        return self.members[0]

    @property
    def member_set(self) -> FrozenSet[int]:
        return frozenset(self.members)
