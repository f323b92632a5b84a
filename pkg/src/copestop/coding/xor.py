"""XOR encode/decode over payload tags"""

from functools import reduce
from operator import xor
from typing import AbstractSet, Mapping, Optional, Set

from ..errors import ContractError, DecodeFailureError, MisdeliveryError
from .knowledge import NeighborKnowledge
from .options import _resolve, is_decodable
from .packets import CodedPacket, CodingOption, Packet


def encode(
    option: CodingOption,
    packets: Mapping[int, Packet],
    transmitter: int = -1,
    knowledge: Optional[NeighborKnowledge] = None,
) -> CodedPacket:
    """
    XOR the members of option into one coded packet.

    When knowledge is given the option must be decodable against it.

    Raises:
        ContractError: duplicate members, shared next hops, or an undecodable option
    """
    members = [_resolve(pid, packets) for pid in option.members]
    if len(set(option.members)) != len(members):
        raise ContractError(f"coding option repeats a packet: {option.members}")
    per_next_hop = {p.next_hop: p.packet_id for p in members}
    if len(per_next_hop) != len(members):
        raise ContractError(f"coding option members share a next hop: {option.members}")
    if knowledge is not None and not is_decodable(option, knowledge, packets):
        raise ContractError(f"coding option {option.members} is not decodable")

    return CodedPacket(
        transmitter=transmitter,
        native_ids=frozenset(option.members),
        per_next_hop=per_next_hop,
        xor_tag=reduce(xor, (p.payload_tag for p in members), 0),
        size_bytes=members[0].size_bytes,
    )


def decode(
    coded: CodedPacket,
    receiver: int,
    pool: AbstractSet[int],
    packets: Mapping[int, Packet],
) -> Packet:
    """
    Recover the native intended for receiver by cancelling the other natives.

    Raises:
        MisdeliveryError: receiver is not one of the next hops
        DecodeFailureError: pool lacks some of the other natives
    """
    target = coded.per_next_hop.get(receiver)
    if target is None:
        raise MisdeliveryError(f"node {receiver} is not a next hop of {sorted(coded.native_ids)}")
    others = coded.native_ids - {target}
    missing = others - pool
    if missing:
        raise DecodeFailureError(
            f"node {receiver} cannot decode packet {target}", missing=sorted(missing)
        )

    tag = reduce(xor, (_resolve(pid, packets).payload_tag for pid in others), coded.xor_tag)
    native = _resolve(target, packets)
    if tag != native.payload_tag:
        raise DecodeFailureError(f"payload of packet {target} did not cancel cleanly")
    return native


def recoverable(coded: CodedPacket, pool: AbstractSet[int]) -> Set[int]:
    """Natives a listener holding pool can extract (at most one unless degree 1)"""
    missing = coded.native_ids - pool
    if len(missing) == 1:
        return set(missing)
    return set()
