"""COPE-style XOR coding engine"""

from .packets import CodedPacket, CodingOption, Packet
from .knowledge import NeighborKnowledge, apply_reception_report
from .options import exhaustive_best_option, find_best_coding_option, is_decodable
from .xor import decode, encode, recoverable

__all__ = [
    "CodedPacket",
    "CodingOption",
    "Packet",
    "NeighborKnowledge",
    "apply_reception_report",
    "exhaustive_best_option",
    "find_best_coding_option",
    "is_decodable",
    "decode",
    "encode",
    "recoverable",
]
