"""Neighbour knowledge, coding-option search and XOR coding"""

import pytest

from copestop.coding import (
    CodingOption,
    NeighborKnowledge,
    Packet,
    apply_reception_report,
    decode,
    encode,
    exhaustive_best_option,
    find_best_coding_option,
    is_decodable,
    recoverable,
)
from copestop.errors import (
    ConsistencyError,
    ContractError,
    DecodeFailureError,
    MisdeliveryError,
    OracleScopeError,
    TopologyError,
)
from copestop.experiments.acceptance import random_queue_instance
from copestop.simulation import make_generator


def _packet(pid, next_hop, tag, source=1, destination=None):
    return Packet(
        packet_id=pid,
        flow_id=pid,
        source=source,
        destination=next_hop if destination is None else destination,
        next_hop=next_hop,
        size_bytes=1000,
        created_at=0.0,
        payload_tag=tag,
    )


@pytest.fixture
def relay():
    """Relay between N1 (node 0) and N2 (node 2): P1 heads to N2, P2 to N1"""
    p1 = _packet(1, next_hop=2, tag=0xA5A5)
    p2 = _packet(2, next_hop=0, tag=0x0F0F)
    knowledge = NeighborKnowledge(neighbors=frozenset({0, 2}))
    knowledge.learn(0, [1])
    knowledge.learn(2, [2])
    return p1, p2, knowledge, {1: p1, 2: p2}


class TestKnowledge:
    def test_empty_report_is_noop(self, relay):
        _, _, knowledge, _ = relay
        before = {k: set(v) for k, v in knowledge.known.items()}
        apply_reception_report(knowledge, 0, [])
        assert knowledge.known == before

    def test_report_adds_packet(self):
        knowledge = NeighborKnowledge(neighbors=frozenset({0, 2}))
        apply_reception_report(knowledge, 0, [1])
        assert knowledge.holds(0, 1)
        assert not knowledge.holds(2, 1)

    def test_duplicate_report_idempotent(self, relay):
        _, _, knowledge, _ = relay
        apply_reception_report(knowledge, 0, [1])
        apply_reception_report(knowledge, 0, [1])
        assert knowledge.known[0] == {1}

    def test_unknown_reporter(self, relay):
        _, _, knowledge, _ = relay
        with pytest.raises(TopologyError):
            apply_reception_report(knowledge, 9, [1])

    def test_purge(self, relay):
        _, _, knowledge, _ = relay
        knowledge.purge([1, 2])
        assert knowledge.known == {0: set(), 2: set()}


class TestDecodability:
    def test_singleton(self, relay):
        _, _, _, packets = relay
        empty = NeighborKnowledge(neighbors=frozenset({0, 2}))
        assert is_decodable(CodingOption((1,)), empty, packets)

    def test_cross_traffic_pair(self, relay):
        _, _, knowledge, packets = relay
        assert is_decodable(CodingOption((1, 2)), knowledge, packets)

    def test_missing_knowledge(self, relay):
        _, _, _, packets = relay
        knowledge = NeighborKnowledge(neighbors=frozenset({0, 2}))
        knowledge.learn(0, [1])
        assert not is_decodable(CodingOption((1, 2)), knowledge, packets)

    def test_shared_next_hop(self, relay):
        _, _, knowledge, packets = relay
        packets = {**packets, 3: _packet(3, next_hop=2, tag=1)}
        knowledge.learn(2, [3])
        assert not is_decodable(CodingOption((1, 3)), knowledge, packets)

    def test_unresolvable_id(self, relay):
        _, _, knowledge, packets = relay
        with pytest.raises(ConsistencyError):
            is_decodable(CodingOption((1, 99)), knowledge, packets)


class TestOptionSearch:
    def test_head_only(self, relay):
        p1, _, knowledge, _ = relay
        assert find_best_coding_option(p1, [p1], knowledge).degree == 1

    def test_cross_traffic_pair(self, relay):
        p1, p2, knowledge, _ = relay
        option = find_best_coding_option(p1, [p1, p2], knowledge)
        assert option.members == (1, 2)
        assert exhaustive_best_option(p1, [p1, p2], knowledge).degree == 2

    def test_exhaustive_singleton(self, relay):
        p1, _, knowledge, _ = relay
        assert exhaustive_best_option(p1, [p1], knowledge).degree == 1

    def test_greedy_dominated_by_exhaustive(self):
        rng = make_generator(5, 0)
        for _ in range(1000):
            queue, knowledge = random_queue_instance(rng, 6)
            packets = {p.packet_id: p for p in queue}
            greedy = find_best_coding_option(queue[0], queue, knowledge)
            best = exhaustive_best_option(queue[0], queue, knowledge)
            assert 1 <= greedy.degree <= best.degree
            assert greedy.head == best.head == queue[0].packet_id
            assert is_decodable(greedy, knowledge, packets)
            assert is_decodable(best, knowledge, packets)

    def test_greedy_can_be_beaten(self):
        # Taking packet 1 first blocks the pair {2, 3}
        head = _packet(0, next_hop=1, tag=1)
        a = _packet(1, next_hop=2, tag=2)
        b = _packet(2, next_hop=3, tag=3)
        c = _packet(3, next_hop=4, tag=4)
        knowledge = NeighborKnowledge(neighbors=frozenset({1, 2, 3, 4}))
        knowledge.learn(1, [1, 2, 3])
        knowledge.learn(2, [0])
        knowledge.learn(3, [0, 3])
        knowledge.learn(4, [0, 2])
        queue = [head, a, b, c]
        assert find_best_coding_option(head, queue, knowledge).degree == 2
        assert exhaustive_best_option(head, queue, knowledge).members == (0, 2, 3)

    def test_oracle_scope(self, relay):
        p1, _, knowledge, _ = relay
        queue = [_packet(i, next_hop=2, tag=i) for i in range(13)]
        with pytest.raises(OracleScopeError):
            exhaustive_best_option(p1, queue, knowledge)


class TestXor:
    def test_singleton_tag(self, relay):
        _, _, _, packets = relay
        coded = encode(CodingOption((1,)), packets)
        assert coded.xor_tag == 0xA5A5
        assert coded.is_native

    def test_pair_tag(self, relay):
        _, _, knowledge, packets = relay
        coded = encode(CodingOption((1, 2)), packets, transmitter=1, knowledge=knowledge)
        assert coded.xor_tag == 0xA5A5 ^ 0x0F0F
        assert coded.per_next_hop == {2: 1, 0: 2}
        assert coded.degree == 2

    def test_duplicate_members_rejected(self, relay):
        _, _, _, packets = relay
        with pytest.raises(ContractError):
            encode(CodingOption((1, 1)), packets)

    def test_undecodable_rejected(self, relay):
        _, _, _, packets = relay
        empty = NeighborKnowledge(neighbors=frozenset({0, 2}))
        with pytest.raises(ContractError):
            encode(CodingOption((1, 2)), packets, knowledge=empty)

    def test_decode_at_first_endpoint(self, relay):
        p1, p2, _, packets = relay
        coded = encode(CodingOption((1, 2)), packets)
        assert decode(coded, 0, {1}, packets) == p2
        assert decode(coded, 2, {2}, packets) == p1

    def test_native_ignores_pool(self, relay):
        p1, _, _, packets = relay
        coded = encode(CodingOption((1,)), packets)
        assert decode(coded, 2, set(), packets) == p1

    def test_decode_failure(self, relay):
        _, _, _, packets = relay
        coded = encode(CodingOption((1, 2)), packets)
        with pytest.raises(DecodeFailureError) as excinfo:
            decode(coded, 2, set(), packets)
        assert list(excinfo.value.missing) == [2]

    def test_misdelivery(self, relay):
        _, _, _, packets = relay
        coded = encode(CodingOption((1, 2)), packets)
        with pytest.raises(MisdeliveryError):
            decode(coded, 1, {1, 2}, packets)

    def test_recoverable_by_listener(self, relay):
        _, _, _, packets = relay
        coded = encode(CodingOption((1, 2)), packets)
        assert recoverable(coded, {1}) == {2}
        assert recoverable(coded, set()) == set()

    def test_round_trip_on_random_instances(self):
        rng = make_generator(9, 0)
        for _ in range(200):
            queue, knowledge = random_queue_instance(rng, 6)
            packets = {p.packet_id: p for p in queue}
            option = exhaustive_best_option(queue[0], queue, knowledge)
            coded = encode(option, packets, knowledge=knowledge)
            for pid in option.members:
                member = packets[pid]
                pool = set(option.members) - {pid}
                assert decode(coded, member.next_hop, pool, packets) == member
