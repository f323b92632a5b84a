"""
Acceptance checks behind `copestop verify`.

Each check returns a CheckResult instead of raising, so the CLI can print
the whole table. Checks 6, 7 and 10 share one desk-scale matrix and are the
slow ones.
"""

import logging
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .._stability_constants import ORACLE_AGREEMENT_TOLERANCE, VALUE_ITERATION_TOLERANCE
from ..coding import (
    NeighborKnowledge,
    Packet,
    decode,
    encode,
    exhaustive_best_option,
    find_best_coding_option,
    is_decodable,
)
from ..estimation import LmsFilter, RateCounter
from ..exporters import emit_csv, emit_qq_data, records_frame
from ..policy import (
    expected_discount,
    expected_weighted_discount,
    first_send_state,
    smallest_stopping_state,
    threshold,
    value_iteration,
)
from ..policy.numeric import expected_discount_quadrature, expected_weighted_discount_quadrature
from ..schema import MetricsReport, PolicyName, PolicyParams, ScenarioConfig
from ..simulation import EventKind, Flow, Simulator, Topology, make_generator, sample_interval
from .matrix import run_matrix

logger = logging.getLogger(__name__)

GRID_LAMBDA_T = (0.1, 1.0, 5.0, 10.0, 100.0)
GRID_DISCOUNT_RATE = (0.02, 0.2, 2.0, 10.0)
GRID_BUFFER = 40

# (lambda_d, lambda_t, delta, L) with d* between 1.5 and 20
VALUE_ITERATION_CASES = (
    (5.0, 5.0, 0.05, 40),
    (10.0, 5.0, 0.05, 40),
    (20.0, 5.0, 0.05, 40),
    (40.0, 5.0, 0.05, 40),
    (55.0, 5.0, 0.05, 40),
    (3.0, 2.0, 0.02, 40),
    (7.0, 2.0, 0.02, 40),
    (13.0, 10.0, 0.05, 40),
    (4.0, 1.0, 0.01, 40),
    (30.0, 20.0, 0.05, 40),
)

# Fast enough opportunities and traffic that busy relays learn d* above 1 at the top loads
DESK_CONFIG = ScenarioConfig(
    node_count=30,
    field_width=600.0,
    field_height=600.0,
    rho=200.0,
    seed=2024,
    flow_count=8,
    packet_rate=2.0,
    opportunity_rate=20.0,
    report_rate=5.0,
    horizon=3000.0,
)
DESK_LOADS = (4, 8, 16, 32)
DESK_SEEDS = (1, 2, 3, 4, 5)
DESK_POLICIES = (PolicyName.OPTIMAL_STOPPING, PolicyName.IMMEDIATE_SEND)

KS_LEVEL = 0.05

# Share of busy opportunities the stopping policy must let pass at the top loads
MIN_WAIT_SHARE = 0.02


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def grid_params(lambda_d: float = 1.0) -> List[PolicyParams]:
    return [
        PolicyParams(
            lambda_d=lambda_d,
            lambda_t=lam_t,
            delta=dl / GRID_BUFFER,
            buffer_size_L=GRID_BUFFER,
        )
        for lam_t in GRID_LAMBDA_T
        for dl in GRID_DISCOUNT_RATE
    ]


# ---------------------------------------------------------------- policy


def check_integral_identities() -> Tuple[bool, str]:
    worst = 0.0
    for params in grid_params():
        worst = max(
            worst,
            abs(expected_discount(params) - expected_discount_quadrature(params)),
            abs(expected_weighted_discount(params) - expected_weighted_discount_quadrature(params)),
        )
    return worst < ORACLE_AGREEMENT_TOLERANCE, f"max |closed form - quadrature| = {worst:.3e}"


def check_threshold_equivalence() -> Tuple[bool, str]:
    mismatches = []
    for params in grid_params():
        numeric = smallest_stopping_state(params)
        closed = first_send_state(params)
        if numeric != closed:
            mismatches.append((params.lambda_t, params.discount_rate, numeric, closed))
    if mismatches:
        return False, f"boundary mismatches (lambda_t, dL, numeric, closed): {mismatches}"
    return True, f"{len(grid_params())} grid points agree"


def check_value_iteration() -> Tuple[bool, str]:
    failures = []
    for lam_d, lam_t, delta, L in VALUE_ITERATION_CASES:
        params = PolicyParams(lambda_d=lam_d, lambda_t=lam_t, delta=delta, buffer_size_L=L)
        d_max = math.ceil(threshold(params)) + 50
        solution = value_iteration(params, d_max, VALUE_ITERATION_TOLERANCE)
        expected = first_send_state(params)
        ok = (
            solution.is_threshold_type()
            and solution.threshold_state == expected
            and solution.values[0] == 0.0
        )
        if not ok:
            failures.append((lam_d, lam_t, delta, L, solution.threshold_state, expected))
    if failures:
        return False, f"failing cases (..., vi threshold, closed form): {failures}"
    return True, f"{len(VALUE_ITERATION_CASES)} cases threshold-type and aligned"


# ------------------------------------------------------------- simulator


def check_opportunity_exponentiality() -> Tuple[bool, str]:
    config = DESK_CONFIG.model_copy(update={"horizon": 25.0})
    simulator = Simulator(config)
    simulator.run()
    gaps = simulator.opportunity_intervals()
    with tempfile.TemporaryDirectory() as tmp:
        summary = emit_qq_data(gaps, config.opportunity_rate, Path(tmp) / "qq.csv")
    passed = (
        len(gaps) >= 10_000
        and summary.p_value >= KS_LEVEL
        and summary.relative_deviation < 0.05
    )
    return passed, (
        f"n={summary.n}, KS={summary.ks_statistic:.4g}, p={summary.p_value:.4g}, "
        f"max quantile deviation {summary.relative_deviation:.2%} of range"
    )


RELAY_LINE_POSITIONS = ((0.0, 0.0), (150.0, 0.0), (300.0, 0.0))


def run_relay_exchange(policy: PolicyName) -> MetricsReport:
    """
    Two opposing flows through one relay, scripted: each end sends its packet
    to the relay, then the relay gets two opportunities.
    """
    config = ScenarioConfig(
        node_count=3,
        rho=200.0,
        flow_count=2,
        min_flow_hops=2,
        policy=policy,
        horizon=10.0,
    )
    topology = Topology.from_positions(RELAY_LINE_POSITIONS, config.rho)
    flows = [
        Flow(0, 0, 2, config.packet_rate, (0, 1, 2)),
        Flow(1, 2, 0, config.packet_rate, (2, 1, 0)),
    ]
    simulator = Simulator(config, topology=topology, flows=flows, processes=False)
    simulator.inject(EventKind.PACKET_ARRIVAL, 0.0, payload=0)
    simulator.inject(EventKind.PACKET_ARRIVAL, 0.0, payload=1)
    simulator.inject(EventKind.TX_OPPORTUNITY, 1.0, node=0)
    simulator.inject(EventKind.TX_OPPORTUNITY, 2.0, node=2)
    simulator.inject(EventKind.TX_OPPORTUNITY, 3.0, node=1)
    simulator.inject(EventKind.TX_OPPORTUNITY, 4.0, node=1)
    return simulator.run()


def check_relay_exchange() -> Tuple[bool, str]:
    coded = run_relay_exchange(PolicyName.IMMEDIATE_SEND)
    native = run_relay_exchange(PolicyName.NO_CODING)
    passed = (
        coded.transmissions == 3
        and native.transmissions == 4
        and coded.coding_gain == 4 / 3
        and coded.delivered == native.delivered == 2
    )
    return passed, (
        f"coded: {coded.transmissions} transmissions, gain {coded.coding_gain:.6f}; "
        f"no coding: {native.transmissions} transmissions"
    )


def desk_matrix(workers: Optional[int] = None) -> pd.DataFrame:
    records = run_matrix(
        DESK_CONFIG, DESK_POLICIES, DESK_LOADS, DESK_SEEDS, scenario="desk", workers=workers
    )
    return records_frame(records)


def _means(frame: pd.DataFrame, column: str) -> Dict[Tuple[str, int], float]:
    values = pd.to_numeric(frame[column], errors="coerce")
    grouped = values.groupby([frame["policy"], frame["flow_count"]]).mean()
    return {key: float(v) for key, v in grouped.items()}


def wait_shares(frame: pd.DataFrame, policy: PolicyName) -> Dict[int, float]:
    """Pooled share of busy opportunities a policy let pass, per load"""
    rows = frame[frame["policy"] == PolicyName(policy).value]
    waits = pd.to_numeric(rows["waits"]).groupby(rows["flow_count"]).sum()
    busy = pd.to_numeric(rows["busy_opportunities"]).groupby(rows["flow_count"]).sum()
    return {int(n): float(waits[n] / busy[n]) if busy[n] else 0.0 for n in busy.index}


def check_load_trends(frame: pd.DataFrame) -> Tuple[bool, str]:
    gain = _means(frame, "coding_gain")
    delay = _means(frame, "mean_e2e_delay")
    stop, imm = PolicyName.OPTIMAL_STOPPING.value, PolicyName.IMMEDIATE_SEND.value
    top = DESK_LOADS[-2:]

    gain_order = all(gain[(stop, n)] >= gain[(imm, n)] for n in DESK_LOADS) and all(
        gain[(stop, n)] > gain[(imm, n)] for n in top
    )
    delay_order = all(delay[(stop, n)] >= delay[(imm, n)] for n in DESK_LOADS)
    stop_gains = [gain[(stop, n)] for n in DESK_LOADS]
    monotone = all(a <= b for a, b in zip(stop_gains, stop_gains[1:]))

    shares = wait_shares(frame, PolicyName.OPTIMAL_STOPPING)
    waiting = all(shares.get(n, 0.0) >= MIN_WAIT_SHARE for n in top)

    detail = (
        f"gain stop={[round(g, 4) for g in stop_gains]}, "
        f"imm={[round(gain[(imm, n)], 4) for n in DESK_LOADS]}; "
        f"delay stop>=imm: {delay_order}; "
        f"stop wait share={[round(shares.get(n, 0.0), 4) for n in DESK_LOADS]}"
    )
    return gain_order and delay_order and monotone and waiting, detail


def check_energy_trend(frame: pd.DataFrame) -> Tuple[bool, str]:
    energy = _means(frame, "energy_per_delivered")
    stop, imm = PolicyName.OPTIMAL_STOPPING.value, PolicyName.IMMEDIATE_SEND.value
    top = DESK_LOADS[-2:]
    passed = all(energy[(stop, n)] < energy[(imm, n)] for n in top)
    detail = ", ".join(
        f"{n} flows: {energy[(stop, n)]:.2f} vs {energy[(imm, n)]:.2f} mJ" for n in top
    )
    return passed, detail


def check_determinism(workers: Optional[int] = None) -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for attempt in range(2):
            records = run_matrix(
                DESK_CONFIG, DESK_POLICIES, DESK_LOADS, DESK_SEEDS, scenario="desk", workers=workers
            )
            path = Path(tmp) / f"run{attempt}.csv"
            emit_csv(records, path)
            paths.append(path)
        identical = paths[0].read_bytes() == paths[1].read_bytes()
    return identical, "byte-identical" if identical else "CSV outputs differ"


# ------------------------------------------------------ estimators, coding


def check_estimators() -> Tuple[bool, str]:
    lms = LmsFilter()
    for _ in range(500):
        lms.update(3.0)
    lms_error = abs(lms.predict() - 3.0) / 3.0

    rate = 5.0
    rng = make_generator(7, 0)
    counter = RateCounter()
    now = 0.0
    for _ in range(20_000):
        now += sample_interval(EventKind.TX_OPPORTUNITY, rate, rng)
        counter.record(now)
    rate_error = abs(counter.estimate(now) - rate) / rate

    fixed = LmsFilter(weights=[1.0, 0.0, 0.0, 0.0], history=[2.0, 2.0, 2.0, 2.0])
    before = fixed.weights.copy()
    for _ in range(100):
        fixed.update(2.0)
    unchanged = np.array_equal(before, fixed.weights)

    passed = lms_error < 0.10 and rate_error < 0.05 and unchanged
    return passed, (
        f"LMS relative error {lms_error:.2e}, rate error {rate_error:.2%}, "
        f"zero-error weights unchanged: {unchanged}"
    )


def random_queue_instance(
    rng: np.random.Generator, queue_length: int, neighbor_count: int = 5, know_probability: float = 0.6
) -> Tuple[List[Packet], NeighborKnowledge]:
    """Output queue of node 0 with random next hops and random neighbour knowledge"""
    neighbors = frozenset(range(1, neighbor_count + 1))
    queue = [
        Packet(
            packet_id=i,
            flow_id=i,
            source=0,
            destination=int(hop),
            next_hop=int(hop),
            size_bytes=1000,
            created_at=0.0,
            payload_tag=int.from_bytes(rng.bytes(8), "big"),
        )
        for i, hop in enumerate(rng.integers(1, neighbor_count + 1, size=queue_length))
    ]
    knowledge = NeighborKnowledge(neighbors=neighbors)
    for v in sorted(neighbors):
        knowledge.learn(v, [p.packet_id for p in queue if rng.random() < know_probability])
    return queue, knowledge


def check_coding_algebra(instances: int = 1000) -> Tuple[bool, str]:
    rng = make_generator(11, 0)
    round_trips = 0
    for _ in range(instances):
        queue, knowledge = random_queue_instance(rng, 6)
        packets = {p.packet_id: p for p in queue}
        option = exhaustive_best_option(queue[0], queue, knowledge)
        coded = encode(option, packets, knowledge=knowledge)
        for pid in option.members:
            member = packets[pid]
            pool = set(option.members) - {pid}
            if decode(coded, member.next_hop, pool, packets) != member:
                return False, f"round trip failed for packet {pid} of {option.members}"
            round_trips += 1

    equal = 0
    for _ in range(instances):
        queue, knowledge = random_queue_instance(rng, 6)
        packets = {p.packet_id: p for p in queue}
        greedy = find_best_coding_option(queue[0], queue, knowledge)
        best = exhaustive_best_option(queue[0], queue, knowledge)
        if not (1 <= greedy.degree <= best.degree and is_decodable(greedy, knowledge, packets)):
            return False, f"greedy {greedy.members} vs exhaustive {best.members}"
        equal += greedy.degree == best.degree
    return True, f"{round_trips} round trips; greedy matched exhaustive on {equal}/{instances}"


# ------------------------------------------------------------------ suite


def _timed(number: int, name: str, check: Callable[[], Tuple[bool, str]]) -> CheckResult:
    start = time.time()
    try:
        passed, detail = check()
    except Exception as e:
        logger.exception(f"Check {number} raised")
        passed, detail = False, f"{type(e).__name__}: {e}"
    return CheckResult(number, name, passed, detail, time.time() - start)


def run_acceptance(
    selected: Optional[Sequence[int]] = None, workers: Optional[int] = None
) -> List[CheckResult]:
    """
    Run acceptance checks 1-10 (or the selected subset).

    Returns:
        One CheckResult per check, in number order
    """
    wanted = set(selected) if selected else set(range(1, 11))
    results: List[CheckResult] = []

    quick = [
        (1, "closed-form integral identities", check_integral_identities),
        (2, "threshold equals stopping-set boundary", check_threshold_equivalence),
        (3, "value-iteration oracle", check_value_iteration),
        (4, "opportunity inter-arrivals are exponential", check_opportunity_exponentiality),
        (5, "relay micro-scenario costs 3 vs 4 transmissions", check_relay_exchange),
        (8, "estimator suite", check_estimators),
        (9, "coding algebra", check_coding_algebra),
    ]
    for number, name, check in quick:
        if number in wanted:
            logger.info(f"Acceptance check {number}: {name}")
            results.append(_timed(number, name, check))

    if wanted & {6, 7}:
        logger.info("Acceptance checks 6-7: desk-scale matrix")
        frame_holder: Dict[str, pd.DataFrame] = {}

        def matrix_check(evaluate):
            def run():
                if "frame" not in frame_holder:
                    frame_holder["frame"] = desk_matrix(workers)
                return evaluate(frame_holder["frame"])

            return run

        if 6 in wanted:
            results.append(_timed(6, "coding gain and delay trends over load", matrix_check(check_load_trends)))
        if 7 in wanted:
            results.append(_timed(7, "energy per delivered packet", matrix_check(check_energy_trend)))

    if 10 in wanted:
        logger.info("Acceptance check 10: determinism")
        results.append(_timed(10, "byte-identical reruns", lambda: check_determinism(workers)))

    return sorted(results, key=lambda r: r.number)
