"""
Scenario matrix: policies × loads × seeds.

Every cell of one seed shares the row seed, so all policies and loads of
that seed see the same topology, the same flows (lower loads are a prefix of
higher ones) and the same arrival, opportunity and report processes. Only
the link-loss stream is cell specific.
"""

import logging
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..errors import MatrixCellError, MatrixRunError, ParameterDomainError
from ..schema import PolicyName, RunRecord, ScenarioConfig
from ..simulation import Simulator
from ..utils.hashing import derive_seed
from ..utils.logging_config import LogContext, configure_worker_logging, worker_logging_args
from .config import with_overrides

logger = logging.getLogger(__name__)

MAX_WORKERS_ENV = "COPESTOP_MAX_WORKERS"


@dataclass(frozen=True)
class MatrixCell:
    scenario: str
    seed: int
    load_index: int
    policy_index: int
    flow_count: int
    policy: PolicyName
    row_seed: int
    cell_seed: int

    def __str__(self) -> str:
        return (
            f"(scenario={self.scenario}, seed={self.seed}, flows={self.flow_count}, "
            f"policy={self.policy.value})"
        )


def derive_cell_seeds(
    master: int, seed: int, load_index: int, policy_index: int
) -> Tuple[int, int]:
    """(row_seed, cell_seed) for one matrix cell"""
    return derive_seed(master, seed), derive_seed(master, seed, load_index, policy_index)


def plan_cells(
    scenario: str,
    master: int,
    policies: Sequence[PolicyName],
    loads: Sequence[int],
    seeds: Sequence[int],
) -> List[MatrixCell]:
    cells = []
    for seed in seeds:
        for load_index, load in enumerate(loads):
            for policy_index, policy in enumerate(policies):
                row_seed, cell_seed = derive_cell_seeds(master, seed, load_index, policy_index)
                cells.append(
                    MatrixCell(
                        scenario=scenario,
                        seed=seed,
                        load_index=load_index,
                        policy_index=policy_index,
                        flow_count=load,
                        policy=PolicyName(policy),
                        row_seed=row_seed,
                        cell_seed=cell_seed,
                    )
                )
    return cells


def run_cell(config: ScenarioConfig, cell: MatrixCell) -> RunRecord:
    """Simulate one cell (top level so worker processes can pickle it)"""
    cell_config = with_overrides(config, flow_count=cell.flow_count, policy=cell.policy)
    with LogContext(scenario=cell.scenario, policy=cell.policy.value, seed=cell.seed):
        start = time.time()
        report = Simulator(cell_config, cell.row_seed, link_seed=cell.cell_seed).run()
        logger.info(f"Cell {cell} done", extra={"duration": time.time() - start})
    return RunRecord(
        scenario=cell.scenario,
        seed=cell.seed,
        row_seed=cell.row_seed,
        cell_seed=cell.cell_seed,
        policy=cell.policy,
        flow_count=cell.flow_count,
        report=report,
    )


def resolve_workers(requested: Optional[int], cell_count: int) -> int:
    """Worker count: requested or CPU count, capped by COPESTOP_MAX_WORKERS and cells"""
    workers = requested or os.cpu_count() or 1
    cap = os.environ.get(MAX_WORKERS_ENV)
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            logger.warning(f"Ignoring non-integer {MAX_WORKERS_ENV}={cap!r}")
    return max(1, min(workers, cell_count))


def run_matrix(
    config: ScenarioConfig,
    policies: Sequence[PolicyName],
    loads: Sequence[int],
    seeds: Sequence[int],
    scenario: str = "default",
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[RunRecord]:
    """
    Run the cartesian product of policies, loads and seeds.

    Args:
        config: Base scenario; flow_count and policy are set per cell
        policies: Transmission schemes
        loads: Flow counts
        seeds: Seeds, one matrix row each
        scenario: Label recorded in every RunRecord
        master_seed: Seed all rows derive from (defaults to config.seed)
        workers: Parallel cells (1 runs in-process)

    Returns:
        RunRecords sorted by (flow_count, seed, policy, scenario)

    Raises:
        ParameterDomainError: an empty list
        MatrixRunError: some cells failed; carries the completed records
    """
    if not policies or not loads or not seeds:
        raise ParameterDomainError("policies, loads and seeds must all be nonempty")
    master = config.seed if master_seed is None else master_seed
    cells = plan_cells(scenario, master, policies, loads, seeds)
    n_workers = resolve_workers(workers, len(cells))
    logger.info(f"Running {len(cells)} cells on {n_workers} worker(s)")

    records: List[RunRecord] = []
    failures: List[MatrixCellError] = []
    if n_workers == 1:
        for cell in cells:
            try:
                records.append(run_cell(config, cell))
            except Exception as e:
                logger.error(f"Cell {cell} failed: {e}")
                failures.append(MatrixCellError(cell, e))
    else:
        # Workers start from a fresh interpreter
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(
            max_workers=n_workers,
            mp_context=context,
            initializer=configure_worker_logging,
            initargs=worker_logging_args(),
        ) as pool:
            futures = [(cell, pool.submit(run_cell, config, cell)) for cell in cells]
            for cell, future in futures:
                try:
                    records.append(future.result())
                except Exception as e:
                    logger.error(f"Cell {cell} failed: {e}")
                    failures.append(MatrixCellError(cell, e))

    records.sort(key=RunRecord.sort_key)
    if failures:
        raise MatrixRunError(records, failures)
    return records
