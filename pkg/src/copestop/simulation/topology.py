"""
Static unit-disk topology and greedy geographic forwarding.

Nodes are placed uniformly at random in a rectangular field; u and v are
neighbours iff their Euclidean distance is at most rho. The next hop is the
neighbour closest to the destination, provided it is strictly closer than
the current node.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .._stability_constants import STREAM_TOPOLOGY
from ..errors import ParameterDomainError, TopologyError, UnroutableError
from .streams import make_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Topology:
    """Node positions, radio range and the derived symmetric adjacency"""

    positions: np.ndarray
    radius_rho: float
    neighbor_sets: Tuple[frozenset, ...]

    @classmethod
    def from_positions(cls, positions: Sequence[Sequence[float]], rho: float) -> "Topology":
        coords = np.asarray(positions, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ParameterDomainError(f"positions must be (n, 2), got shape {coords.shape}")
        if rho <= 0.0:
            raise ParameterDomainError(f"rho must be > 0, got {rho}")
        within = cls._distances(coords) <= rho
        np.fill_diagonal(within, False)
        neighbor_sets = tuple(frozenset(np.flatnonzero(row).tolist()) for row in within)
        coords.setflags(write=False)
        return cls(positions=coords, radius_rho=rho, neighbor_sets=neighbor_sets)

    @staticmethod
    def _distances(coords: np.ndarray) -> np.ndarray:
        diff = coords[:, None, :] - coords[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    @property
    def node_count(self) -> int:
        return len(self.neighbor_sets)

    def neighbors(self, node: int) -> frozenset:
        return self.neighbor_sets[node]

    def distance(self, u: int, v: int) -> float:
        du = self.positions[u] - self.positions[v]
        return float(np.hypot(du[0], du[1]))

    def is_connected(self) -> bool:
        n = self.node_count
        rows = [u for u in range(n) for _ in self.neighbor_sets[u]]
        cols = [v for u in range(n) for v in sorted(self.neighbor_sets[u])]
        adjacency = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        count, _ = connected_components(adjacency, directed=False)
        return count == 1

    def route(self, source: int, destination: int) -> List[int]:
        """
        Full greedy path from source to destination, both included.

        Raises:
            UnroutableError: greedy forwarding hits a local minimum
        """
        path = [source]
        while path[-1] != destination:
            path.append(route_next_hop(path[-1], destination, self))
        return path


def build_topology(
    node_count: int,
    field: Tuple[float, float],
    rho: float,
    seed: int,
    max_retries: int = 100,
) -> Topology:
    """
    Uniform random placement, redrawn until the graph is connected.

    Raises:
        ParameterDomainError: fewer than two nodes
        TopologyError: still disconnected after max_retries draws
    """
    if node_count < 2:
        raise ParameterDomainError(f"node_count must be >= 2, got {node_count}")
    width, height = field
    rng = make_generator(seed, STREAM_TOPOLOGY)

    for attempt in range(1, max_retries + 1):
        positions = rng.random((node_count, 2)) * np.array([width, height])
        topology = Topology.from_positions(positions, rho)
        if topology.is_connected():
            logger.debug(f"Connected topology after {attempt} draw(s)")
            return topology

    raise TopologyError(
        f"no connected placement of {node_count} nodes in {width}x{height} "
        f"with rho={rho} after {max_retries} attempts"
    )


def route_next_hop(current: int, destination: int, topology: Topology) -> int:
    """
    Neighbour of current nearest to destination; ties go to the lowest id.

    Raises:
        ParameterDomainError: current equals destination
        UnroutableError: no neighbour is strictly closer than current
    """
    if current == destination:
        raise ParameterDomainError(f"node {current} is already the destination")
    neighbors = topology.neighbors(current)
    if destination in neighbors:
        return destination

    here = topology.distance(current, destination)
    best = None
    for v in sorted(neighbors):
        d = topology.distance(v, destination)
        if d < here and (best is None or d < best[0]):
            best = (d, v)
    if best is None:
        raise UnroutableError(f"no neighbour of node {current} is closer to node {destination}")
    return best[1]


@dataclass(frozen=True)
class Flow:
    """Unicast session with Poisson packet arrivals along a fixed greedy route"""

    flow_id: int
    source: int
    destination: int
    packet_rate: float
    route: Tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.route) - 1


def select_flows(
    topology: Topology,
    count: int,
    packet_rate: float,
    rng: np.random.Generator,
    min_hops: int = 2,
    max_attempts: int = 1000,
) -> List[Flow]:
    """
    Draw count random (source, destination) pairs with a greedy route of at
    least min_hops hops. Pairs are drawn in sequence, so the first k flows of
    a larger draw equal a draw of k flows from the same generator state.

    Raises:
        TopologyError: a flow could not be placed within max_attempts draws
    """
    flows: List[Flow] = []
    n = topology.node_count
    for flow_id in range(count):
        for _ in range(max_attempts):
            source, destination = (int(x) for x in rng.choice(n, size=2, replace=False))
            try:
                route = topology.route(source, destination)
            except UnroutableError:
                continue
            if len(route) - 1 >= min_hops:
                flows.append(Flow(flow_id, source, destination, packet_rate, tuple(route)))
                break
        else:
            raise TopologyError(
                f"could not place flow {flow_id} with >= {min_hops} hops "
                f"after {max_attempts} attempts"
            )
    return flows
