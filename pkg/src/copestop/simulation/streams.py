"""
Seeded random streams.

Every stochastic purpose draws from its own PCG64 generator derived from a
run seed and a purpose code (plus a node or flow id), so adding draws to one
purpose never shifts another.
"""

import math
from typing import Dict, Tuple

import numpy as np

from .._stability_constants import RNG_ALGORITHM
from ..errors import ParameterDomainError


def make_generator(seed: int, purpose: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, purpose, keys...)"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(purpose, *keys))
    bit_generator = getattr(np.random, RNG_ALGORITHM)(sequence)
    return np.random.Generator(bit_generator)


def exponential_from_uniform(u: float, rate: float) -> float:
    """Inversion: -ln(u)/rate for u in (0, 1]"""
    if rate <= 0.0:
        raise ParameterDomainError(f"rate must be > 0, got {rate}")
    if not 0.0 < u <= 1.0:
        raise ParameterDomainError(f"uniform draw must lie in (0, 1], got {u}")
    return -math.log(u) / rate


def sample_interval(kind, rate: float, rng: np.random.Generator) -> float:
    """
    Exponential inter-event time for an event class.

    Raises:
        ParameterDomainError: rate <= 0
    """
    if rate <= 0.0:
        raise ParameterDomainError(f"{getattr(kind, 'name', kind)} rate must be > 0, got {rate}")
    # random() is in [0, 1); 1 - random() is in (0, 1]
    return exponential_from_uniform(1.0 - rng.random(), rate)


class StreamBank:
    """Lazily created generators for one run, keyed by purpose and id"""

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: Dict[Tuple[int, ...], np.random.Generator] = {}

    def get(self, purpose: int, *keys: int) -> np.random.Generator:
        key = (purpose, *keys)
        stream = self._streams.get(key)
        if stream is None:
            stream = make_generator(self.seed, purpose, *keys)
            self._streams[key] = stream
        return stream
