"""Simulation events and the deterministic event queue"""

import heapq
import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, List, Optional, Tuple


class EventKind(IntEnum):
    """Event variants; the value is the tie-break rank at equal times"""

    PACKET_ARRIVAL = 0
    TX_OPPORTUNITY = 1
    RECEPTION_REPORT = 2
    DELIVERY = 3
    ACK_TIMEOUT = 4
    MEASUREMENT_TICK = 5


@dataclass(slots=True)
class Event:
    time: float
    kind: EventKind
    node: int = -1
    payload: Any = None
    renew: bool = True


@dataclass
class EventQueue:
    """
    Min-heap keyed by (time, kind rank, node id, insertion order).

    Insertion order only separates events that agree on the first three keys.
    """

    _heap: List[Tuple[float, int, int, int, Event]] = field(default_factory=list)
    _counter: "itertools.count[int]" = field(default_factory=itertools.count)

    def push(self, event: Event) -> None:
        heapq.heappush(
            self._heap, (event.time, int(event.kind), event.node, next(self._counter), event)
        )

    def pop(self) -> Event:
        return heapq.heappop(self._heap)[-1]

    def peek_time(self) -> Optional[float]:
        return self._heap[0][0] if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
