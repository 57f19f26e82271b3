"""Deterministic discrete-event engine.

Events are ordered by ``(time, seq)`` where ``seq`` is a global insertion
counter, so simultaneous events are delivered in the order they were
scheduled.  A run is single-threaded; separate :class:`Simulation`
instances share nothing.
"""

from __future__ import annotations

import enum
import heapq
import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Callable

logger = logging.getLogger(__name__)


class SimulationError(Exception):
    pass


class PastEventError(SimulationError):
    pass


class UnknownDestinationError(SimulationError):
    pass


class EventTag(enum.Enum):
    RESOURCE_LIST_REQUEST = "ResourceListRequest"
    RESOURCE_LIST = "ResourceList"
    START_SCHEDULING = "StartScheduling"
    QULET_ARRIVAL = "QuletArrival"
    QULET_DISPATCH = "QuletDispatch"
    QULET_SUBMIT = "QuletSubmit"
    QULET_DONE = "QuletDone"
    QULET_RESULT = "QuletResult"
    QULET_SKIP = "QuletSkip"
    NODE_WAKE = "NodeWake"
    TASK_READY = "TaskReady"
    EDGE_DONE = "EdgeDone"
    CLOUDLET_DONE = "CloudletDone"
    NOOP = "Noop"


@dataclass(eq=False)
class SimEvent:
    time: float
    seq: int
    source: int
    destination: int
    tag: EventTag
    payload: Any = None
    cancelled: bool = field(default=False, repr=False)

    def sort_key(self) -> tuple[float, int]:
        return (self.time, self.seq)


def format_time(t: float) -> str:
    """Render a timestamp for the event log.

    Zero prints as ``0.0``; everything else is rounded half-up to two
    decimals from the shortest decimal representation of the float.
    """
    if t == 0:
        return "0.0"
    return str(Decimal(repr(float(t))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def emit_log(time: float, name: str, message: str) -> str:
    return f"{format_time(time)}: {name}: {message}"


class SimEntity:
    """Base class for anything that receives events.

    Subclasses override :meth:`handle` and optionally :meth:`start`, which
    runs once at t=0 before the first event is popped.
    """

    def __init__(self, name: str):
        self.name = name
        self.id: int = -1
        self.sim: Simulation | None = None

    def start(self) -> None:
        pass

    def handle(self, event: SimEvent) -> None:
        pass

    # shorthand used by every entity
    def send(self, destination: int, tag: EventTag, delay: float = 0.0, payload: Any = None) -> SimEvent:
        return self.sim.schedule(self.sim.clock + delay, self.id, destination, tag, payload)

    def log(self, message: str) -> str:
        return self.sim.log(self, message)

    @property
    def now(self) -> float:
        return self.sim.clock


class EventCalendar:
    """Priority queue of pending events keyed by ``(time, seq)``."""

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, SimEvent]] = []
        self._seq = 0
        self._live = 0
        self.clock = 0.0

    def __len__(self) -> int:
        return self._live

    def push(self, time: float, source: int, destination: int, tag: EventTag, payload: Any = None) -> SimEvent:
        if time < self.clock:
            raise PastEventError(f"event at t={time!r} scheduled when clock is {self.clock!r}")
        if time < 0:
            raise PastEventError(f"negative event time {time!r}")
        ev = SimEvent(float(time), self._seq, source, destination, tag, payload)
        self._seq += 1
        self._live += 1
        heapq.heappush(self._heap, (ev.time, ev.seq, ev))
        return ev

    def cancel(self, event: SimEvent) -> None:
        if not event.cancelled:
            event.cancelled = True
            self._live -= 1

    def pop(self) -> SimEvent | None:
        while self._heap:
            _, _, ev = heapq.heappop(self._heap)
            if ev.cancelled:
                continue
            self._live -= 1
            self.clock = ev.time
            return ev
        return None

    @property
    def scheduled_count(self) -> int:
        return self._seq


class Simulation:
    """Entity registry, calendar and event log for one run."""

    def __init__(self, log_sink: Callable[[str], None] | None = None):
        self.calendar = EventCalendar()
        self.entities: list[SimEntity] = []
        self.log_lines: list[str] = []
        self.log_sink = log_sink
        self.delivered = 0
        self.cancelled = 0

    @property
    def clock(self) -> float:
        return self.calendar.clock

    def register(self, entity: SimEntity) -> int:
        entity.id = len(self.entities)
        entity.sim = self
        self.entities.append(entity)
        return entity.id

    def schedule(
        self,
        time: float,
        source: int,
        destination: int,
        tag: EventTag,
        payload: Any = None,
    ) -> SimEvent:
        return self.calendar.push(time, source, destination, tag, payload)

    def cancel(self, event: SimEvent) -> None:
        if not event.cancelled:
            self.cancelled += 1
        self.calendar.cancel(event)

    def log(self, entity: SimEntity | str, message: str) -> str:
        name = entity if isinstance(entity, str) else entity.name
        line = emit_log(self.clock, name, message)
        self.log_lines.append(line)
        if self.log_sink is not None:
            self.log_sink(line)
        return line

    def run(self) -> float:
        """Deliver events until the calendar is empty; return the final clock."""
        if not self.entities:
            raise SimulationError("no entities registered")
        for entity in list(self.entities):
            entity.start()
        while True:
            ev = self.calendar.pop()
            if ev is None:
                break
            if not 0 <= ev.destination < len(self.entities):
                raise UnknownDestinationError(f"event {ev.tag.value} targets unknown entity {ev.destination}")
            self.delivered += 1
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(
                    "t=%r seq=%d %s -> %s %s",
                    ev.time,
                    ev.seq,
                    ev.source,
                    self.entities[ev.destination].name,
                    ev.tag.value,
                )
            self.entities[ev.destination].handle(ev)
        return self.clock
