"""Per-node sharing policies and the QNode simulation entity.

Three policies decide when an admitted qulet starts and finishes:

* space-shared: one qulet at a time, FCFS.
* time-shared: processor sharing; k resident qulets each progress at
  ``clops / k``.
* spatial-shared: qulets run side by side at full speed on disjoint
  qubit regions of the chip; the head of the FCFS queue waits until it
  can be embedded in the qubits left free by the running ones.

No policy preempts.  Work is counted in layer executions (depth x shots);
remaining work is tracked as seconds at the full node rate so that a lone
qulet finishes at exactly the same instant under every policy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .domain import QNode, Qulet, SchedulerPolicy
from .kernel import EventTag, SimEntity, SimEvent
from .mapping import QubitMapping, find_embedding

# relative slack when deciding a processor-shared job has drained
_DRAIN_TOL = 1e-9


@dataclass
class NodeJob:
    qulet: Qulet
    work: float
    t_q: float
    enqueue: float
    mapping: QubitMapping | None = None
    remaining: float = 0.0  # seconds at full node rate
    start: float | None = None
    finish: float | None = None
    owner: int = -1
    datacenter: str = ""
    node_id: int = -1


@dataclass
class NodeWorkState:
    running: list[NodeJob] = field(default_factory=list)
    waiting: deque[NodeJob] = field(default_factory=deque)
    busy_until: float = 0.0
    last_update: float = 0.0
    completed_work: float = 0.0
    admitted_work: float = 0.0
    busy_time: float = 0.0  # sum of nominal t_q of finished jobs


class QuletScheduler:
    """Common interface; subclasses fill in the policy."""

    policy: SchedulerPolicy

    def __init__(self, node: QNode):
        self.node = node
        self.state = NodeWorkState()

    def submit(self, job: NodeJob, now: float) -> None:
        raise NotImplementedError

    def advance(self, now: float) -> list[NodeJob]:
        """Bring the state up to ``now``; return the jobs that finished."""
        raise NotImplementedError

    def next_completion(self) -> float | None:
        raise NotImplementedError

    def _finish(self, job: NodeJob, now: float) -> None:
        job.finish = now
        job.remaining = 0.0
        self.state.completed_work += job.work
        self.state.busy_time += job.t_q

    @property
    def idle(self) -> bool:
        return not self.state.running and not self.state.waiting


class SpaceSharedScheduler(QuletScheduler):
    policy = SchedulerPolicy.SPACE_SHARED

    def __init__(self, node: QNode):
        super().__init__(node)
        self._queue: deque[NodeJob] = deque()

    def space_shared_admit(self, job: NodeJob, now: float) -> float:
        """Queue ``job`` FCFS and return its completion time."""
        st = self.state
        job.start = max(now, st.busy_until)
        st.busy_until = job.start + job.t_q
        st.admitted_work += job.work
        self._queue.append(job)
        self._sync(now)
        return st.busy_until

    submit = space_shared_admit

    def advance(self, now: float) -> list[NodeJob]:
        done = []
        while self._queue and self._queue[0].start + self._queue[0].t_q <= now:
            job = self._queue.popleft()
            self._finish(job, job.start + job.t_q)
            done.append(job)
        self._sync(now)
        return done

    def _sync(self, now: float) -> None:
        st = self.state
        q = list(self._queue)
        head_started = bool(q) and q[0].start <= now
        st.running = q[:1] if head_started else []
        st.waiting = deque(q[1:] if head_started else q)
        st.last_update = now

    def next_completion(self) -> float | None:
        if not self._queue:
            return None
        head = self._queue[0]
        return head.start + head.t_q


class TimeSharedScheduler(QuletScheduler):
    policy = SchedulerPolicy.TIME_SHARED

    def __init__(self, node: QNode):
        super().__init__(node)
        self._drained: list[NodeJob] = []

    def submit(self, job: NodeJob, now: float) -> None:
        # settle progress up to now before the share changes
        self._drained.extend(self.time_shared_step(now))
        st = self.state
        job.start = now
        job.remaining = job.t_q
        st.admitted_work += job.work
        st.running.append(job)
        st.busy_until = self.next_completion()

    def time_shared_step(self, now: float) -> list[NodeJob]:
        """Progress every resident job to ``now`` and retire the drained ones."""
        st = self.state
        done, self._drained = self._drained, []
        k = len(st.running)
        if k:
            progress = (now - st.last_update) / k
            still = []
            for job in st.running:
                job.remaining -= progress
                if job.remaining <= _DRAIN_TOL * max(job.t_q, 1.0):
                    self._finish(job, now)
                    done.append(job)
                else:
                    still.append(job)
            st.running = still
        st.last_update = now
        nxt = self.next_completion()
        st.busy_until = nxt if nxt is not None else now
        return done

    advance = time_shared_step

    def next_completion(self) -> float | None:
        st = self.state
        if not st.running:
            return None
        return st.last_update + min(j.remaining for j in st.running) * len(st.running)


class SpatialSharedScheduler(QuletScheduler):
    policy = SchedulerPolicy.SPATIAL_SHARED

    def submit(self, job: NodeJob, now: float) -> None:
        self.state.admitted_work += job.work
        self.state.waiting.append(job)
        self.spatial_shared_admit(now)

    def occupied(self) -> set[int]:
        taken: set[int] = set()
        for job in self.state.running:
            taken.update(job.mapping.values())
        return taken

    def spatial_shared_admit(self, now: float) -> list[NodeJob]:
        """Start waiting qulets in FCFS order while they fit beside the running ones."""
        st = self.state
        started = []
        while st.waiting:
            head = st.waiting[0]
            mapping = find_embedding(head.qulet.circuit, self.node.topology, self.occupied())
            if mapping is None:
                break
            st.waiting.popleft()
            head.mapping = mapping
            head.start = now
            st.running.append(head)
            started.append(head)
        st.busy_until = max([j.start + j.t_q for j in st.running], default=now)
        return started

    def advance(self, now: float) -> list[NodeJob]:
        st = self.state
        done = [j for j in st.running if j.start + j.t_q <= now]
        done.sort(key=lambda j: (j.start + j.t_q, j.start))
        for job in done:
            self._finish(job, job.start + job.t_q)
        st.running = [j for j in st.running if j.finish is None]
        st.last_update = now
        self.spatial_shared_admit(now)
        return done

    def next_completion(self) -> float | None:
        if not self.state.running:
            return None
        return min(j.start + j.t_q for j in self.state.running)


SCHEDULERS = {
    SchedulerPolicy.SPACE_SHARED: SpaceSharedScheduler,
    SchedulerPolicy.TIME_SHARED: TimeSharedScheduler,
    SchedulerPolicy.SPATIAL_SHARED: SpatialSharedScheduler,
}


def make_scheduler(node: QNode) -> QuletScheduler:
    return SCHEDULERS[node.scheduler](node)


class QNodeEntity(SimEntity):
    """Hosts one node's scheduler; reports finished jobs back to their owner."""

    def __init__(self, node: QNode, datacenter: str = ""):
        super().__init__(f"{datacenter}/{node.label}" if datacenter else node.label)
        self.node = node
        self.datacenter = datacenter
        self.scheduler = make_scheduler(node)
        self._wake: SimEvent | None = None
        self.finished: list[NodeJob] = []

    def handle(self, event: SimEvent) -> None:
        if event is self._wake:
            self._wake = None
        now = self.now
        for job in self.scheduler.advance(now):
            self._report(job)
        if event.tag is EventTag.QULET_SUBMIT:
            self.scheduler.submit(event.payload, now)
        self._rearm()

    def _report(self, job: NodeJob) -> None:
        self.finished.append(job)
        self.send(job.owner, EventTag.QULET_DONE, payload=job)

    def _rearm(self) -> None:
        when = self.scheduler.next_completion()
        if self._wake is not None:
            if when is not None and self._wake.time == max(when, self.now):
                return
            self.sim.cancel(self._wake)
            self._wake = None
        if when is not None:
            self._wake = self.sim.schedule(max(when, self.now), self.id, self.id, EventTag.NODE_WAKE)
