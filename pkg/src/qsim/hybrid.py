"""Hybrid quantum-classical applications as task DAGs.

Classical tasks (cloudlets) run on minimal MIPS-rated classical nodes;
quantum tasks (qulets) go through the broker.  A task becomes ready once
every predecessor has finished and its optional per-edge transfer delay
has elapsed.  A failed qulet skips everything downstream of it.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Iterable, Union

from .domain import DomainError, Qulet, QuletStatus
from .kernel import EventTag, SimEntity, SimEvent


class TaskStatus(enum.Enum):
    PENDING = "Pending"
    RUNNING = "Running"
    SUCCESS = "Success"
    FAILED = "Failed"
    SKIPPED = "Skipped"


@dataclass
class Cloudlet:
    id: str
    length: float
    arrival: float = 0.0
    status: TaskStatus = field(default=TaskStatus.PENDING, compare=False)
    finish_time: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.length < 0 or self.arrival < 0:
            raise DomainError(f"cloudlet {self.id}: length and arrival must be >= 0")


@dataclass
class ClassicalNode:
    id: int
    mips: float
    busy_until: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not self.mips > 0:
            raise DomainError(f"classical node {self.id}: mips must be positive")


Task = Union[Cloudlet, Qulet]


@dataclass
class HybridDag:
    """Tasks keyed by task id; edges are ``(pred, succ, transfer_seconds)``."""

    tasks: dict[str, Task] = field(default_factory=dict)
    edges: list[tuple[str, str, float]] = field(default_factory=list)

    def __post_init__(self):
        norm = []
        for e in self.edges:
            u, v, *rest = e
            delay = float(rest[0]) if rest else 0.0
            for end in (u, v):
                if end not in self.tasks:
                    raise DomainError(f"edge ({u}, {v}) references unknown task {end!r}")
            if delay < 0:
                raise DomainError(f"edge ({u}, {v}) has negative transfer delay")
            norm.append((u, v, delay))
        self.edges = norm
        qulet_ids = [t.id for t in self.tasks.values() if isinstance(t, Qulet)]
        if len(set(qulet_ids)) != len(qulet_ids):
            raise DomainError("a qulet appears in more than one task")

    def successors(self, task_id: str) -> list[tuple[str, float]]:
        return [(v, d) for u, v, d in self.edges if u == task_id]

    def predecessors(self, task_id: str) -> list[str]:
        return [u for u, v, _ in self.edges if v == task_id]

    @property
    def quantum_tasks(self) -> list[str]:
        return [k for k, t in self.tasks.items() if isinstance(t, Qulet)]


def validate_dag(dag: HybridDag) -> list[str] | None:
    """Return ``None`` for an acyclic DAG, otherwise one cycle as a task list."""
    succ: dict[str, list[str]] = {k: [] for k in dag.tasks}
    for u, v, _ in dag.edges:
        succ[u].append(v)
    color = dict.fromkeys(dag.tasks, 0)
    stack: list[str] = []

    def visit(u: str) -> list[str] | None:
        color[u] = 1
        stack.append(u)
        for v in succ[u]:
            if color[v] == 1:
                return stack[stack.index(v):]
            if color[v] == 0:
                found = visit(v)
                if found:
                    return found
        stack.pop()
        color[u] = 2
        return None

    for u in dag.tasks:
        if color[u] == 0:
            cycle = visit(u)
            if cycle:
                return list(cycle)
    return None


@dataclass
class TaskRecord:
    id: str
    kind: str
    status: TaskStatus = TaskStatus.PENDING
    ready: float | None = None
    start: float | None = None
    finish: float | None = None
    node: str = ""


class Orchestrator(SimEntity):
    def __init__(self, dag: HybridDag, classical_nodes: Iterable[ClassicalNode], broker_id: int, name="Orchestrator"):
        super().__init__(name)
        cycle = validate_dag(dag)
        if cycle:
            raise DomainError(f"task graph has a cycle: {' -> '.join(cycle)}")
        self.dag = dag
        self.nodes = sorted((dataclasses.replace(n) for n in classical_nodes), key=lambda n: n.id)
        if not self.nodes and any(isinstance(t, Cloudlet) for t in dag.tasks.values()):
            raise DomainError("classical tasks present but no classical nodes")
        self.broker_id = broker_id
        self.records = {
            k: TaskRecord(k, "quantum" if isinstance(t, Qulet) else "classical") for k, t in dag.tasks.items()
        }
        self._waiting_on = {k: len(dag.predecessors(k)) for k in dag.tasks}
        self._by_qulet: dict[int, str] = {}

    def start(self) -> None:
        for k, task in self.dag.tasks.items():
            if self._waiting_on[k] == 0:
                self.sim.schedule(max(task.arrival, self.now), self.id, self.id, EventTag.TASK_READY, k)

    def handle(self, event: SimEvent) -> None:
        tag = event.tag
        if tag is EventTag.TASK_READY:
            self._run(event.payload)
        elif tag is EventTag.EDGE_DONE:
            k = event.payload
            self._waiting_on[k] -= 1
            if self._waiting_on[k] == 0 and self.records[k].status is TaskStatus.PENDING:
                arrival = self.dag.tasks[k].arrival
                self.sim.schedule(max(arrival, self.now), self.id, self.id, EventTag.TASK_READY, k)
        elif tag is EventTag.CLOUDLET_DONE:
            self._complete(event.payload)
        elif tag is EventTag.QULET_RESULT:
            k = self._by_qulet[event.payload.qulet_id]
            if event.payload.status is QuletStatus.SUCCESS:
                self._complete(k)
            else:
                self.records[k].status = TaskStatus.FAILED
                self._skip_downstream(k)

    def _run(self, k: str) -> None:
        rec = self.records[k]
        rec.ready = self.now
        task = self.dag.tasks[k]
        if isinstance(task, Cloudlet):
            node = min(self.nodes, key=lambda n: (n.busy_until, n.id))
            rec.start = max(self.now, node.busy_until)
            node.busy_until = rec.start + task.length / node.mips
            rec.node = str(node.id)
            rec.status = TaskStatus.RUNNING
            self.sim.schedule(node.busy_until, self.id, self.id, EventTag.CLOUDLET_DONE, k)
        else:
            qulet = dataclasses.replace(task, arrival=self.now)
            self._by_qulet[qulet.id] = k
            rec.start = self.now
            rec.status = TaskStatus.RUNNING
            self.send(self.broker_id, EventTag.QULET_ARRIVAL, payload=qulet)

    def _complete(self, k: str) -> None:
        rec = self.records[k]
        rec.status = TaskStatus.SUCCESS
        rec.finish = self.now
        for v, delay in self.dag.successors(k):
            self.send(self.id, EventTag.EDGE_DONE, delay=delay, payload=v)

    def _skip_downstream(self, k: str) -> None:
        todo = [v for v, _ in self.dag.successors(k)]
        while todo:
            v = todo.pop()
            rec = self.records[v]
            if rec.status is TaskStatus.SKIPPED:
                continue
            rec.status = TaskStatus.SKIPPED
            if rec.kind == "quantum":
                self.send(self.broker_id, EventTag.QULET_SKIP, payload=self.dag.tasks[v].id)
            todo.extend(w for w, _ in self.dag.successors(v))

    @property
    def makespan(self) -> float:
        return max((r.finish for r in self.records.values() if r.status is TaskStatus.SUCCESS), default=0.0)


@dataclass
class OrchestrationResult:
    tasks: dict[str, TaskRecord]
    makespan: float
    log: list[str]


def orchestrate(dag: HybridDag, classical_nodes, datacenters, broker_config=None) -> OrchestrationResult:
    """Run ``dag`` to completion and report per-task timings."""
    from .runner import simulate

    result = simulate(datacenters, [], broker_config, dag=dag, classical_nodes=classical_nodes)
    return OrchestrationResult(result.tasks, result.makespan, result.log)
