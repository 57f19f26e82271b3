"""The quantum broker: feasibility checks, node selection and dispatch."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .domain import (
    QDatacenter,
    QNode,
    Qulet,
    QuletStatus,
    estimate_quantum_time,
    execution_cost,
    quantum_volume,
)
from .kernel import EventTag, SimEntity, SimEvent
from .mapping import QubitMapping, find_embedding
from .node import NodeJob


class PlacementError(Exception):
    pass


class NoFeasibleNodeError(PlacementError):
    def __init__(self, qulet_id: int, reports: dict):
        self.qulet_id = qulet_id
        self.reports = reports
        detail = ", ".join(f"{key}: {r.reasons()}" for key, r in reports.items())
        super().__init__(f"no feasible node for qulet {qulet_id} ({detail})")


class DeadlineInfeasibleError(NoFeasibleNodeError):
    """Every node fails the QoS constraint and nothing else."""


class PolicyKind(enum.Enum):
    FIRST_FEASIBLE = "first_feasible"
    ROUND_ROBIN = "round_robin"
    MIN_COMPLETION = "min_completion"


@dataclass
class BrokerConfig:
    policy: PolicyKind = PolicyKind.FIRST_FEASIBLE
    epsilon: float = 0.01
    compile_time: float = 0.0
    soft_gate_mode: bool = False
    depth_multiplier: float = 1.5
    qv_check: bool = False

    def __post_init__(self):
        self.policy = PolicyKind(self.policy)
        if self.epsilon < 0 or self.compile_time < 0:
            raise ValueError("epsilon and compile_time must be >= 0")
        if self.depth_multiplier < 1:
            raise ValueError("depth_multiplier must be >= 1")


@dataclass(frozen=True)
class TimeBreakdown:
    t_n: float = 0.0
    t_c: float = 0.0
    t_s: float = 0.0
    t_w: float = 0.0
    t_q: float = 0.0

    def __post_init__(self):
        for name in ("t_n", "t_c", "t_s", "t_w", "t_q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @property
    def total(self) -> float:
        return self.t_n + self.t_c + self.t_s + self.t_w + self.t_q


@dataclass
class FeasibilityReport:
    qubit_ok: bool
    gates_ok: bool
    topology_ok: bool
    qos_ok: bool
    mapping: QubitMapping | None = None
    depth_multiplier: float = 1.0

    @property
    def feasible(self) -> bool:
        return self.qubit_ok and self.gates_ok and self.topology_ok and self.qos_ok

    @property
    def only_qos_fails(self) -> bool:
        return self.qubit_ok and self.gates_ok and self.topology_ok and not self.qos_ok

    def reasons(self) -> str:
        names = [n for n, ok in (("qubits", self.qubit_ok), ("gates", self.gates_ok),
                                 ("topology", self.topology_ok), ("qos", self.qos_ok)) if not ok]
        return "+".join(names) or "ok"


@dataclass
class PlacementDecision:
    qulet_id: int
    node_id: int
    datacenter: str
    mapping: QubitMapping
    breakdown: TimeBreakdown
    depth_multiplier: float = 1.0


@dataclass
class PlacementPolicy:
    kind: PolicyKind = PolicyKind.FIRST_FEASIBLE
    cursor: int = 0

    def __post_init__(self):
        self.kind = PolicyKind(self.kind)


def quantum_time(qulet: Qulet, node: QNode, depth_multiplier: float = 1.0) -> float:
    t = estimate_quantum_time(qulet, node)
    return t * depth_multiplier if depth_multiplier != 1.0 else t


def _gate_multiplier(qulet: Qulet, node: QNode, config: BrokerConfig) -> float:
    if config.soft_gate_mode and not qulet.gates <= node.gates:
        return config.depth_multiplier
    return 1.0


def check_feasibility(
    qulet: Qulet,
    node: QNode,
    config: BrokerConfig | None = None,
    predicted_total: float | None = None,
) -> FeasibilityReport:
    """Evaluate the four placement constraints of ``qulet`` on ``node``.

    ``predicted_total`` is the estimated end-to-end time used against the
    qulet's deadline; when omitted the idle-node execution time is used.
    """
    config = config or BrokerConfig()
    qubit_ok = node.qubits >= qulet.width

    unsupported = qulet.gates - node.gates
    multiplier = 1.0
    if not unsupported:
        gates_ok = True
    elif config.soft_gate_mode:
        gates_ok = True
        multiplier = config.depth_multiplier
    else:
        gates_ok = False

    mapping = find_embedding(qulet.circuit, node.topology) if qubit_ok else None
    topology_ok = mapping is not None

    if predicted_total is None:
        predicted_total = quantum_time(qulet, node, multiplier)
    qos_ok = qulet.deadline is None or predicted_total <= qulet.deadline
    if qulet.error_tolerance is not None and node.error is not None:
        qos_ok = qos_ok and node.error.worst <= qulet.error_tolerance
    if config.qv_check and qulet.depth >= 1 and qulet.width >= 1:
        qos_ok = qos_ok and node.quantum_volume >= quantum_volume(qulet.depth, qulet.width)

    return FeasibilityReport(qubit_ok, gates_ok, topology_ok, qos_ok, mapping, multiplier)


def compute_breakdown(
    qulet: Qulet,
    node: QNode,
    datacenter: QDatacenter,
    enqueue_time: float,
    start_time: float,
    config: BrokerConfig | None = None,
    depth_multiplier: float = 1.0,
) -> TimeBreakdown:
    config = config or BrokerConfig()
    if start_time < enqueue_time:
        raise ValueError(f"start_time {start_time!r} precedes enqueue_time {enqueue_time!r}")
    return TimeBreakdown(
        t_n=datacenter.characteristics.base_network_delay,
        t_c=config.compile_time,
        t_s=config.epsilon,
        t_w=start_time - enqueue_time,
        t_q=quantum_time(qulet, node, depth_multiplier),
    )


NodeKey = tuple[int, int]  # (datacenter index, node id)


def _candidates(datacenters: QDatacenter | Sequence[QDatacenter]):
    if isinstance(datacenters, QDatacenter):
        datacenters = [datacenters]
    out = []
    for d, dc in enumerate(datacenters):
        for node in sorted(dc.nodes, key=lambda n: n.id):
            out.append(((d, node.id), dc, node))
    return out


def select_node(
    qulet: Qulet,
    datacenters: QDatacenter | Sequence[QDatacenter],
    policy: PlacementPolicy,
    node_states: dict[NodeKey, float] | None = None,
    now: float = 0.0,
    config: BrokerConfig | None = None,
) -> PlacementDecision:
    """Choose a node for ``qulet`` dispatched at ``now``.

    ``node_states`` maps ``(datacenter index, node id)`` to the time the
    broker expects that node to become free; missing nodes are idle.
    Ties always go to the lowest node id.
    """
    config = config or BrokerConfig()
    node_states = node_states or {}
    cands = _candidates(datacenters)
    if not cands:
        raise NoFeasibleNodeError(qulet.id, {})

    evaluated = []
    reports = {}
    for key, dc, node in cands:
        enqueue = now + dc.characteristics.base_network_delay + config.compile_time
        start = max(enqueue, node_states.get(key, 0.0))
        multiplier = _gate_multiplier(qulet, node, config)
        breakdown = compute_breakdown(qulet, node, dc, enqueue, start, config, multiplier)
        report = check_feasibility(qulet, node, config, predicted_total=breakdown.total)
        reports[f"{dc.name}/{node.label}"] = report
        evaluated.append((key, dc, node, report, breakdown))

    feasible = [i for i, e in enumerate(evaluated) if e[3].feasible]
    if not feasible:
        if all(e[3].only_qos_fails for e in evaluated):
            raise DeadlineInfeasibleError(qulet.id, reports)
        raise NoFeasibleNodeError(qulet.id, reports)

    if policy.kind is PolicyKind.FIRST_FEASIBLE:
        pick = feasible[0]
    elif policy.kind is PolicyKind.ROUND_ROBIN:
        n = len(evaluated)
        start_at = policy.cursor % n
        pick = next(i for i in ((start_at + s) % n for s in range(n)) if evaluated[i][3].feasible)
        policy.cursor = (pick + 1) % n
    else:
        pick = min(feasible, key=lambda i: (evaluated[i][4].total, i))

    key, dc, node, report, breakdown = evaluated[pick]
    return PlacementDecision(qulet.id, node.id, dc.name, report.mapping, breakdown, report.depth_multiplier)


@dataclass
class QuletResult:
    qulet_id: int
    status: QuletStatus
    node_label: str = ""
    breakdown: TimeBreakdown | None = None
    cost: float | None = None
    finish: float | None = None
    datacenter: str = ""
    node_id: int | None = None
    reason: str = ""


class DatacenterEntity(SimEntity):
    """Answers resource-list requests and hosts node entities."""

    def __init__(self, datacenter: QDatacenter):
        super().__init__(datacenter.name)
        self.datacenter = datacenter
        self.node_entities: dict[int, int] = {}

    def handle(self, event: SimEvent) -> None:
        if event.tag is EventTag.RESOURCE_LIST_REQUEST:
            self.send(event.source, EventTag.RESOURCE_LIST, payload=self)


class QBroker(SimEntity):
    """Schedules qulets onto the nodes of the registered datacenters.

    Qulets handed to :meth:`submit` before the run are dispatched at
    ``arrival + epsilon``.  Other entities may submit qulets while the
    simulation runs by sending ``QULET_ARRIVAL`` events; the result goes
    back to them as ``QULET_RESULT``.
    """

    def __init__(self, name: str = "QBroker", config: BrokerConfig | None = None):
        super().__init__(name)
        self.config = config or BrokerConfig()
        self.policy = PlacementPolicy(self.config.policy)
        self.datacenter_entities: list[DatacenterEntity] = []
        self.datacenters: list[QDatacenter] = []
        self.qulets: list[Qulet] = []
        self.results: dict[int, QuletResult] = {}
        self.expected = 0
        self.resolved = 0
        self.node_available: dict[NodeKey, float] = {}
        self.finished_at: float | None = None
        self._ready = False
        self._started = False
        self._buffer: list[tuple[Qulet, int]] = []
        self._resources_seen = 0
        self._owner: dict[int, int] = {}

    def attach(self, dc_entity: DatacenterEntity) -> None:
        self.datacenter_entities.append(dc_entity)

    def submit(self, qulets) -> None:
        for q in qulets:
            self.qulets.append(q)
            self.expected += 1

    def expect(self, count: int) -> None:
        """Reserve ``count`` qulets that other entities will submit later."""
        self.expected += count

    # -- event handling -------------------------------------------------

    def start(self) -> None:
        for dc in self.datacenter_entities:
            self.send(dc.id, EventTag.RESOURCE_LIST_REQUEST)
        if not self.datacenter_entities:
            self._on_resources()

    def handle(self, event: SimEvent) -> None:
        tag = event.tag
        if tag is EventTag.RESOURCE_LIST:
            self._resources_seen += 1
            if self._resources_seen == len(self.datacenter_entities):
                self._on_resources()
        elif tag is EventTag.START_SCHEDULING:
            names = ", ".join(dc.name for dc in self.datacenters) or "no datacenter"
            self.log(f"Started scheduling all Qulets to {names}")
            self._started = True
            self._check_finished()
        elif tag is EventTag.QULET_ARRIVAL:
            self._accept(event.payload, event.source)
        elif tag is EventTag.QULET_DISPATCH:
            self._dispatch(event.payload)
        elif tag is EventTag.QULET_DONE:
            self._collect(event.payload)
        elif tag is EventTag.QULET_SKIP:
            self.resolved += 1
            self._check_finished()

    def _on_resources(self) -> None:
        self.datacenters = [e.datacenter for e in self.datacenter_entities]
        self.log(f"Cloud Resource List received with {len(self.datacenters)} resource(s)")
        self._ready = True
        eps = self.config.epsilon
        self.send(self.id, EventTag.START_SCHEDULING, delay=eps)
        for q in self.qulets:
            q.status = QuletStatus.SUBMITTED
            self.sim.schedule(max(q.arrival, self.now) + eps, self.id, self.id, EventTag.QULET_DISPATCH, q)
        for q, owner in self._buffer:
            self._accept(q, owner)
        self._buffer.clear()

    def _accept(self, qulet: Qulet, owner: int) -> None:
        if not self._ready:
            self._buffer.append((qulet, owner))
            return
        self._owner[qulet.id] = owner
        qulet.status = QuletStatus.SUBMITTED
        self.send(self.id, EventTag.QULET_DISPATCH, delay=self.config.epsilon, payload=qulet)

    def _node_entity(self, datacenter: str, node_id: int) -> int:
        for e in self.datacenter_entities:
            if e.datacenter.name == datacenter:
                return e.node_entities[node_id]
        raise KeyError(datacenter)

    def _label(self, datacenter: str, node_id: int) -> str:
        if len(self.datacenters) > 1:
            return f"{datacenter}:{node_id}"
        return str(node_id)

    def _dispatch(self, qulet: Qulet) -> None:
        try:
            decision = select_node(qulet, self.datacenters, self.policy, self.node_available, self.now, self.config)
        except NoFeasibleNodeError as exc:
            qulet.status = QuletStatus.FAILED
            reason = "deadline" if isinstance(exc, DeadlineInfeasibleError) else "no feasible node"
            self.results[qulet.id] = QuletResult(qulet.id, QuletStatus.FAILED, reason=reason)
            self.log(f"Qulet {qulet.id} failed: {reason}")
            self._resolve(qulet)
            return

        dc_index = [dc.name for dc in self.datacenters].index(decision.datacenter)
        dc = self.datacenters[dc_index]
        node = dc.node(decision.node_id)
        where = node.label if len(self.datacenters) == 1 else f"{node.label} of {dc.name}"
        self.log(f"Sending Qulet {qulet.id} to {where}")

        delay = dc.characteristics.base_network_delay + self.config.compile_time
        t_q = decision.breakdown.t_q
        key = (dc_index, node.id)
        self.node_available[key] = max(self.node_available.get(key, 0.0), self.now + delay) + t_q
        job = NodeJob(
            qulet=qulet,
            work=qulet.work * decision.depth_multiplier,
            t_q=t_q,
            enqueue=self.now + delay,
            mapping=decision.mapping,
            owner=self.id,
            datacenter=dc.name,
            node_id=node.id,
        )
        qulet.status = QuletStatus.QUEUED
        self.send(self._node_entity(dc.name, node.id), EventTag.QULET_SUBMIT, delay=delay, payload=job)

    def _collect(self, job: NodeJob) -> None:
        qulet = job.qulet
        dc = next(d for d in self.datacenters if d.name == job.datacenter)
        node = dc.node(job.node_id)
        # sharing slowdowns surface as waiting: effective start = finish - t_q
        start = max(job.finish - job.t_q, job.enqueue)
        breakdown = TimeBreakdown(
            t_n=dc.characteristics.base_network_delay,
            t_c=self.config.compile_time,
            t_s=self.config.epsilon,
            t_w=start - job.enqueue,
            t_q=job.t_q,
        )
        qulet.status = QuletStatus.SUCCESS
        qulet.times = breakdown
        self.results[qulet.id] = QuletResult(
            qulet.id,
            QuletStatus.SUCCESS,
            node_label=self._label(dc.name, node.id),
            breakdown=breakdown,
            cost=execution_cost(qulet, job.t_q, dc.characteristics),
            finish=job.finish,
            datacenter=dc.name,
            node_id=node.id,
        )
        self.log(f"Qulet {qulet.id} result received")
        self._resolve(qulet)

    def _resolve(self, qulet: Qulet) -> None:
        self.resolved += 1
        owner = self._owner.pop(qulet.id, None)
        if owner is not None:
            self.send(owner, EventTag.QULET_RESULT, payload=self.results[qulet.id])
        self._check_finished()

    def _check_finished(self) -> None:
        if self.finished_at is None and self._started and self.resolved >= self.expected:
            self.finished_at = self.now
            self.log("All Qulets executed. Finishing")
