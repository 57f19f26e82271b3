"""Assemble entities for a scenario and run it."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .broker import BrokerConfig, DatacenterEntity, QBroker, QuletResult
from .domain import QDatacenter, Qulet, QuletStatus
from .hybrid import ClassicalNode, HybridDag, Orchestrator, TaskRecord, TaskStatus
from .kernel import Simulation
from .node import QNodeEntity


@dataclass
class SimulationResult:
    log: list[str]
    records: dict[int, QuletResult]
    tasks: dict[str, TaskRecord]
    makespan: float
    final_clock: float
    node_busy: dict[str, float] = field(default_factory=dict)
    completed_work: dict[str, float] = field(default_factory=dict)
    admitted_work: dict[str, float] = field(default_factory=dict)
    events_scheduled: int = 0
    events_delivered: int = 0
    events_cancelled: int = 0

    @property
    def utilization(self) -> dict[str, float]:
        if self.makespan <= 0:
            return {k: 0.0 for k in self.node_busy}
        return {k: v / self.makespan for k, v in self.node_busy.items()}

    @property
    def failed(self) -> list[int]:
        return [q for q, r in self.records.items() if r.status is QuletStatus.FAILED]

    @property
    def total_cost(self) -> float:
        return sum(r.cost for r in self.records.values() if r.cost is not None)


def simulate(
    datacenters: Sequence[QDatacenter] | QDatacenter,
    qulets: Iterable[Qulet],
    broker_config: BrokerConfig | None = None,
    dag: HybridDag | None = None,
    classical_nodes: Iterable[ClassicalNode] | None = None,
    log_sink: Callable[[str], None] | None = None,
) -> SimulationResult:
    """Simulate independent ``qulets`` (and optionally a hybrid DAG).

    Inputs are copied, so the same objects can be simulated repeatedly.
    """
    if isinstance(datacenters, QDatacenter):
        datacenters = [datacenters]
    qulets = [copy.deepcopy(q) for q in qulets]
    dag = copy.deepcopy(dag) if dag is not None else None

    sim = Simulation(log_sink=log_sink)
    broker = QBroker("QBroker", broker_config)
    sim.register(broker)
    node_entities: dict[str, QNodeEntity] = {}
    multi = len(datacenters) > 1
    for dc in datacenters:
        dc_entity = DatacenterEntity(dc)
        sim.register(dc_entity)
        broker.attach(dc_entity)
        for node in dc.nodes:
            ent = QNodeEntity(node, dc.name)
            sim.register(ent)
            dc_entity.node_entities[node.id] = ent.id
            node_entities[f"{dc.name}:{node.id}" if multi else str(node.id)] = ent

    broker.submit(qulets)
    orchestrator = None
    if dag is not None:
        broker.expect(len(dag.quantum_tasks))
        orchestrator = Orchestrator(dag, classical_nodes or [], broker.id)
        sim.register(orchestrator)

    final_clock = sim.run()

    records = dict(broker.results)
    tasks = orchestrator.records if orchestrator else {}
    if orchestrator:
        for k, rec in tasks.items():
            q = dag.tasks[k]
            if rec.kind == "quantum" and q.id not in records:
                records[q.id] = QuletResult(q.id, QuletStatus.SKIPPED, reason="upstream failure")
            if rec.kind == "quantum" and q.id in broker.results:
                r = broker.results[q.id]
                rec.node = r.node_label
                if rec.status is TaskStatus.SUCCESS:
                    rec.start = r.finish - r.breakdown.t_q
    records = dict(sorted(records.items()))

    finishes = [r.finish for r in records.values() if r.status is QuletStatus.SUCCESS]
    finishes += [t.finish for t in tasks.values() if t.status is TaskStatus.SUCCESS]
    makespan = max(finishes, default=0.0)

    return SimulationResult(
        log=list(sim.log_lines),
        records=records,
        tasks=tasks,
        makespan=makespan,
        final_clock=final_clock,
        node_busy={k: e.scheduler.state.busy_time for k, e in node_entities.items()},
        completed_work={k: e.scheduler.state.completed_work for k, e in node_entities.items()},
        admitted_work={k: e.scheduler.state.admitted_work for k, e in node_entities.items()},
        events_scheduled=sim.calendar.scheduled_count,
        events_delivered=sim.delivered,
        events_cancelled=sim.cancelled,
    )


def run_scenario(scenario, log_sink: Callable[[str], None] | None = None) -> SimulationResult:
    """Simulate a parsed :class:`~qsim.workload.Scenario`."""
    return simulate(
        scenario.datacenters,
        scenario.independent_qulets() + scenario.generated_qulets(),
        scenario.broker,
        dag=scenario.dag,
        classical_nodes=scenario.classical_nodes,
        log_sink=log_sink,
    )
