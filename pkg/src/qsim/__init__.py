"""Discrete-event simulation of hybrid quantum-classical cloud environments."""

from importlib import resources

from .broker import (
    BrokerConfig,
    DeadlineInfeasibleError,
    FeasibilityReport,
    NoFeasibleNodeError,
    PlacementDecision,
    PlacementPolicy,
    PolicyKind,
    QBroker,
    TimeBreakdown,
    check_feasibility,
    compute_breakdown,
    select_node,
)
from .domain import (
    DatacenterCharacteristics,
    DomainError,
    Layer,
    NodeErrorRates,
    QDatacenter,
    QNode,
    QubitTopology,
    Qulet,
    QuletStatus,
    SchedulerPolicy,
    clops,
    estimate_quantum_time,
    execution_cost,
    quantum_volume,
    validate_topology,
)
from .hybrid import ClassicalNode, Cloudlet, HybridDag, orchestrate, validate_dag
from .kernel import EventTag, SimEntity, SimEvent, Simulation, emit_log, format_time
from .mapping import find_disjoint_embeddings, find_embedding, is_identity_subset
from .runner import SimulationResult, run_scenario, simulate
from .workload import (
    GeneratorParams,
    Scenario,
    dump_scenario,
    generate_workload,
    load_scenario,
    parse_scenario,
    write_results,
)

__version__ = "0.1.0"

__all__ = [
    "BrokerConfig",
    "check_feasibility",
    "ClassicalNode",
    "clops",
    "Cloudlet",
    "compute_breakdown",
    "DatacenterCharacteristics",
    "DeadlineInfeasibleError",
    "DomainError",
    "dump_scenario",
    "emit_log",
    "estimate_quantum_time",
    "EventTag",
    "execution_cost",
    "FeasibilityReport",
    "find_disjoint_embeddings",
    "find_embedding",
    "format_time",
    "generate_workload",
    "GeneratorParams",
    "HybridDag",
    "is_identity_subset",
    "Layer",
    "load_scenario",
    "NodeErrorRates",
    "NoFeasibleNodeError",
    "orchestrate",
    "parse_scenario",
    "PlacementDecision",
    "PlacementPolicy",
    "PolicyKind",
    "QBroker",
    "QDatacenter",
    "QNode",
    "quantum_volume",
    "QubitTopology",
    "Qulet",
    "QuletStatus",
    "run_scenario",
    "sample_scenario_path",
    "Scenario",
    "SchedulerPolicy",
    "select_node",
    "SimEntity",
    "SimEvent",
    "simulate",
    "Simulation",
    "SimulationResult",
    "TimeBreakdown",
    "validate_dag",
    "validate_topology",
    "write_results",
]


def sample_scenario_path() -> str:
    """Path of the bundled two-qulet, single-node (7-qubit) scenario."""
    return str(resources.files(__name__) / "data" / "oslo_two_qulets.json")
