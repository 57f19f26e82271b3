"""Quantum resources, quantum tasks and the benchmarking formulas."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# benchmarking formulas


def quantum_volume(depth: int, width: int) -> int:
    """Quantum volume of the largest faithfully run circuit: ``2**min(d, m)``."""
    if depth < 1 or width < 1:
        raise DomainError(f"depth and width must be >= 1, got ({depth}, {width})")
    return 2 ** min(int(depth), int(width))


def _log2_volume(qv: int) -> int:
    qv_int = int(qv)
    if qv_int != qv or qv_int < 2 or qv_int & (qv_int - 1):
        raise DomainError(f"quantum volume must be a power of two >= 2, got {qv!r}")
    return qv_int.bit_length() - 1


def clops(qv: int, time_taken, M: int = 100, K: int = 10, S: int = 100):
    """Circuit layer operations per second from a timed QV benchmark.

    ``M`` templates, ``K`` parameter updates and ``S`` shots of QV circuits
    with ``log2(qv)`` layers each, completed in ``time_taken`` seconds.
    Works with ``fractions.Fraction`` times as well as floats.
    """
    layers = _log2_volume(qv)
    if not time_taken > 0:
        raise DomainError(f"time_taken must be positive, got {time_taken!r}")
    return M * K * S * layers / time_taken


def estimate_quantum_time(qulet: "Qulet", node: "QNode") -> float:
    """Execution time of a qulet on an idle node: depth / clops * shots."""
    return qulet.depth / node.clops * qulet.shots


def execution_cost(qulet: "Qulet", t_q: float, characteristics: "DatacenterCharacteristics") -> float:
    return characteristics.cost_per_sec * t_q + characteristics.cost_per_shot * qulet.shots


# ---------------------------------------------------------------------------
# topology and gates


def validate_topology(num_qubits: int, edges: Iterable[tuple[int, int]]) -> list[str]:
    """Return every invariant violation of a raw qubit graph (empty if valid)."""
    problems = []
    if num_qubits < 0:
        problems.append(f"negative qubit count {num_qubits}")
    seen = set()
    for edge in edges:
        if len(edge) != 2:
            problems.append(f"edge {tuple(edge)} is not a pair")
            continue
        i, j = edge
        for v in (i, j):
            if not 0 <= v < num_qubits:
                problems.append(f"endpoint {v} out of range for {num_qubits} qubits")
        if i == j:
            problems.append(f"self-loop on qubit {i}")
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            problems.append(f"duplicate edge {key}")
        seen.add(key)
    return problems


@dataclass(frozen=True)
class QubitTopology:
    """Undirected coupling graph; edges stored sorted as ``(min, max)`` pairs."""

    num_qubits: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = [tuple(int(v) for v in e) for e in self.edges]
        problems = validate_topology(self.num_qubits, edges)
        if problems:
            raise DomainError("; ".join(problems))
        canon = tuple(sorted((min(i, j), max(i, j)) for i, j in edges))
        object.__setattr__(self, "num_qubits", int(self.num_qubits))
        object.__setattr__(self, "edges", canon)

    @classmethod
    def path(cls, n: int) -> "QubitTopology":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, n: int) -> "QubitTopology":
        return cls(n, [(0, i) for i in range(1, n)])

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.num_qubits)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def widened(self, width: int) -> "QubitTopology":
        """Same edges over ``width`` vertices (extra ones isolated)."""
        if width <= self.num_qubits:
            return self
        return QubitTopology(width, self.edges)


def normalize_gates(names: Iterable[str]) -> frozenset[str]:
    gates = set()
    for name in names:
        name = str(name).strip().upper()
        if not name:
            raise DomainError("empty gate name")
        gates.add(name)
    return frozenset(gates)


# ---------------------------------------------------------------------------
# resources


class SchedulerPolicy(enum.Enum):
    SPACE_SHARED = "space_shared"
    TIME_SHARED = "time_shared"
    SPATIAL_SHARED = "spatial_shared"


class Layer(enum.Enum):
    CLOUD = "cloud"
    EDGE = "edge"


@dataclass(frozen=True)
class NodeErrorRates:
    readout_error: float = 0.0
    cnot_error: float = 0.0

    def __post_init__(self):
        for name in ("readout_error", "cnot_error"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"{name} must be a probability, got {p!r}")

    @property
    def worst(self) -> float:
        return max(self.readout_error, self.cnot_error)


@dataclass(frozen=True)
class QNode:
    id: int
    qubits: int
    quantum_volume: int
    clops: float
    gates: frozenset[str]
    topology: QubitTopology
    error: NodeErrorRates | None = None
    scheduler: SchedulerPolicy = SchedulerPolicy.SPACE_SHARED
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", normalize_gates(self.gates))
        object.__setattr__(self, "scheduler", SchedulerPolicy(self.scheduler))
        if self.topology.num_qubits != self.qubits:
            raise DomainError(
                f"node {self.id}: topology has {self.topology.num_qubits} qubits, node declares {self.qubits}"
            )
        _log2_volume(self.quantum_volume)
        if not self.clops > 0:
            raise DomainError(f"node {self.id}: clops must be positive, got {self.clops!r}")

    @property
    def label(self) -> str:
        return f"QNode #{self.id}"


@dataclass(frozen=True)
class DatacenterCharacteristics:
    time_zone: float = 0.0
    cost_per_sec: float = 0.0
    cost_per_shot: float = 0.0
    base_network_delay: float = 0.0

    def __post_init__(self):
        for name in ("cost_per_sec", "cost_per_shot", "base_network_delay"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")


@dataclass(frozen=True)
class QDatacenter:
    name: str
    nodes: tuple[QNode, ...]
    characteristics: DatacenterCharacteristics = field(default_factory=DatacenterCharacteristics)
    layer: Layer = Layer.CLOUD

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise DomainError(f"datacenter {self.name}: duplicate node ids {ids}")

    def node(self, node_id: int) -> QNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


# ---------------------------------------------------------------------------
# tasks


class QuletStatus(enum.Enum):
    CREATED = "Created"
    SUBMITTED = "Submitted"
    QUEUED = "Queued"
    RUNNING = "Running"
    SUCCESS = "Success"
    FAILED = "Failed"
    SKIPPED = "Skipped"  # never submitted: an upstream DAG task failed


@dataclass
class Qulet:
    id: int
    width: int
    depth: int
    shots: int
    gates: frozenset[str]
    topology: QubitTopology
    arrival: float = 0.0
    deadline: float | None = None
    error_tolerance: float | None = None
    status: QuletStatus = field(default=QuletStatus.CREATED, compare=False)
    # filled in by the broker on completion (a broker.TimeBreakdown)
    times: object | None = field(default=None, compare=False)

    def __post_init__(self):
        self.gates = normalize_gates(self.gates)
        if self.topology.num_qubits > self.width:
            raise DomainError(
                f"qulet {self.id}: topology spans {self.topology.num_qubits} qubits but width is {self.width}"
            )
        if self.width < 0 or self.depth < 0 or self.shots < 0 or self.arrival < 0:
            raise DomainError(f"qulet {self.id}: width, depth, shots and arrival must be >= 0")
        if self.error_tolerance is not None and not 0.0 <= self.error_tolerance <= 1.0:
            raise DomainError(f"qulet {self.id}: error_tolerance must be a probability")
        if self.deadline is not None and self.deadline < 0:
            raise DomainError(f"qulet {self.id}: deadline must be >= 0")

    @property
    def circuit(self) -> QubitTopology:
        """Coupling graph over all ``width`` circuit qubits."""
        return self.topology.widened(self.width)

    @property
    def work(self) -> int:
        """Layer executions needed: depth x shots."""
        return self.depth * self.shots
