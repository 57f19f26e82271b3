"""Scenario documents, synthetic workloads and result files.

Scenario documents are JSON with ``"version": "1"``; the layout is
described in ``docs/scenario-format.md``.  Errors carry the JSON path of
the offending field (and line/column for syntax errors).
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .broker import BrokerConfig, PolicyKind
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
    validate_topology,
)
from .hybrid import ClassicalNode, Cloudlet, HybridDag, validate_dag

FORMAT_VERSION = "1"
RESULTS_HEADER = ["qulet_id", "status", "node_id", "t_n", "t_c", "t_s", "t_w", "t_q", "total", "cost"]


class ScenarioError(Exception):
    pass


class ScenarioSyntaxError(ScenarioError):
    pass


class SchemaError(ScenarioError):
    pass


class SemanticError(ScenarioError):
    pass


class ResultsFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scenario model


@dataclass
class Scenario:
    datacenters: list[QDatacenter]
    qulets: list[Qulet] = field(default_factory=list)
    broker: BrokerConfig = field(default_factory=BrokerConfig)
    classical_nodes: list[ClassicalNode] = field(default_factory=list)
    dag: HybridDag | None = None
    seed: int = 0
    version: str = FORMAT_VERSION
    generator: GeneratorParams | None = None

    def independent_qulets(self) -> list[Qulet]:
        """Qulets not owned by the DAG; the broker dispatches these directly."""
        in_dag = set()
        if self.dag is not None:
            in_dag = {self.dag.tasks[k].id for k in self.dag.quantum_tasks}
        return [q for q in self.qulets if q.id not in in_dag]

    def generated_qulets(self) -> list[Qulet]:
        """Qulets drawn from the optional generator block with the scenario seed."""
        if self.generator is None:
            return []
        return generate_workload(self.generator, self.seed)


# ---------------------------------------------------------------------------
# field readers


def _get(obj: dict, key: str, path: str, kinds, default: Any = ...) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    if key not in obj or obj[key] is None:
        if default is ...:
            raise SchemaError(f"{path}.{key}: missing required field '{key}'")
        return default
    value = obj[key]
    kinds = kinds if isinstance(kinds, tuple) else (kinds,)
    # bool is an int subclass; keep them apart
    if isinstance(value, bool) and bool not in kinds:
        raise SchemaError(f"{path}.{key}: expected {_kind_names(kinds)}, got boolean")
    if float in kinds and isinstance(value, int) and not isinstance(value, bool):
        return value
    if not isinstance(value, kinds):
        raise SchemaError(f"{path}.{key}: expected {_kind_names(kinds)}, got {type(value).__name__}")
    return value


def _kind_names(kinds) -> str:
    names = {int: "integer", float: "number", str: "string", list: "list", dict: "object", bool: "boolean"}
    return " or ".join(names.get(k, k.__name__) for k in kinds)


def _enum(enum_cls, value: str, path: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise SchemaError(f"{path}: unknown value {value!r} (expected one of {allowed})") from None


def _edges(raw: list, path: str) -> list[tuple[int, int]]:
    out = []
    for i, e in enumerate(raw):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
            raise SchemaError(f"{path}[{i}]: edge must be a pair of integers")
        out.append((e[0], e[1]))
    return out


def _topology(obj: dict, path: str) -> QubitTopology:
    n = _get(obj, "num_qubits", path, int)
    edges = _edges(_get(obj, "edges", path, list, []), f"{path}.edges")
    problems = validate_topology(n, edges)
    if problems:
        raise SemanticError(f"{path}: {'; '.join(problems)}")
    return QubitTopology(n, edges)


def _gates(obj: dict, path: str) -> list[str]:
    gates = _get(obj, "gates", path, list)
    for i, g in enumerate(gates):
        if not isinstance(g, str) or not g.strip():
            raise SchemaError(f"{path}.gates[{i}]: gate names must be non-empty strings")
    return gates


def _node(obj: dict, path: str) -> QNode:
    node_id = _get(obj, "id", path, int)
    qubits = _get(obj, "qubits", path, int)
    qv = _get(obj, "quantum_volume", path, int)
    clops_ = _get(obj, "clops", path, float)
    gates = _gates(obj, path)
    topo = _topology(_get(obj, "topology", path, dict), f"{path}.topology")
    err_obj = _get(obj, "error", path, dict, None)
    sched = _enum(SchedulerPolicy, _get(obj, "scheduler", path, str, "space_shared"), f"{path}.scheduler")
    try:
        error = None
        if err_obj is not None:
            error = NodeErrorRates(
                _get(err_obj, "readout_error", f"{path}.error", float, 0.0),
                _get(err_obj, "cnot_error", f"{path}.error", float, 0.0),
            )
        return QNode(node_id, qubits, qv, clops_, gates, topo, error, sched, _get(obj, "name", path, str, ""))
    except DomainError as exc:
        raise SemanticError(f"{path}: {exc}") from None


def _datacenter(obj: dict, path: str) -> QDatacenter:
    name = _get(obj, "name", path, str)
    layer = _enum(Layer, _get(obj, "layer", path, str, "cloud"), f"{path}.layer")
    ch = _get(obj, "characteristics", path, dict, {})
    cpath = f"{path}.characteristics"
    nodes = [_node(n, f"{path}.nodes[{i}]") for i, n in enumerate(_get(obj, "nodes", path, list))]
    try:
        chars = DatacenterCharacteristics(
            time_zone=_get(ch, "time_zone", cpath, float, 0.0),
            cost_per_sec=_get(ch, "cost_per_sec", cpath, float, 0.0),
            cost_per_shot=_get(ch, "cost_per_shot", cpath, float, 0.0),
            base_network_delay=_get(ch, "base_network_delay", cpath, float, 0.0),
        )
        return QDatacenter(name, nodes, chars, layer)
    except DomainError as exc:
        raise SemanticError(f"{path}: {exc}") from None


def _qulet(obj: dict, path: str) -> Qulet:
    args = dict(
        id=_get(obj, "id", path, int),
        width=_get(obj, "width", path, int),
        depth=_get(obj, "depth", path, int),
        shots=_get(obj, "shots", path, int),
        gates=_gates(obj, path),
        topology=_topology(_get(obj, "topology", path, dict), f"{path}.topology"),
        arrival=_get(obj, "arrival", path, float, 0.0),
        deadline=_get(obj, "deadline", path, float, None),
        error_tolerance=_get(obj, "error_tolerance", path, float, None),
    )
    try:
        return Qulet(**args)
    except DomainError as exc:
        raise SemanticError(f"{path}: {exc}") from None


def _broker(obj: dict, path: str) -> BrokerConfig:
    try:
        return BrokerConfig(
            policy=_enum(PolicyKind, _get(obj, "policy", path, str, "first_feasible"), f"{path}.policy"),
            epsilon=_get(obj, "epsilon", path, float, 0.01),
            compile_time=_get(obj, "compile_time", path, float, 0.0),
            soft_gate_mode=_get(obj, "soft_gate_mode", path, bool, False),
            depth_multiplier=_get(obj, "depth_multiplier", path, float, 1.5),
            qv_check=_get(obj, "qv_check", path, bool, False),
        )
    except ValueError as exc:
        raise SemanticError(f"{path}: {exc}") from None


def _dag(obj: dict, path: str, qulets: dict[int, Qulet]) -> HybridDag:
    tasks: dict[str, Any] = {}
    for i, t in enumerate(_get(obj, "tasks", path, list)):
        tpath = f"{path}.tasks[{i}]"
        tid = _get(t, "id", tpath, str)
        if tid in tasks:
            raise SemanticError(f"{tpath}.id: duplicate task id {tid!r}")
        kind = _get(t, "kind", tpath, str)
        if kind == "classical":
            try:
                tasks[tid] = Cloudlet(tid, _get(t, "length", tpath, float), _get(t, "arrival", tpath, float, 0.0))
            except DomainError as exc:
                raise SemanticError(f"{tpath}: {exc}") from None
        elif kind == "quantum":
            qid = _get(t, "qulet", tpath, int)
            if qid not in qulets:
                raise SemanticError(f"{tpath}.qulet: no qulet with id {qid}")
            tasks[tid] = qulets[qid]
        else:
            raise SchemaError(f"{tpath}.kind: unknown task kind {kind!r} (expected classical or quantum)")
    edges = []
    for i, e in enumerate(_get(obj, "edges", path, list, [])):
        epath = f"{path}.edges[{i}]"
        u, v = _get(e, "from", epath, str), _get(e, "to", epath, str)
        for end, key in ((u, "from"), (v, "to")):
            if end not in tasks:
                raise SemanticError(f"{epath}.{key}: unknown task {end!r}")
        delay = _get(e, "delay", epath, float, 0.0)
        if delay < 0:
            raise SemanticError(f"{epath}.delay: must be >= 0")
        edges.append((u, v, float(delay)))
    try:
        dag = HybridDag(tasks, edges)
    except DomainError as exc:
        raise SemanticError(f"{path}: {exc}") from None
    cycle = validate_dag(dag)
    if cycle:
        raise SemanticError(f"{path}: cycle {' -> '.join(cycle + cycle[:1])}")
    return dag


def _load_json(text: str) -> Any:
    if not text.strip():
        raise ScenarioSyntaxError("line 1: empty document")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _check_version(doc: dict) -> None:
    version = _get(doc, "version", "$", str)
    if version != FORMAT_VERSION:
        raise SchemaError(f"$.version: unsupported version {version!r} (expected {FORMAT_VERSION!r})")


def parse_scenario(text: str) -> Scenario:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise SchemaError("$: top level must be an object")
    _check_version(doc)

    seed = _get(doc, "seed", "$", int, 0)
    if not 0 <= seed < 2**64:
        raise SchemaError("$.seed: must be an unsigned 64-bit integer")
    dcs = [_datacenter(d, f"$.datacenters[{i}]") for i, d in enumerate(_get(doc, "datacenters", "$", list))]
    names = [d.name for d in dcs]
    if len(set(names)) != len(names):
        raise SemanticError(f"$.datacenters: duplicate datacenter names {names}")

    qulets = [_qulet(q, f"$.qulets[{i}]") for i, q in enumerate(_get(doc, "qulets", "$", list, []))]
    by_id: dict[int, Qulet] = {}
    for i, q in enumerate(qulets):
        if q.id in by_id:
            raise SemanticError(f"$.qulets[{i}].id: duplicate qulet id {q.id}")
        by_id[q.id] = q

    broker = _broker(_get(doc, "broker", "$", dict, {}), "$.broker")

    classical = []
    for i, c in enumerate(_get(doc, "classical_nodes", "$", list, [])):
        cpath = f"$.classical_nodes[{i}]"
        try:
            classical.append(ClassicalNode(_get(c, "id", cpath, int), _get(c, "mips", cpath, float)))
        except DomainError as exc:
            raise SemanticError(f"{cpath}: {exc}") from None
    if len({c.id for c in classical}) != len(classical):
        raise SemanticError("$.classical_nodes: duplicate ids")

    dag_obj = _get(doc, "dag", "$", dict, None)
    dag = _dag(dag_obj, "$.dag", by_id) if dag_obj is not None else None
    if dag is not None and not classical and any(isinstance(t, Cloudlet) for t in dag.tasks.values()):
        raise SemanticError("$.classical_nodes: the dag has classical tasks but no classical node is defined")

    gen_obj = _get(doc, "generator", "$", dict, None)
    generator = _generator(gen_obj, "$.generator") if gen_obj is not None else None
    if generator is not None and generator.count:
        drawn = range(generator.first_id, generator.first_id + generator.count)
        clash = sorted(set(drawn) & set(by_id))
        if clash:
            raise SemanticError(f"$.generator.first_id: generated ids collide with qulet ids {clash}")
    return Scenario(dcs, qulets, broker, classical, dag, seed, generator=generator)


def load_scenario(path: str | os.PathLike) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


# ---------------------------------------------------------------------------
# serialization


def topology_to_dict(t: QubitTopology) -> dict:
    return {"num_qubits": t.num_qubits, "edges": [list(e) for e in t.edges]}


def qulet_to_dict(q: Qulet) -> dict:
    d = {
        "id": q.id,
        "arrival": q.arrival,
        "width": q.width,
        "depth": q.depth,
        "shots": q.shots,
        "gates": sorted(q.gates),
        "topology": topology_to_dict(q.topology),
    }
    if q.deadline is not None:
        d["deadline"] = q.deadline
    if q.error_tolerance is not None:
        d["error_tolerance"] = q.error_tolerance
    return d


def _node_to_dict(n: QNode) -> dict:
    d = {
        "id": n.id,
        "name": n.name,
        "qubits": n.qubits,
        "quantum_volume": n.quantum_volume,
        "clops": n.clops,
        "gates": sorted(n.gates),
        "topology": topology_to_dict(n.topology),
        "scheduler": n.scheduler.value,
    }
    if n.error is not None:
        d["error"] = {"readout_error": n.error.readout_error, "cnot_error": n.error.cnot_error}
    return d


def scenario_to_dict(s: Scenario) -> dict:
    doc: dict[str, Any] = {
        "version": s.version,
        "seed": s.seed,
        "broker": {
            "policy": s.broker.policy.value,
            "epsilon": s.broker.epsilon,
            "compile_time": s.broker.compile_time,
            "soft_gate_mode": s.broker.soft_gate_mode,
            "depth_multiplier": s.broker.depth_multiplier,
            "qv_check": s.broker.qv_check,
        },
        "datacenters": [
            {
                "name": dc.name,
                "layer": dc.layer.value,
                "characteristics": {
                    "time_zone": dc.characteristics.time_zone,
                    "cost_per_sec": dc.characteristics.cost_per_sec,
                    "cost_per_shot": dc.characteristics.cost_per_shot,
                    "base_network_delay": dc.characteristics.base_network_delay,
                },
                "nodes": [_node_to_dict(n) for n in dc.nodes],
            }
            for dc in s.datacenters
        ],
        "qulets": [qulet_to_dict(q) for q in s.qulets],
    }
    if s.classical_nodes:
        doc["classical_nodes"] = [{"id": c.id, "mips": c.mips} for c in s.classical_nodes]
    if s.generator is not None:
        doc["generator"] = generator_to_dict(s.generator)
    if s.dag is not None:
        tasks = []
        for k, t in s.dag.tasks.items():
            if isinstance(t, Cloudlet):
                tasks.append({"id": k, "kind": "classical", "length": t.length, "arrival": t.arrival})
            else:
                tasks.append({"id": k, "kind": "quantum", "qulet": t.id})
        doc["dag"] = {
            "tasks": tasks,
            "edges": [{"from": u, "to": v, "delay": d} for u, v, d in s.dag.edges],
        }
    return doc


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


# ---------------------------------------------------------------------------
# synthetic workloads


@dataclass(frozen=True)
class EdgeModel:
    kind: str = "path"  # path | star | erdos_renyi
    p: float = 0.5

    def __post_init__(self):
        if self.kind not in ("path", "star", "erdos_renyi"):
            raise DomainError(f"unknown edge model {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError("edge probability must lie in [0, 1]")


@dataclass(frozen=True)
class ArrivalModel:
    kind: str = "batch"  # batch | poisson
    t0: float = 0.0
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in ("batch", "poisson"):
            raise DomainError(f"unknown arrival model {self.kind!r}")
        if self.t0 < 0:
            raise DomainError("t0 must be >= 0")
        if not self.rate > 0:
            raise DomainError("poisson rate must be positive")


@dataclass(frozen=True)
class GeneratorParams:
    count: int
    width_range: tuple[int, int] = (2, 5)
    depth_range: tuple[int, int] = (10, 100)
    shots_range: tuple[int, int] = (100, 4000)
    edge_model: EdgeModel = EdgeModel()
    gate_pool: tuple[str, ...] = ("CX", "ID", "RZ", "SX", "X")
    arrival_model: ArrivalModel = ArrivalModel()
    first_id: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise DomainError("count must be >= 0")
        for name in ("width_range", "depth_range", "shots_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise DomainError(f"{name} must be a nonempty range of non-negative integers")
            object.__setattr__(self, name, (int(lo), int(hi)))
        if not self.gate_pool:
            raise DomainError("gate_pool must not be empty")
        object.__setattr__(self, "gate_pool", tuple(sorted({g.strip().upper() for g in self.gate_pool})))


def _draw_topology(rng: np.random.Generator, width: int, model: EdgeModel) -> QubitTopology:
    if model.kind == "path":
        return QubitTopology.path(width)
    if model.kind == "star":
        return QubitTopology.star(width) if width > 0 else QubitTopology(0)
    pairs = [(i, j) for i in range(width) for j in range(i + 1, width)]
    keep = rng.random(len(pairs)) < model.p
    return QubitTopology(width, [e for e, k in zip(pairs, keep) if k])


def generate_workload(params: GeneratorParams, seed: int = 0) -> list[Qulet]:
    """Draw ``params.count`` qulets.

    Each qulet index gets its own child stream spawned from
    ``SeedSequence(seed)``, drawn in a fixed order: width, depth, shots,
    topology, gates, inter-arrival gap.  Poisson arrivals accumulate the
    gaps starting from ``t0``.
    """
    children = np.random.SeedSequence(seed).spawn(params.count)
    qulets = []
    clock = params.arrival_model.t0
    pool = params.gate_pool
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        width = int(rng.integers(params.width_range[0], params.width_range[1], endpoint=True))
        depth = int(rng.integers(params.depth_range[0], params.depth_range[1], endpoint=True))
        shots = int(rng.integers(params.shots_range[0], params.shots_range[1], endpoint=True))
        topo = _draw_topology(rng, width, params.edge_model)
        k = int(rng.integers(1, len(pool), endpoint=True))
        picked = rng.choice(len(pool), size=k, replace=False)
        gates = sorted(pool[j] for j in picked)
        gap = float(rng.exponential(1.0 / params.arrival_model.rate))
        if params.arrival_model.kind == "poisson":
            clock += gap
            arrival = clock
        else:
            arrival = params.arrival_model.t0
        qulets.append(Qulet(params.first_id + i, width, depth, shots, gates, topo, arrival=arrival))
    return qulets


def _generator(doc: dict, path: str) -> GeneratorParams:
    def rng_pair(key, default):
        raw = _get(doc, key, path, list, default)
        if len(raw) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
            raise SchemaError(f"{path}.{key}: expected [min, max] integers")
        return tuple(raw)

    em = _get(doc, "edge_model", path, dict, {"kind": "path"})
    am = _get(doc, "arrival_model", path, dict, {"kind": "batch"})
    pool = _get(doc, "gate_pool", path, list, ["CX", "ID", "RZ", "SX", "X"])
    for i, g in enumerate(pool):
        if not isinstance(g, str) or not g.strip():
            raise SchemaError(f"{path}.gate_pool[{i}]: gate names must be non-empty strings")
    try:
        return GeneratorParams(
            count=_get(doc, "count", path, int),
            width_range=rng_pair("width_range", [2, 5]),
            depth_range=rng_pair("depth_range", [10, 100]),
            shots_range=rng_pair("shots_range", [100, 4000]),
            edge_model=EdgeModel(
                _get(em, "kind", f"{path}.edge_model", str),
                _get(em, "p", f"{path}.edge_model", float, 0.5),
            ),
            gate_pool=tuple(pool),
            arrival_model=ArrivalModel(
                _get(am, "kind", f"{path}.arrival_model", str),
                _get(am, "t0", f"{path}.arrival_model", float, 0.0),
                _get(am, "rate", f"{path}.arrival_model", float, 1.0),
            ),
            first_id=_get(doc, "first_id", path, int, 0),
        )
    except DomainError as exc:
        raise SemanticError(f"{path}: {exc}") from None


def generator_to_dict(g: GeneratorParams) -> dict:
    return {
        "count": g.count,
        "width_range": list(g.width_range),
        "depth_range": list(g.depth_range),
        "shots_range": list(g.shots_range),
        "edge_model": {"kind": g.edge_model.kind, "p": g.edge_model.p},
        "gate_pool": list(g.gate_pool),
        "arrival_model": {"kind": g.arrival_model.kind, "t0": g.arrival_model.t0, "rate": g.arrival_model.rate},
        "first_id": g.first_id,
    }


def parse_generator_params(text: str) -> GeneratorParams:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise SchemaError("$: top level must be an object")
    return _generator(doc, "$")


def dump_qulet_fragment(qulets: Sequence[Qulet]) -> str:
    """A ``{"version", "qulets"}`` document whose list drops into a scenario."""
    return json.dumps({"version": FORMAT_VERSION, "qulets": [qulet_to_dict(q) for q in qulets]}, indent=2) + "\n"


def parse_qulet_fragment(text: str) -> list[Qulet]:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise SchemaError("$: top level must be an object")
    _check_version(doc)
    return [_qulet(q, f"$.qulets[{i}]") for i, q in enumerate(_get(doc, "qulets", "$", list))]


# ---------------------------------------------------------------------------
# results


def _f4(x: float | None) -> str:
    return "" if x is None else f"{x:.4f}"


def results_rows(result) -> list[list[str]]:
    rows = []
    for qid, r in result.records.items():
        b = r.breakdown
        if b is None:
            rows.append([str(qid), r.status.value, "", "", "", "", "", "", "", ""])
        else:
            rows.append(
                [str(qid), r.status.value, r.node_label]
                + [_f4(v) for v in (b.t_n, b.t_c, b.t_s, b.t_w, b.t_q, b.total, r.cost)]
            )
    return rows


def summary_rows(result) -> list[list[str]]:
    rows = [
        ["makespan", _f4(result.makespan)],
        ["success_count", str(sum(r.status is QuletStatus.SUCCESS for r in result.records.values()))],
        ["total_cost", _f4(result.total_cost)],
    ]
    for label, u in result.utilization.items():
        rows.append([f"utilization:{label}", _f4(u)])
    return rows


def write_results(result, destination) -> None:
    """Write per-qulet rows, a blank line, then a ``metric,value`` summary block.

    ``destination`` is a path or a text file object.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULTS_HEADER)
    w.writerows(results_rows(result))
    buf.write("\n")
    w.writerow(["metric", "value"])
    w.writerows(summary_rows(result))
    text = buf.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


@dataclass
class ResultsFile:
    rows: list[dict[str, str]]
    summary: dict[str, str]

    @property
    def makespan(self) -> float:
        return float(self.summary.get("makespan") or 0.0)

    @property
    def total_cost(self) -> float:
        return float(self.summary.get("total_cost") or 0.0)

    @property
    def utilization(self) -> dict[str, float]:
        return {k.split(":", 1)[1]: float(v) for k, v in self.summary.items() if k.startswith("utilization:")}

    def waits(self) -> list[float]:
        return [float(r["t_w"]) for r in self.rows if r["status"] == QuletStatus.SUCCESS.value and r["t_w"]]


def read_results(text: str) -> ResultsFile:
    lines = text.splitlines()
    if not lines or lines[0].strip() != ",".join(RESULTS_HEADER):
        raise ResultsFormatError(f"bad header: expected {','.join(RESULTS_HEADER)!r}")
    try:
        blank = lines.index("")
    except ValueError:
        blank = len(lines)
    rows = []
    for n, row in enumerate(csv.reader(lines[1:blank]), start=2):
        if len(row) != len(RESULTS_HEADER):
            raise ResultsFormatError(f"line {n}: expected {len(RESULTS_HEADER)} fields, got {len(row)}")
        rec = dict(zip(RESULTS_HEADER, row))
        for key in RESULTS_HEADER[3:]:
            if rec[key]:
                try:
                    float(rec[key])
                except ValueError:
                    raise ResultsFormatError(f"line {n}: {key} is not a number: {rec[key]!r}") from None
        rows.append(rec)
    summary: dict[str, str] = {}
    tail = [ln for ln in lines[blank + 1:] if ln.strip()]
    if tail:
        if tail[0].strip() != "metric,value":
            raise ResultsFormatError("summary block must start with 'metric,value'")
        for n, row in enumerate(csv.reader(tail[1:]), start=blank + 3):
            if len(row) != 2:
                raise ResultsFormatError(f"line {n}: summary rows need two fields")
            try:
                float(row[1])
            except ValueError:
                raise ResultsFormatError(f"line {n}: {row[0]} is not a number") from None
            summary[row[0]] = row[1]
    return ResultsFile(rows, summary)


@dataclass
class Report:
    makespan: float
    mean_wait: float
    p95_wait: float
    utilization: dict[str, float]
    total_cost: float
    success_count: int


def summarize(results: ResultsFile) -> Report:
    waits = results.waits()
    mean = float(np.mean(waits)) if waits else 0.0
    p95 = float(np.percentile(waits, 95)) if waits else 0.0
    ok = sum(r["status"] == QuletStatus.SUCCESS.value for r in results.rows)
    return Report(results.makespan, mean, p95, results.utilization, results.total_cost, ok)


def report_rows(rep: Report) -> list[tuple[str, str]]:
    rows = [
        ("makespan", _f4(rep.makespan)),
        ("success_count", str(rep.success_count)),
        ("mean_wait", _f4(rep.mean_wait)),
        ("p95_wait", _f4(rep.p95_wait)),
        ("total_cost", _f4(rep.total_cost)),
    ]
    rows += [(f"utilization:{k}", _f4(v)) for k, v in rep.utilization.items()]
    return rows


def format_table(header: Iterable[str], rows: Iterable[Iterable[str]]) -> str:
    header = list(header)
    rows = [list(r) for r in rows]
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*r) for r in rows]
    return "\n".join(line.rstrip() for line in out) + "\n"
