import pytest

from qsim.domain import QDatacenter, QNode, QubitTopology, Qulet

OSLO_EDGES = [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)]
OSLO_GATES = ["CX", "ID", "RZ", "SX", "X"]

ACCEPTANCE_LINES: list[str] = []


def oslo_topology() -> QubitTopology:
    return QubitTopology(7, OSLO_EDGES)


def oslo_node(**kw) -> QNode:
    args = dict(id=0, qubits=7, quantum_volume=32, clops=2600, gates=OSLO_GATES, topology=oslo_topology(), name="ibmq_oslo")
    args.update(kw)
    return QNode(**args)


def reference_qulets() -> list[Qulet]:
    gates = ["CX", "RZ", "X"]
    return [
        Qulet(0, 5, 100, 4000, gates, QubitTopology(4, [(0, 1), (1, 2), (1, 3)])),
        Qulet(1, 3, 50, 1000, gates, QubitTopology(3, [(0, 1), (1, 2)])),
    ]


@pytest.fixture
def oslo():
    return oslo_node()


@pytest.fixture
def oslo_dc():
    return QDatacenter("QDatacenter", [oslo_node()])


@pytest.fixture
def qulets():
    return reference_qulets()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_oslo_qulets(rnd, count, max_arrival=0.0, first_id=0):
    """Qulets whose coupling graphs are identity-subsets of oslo, so each one fits."""
    out = []
    for i in range(count):
        width = rnd.randint(1, 7)
        edges = [e for e in OSLO_EDGES if max(e) < width and rnd.random() < 0.5]
        arrival = round(rnd.uniform(0, max_arrival), 2) if max_arrival else 0.0
        out.append(Qulet(first_id + i, width, rnd.randint(1, 200), rnd.randint(1, 5000),
                         ["CX"], QubitTopology(width, edges), arrival=arrival))
    return out


def single_node_dc(policy="space_shared", **node_kw) -> QDatacenter:
    return QDatacenter("QDatacenter", [oslo_node(scheduler=policy, **node_kw)])


def random_hybrid_dag(rnd, n, p=0.35, max_arrival=0.0):
    """Random DAG over ``n`` tasks; edges only go from lower to higher index."""
    from qsim.hybrid import Cloudlet, HybridDag

    tasks, q_id = {}, 0
    for i in range(n):
        arrival = round(rnd.uniform(0, max_arrival), 2) if max_arrival else 0.0
        if rnd.random() < 0.5:
            tasks[f"t{i}"] = Cloudlet(f"t{i}", rnd.choice([0, 250, 1000, 1700]), arrival)
        else:
            q = random_oslo_qulets(rnd, 1, first_id=q_id)[0]
            q.arrival = arrival
            tasks[f"t{i}"] = q
            q_id += 1
    edges = [(f"t{i}", f"t{j}", rnd.choice([0.0, 0.0, 0.5, 1.25]))
             for i in range(n) for j in range(i + 1, n) if rnd.random() < p]
    return HybridDag(tasks, edges)


def random_scenario(rnd):
    """A random single-node scenario, sometimes with a DAG and a generator block."""
    from qsim.hybrid import ClassicalNode
    from qsim.workload import ArrivalModel, EdgeModel, GeneratorParams, Scenario

    dag = random_hybrid_dag(rnd, rnd.randint(1, 6)) if rnd.random() < 0.5 else None
    qulets = random_oslo_qulets(rnd, rnd.randint(0, 5), max_arrival=5, first_id=100)
    if dag is not None:
        qulets += [dag.tasks[k] for k in dag.quantum_tasks]
    gen = None
    if rnd.random() < 0.5:
        gen = GeneratorParams(rnd.randint(0, 4), (1, 3), edge_model=EdgeModel("erdos_renyi", 0.4),
                              arrival_model=ArrivalModel("poisson", 1.0, 0.5), first_id=1000)
    return Scenario([single_node_dc(rnd.choice(["space_shared", "time_shared", "spatial_shared"]))],
                    qulets, classical_nodes=[ClassicalNode(0, 500.0), ClassicalNode(1, 250.0)],
                    dag=dag, seed=rnd.randint(0, 2**64 - 1), generator=gen)
