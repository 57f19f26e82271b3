"""
A hybrid quantum-classical pipeline
===================================

Classical pre-processing, a fan of quantum circuits, and a classical
aggregation step expressed as a task graph.  Classical tasks run on
MIPS-rated nodes; qulets go through the broker like any other.  A
qulet that cannot be placed skips everything downstream of it.
"""

from qsim import ClassicalNode, Cloudlet, HybridDag, QDatacenter, QNode, QubitTopology, Qulet, simulate

OSLO = QubitTopology(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)])
GATES = ["CX", "ID", "RZ", "SX", "X"]
chip = QDatacenter("QDatacenter", [QNode(0, 7, 32, 2600, GATES, OSLO, scheduler="spatial_shared")])
cpus = [ClassicalNode(0, 500), ClassicalNode(1, 500)]

# %% A plain chain: 2 s classical, 19.23 s quantum, 2 s classical
chain = HybridDag(
    {"prep": Cloudlet("prep", 1000), "circuit": Qulet(1, 3, 50, 1000, ["CX"], QubitTopology.path(3)),
     "post": Cloudlet("post", 1000)},
    [("prep", "circuit"), ("circuit", "post")],
)
res = simulate(chip, [], dag=chain, classical_nodes=cpus)
print(f"chain makespan {res.makespan:.4f} s")

# %% Fan-out / fan-in with a transfer delay on each result
tasks = {"prep": Cloudlet("prep", 1000), "merge": Cloudlet("merge", 500)}
edges = []
for i in range(3):
    tasks[f"q{i}"] = Qulet(10 + i, 2, 30 * (i + 1), 1000, ["CX"], QubitTopology(2, [(0, 1)]))
    edges += [("prep", f"q{i}"), (f"q{i}", "merge", 0.5)]
res = simulate(chip, [], dag=HybridDag(tasks, edges), classical_nodes=cpus)
for k, rec in res.tasks.items():
    print(f"{k:<6} {rec.kind:<9} ready {rec.ready:7.2f}  start {rec.start:7.2f}  finish {rec.finish:7.2f}  node {rec.node}")
print(f"fan-out makespan {res.makespan:.4f} s")

# %% One impossible circuit takes its successors down with it
tasks["q1"] = Qulet(11, 8, 10, 10, ["CX"], QubitTopology(8))
res = simulate(chip, [], dag=HybridDag(tasks, edges), classical_nodes=cpus)
print({k: rec.status.value for k, rec in res.tasks.items()})
