"""
Synthetic workloads and placement policies
==========================================

Draw Poisson-arriving batches from the generator, send them to a
three-node datacenter, and compare the broker's placement policies over
several seeds.  Every seed reproduces the same workload, so the policy
is the only thing that differs between columns.
"""

import numpy as np

from qsim import (
    BrokerConfig,
    GeneratorParams,
    PolicyKind,
    QDatacenter,
    QNode,
    QubitTopology,
    generate_workload,
    simulate,
)
from qsim.workload import ArrivalModel, EdgeModel

OSLO = QubitTopology(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)])
GATES = ["CX", "ID", "RZ", "SX", "X"]
dc = QDatacenter("QDatacenter", [QNode(i, 7, 32, 2600 * (i + 1), GATES, OSLO) for i in range(3)])

params = GeneratorParams(
    count=30,
    width_range=(2, 5),
    depth_range=(10, 100),
    shots_range=(500, 4000),
    edge_model=EdgeModel("path"),
    gate_pool=tuple(GATES),
    arrival_model=ArrivalModel("poisson", t0=0.0, rate=0.2),
)

seeds = range(8)
policies = list(PolicyKind)
spans = np.zeros((len(seeds), len(policies)))
for i, seed in enumerate(seeds):
    workload = generate_workload(params, seed)
    for j, policy in enumerate(policies):
        spans[i, j] = simulate(dc, workload, BrokerConfig(policy=policy)).makespan

print("makespan per seed (s)")
print(f"{'seed':>4}" + "".join(f"{p.value:>16}" for p in policies))
for seed, row in zip(seeds, spans):
    print(f"{seed:>4}" + "".join(f"{v:>16.2f}" for v in row))
print(f"{'mean':>4}" + "".join(f"{v:>16.2f}" for v in spans.mean(axis=0)))
