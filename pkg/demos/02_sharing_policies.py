"""
Space, time and spatial sharing
===============================

The same batch of qulets on one node under each sharing policy.

* space-shared runs one qulet at a time.
* time-shared splits the CLOPS rate evenly among resident qulets.
* spatial-shared runs qulets side by side on disjoint qubit regions.

Total work is identical in every case; what changes is who finishes when.
"""

import numpy as np

from qsim import QDatacenter, QNode, QubitTopology, Qulet, simulate

OSLO = QubitTopology(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)])
GATES = ["CX", "ID", "RZ", "SX", "X"]


def datacenter(policy):
    return QDatacenter("QDatacenter", [QNode(0, 7, 32, 2600, GATES, OSLO, scheduler=policy)])


# Four small circuits: two single CX pairs, a 3-qubit path and a lone qubit.
batch = [
    Qulet(0, 2, 100, 4000, ["CX"], QubitTopology(2, [(0, 1)])),
    Qulet(1, 2, 50, 1000, ["CX"], QubitTopology(2, [(0, 1)])),
    Qulet(2, 3, 80, 2000, ["CX", "RZ"], QubitTopology.path(3)),
    Qulet(3, 1, 40, 500, ["X"], QubitTopology(1)),
]

print(f"{'policy':<16}" + "".join(f"{'q' + str(q.id):>10}" for q in batch) + f"{'makespan':>10}{'mean':>10}")
for policy in ("space_shared", "time_shared", "spatial_shared"):
    res = simulate(datacenter(policy), batch)
    finish = np.array([res.records[q.id].finish for q in batch])
    print(f"{policy:<16}" + "".join(f"{f:>10.2f}" for f in finish) + f"{res.makespan:>10.2f}{finish.mean():>10.2f}")

# %% Work is conserved whatever the policy
for policy in ("space_shared", "time_shared", "spatial_shared"):
    res = simulate(datacenter(policy), batch)
    print(f"{policy}: completed {res.completed_work['0']:.0f} of {sum(q.work for q in batch)} layer executions")
