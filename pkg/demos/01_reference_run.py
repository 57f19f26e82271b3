"""
Two qulets on a seven-qubit node
================================

The smallest complete run: one datacenter holding a 7-qubit node
(quantum volume 32, 2600 CLOPS), two qulets, a space-shared node and
the first-feasible broker.  Both qulets arrive at t=0; the broker
dispatches them 0.01 s later and the node runs them back to back.
"""

from qsim import load_scenario, run_scenario, sample_scenario_path

scenario = load_scenario(sample_scenario_path())
node = scenario.datacenters[0].nodes[0]
print(f"node: {node.qubits} qubits, QV {node.quantum_volume}, {node.clops:g} CLOPS, gates {sorted(node.gates)}")
for q in scenario.qulets:
    print(f"qulet {q.id}: width {q.width}, depth {q.depth}, shots {q.shots}, edges {list(q.topology.edges)}")

# %% The event log, exactly as the broker writes it
print()
result = run_scenario(scenario, log_sink=print)

# %% Where the time went
# t_q = depth * shots / CLOPS; qulet 1 waits for all of qulet 0.
print()
print(f"{'qulet':>5} {'t_s':>6} {'t_w':>10} {'t_q':>10} {'total':>10}")
for qid, r in result.records.items():
    b = r.breakdown
    print(f"{qid:>5} {b.t_s:>6.2f} {b.t_w:>10.4f} {b.t_q:>10.4f} {b.total:>10.4f}")
print(f"makespan {result.makespan:.4f} s, node utilization {result.utilization['0']:.4f}")
