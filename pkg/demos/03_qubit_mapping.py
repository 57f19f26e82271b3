"""
Fitting circuits onto a chip
============================

A circuit's coupling graph fits a node when some injective relabeling
carries every circuit edge onto a hardware edge.  The search is a small
backtracking monomorphism with degree pruning and always returns the
lexicographically least mapping.
"""

from qsim import QubitTopology, find_disjoint_embeddings, find_embedding, is_identity_subset

oslo = QubitTopology(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)])
claw = QubitTopology(4, [(0, 1), (0, 2), (0, 3)])
triangle = QubitTopology(3, [(0, 1), (1, 2), (0, 2)])
shifted_edge = QubitTopology(4, [(2, 3)])

for name, circuit in [("claw", claw), ("triangle", triangle), ("edge on 2-3", shifted_edge)]:
    print(f"{name:<12} same labels fit: {is_identity_subset(circuit, oslo)!s:<5}  "
          f"some relabeling fits: {find_embedding(circuit, oslo)}")

# %% Keeping qubits out of bounds
# With 0, 1 and 2 busy the first free CX pair is 3-5.
print("edge avoiding {0,1,2}:", find_embedding(QubitTopology(2, [(0, 1)]), oslo, forbidden={0, 1, 2}))

# %% Packing several circuits at once
# A claw needs a degree-3 centre.  oslo's two hubs, 1 and 5, both
# need qubit 3 as a leaf, so two claws never fit together.
print("two CX pairs:", find_disjoint_embeddings([QubitTopology(2, [(0, 1)])] * 2, oslo))
print("three CX pairs:", find_disjoint_embeddings([QubitTopology(2, [(0, 1)])] * 3, oslo))
print("two claws:", find_disjoint_embeddings([claw, claw], oslo))
