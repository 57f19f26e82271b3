"""Qubit mapping: embedding circuit coupling graphs into hardware graphs.

An embedding is a subgraph monomorphism: an injective map of circuit
qubits onto node qubits such that every circuit edge lands on a node
edge.  Extra node edges and vertices are allowed.

Search is plain backtracking.  Circuit vertices that carry edges are
assigned in ascending index order and node candidates are tried in
ascending order, so the first mapping found is the lexicographically
least one.  Isolated circuit vertices are filled in afterwards with the
smallest free node qubits.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

from .domain import QubitTopology

QubitMapping = dict[int, int]


def is_identity_subset(circuit: QubitTopology, node: QubitTopology) -> bool:
    if circuit.num_qubits > node.num_qubits:
        return False
    node_edges = set(node.edges)
    return all(e in node_edges for e in circuit.edges)


def check_mapping(circuit: QubitTopology, node: QubitTopology, mapping: QubitMapping, forbidden=()) -> bool:
    """Soundness check for a returned mapping."""
    if set(mapping) != set(range(circuit.num_qubits)):
        return False
    images = list(mapping.values())
    if len(set(images)) != len(images):
        return False
    if any(not 0 <= v < node.num_qubits or v in forbidden for v in images):
        return False
    node_edges = set(node.edges)
    for i, j in circuit.edges:
        a, b = mapping[i], mapping[j]
        if (min(a, b), max(a, b)) not in node_edges:
            return False
    return True


def _edge_assignments(
    circuit: QubitTopology, node: QubitTopology, forbidden: frozenset[int]
) -> Iterator[QubitMapping]:
    """Yield every mapping of the edge-carrying circuit vertices, lex order."""
    c_adj = circuit.adjacency()
    n_adj = node.adjacency()
    allowed = [v for v in range(node.num_qubits) if v not in forbidden]
    allowed_set = set(allowed)
    # degree inside the usable part of the node graph
    free_deg = {v: len(n_adj[v] & allowed_set) for v in allowed}
    order = [v for v in range(circuit.num_qubits) if c_adj[v]]
    if len(order) > len(allowed):
        return

    mapping: QubitMapping = {}
    used: set[int] = set()

    def candidates(cv: int) -> list[int]:
        mapped_nbrs = [mapping[u] for u in c_adj[cv] if u in mapping]
        if mapped_nbrs:
            pool = set.intersection(*(n_adj[m] for m in mapped_nbrs)) & allowed_set
            pool = sorted(pool)
        else:
            pool = allowed
        need = len(c_adj[cv])
        return [v for v in pool if v not in used and free_deg[v] >= need]

    def extend(k: int) -> Iterator[QubitMapping]:
        if k == len(order):
            yield dict(mapping)
            return
        cv = order[k]
        for nv in candidates(cv):
            mapping[cv] = nv
            used.add(nv)
            yield from extend(k + 1)
            del mapping[cv]
            used.discard(nv)

    yield from extend(0)


def iter_embeddings(
    circuit: QubitTopology, node: QubitTopology, forbidden=frozenset()
) -> Iterator[QubitMapping]:
    """Enumerate embeddings up to the placement of isolated circuit qubits.

    For isolated qubits only the *set* of node qubits they occupy matters
    for packing, so each set is produced once (assigned in ascending order).
    """
    forbidden = frozenset(forbidden)
    c_adj = circuit.adjacency()
    isolated = [v for v in range(circuit.num_qubits) if not c_adj[v]]
    for partial in _edge_assignments(circuit, node, forbidden):
        used = set(partial.values())
        free = [v for v in range(node.num_qubits) if v not in forbidden and v not in used]
        for chosen in combinations(free, len(isolated)):
            full = dict(partial)
            full.update(zip(isolated, chosen))
            yield dict(sorted(full.items()))


def find_embedding(
    circuit: QubitTopology, node: QubitTopology, forbidden=frozenset()
) -> QubitMapping | None:
    """Lexicographically least embedding avoiding ``forbidden``, or ``None``."""
    free = node.num_qubits - len(set(forbidden) & set(range(node.num_qubits)))
    if circuit.num_qubits > free:
        return None
    return next(iter_embeddings(circuit, node, forbidden), None)


def find_disjoint_embeddings(
    circuits: Sequence[QubitTopology], node: QubitTopology, forbidden=frozenset()
) -> list[QubitMapping] | None:
    """Vertex-disjoint embeddings for all circuits, or ``None``.

    Circuits are placed in list order; when circuit k cannot be placed the
    search returns to circuit k-1 and tries its next alternative.
    """
    if sum(c.num_qubits for c in circuits) + len(set(forbidden)) > node.num_qubits:
        return None

    def place(k: int, taken: frozenset[int]) -> list[QubitMapping] | None:
        if k == len(circuits):
            return []
        for m in iter_embeddings(circuits[k], node, taken):
            rest = place(k + 1, taken | frozenset(m.values()))
            if rest is not None:
                return [m] + rest
        return None

    return place(0, frozenset(forbidden))
