import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oslo_topology
from oracles import brute_force_embeddings, disjoint_union, random_graph
from qsim.domain import QubitTopology
from qsim.mapping import (
    check_mapping,
    find_disjoint_embeddings,
    find_embedding,
    is_identity_subset,
    iter_embeddings,
)

CLAW = QubitTopology(4, [(0, 1), (0, 2), (0, 3)])
TRIANGLE = QubitTopology(3, [(0, 1), (1, 2), (0, 2)])
EDGE = QubitTopology(2, [(0, 1)])


def test_identity_subset_examples():
    oslo = oslo_topology()
    assert is_identity_subset(QubitTopology(4, [(0, 1), (1, 2), (1, 3)]), oslo)
    assert not is_identity_subset(QubitTopology(4, [(2, 3)]), oslo)
    assert is_identity_subset(QubitTopology(0), oslo)
    assert not is_identity_subset(QubitTopology(8), oslo)


def test_path_embeds_in_oslo():
    m = find_embedding(QubitTopology.path(3), oslo_topology())
    assert m == {0: 0, 1: 1, 2: 2}
    assert next(brute_force_embeddings(QubitTopology.path(3), oslo_topology())) == m


def test_triangle_does_not_embed_in_tree():
    assert find_embedding(TRIANGLE, oslo_topology()) is None
    assert next(brute_force_embeddings(TRIANGLE, oslo_topology()), None) is None


def test_single_vertex_takes_smallest_free():
    assert find_embedding(QubitTopology(1), oslo_topology()) == {0: 0}
    assert find_embedding(QubitTopology(1), oslo_topology(), forbidden={0, 1}) == {0: 2}


def test_forbidden_respected():
    m = find_embedding(EDGE, oslo_topology(), forbidden={0, 1, 2})
    assert m == {0: 3, 1: 5}
    assert check_mapping(EDGE, oslo_topology(), m, forbidden={0, 1, 2})


def test_isolated_qubits_fill_free_slots():
    circuit = QubitTopology(4, [(0, 1), (1, 2), (1, 3)]).widened(5)
    m = find_embedding(circuit, oslo_topology())
    assert m == {0: 0, 1: 1, 2: 2, 3: 3, 4: 4}
    assert find_embedding(circuit.widened(8), oslo_topology()) is None


def test_returned_mapping_is_lexicographically_least():
    rnd = random.Random(11)
    for _ in range(150):
        node = random_graph(rnd, rnd.randint(1, 7), 0.5)
        circ = random_graph(rnd, rnd.randint(1, 4), 0.6)
        # only meaningful when every circuit vertex carries an edge
        if any(circ.degree(v) == 0 for v in range(circ.num_qubits)):
            continue
        found = find_embedding(circ, node)
        all_maps = sorted(tuple(m[i] for i in range(circ.num_qubits)) for m in brute_force_embeddings(circ, node))
        assert (found is None) == (not all_maps)
        if found:
            assert tuple(found[i] for i in range(circ.num_qubits)) == all_maps[0]


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_embedding_oracle_equivalence(data):
    n = data.draw(st.integers(0, 8))
    node = QubitTopology(n, data.draw(st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)).filter(
        lambda e: e[0] < e[1] < n))))
    k = data.draw(st.integers(0, 5))
    circ = QubitTopology(k, data.draw(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(
        lambda e: e[0] < e[1] < k))))
    forbidden = data.draw(st.sets(st.integers(0, max(n - 1, 0)), max_size=3)) if n else set()
    found = find_embedding(circ, node, forbidden)
    exists = next(brute_force_embeddings(circ, node, forbidden), None) is not None
    assert (found is not None) == exists
    if found is not None:
        assert check_mapping(circ, node, found, forbidden)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_identity_subset_implies_embedding(data):
    n = data.draw(st.integers(1, 8))
    node = QubitTopology(n, data.draw(st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)).filter(
        lambda e: e[0] < e[1] < n))))
    sub = data.draw(st.sets(st.sampled_from(node.edges))) if node.edges else set()
    k = data.draw(st.integers(max((max(e) + 1 for e in sub), default=0), n))
    circ = QubitTopology(k, sub)
    assert is_identity_subset(circ, node)
    assert find_embedding(circ, node) is not None


def test_iter_embeddings_are_sound_and_distinct():
    oslo = oslo_topology()
    maps = list(iter_embeddings(QubitTopology.path(3), oslo))
    assert len(maps) == len({tuple(sorted(m.items())) for m in maps})
    assert all(check_mapping(QubitTopology.path(3), oslo, m) for m in maps)
    assert len(maps) == sum(1 for _ in brute_force_embeddings(QubitTopology.path(3), oslo))


# -- disjoint packing -------------------------------------------------------------


def test_two_edges_pack_into_oslo():
    ms = find_disjoint_embeddings([EDGE, EDGE], oslo_topology())
    # qubit 2 only touches qubit 1, so the second edge lands on 3-5
    assert ms == [{0: 0, 1: 1}, {0: 3, 1: 5}]
    assert not set(ms[0].values()) & set(ms[1].values())
    assert all(check_mapping(EDGE, oslo_topology(), m) for m in ms)


def test_two_claws_do_not_pack_into_oslo():
    assert find_disjoint_embeddings([CLAW, CLAW], oslo_topology()) is None
    assert next(brute_force_embeddings(disjoint_union([CLAW, CLAW]), oslo_topology()), None) is None


def test_single_circuit_list_reduces_to_find_embedding():
    for circ in (CLAW, TRIANGLE, EDGE, QubitTopology.path(5)):
        single = find_disjoint_embeddings([circ], oslo_topology())
        plain = find_embedding(circ, oslo_topology())
        assert (single is None and plain is None) or single == [plain]


def test_too_many_qubits_short_circuits():
    assert find_disjoint_embeddings([QubitTopology(4), QubitTopology(4)], oslo_topology()) is None


def test_backtracking_across_circuits_needed():
    # greedy lex-least placement of the first edge (0-1) blocks the claw
    # centred on 1; backtracking must move the edge elsewhere
    node = QubitTopology(6, [(0, 1), (1, 2), (1, 3), (1, 4), (4, 5)])
    ms = find_disjoint_embeddings([EDGE, CLAW], node)
    assert ms == [{0: 4, 1: 5}, {0: 1, 1: 0, 2: 2, 3: 3}]


@pytest.mark.parametrize("seed", range(4))
def test_disjoint_oracle_equivalence(seed):
    rnd = random.Random(seed)
    for _ in range(60):
        node = random_graph(rnd, rnd.randint(2, 8), rnd.choice([0.3, 0.5, 0.8]))
        circuits = [random_graph(rnd, rnd.randint(1, 3), 0.6) for _ in range(rnd.randint(1, 3))]
        ms = find_disjoint_embeddings(circuits, node)
        exists = next(brute_force_embeddings(disjoint_union(circuits), node), None) is not None
        assert (ms is not None) == exists
        if ms is not None:
            used = [v for m in ms for v in m.values()]
            assert len(used) == len(set(used))
            assert all(check_mapping(c, node, m) for c, m in zip(circuits, ms))
