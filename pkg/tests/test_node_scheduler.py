import random
from fractions import Fraction

import pytest

from conftest import oslo_node, reference_qulets, random_oslo_qulets, single_node_dc
from oracles import fluid_oracle
from qsim.domain import QubitTopology, Qulet
from qsim.node import NodeJob, SpaceSharedScheduler, SpatialSharedScheduler, TimeSharedScheduler
from qsim.runner import simulate

EPS = 0.01
CLAW = QubitTopology(4, [(0, 1), (0, 2), (0, 3)])
EDGE = QubitTopology(2, [(0, 1)])


def finishes(result):
    return {q: r.finish for q, r in result.records.items()}


def test_fluid_oracle_closed_form():
    # sorted works, all present at t=0: finish_k = (sum_{j<k} w_j + (n-k+1) w_k) / c
    works = [3, 5, 5, 11]
    closed = [Fraction(sum(works[:k]) + (len(works) - k) * works[k], 2) for k in range(len(works))]
    assert fluid_oracle([0] * 4, works, 2) == closed


# -- space-shared -----------------------------------------------------------------


def test_space_shared_reference_run(qulets):
    res = simulate(single_node_dc(), qulets)
    f = finishes(res)
    assert f[0] == pytest.approx(153.8562, abs=1e-4)
    assert f[1] == pytest.approx(173.0869, abs=1e-4)


def test_space_shared_third_qulet_queues_behind(qulets):
    third = Qulet(2, 1, 10, 260, ["X"], QubitTopology(1))
    f = finishes(simulate(single_node_dc(), qulets + [third]))
    assert f[2] == pytest.approx(174.0869, abs=1e-4)


def test_space_shared_admit_direct():
    sched = SpaceSharedScheduler(oslo_node())
    q0, q1 = reference_qulets()
    assert sched.space_shared_admit(NodeJob(q0, q0.work, 153.8462, 0.01), 0.01) == pytest.approx(153.8562)
    assert sched.space_shared_admit(NodeJob(q1, q1.work, 19.2308, 0.01), 0.01) == pytest.approx(173.087)
    assert len(sched.state.running) == 1 and len(sched.state.waiting) == 1
    assert [j.qulet.id for j in sched.advance(200.0)] == [0, 1]
    assert sched.idle


def test_space_shared_completions_follow_admit_order():
    rnd = random.Random(5)
    for _ in range(20):
        batch = random_oslo_qulets(rnd, rnd.randint(1, 12), max_arrival=50)
        res = simulate(single_node_dc(), batch)
        order_in = sorted(batch, key=lambda q: (q.arrival, q.id))
        order_out = sorted(res.records, key=lambda q: (res.records[q].finish, q))
        assert [q.id for q in order_in] == order_out


# -- time-shared --------------------------------------------------------------------


def test_time_shared_reference_pair(qulets):
    f = finishes(simulate(single_node_dc("time_shared"), qulets))
    assert f[1] == pytest.approx(50000 / 1300 + EPS, abs=1e-9)
    assert f[0] == pytest.approx(450000 / 2600 + EPS, abs=1e-9)
    assert f"{f[1]:.2f}" == "38.47"


def test_time_shared_identical_pair_finishes_together():
    q = [Qulet(i, 2, 10, 100, ["CX"], EDGE) for i in range(2)]
    f = finishes(simulate(single_node_dc("time_shared", clops=100), q))
    assert f[0] == f[1] == pytest.approx(2 * 1000 / 100 + EPS)


@pytest.mark.parametrize("seed", range(10))
def test_time_shared_matches_fluid_oracle(seed):
    rnd = random.Random(seed)
    batch = random_oslo_qulets(rnd, rnd.randint(1, 10), max_arrival=rnd.choice([0, 30, 300]))
    res = simulate(single_node_dc("time_shared"), batch)
    expected = fluid_oracle([Fraction(str(q.arrival)) + Fraction("0.01") for q in batch],
                            [q.work for q in batch], 2600)
    for q, want in zip(batch, expected):
        assert res.records[q.id].finish == pytest.approx(float(want), rel=1e-9)


def test_time_shared_submit_without_advance_settles_progress():
    sched = TimeSharedScheduler(oslo_node(clops=1))
    q0, q1 = (Qulet(i, 1, 1, 10, ["X"], QubitTopology(1)) for i in range(2))
    sched.submit(NodeJob(q0, 10, 10.0, 0.0), 0.0)
    sched.submit(NodeJob(q1, 10, 10.0, 4.0), 4.0)
    # q0 ran alone for 4 s, then both share: q0 needs 6 more at half rate
    assert sched.next_completion() == pytest.approx(16.0)
    assert [j.qulet.id for j in sched.advance(16.0)] == [0]
    assert sched.next_completion() == pytest.approx(20.0)


# -- spatial-shared ---------------------------------------------------------------------


def test_spatial_two_edges_run_side_by_side():
    q = [Qulet(0, 2, 100, 4000, ["CX"], EDGE), Qulet(1, 2, 50, 1000, ["CX"], EDGE)]
    res = simulate(single_node_dc("spatial_shared"), q)
    assert res.makespan == pytest.approx(153.8562, abs=1e-4)
    assert res.records[1].finish == pytest.approx(19.2408, abs=1e-4)


def test_spatial_two_claws_serialize():
    q = [Qulet(0, 4, 100, 4000, ["CX"], CLAW), Qulet(1, 4, 50, 1000, ["CX"], CLAW)]
    res = simulate(single_node_dc("spatial_shared"), q)
    assert res.makespan == pytest.approx(173.0869, abs=1e-4)


def test_spatial_running_regions_are_disjoint():
    sched = SpatialSharedScheduler(oslo_node())
    jobs = [NodeJob(Qulet(i, 2, 1, 1, ["CX"], EDGE), 1, 5.0, 0.0) for i in range(4)]
    for j in jobs:
        sched.submit(j, 0.0)
    used = [v for j in sched.state.running for v in j.mapping.values()]
    assert len(used) == len(set(used))
    # every oslo edge touches qubit 1 or 5, so at most two edges fit at once
    assert [j.qulet.id for j in sched.state.running] == [0, 1]
    assert [j.qulet.id for j in sched.advance(5.0)] == [0, 1]
    assert [j.qulet.id for j in sched.state.running] == [2, 3]


# -- cross-policy properties ------------------------------------------------------------


POLICIES = ["space_shared", "time_shared", "spatial_shared"]


@pytest.mark.parametrize("policy", POLICIES)
def test_work_conservation(policy):
    rnd = random.Random(POLICIES.index(policy))
    for _ in range(15):
        batch = random_oslo_qulets(rnd, rnd.randint(0, 20), max_arrival=rnd.choice([0, 100]))
        res = simulate(single_node_dc(policy), batch)
        total = sum(q.work for q in batch)
        assert res.completed_work["0"] == res.admitted_work["0"] == total


def test_spatial_never_slower_than_space():
    rnd = random.Random(8)
    for _ in range(40):
        batch = random_oslo_qulets(rnd, rnd.randint(1, 20), max_arrival=rnd.choice([0, 100]))
        space = simulate(single_node_dc("space_shared"), batch).makespan
        spatial = simulate(single_node_dc("spatial_shared"), batch).makespan
        assert spatial <= space + 1e-9


def test_time_shared_last_completion_is_total_work():
    rnd = random.Random(9)
    for _ in range(30):
        batch = random_oslo_qulets(rnd, rnd.randint(1, 20))
        res = simulate(single_node_dc("time_shared"), batch)
        expected = sum(q.work for q in batch) / 2600
        assert res.makespan - EPS == pytest.approx(expected, rel=1e-9)


def test_lone_qulet_identical_across_policies():
    rnd = random.Random(10)
    for q in random_oslo_qulets(rnd, 25, max_arrival=20):
        got = {p: simulate(single_node_dc(p), [q]).records[q.id].finish for p in POLICIES}
        assert len(set(got.values())) == 1


def test_sequential_arrivals_make_time_and_space_agree():
    # each qulet finishes before the next arrives, so at most one is ever present
    qs, t = [], 0.0
    for i in range(6):
        q = Qulet(i, 2, 10 + i, 260, ["CX"], EDGE, arrival=t)
        qs.append(q)
        t += q.work / 2600 + 1.0
    a = finishes(simulate(single_node_dc("space_shared"), qs))
    b = finishes(simulate(single_node_dc("time_shared"), qs))
    assert a == b
