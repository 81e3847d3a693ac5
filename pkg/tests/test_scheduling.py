import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperline.core import Hypergraph
from hyperline.generators import contiguous_heavy_hypergraph, random_hypergraph
from hyperline.overlap import PRESETS, RunStats, efficient_s_overlap
from hyperline.scheduling import (
    PartitionPlan,
    adaptive_chunks,
    assign,
    relabel_by_degree,
    split_range,
    workload_profile,
)
from oracles import brute_force_pairs


def test_cyclic_two_workers():
    parts = assign(PartitionPlan("cyclic", 2), 5)
    assert [p.tolist() for p in parts] == [[0, 2, 4], [1, 3]]


def test_blocked_single_worker():
    assert [p.tolist() for p in assign(PartitionPlan("blocked", 1), 5)] == [[0, 1, 2, 3, 4]]


def test_blocked_fixed_chunks_dealt_in_turn():
    parts = assign(PartitionPlan("blocked", 2, chunk=2), 7)
    assert [p.tolist() for p in parts] == [[0, 1, 4, 5], [2, 3, 6]]


def test_cyclic_wide_stride_lanes():
    parts = assign(PartitionPlan("cyclic", 2, stride=4), 10)
    assert [p.tolist() for p in parts] == [[0, 2, 4, 6, 8], [1, 3, 5, 7, 9]]
    parts = assign(PartitionPlan("cyclic", 3, stride=6), 8)
    assert [p.tolist() for p in parts] == [[0, 3, 6], [1, 4, 7], [2, 5]]


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from(["blocked", "cyclic"]),
    st.integers(1, 9),
    st.integers(0, 200),
    st.one_of(st.none(), st.integers(1, 20)),
    st.one_of(st.none(), st.integers(1, 4)),
)
def test_assignment_covers_once(strategy, workers, m, chunk, stride_mult):
    stride = workers * stride_mult if stride_mult else None
    plan = PartitionPlan(strategy, workers, stride=stride, chunk=chunk)
    parts = assign(plan, m)
    assert len(parts) == workers
    flat = np.concatenate(parts) if parts else np.empty(0)
    assert sorted(flat.tolist()) == list(range(m))
    if strategy == "blocked" and plan.is_dynamic:
        chunks = adaptive_chunks(plan, m)
        assert np.concatenate(chunks).tolist() == list(range(m)) if m else chunks == []


def test_split_range_halves():
    assert split_range(0, 8, 2) == [(0, 2), (2, 4), (4, 6), (6, 8)]
    assert split_range(0, 5, 2) == [(0, 2), (2, 3), (3, 5)]
    assert split_range(3, 3, 1) == []


@pytest.mark.parametrize("kwargs", [dict(workers=0), dict(stride=0), dict(chunk=0), dict(strategy="guided")])
def test_invalid_plans(kwargs):
    with pytest.raises(ValueError):
        PartitionPlan(**kwargs)


def test_relabel_toy_ascending(toy):
    h2, rmap = relabel_by_degree(toy, "ascending")
    # sizes A=4 B=8 C=4 D=2 -> D, A, C, B
    assert rmap.backward.tolist() == [3, 0, 2, 1]
    assert rmap.forward.tolist() == [1, 3, 2, 0]
    assert h2.edge_sizes.tolist() == [2, 4, 4, 8]
    assert h2.edge(0).tolist() == toy.edge(3).tolist()


def test_relabel_descending(toy):
    h2, rmap = relabel_by_degree(toy, "descending")
    assert rmap.backward.tolist() == [1, 0, 2, 3]
    assert h2.edge_sizes.tolist() == [8, 4, 4, 2]


def test_relabel_sorted_is_identity():
    h = Hypergraph.from_edges([[0], [0, 1], [0, 1, 2]])
    h2, rmap = relabel_by_degree(h, "ascending")
    assert rmap.forward.tolist() == [0, 1, 2]
    assert h2 == h


def test_relabel_roundtrip_and_invariance(rng):
    for _ in range(30):
        h = random_hypergraph(rng, int(rng.integers(1, 40)), int(rng.integers(1, 40)))
        expected = brute_force_pairs(h, 2)
        for order in ("ascending", "descending"):
            h2, rmap = relabel_by_degree(h, order)
            assert np.array_equal(rmap.backward[rmap.forward], np.arange(h.num_edges))
            sizes = h2.edge_sizes
            assert np.all(np.diff(sizes) >= 0) if order == "ascending" else np.all(np.diff(sizes) <= 0)
            for e in range(h.num_edges):
                assert np.array_equal(h2.edge(rmap.forward[e]), h.edge(e))
            edges, _ = efficient_s_overlap(h2, 2)
            assert edges.relabeled(rmap.backward).as_set() == expected


def test_relabel_keeps_file_labels():
    h = Hypergraph.from_pairs([0, 0, 1], [0, 1, 0], edge_labels=np.array([70, 50]))
    h2, rmap = relabel_by_degree(h, "ascending")
    assert h2.edge_labels.tolist() == [50, 70]


def test_workload_profile_arithmetic():
    assert workload_profile(RunStats(per_worker_visits=[10, 10, 10, 10])).imbalance == 1.0
    rep = workload_profile([30, 10])
    assert rep.imbalance == pytest.approx(1.5)
    assert (rep.min, rep.max, rep.mean, rep.stddev) == (10, 30, 20.0, 10.0)
    assert workload_profile([0, 0]).imbalance == 1.0
    with pytest.raises(ValueError):
        workload_profile(RunStats())


def test_giant_first_edge_blocked_worse_than_cyclic():
    # one giant edge first, then sizes decaying with ID so the heavy work sits at the front
    rng = np.random.default_rng(3)
    edges = [list(range(300))] + [rng.choice(300, max(3, int(120 * 0.95**e)), replace=False) for e in range(1, 200)]
    h = Hypergraph.from_edges(edges, num_vertices=300)
    blocked = efficient_s_overlap(h, 1, PRESETS["f0"], PartitionPlan("blocked", 4, chunk=50))[1]
    cyclic = efficient_s_overlap(h, 1, PRESETS["f0"], PartitionPlan("cyclic", 4))[1]
    assert workload_profile(blocked).imbalance > workload_profile(cyclic).imbalance


def test_contiguous_heavy_block_balance():
    h = contiguous_heavy_hypergraph()
    m = h.num_edges
    for w in (2, 4, 8):
        blocked = efficient_s_overlap(h, 2, PRESETS["f0"], PartitionPlan("blocked", w, chunk=-(-m // w)))[1]
        cyclic = efficient_s_overlap(h, 2, PRESETS["f0"], PartitionPlan("cyclic", w))[1]
        assert workload_profile(cyclic).imbalance <= workload_profile(blocked).imbalance
