import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, B, C, D
from hyperline.generators import two_cluster_hypergraph
from hyperline.overlap import PRESETS, SLineEdgeList, canonical, efficient_s_overlap
from hyperline.postprocess import (
    CompactGraph,
    IdMap,
    component_members,
    connected_components,
    jacobi_eigenvalues,
    largest_component,
    laplacian_spectrum,
    normalized_algebraic_connectivity,
    normalized_laplacian,
    spectral_profile,
    squeeze,
    unsqueeze,
)
from oracles import dense_normalized_laplacian, transitive_closure_classes


def complete_graph(n):
    return CompactGraph.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n):
    return CompactGraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def test_squeeze_toy_l2(toy):
    edges, _ = efficient_s_overlap(toy, 2)
    g, idmap = squeeze(edges)
    assert g.num_vertices == 3
    assert idmap.to_original.tolist() == [A, B, C]
    assert D not in idmap.as_dict()
    assert g.adjacency == [[1], [0, 2], [1]]
    assert unsqueeze(g, idmap) == edges


def test_squeeze_empty():
    g, idmap = squeeze(SLineEdgeList(3, np.empty((0, 2))))
    assert g.num_vertices == 0 and idmap.size == 0
    assert len(unsqueeze(g, idmap)) == 0


def test_squeeze_dense_is_identity():
    edges = SLineEdgeList(1, [(0, 1), (1, 2), (2, 3)])
    g, idmap = squeeze(edges)
    assert idmap.to_original.tolist() == [0, 1, 2, 3]
    assert idmap.to_compact([3, 0]).tolist() == [3, 0]


def test_idmap_unknown_id():
    with pytest.raises(KeyError):
        IdMap(np.array([2, 5])).to_compact([3])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 500), st.integers(0, 500)).filter(lambda p: p[0] != p[1]), max_size=60))
def test_squeeze_round_trip(raw):
    edges = canonical(1, np.array([p[0] for p in raw], dtype=np.int64), np.array([p[1] for p in raw], dtype=np.int64))
    g, idmap = squeeze(edges)
    assert unsqueeze(g, idmap) == edges
    assert g.num_vertices == len({x for p in raw for x in p})
    assert np.all(np.diff(idmap.to_original) > 0)
    for v in range(g.num_vertices):
        for u in g.neighbors(v):
            assert v in g.neighbors(u) and u != v


def test_components_toy(toy):
    g1, _ = squeeze(efficient_s_overlap(toy, 1)[0])
    assert connected_components(g1).tolist() == [0, 0, 0, 0]
    g2, idmap = squeeze(efficient_s_overlap(toy, 2)[0])
    comps = component_members(connected_components(g2))
    assert len(comps) == 1
    assert idmap.to_original[comps[0]].tolist() == [A, B, C]


def test_components_isolated():
    g = CompactGraph.from_pairs(5, [])
    assert connected_components(g).tolist() == [0, 1, 2, 3, 4]


def test_components_vs_transitive_closure(rng):
    for _ in range(60):
        n = int(rng.integers(1, 65))
        k = int(rng.integers(0, 2 * n))
        raw = rng.integers(0, n, size=(k, 2))
        raw = raw[raw[:, 0] != raw[:, 1]]
        g = CompactGraph.from_pairs(n, raw)
        labels = connected_components(g)
        got = {frozenset(m.tolist()) for m in component_members(labels).values()}
        assert got == transitive_closure_classes(n, raw.tolist())
        for lab, members in component_members(labels).items():
            assert lab == members.min()


def test_largest_component_tie_breaks_on_label():
    g = CompactGraph.from_pairs(6, [(4, 5), (0, 1), (2, 3), (2, 1)])
    assert largest_component(g).tolist() == [0, 1, 2, 3]
    g = CompactGraph.from_pairs(4, [(2, 3), (0, 1)])
    assert largest_component(g).tolist() == [0, 1]


def test_jacobi_matches_lapack(rng):
    for n in (1, 2, 5, 17, 40):
        m = rng.normal(size=(n, n))
        sym = m + m.T
        assert np.allclose(jacobi_eigenvalues(sym), np.linalg.eigvalsh(sym), atol=1e-9)


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.ones((2, 3)))


@pytest.mark.parametrize("n", range(2, 9))
def test_lambda2_complete(n):
    assert normalized_algebraic_connectivity(complete_graph(n)) == pytest.approx(n / (n - 1), abs=1e-8)


def test_lambda2_small_closed_forms():
    assert normalized_algebraic_connectivity(path_graph(3)) == pytest.approx(1.0, abs=1e-8)
    assert normalized_algebraic_connectivity(complete_graph(2)) == pytest.approx(2.0, abs=1e-8)
    assert np.allclose(laplacian_spectrum(complete_graph(3)), [0.0, 1.5, 1.5], atol=1e-8)
    assert np.allclose(laplacian_spectrum(path_graph(3)), [0.0, 1.0, 2.0], atol=1e-8)


def test_lambda2_errors():
    with pytest.raises(ValueError):
        normalized_algebraic_connectivity(CompactGraph.from_pairs(4, [(0, 1), (2, 3)]))
    with pytest.raises(ValueError):
        normalized_algebraic_connectivity(CompactGraph.from_pairs(1, []))
    with pytest.raises(ValueError):
        normalized_laplacian(CompactGraph.from_pairs(3, [(0, 1)]))


def test_spectral_sanity_random(rng):
    for _ in range(25):
        n = int(rng.integers(2, 30))
        # spanning path keeps the graph connected
        extra = rng.integers(0, n, size=(int(rng.integers(0, 3 * n)), 2))
        pairs = [(i, i + 1) for i in range(n - 1)] + [tuple(p) for p in extra.tolist() if p[0] != p[1]]
        g = CompactGraph.from_pairs(n, pairs)
        lap = normalized_laplacian(g)
        assert np.allclose(lap, dense_normalized_laplacian(n, g.edge_pairs().tolist()))
        spec = laplacian_spectrum(g, "jacobi")
        assert np.allclose(spec, np.linalg.eigvalsh(lap), atol=1e-8)
        assert abs(spec.sum() - n) < 1e-8
        lam = normalized_algebraic_connectivity(g)
        assert -1e-12 <= lam <= 2 + 1e-12


def test_lapack_and_jacobi_agree_on_component():
    g = complete_graph(6)
    assert normalized_algebraic_connectivity(g, "jacobi") == pytest.approx(normalized_algebraic_connectivity(g, "lapack"), abs=1e-10)


def test_two_cluster_profile_dips_then_rises():
    h = two_cluster_hypergraph()
    rows = spectral_profile(h, range(1, 12))
    lam = [r["lambda2"] for r in rows]
    low = int(np.argmin(lam))
    assert 0 < low < len(lam) - 1
    assert lam[0] > lam[low] and lam[-1] > lam[low]
    assert rows[0]["component_size"] == 12


def test_spectral_profile_all_components():
    rows = spectral_profile(two_cluster_hypergraph(), [5], component="all")
    assert [r["component_size"] for r in rows] == [6, 6]
    assert all(r["lambda2"] == pytest.approx(6 / 5, abs=1e-8) for r in rows)
