"""Small fixtures and synthetic hypergraph families used by tests and benchmarks."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import Hypergraph

TOY_NAMES = "ABCD"


def toy_hypergraph() -> Hypergraph:
    """Four hyperedges over vertices 1..12 (stored 0-based as 0..11).

    A={1..4}, B={3..10}, C={8..11}, D={10,12}; so |A∩B|=2, |B∩C|=3,
    |B∩D|=|C∩D|=1 and A is disjoint from C and D.
    """
    edges = [range(1, 5), range(3, 11), range(8, 12), (10, 12)]
    return Hypergraph.from_edges([[v - 1 for v in e] for e in edges], num_vertices=12)


def random_hypergraph(rng: np.random.Generator, n: int, m: int, density: Optional[float] = None) -> Hypergraph:
    """Each incidence present independently with probability ``density``."""
    if density is None:
        density = float(rng.uniform(0.02, 0.5))
    mask = rng.random((m, n)) < density
    e, v = np.nonzero(mask)
    return Hypergraph.from_pairs(e, v, num_edges=m, num_vertices=n)


def power_law_hypergraph(
    rng: np.random.Generator,
    m: int,
    n: int,
    exponent: float = 2.2,
    max_size: Optional[int] = None,
    vertex_skew: float = 1.0,
) -> Hypergraph:
    """Hyperedge sizes drawn from a discrete power law; members picked with
    Zipf-like vertex popularity so a few vertices sit in many hyperedges.

    Members are drawn with replacement and repeats collapse, so realized
    sizes can fall slightly below the drawn ones.
    """
    max_size = max_size or max(2, n // 20)
    ks = np.arange(1, max_size + 1)
    p = ks.astype(float) ** -exponent
    sizes = rng.choice(ks, size=m, p=p / p.sum())
    pop = 1.0 / np.arange(1, n + 1) ** vertex_skew
    members = rng.choice(n, size=int(sizes.sum()), p=pop / pop.sum())
    owners = np.repeat(np.arange(m), sizes)
    return Hypergraph.from_pairs(owners, members, num_edges=m, num_vertices=n)


def contiguous_heavy_hypergraph(m: int = 400, heavy: int = 40, heavy_size: int = 60, light_size: int = 3, n: int = 200, seed: int = 7) -> Hypergraph:
    """The ``heavy`` largest hyperedges occupy IDs 0..heavy-1; the rest are small."""
    rng = np.random.default_rng(seed)
    edges = []
    for e in range(m):
        k = heavy_size if e < heavy else light_size
        edges.append(rng.choice(n, size=k, replace=False))
    return Hypergraph.from_edges(edges, num_vertices=n)


def two_cluster_hypergraph(cluster_size: int = 6, core: int = 10, bridge_width: int = 3) -> Hypergraph:
    """Two groups of hyperedges with a strong shared core inside each group.

    Every cross-group pair shares one private vertex, and one designated
    cross pair shares ``bridge_width`` vertices. So the 1-line graph is
    complete, for 2 <= s <= bridge_width the two cliques hang together by a
    single bridge, and above that each group is its own clique.
    """
    k = cluster_size
    edges: list[list[int]] = [[] for _ in range(2 * k)]
    nxt = 0
    for g in range(2):
        members = list(range(nxt, nxt + core + g))
        nxt += core + g
        for e in range(g * k, (g + 1) * k):
            edges[e].extend(members)
    for a in range(k):
        for b in range(k, 2 * k):
            width = bridge_width if (a == 0 and b == k) else 1
            for _ in range(width):
                edges[a].append(nxt)
                edges[b].append(nxt)
                nxt += 1
    return Hypergraph.from_edges(edges, num_vertices=nxt)


def disjoint_cliques_hypergraph(groups: int = 2, per_group: int = 3, shared: int = 2) -> Hypergraph:
    """``groups`` families of hyperedges; inside a family all share ``shared``
    vertices, families are vertex-disjoint."""
    edges = []
    nxt = 0
    for _ in range(groups):
        common = list(range(nxt, nxt + shared))
        nxt += shared
        for _ in range(per_group):
            edges.append(common + [nxt])
            nxt += 1
    return Hypergraph.from_edges(edges, num_vertices=nxt)
