"""Construction and analysis of s-line graphs of hypergraphs."""

from .core import (
    DegreeStats,
    DomainError,
    Hypergraph,
    ParseError,
    degree_stats,
    dual,
    load_bipartite,
    write_bipartite,
)
from .overlap import (
    ALGORITHMS,
    PRESETS,
    HeuristicConfig,
    RunStats,
    SLineEdgeList,
    efficient_s_overlap,
    intersection_size,
    intersects_at_least,
    naive_candidate_count,
    naive_s_overlap,
    spgemm_filter_s_overlap,
    wedge_s_overlap,
)
from .postprocess import (
    CompactGraph,
    IdMap,
    connected_components,
    normalized_algebraic_connectivity,
    squeeze,
    unsqueeze,
)
from .scheduling import PartitionPlan, RelabelMap, assign, relabel_by_degree, workload_profile

__version__ = "0.1.0"
