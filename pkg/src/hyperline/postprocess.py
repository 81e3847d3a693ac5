"""ID squeezing, s-connected components and spectral connectivity of s-line graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional

import numpy as np
from numba import njit

from .core import ID_DTYPE, Hypergraph
from .overlap import PRESETS, SLineEdgeList, canonical, efficient_s_overlap
from .scheduling import PartitionPlan

EigenMethod = Literal["auto", "jacobi", "lapack"]

# above this order "auto" hands the eigenproblem to LAPACK
JACOBI_MAX_ORDER = 400


@dataclass(frozen=True)
class IdMap:
    to_original: np.ndarray  # compact ID -> original ID, ascending

    @property
    def size(self) -> int:
        return int(self.to_original.size)

    def to_compact(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=ID_DTYPE)
        pos = np.searchsorted(self.to_original, ids)
        if np.any(pos >= self.size) or np.any(self.to_original[np.minimum(pos, self.size - 1)] != ids):
            raise KeyError("ID not present in squeeze map")
        return pos.astype(ID_DTYPE)

    def as_dict(self) -> dict[int, int]:
        return {int(o): c for c, o in enumerate(self.to_original)}


@dataclass(frozen=True)
class CompactGraph:
    """Undirected simple graph in CSR form with sorted neighbour lists."""

    num_vertices: int
    indptr: np.ndarray
    indices: np.ndarray
    s: Optional[int] = None

    @classmethod
    def from_pairs(cls, num_vertices: int, pairs, s: Optional[int] = None) -> "CompactGraph":
        pairs = np.asarray(pairs, dtype=ID_DTYPE).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("self-loop in graph")
        src = np.concatenate((pairs[:, 0], pairs[:, 1]))
        dst = np.concatenate((pairs[:, 1], pairs[:, 0]))
        if src.size:
            packed = np.unique(src * num_vertices + dst)
            src, dst = packed // num_vertices, packed % num_vertices
        indptr = np.zeros(num_vertices + 1, dtype=ID_DTYPE)
        np.cumsum(np.bincount(src, minlength=num_vertices), out=indptr[1:])
        return cls(num_vertices, indptr, dst.astype(ID_DTYPE), s)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.num_vertices)]

    @property
    def num_edges(self) -> int:
        return int(self.indices.size) // 2

    def edge_pairs(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.num_vertices, dtype=ID_DTYPE), np.diff(self.indptr))
        upper = rows < self.indices
        return np.column_stack((rows[upper], self.indices[upper]))

    def subgraph(self, members: np.ndarray) -> "CompactGraph":
        """Induced subgraph on ``members`` (ascending), relabeled 0..k-1."""
        members = np.asarray(members, dtype=ID_DTYPE)
        local = np.full(self.num_vertices, -1, dtype=ID_DTYPE)
        local[members] = np.arange(members.size, dtype=ID_DTYPE)
        p = self.edge_pairs()
        p = p[(local[p[:, 0]] >= 0) & (local[p[:, 1]] >= 0)]
        return CompactGraph.from_pairs(members.size, local[p], self.s)


def squeeze(edges: SLineEdgeList) -> tuple[CompactGraph, IdMap]:
    """Renumber the hyperedge IDs that occur in ``edges`` to 0..k-1."""
    originals = np.unique(edges.pairs)
    idmap = IdMap(originals.astype(ID_DTYPE))
    compact = np.searchsorted(originals, edges.pairs)
    return CompactGraph.from_pairs(idmap.size, compact, edges.s), idmap


def unsqueeze(g: CompactGraph, idmap: IdMap, s: Optional[int] = None) -> SLineEdgeList:
    s = s if s is not None else g.s
    if s is None:
        raise ValueError("s unknown: pass it explicitly")
    p = g.edge_pairs()
    return canonical(s, idmap.to_original[p[:, 0]], idmap.to_original[p[:, 1]])


# --- connected components --------------------------------------------------


def connected_components(g: CompactGraph) -> np.ndarray:
    """Component label per vertex; a label is the smallest member ID.

    Union-find where the smaller root always wins, so every root is the
    minimum of its set.
    """
    parent = list(range(g.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edge_pairs().tolist():
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    return np.array([find(x) for x in range(g.num_vertices)], dtype=ID_DTYPE)


def component_members(labels: np.ndarray) -> dict[int, np.ndarray]:
    """Label -> ascending member array, keyed in ascending label order."""
    out: dict[int, np.ndarray] = {}
    for lab in np.unique(labels):
        out[int(lab)] = np.flatnonzero(labels == lab).astype(ID_DTYPE)
    return out


def largest_component(g: CompactGraph) -> np.ndarray:
    """Members of the biggest component; ties go to the smallest label."""
    if g.num_vertices == 0:
        return np.empty(0, ID_DTYPE)
    comps = component_members(connected_components(g))
    return max(comps.values(), key=lambda m: (m.size, -m[0]))


# --- spectral --------------------------------------------------------------


@njit(cache=True)
def _jacobi_sweeps(a, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if off <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-26, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.

    ``tol`` bounds the squared off-diagonal Frobenius norm relative to the
    squared norm of the input.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("matrix must be symmetric")
    scale = float(np.sum(a * a)) or 1.0
    if _jacobi_sweeps(a, tol * scale, max_sweeps) < 0:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))


def normalized_laplacian(g: CompactGraph) -> np.ndarray:
    """Dense I - D^-1/2 A D^-1/2; requires every vertex to have a neighbour."""
    deg = np.diff(g.indptr).astype(np.float64)
    if np.any(deg == 0):
        raise ValueError("normalized Laplacian undefined for isolated vertices")
    n = g.num_vertices
    a = np.zeros((n, n))
    p = g.edge_pairs()
    a[p[:, 0], p[:, 1]] = 1.0
    a[p[:, 1], p[:, 0]] = 1.0
    inv = 1.0 / np.sqrt(deg)
    return np.eye(n) - inv[:, None] * a * inv[None, :]


def laplacian_spectrum(g: CompactGraph, method: EigenMethod = "auto") -> np.ndarray:
    lap = normalized_laplacian(g)
    if method == "auto":
        method = "jacobi" if g.num_vertices <= JACOBI_MAX_ORDER else "lapack"
    if method == "jacobi":
        return jacobi_eigenvalues(lap)
    if method == "lapack":
        return np.linalg.eigvalsh(lap)
    raise ValueError(f"unknown eigen method {method!r}")


def normalized_algebraic_connectivity(g: CompactGraph, method: EigenMethod = "auto") -> float:
    """Second-smallest eigenvalue of the normalized Laplacian of a connected graph."""
    if g.num_vertices < 2:
        raise ValueError("need at least 2 vertices")
    labels = connected_components(g)
    if np.any(labels != 0):
        raise ValueError("graph is disconnected; extract a component first")
    return float(laplacian_spectrum(g, method)[1])


def spectral_profile(
    h: Hypergraph,
    s_values: Iterable[int],
    component: Literal["largest", "all"] = "largest",
    plan: Optional[PartitionPlan] = None,
    method: EigenMethod = "auto",
) -> list[dict]:
    """Algebraic connectivity of the s-line graph for each ``s``.

    ``largest`` yields one row per ``s`` for the biggest component; ``all``
    yields a row per component with at least two members. Values of ``s``
    whose line graph has no edges are skipped.
    """
    rows = []
    for s in s_values:
        kwargs = {"plan": plan} if plan is not None else {}
        edges, _ = efficient_s_overlap(h, s, PRESETS["f0"], **kwargs)
        if len(edges) == 0:
            continue
        g, _ = squeeze(edges)
        if component == "largest":
            groups = [largest_component(g)]
        else:
            groups = [m for m in component_members(connected_components(g)).values() if m.size >= 2]
        for members in groups:
            sub = g.subgraph(members)
            rows.append(
                {
                    "s": int(s),
                    "component_size": int(members.size),
                    "lambda2": normalized_algebraic_connectivity(sub, method),
                }
            )
    return rows
