"""Hypergraph storage, bipartite edge-list I/O and structural statistics.

A hypergraph is kept as two CSR incidence structures: hyperedge -> vertices
and vertex -> hyperedges. Both are built once at construction time, sorted
ascending and duplicate-free, and never mutated afterwards.
"""

from __future__ import annotations

import gzip
import io
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Literal, Optional, Sequence, Union

import numpy as np

ID_DTYPE = np.int64

Orientation = Literal["edge-major", "vertex-major"]
RemapPolicy = Literal["auto", "always", "never"]

_HEADER_RE = re.compile(r"^#\s*hypergraph:\s*n=(\d+)\s+m=(\d+)\s*$")


class HypergraphError(Exception):
    """Base class for hypergraph construction errors."""


class ParseError(HypergraphError, ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DomainError(HypergraphError, ValueError):
    pass


def _csr_from_pairs(rows: np.ndarray, cols: np.ndarray, num_rows: int) -> tuple[np.ndarray, np.ndarray]:
    # pairs must already be unique; lexsort gives ascending cols inside each row
    order = np.lexsort((cols, rows))
    indices = np.ascontiguousarray(cols[order], dtype=ID_DTYPE)
    counts = np.bincount(rows, minlength=num_rows) if rows.size else np.zeros(num_rows, dtype=ID_DTYPE)
    indptr = np.zeros(num_rows + 1, dtype=ID_DTYPE)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Immutable hypergraph with both incidence views in CSR form.

    ``edge_ptr``/``edge_idx`` hold the vertex list of every hyperedge;
    ``vertex_ptr``/``vertex_idx`` hold the hyperedge list of every vertex.
    ``edge_labels``/``vertex_labels`` map dense IDs back to the IDs found in
    the input file when ingestion had to compact them (``None`` otherwise).
    """

    num_vertices: int
    num_edges: int
    edge_ptr: np.ndarray
    edge_idx: np.ndarray
    vertex_ptr: np.ndarray
    vertex_idx: np.ndarray
    edge_labels: Optional[np.ndarray] = field(default=None)
    vertex_labels: Optional[np.ndarray] = field(default=None)

    @classmethod
    def from_pairs(
        cls,
        edges: Iterable[int],
        vertices: Iterable[int],
        num_edges: Optional[int] = None,
        num_vertices: Optional[int] = None,
        edge_labels: Optional[np.ndarray] = None,
        vertex_labels: Optional[np.ndarray] = None,
    ) -> "Hypergraph":
        """Build from parallel arrays of (hyperedge, vertex) incidences.

        Duplicate incidences collapse. Sizes default to ``max id + 1``.
        """
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=ID_DTYPE).ravel()
        v = np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices, dtype=ID_DTYPE).ravel()
        if e.shape != v.shape:
            raise ValueError("edge and vertex arrays differ in length")
        if e.size and (e.min() < 0 or v.min() < 0):
            raise DomainError("negative ID")
        m = int(e.max()) + 1 if e.size else 0
        n = int(v.max()) + 1 if v.size else 0
        if num_edges is not None:
            if num_edges < m:
                raise DomainError(f"hyperedge ID {m - 1} out of range for m={num_edges}")
            m = num_edges
        if num_vertices is not None:
            if num_vertices < n:
                raise DomainError(f"vertex ID {n - 1} out of range for n={num_vertices}")
            n = num_vertices
        if e.size:
            packed = np.unique(e * max(n, 1) + v)
            e, v = packed // max(n, 1), packed % max(n, 1)
        edge_ptr, edge_idx = _csr_from_pairs(e, v, m)
        vertex_ptr, vertex_idx = _csr_from_pairs(v, e, n)
        return cls(n, m, edge_ptr, edge_idx, vertex_ptr, vertex_idx, edge_labels, vertex_labels)

    @classmethod
    def from_edges(cls, edges: Sequence[Iterable[int]], num_vertices: Optional[int] = None) -> "Hypergraph":
        """Build from a list of vertex collections, one per hyperedge."""
        ei: list[int] = []
        vi: list[int] = []
        for k, members in enumerate(edges):
            for x in members:
                ei.append(k)
                vi.append(int(x))
        return cls.from_pairs(ei, vi, num_edges=len(edges), num_vertices=num_vertices)

    @property
    def nnz(self) -> int:
        return int(self.edge_idx.size)

    @property
    def edge_sizes(self) -> np.ndarray:
        return np.diff(self.edge_ptr)

    @property
    def vertex_degrees(self) -> np.ndarray:
        return np.diff(self.vertex_ptr)

    def edge(self, e: int) -> np.ndarray:
        return self.edge_idx[self.edge_ptr[e] : self.edge_ptr[e + 1]]

    def vertex(self, v: int) -> np.ndarray:
        return self.vertex_idx[self.vertex_ptr[v] : self.vertex_ptr[v + 1]]

    @property
    def edge_incidence(self) -> list[list[int]]:
        return [self.edge(e).tolist() for e in range(self.num_edges)]

    @property
    def vertex_incidence(self) -> list[list[int]]:
        return [self.vertex(v).tolist() for v in range(self.num_vertices)]

    def edge_label(self, e: int) -> int:
        return int(self.edge_labels[e]) if self.edge_labels is not None else int(e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.num_vertices == other.num_vertices
            and self.num_edges == other.num_edges
            and np.array_equal(self.edge_ptr, other.edge_ptr)
            and np.array_equal(self.edge_idx, other.edge_idx)
            and np.array_equal(self.vertex_ptr, other.vertex_ptr)
            and np.array_equal(self.vertex_idx, other.vertex_idx)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.num_vertices}, m={self.num_edges}, nnz={self.nnz})"


def dual(h: Hypergraph) -> Hypergraph:
    """Swap the roles of vertices and hyperedges."""
    return Hypergraph(
        num_vertices=h.num_edges,
        num_edges=h.num_vertices,
        edge_ptr=h.vertex_ptr,
        edge_idx=h.vertex_idx,
        vertex_ptr=h.edge_ptr,
        vertex_idx=h.edge_idx,
        edge_labels=h.vertex_labels,
        vertex_labels=h.edge_labels,
    )


# --- ingestion -------------------------------------------------------------


def _open_text(source: Union[str, os.PathLike, IO[bytes]]) -> IO[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as probe:
            magic = probe.read(2)
        if magic == b"\x1f\x8b":
            return gzip.open(source, "rt", encoding="utf-8")
        return open(source, "r", encoding="utf-8")
    # caller owns the stream; read it whole so closing our wrapper leaves it open
    data = source.read()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return io.StringIO(data.decode("utf-8"))


def _compact(ids: np.ndarray, policy: RemapPolicy) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Return dense IDs plus the label table, or the input when already dense."""
    if ids.size == 0 or policy == "never":
        return ids, None
    labels, dense = np.unique(ids, return_inverse=True)
    if policy == "auto" and int(ids.max()) + 1 <= 2 * labels.size:
        return ids, None
    return dense.astype(ID_DTYPE), labels.astype(ID_DTYPE)


def load_bipartite(
    source: Union[str, os.PathLike, IO[bytes]],
    orientation: Orientation = "edge-major",
    remap: RemapPolicy = "auto",
) -> Hypergraph:
    """Read a whitespace-separated bipartite edge list.

    ``orientation`` says whether column one holds the hyperedge
    (``edge-major``) or the vertex (``vertex-major``). Gzip input is
    detected from its magic bytes.

    Under ``remap="auto"`` an ID column is taken verbatim when at least half
    of ``0..max`` is in use and compacted to ``0..k-1`` otherwise; the
    original IDs are kept in ``edge_labels``/``vertex_labels``. A
    ``# hypergraph: n=.. m=..`` header (as written by :func:`write_bipartite`)
    fixes the sizes and disables remapping, so trailing empty hyperedges and
    isolated vertices survive a round trip.
    """
    if orientation not in ("edge-major", "vertex-major"):
        raise ValueError(f"unknown orientation {orientation!r}")
    first: list[int] = []
    second: list[int] = []
    header: Optional[tuple[int, int]] = None
    with _open_text(source) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                hm = _HEADER_RE.match(text)
                if hm and header is None:
                    header = (int(hm.group(1)), int(hm.group(2)))
                continue
            tokens = text.split()
            if len(tokens) != 2:
                raise ParseError(lineno, f"expected 2 IDs, found {len(tokens)} tokens")
            try:
                a, b = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError(lineno, f"non-integer token in {text!r}") from None
            if a < 0 or b < 0:
                raise DomainError(f"line {lineno}: negative ID in {text!r}")
            first.append(a)
            second.append(b)

    if orientation == "edge-major":
        e, v = np.asarray(first, dtype=ID_DTYPE), np.asarray(second, dtype=ID_DTYPE)
    else:
        e, v = np.asarray(second, dtype=ID_DTYPE), np.asarray(first, dtype=ID_DTYPE)

    if header is not None:
        n, m = header
        return Hypergraph.from_pairs(e, v, num_edges=m, num_vertices=n)
    e, edge_labels = _compact(e, remap)
    v, vertex_labels = _compact(v, remap)
    return Hypergraph.from_pairs(e, v, edge_labels=edge_labels, vertex_labels=vertex_labels)


def iter_pairs(h: Hypergraph) -> Iterator[tuple[int, int]]:
    """Yield (hyperedge, vertex) pairs in original label space."""
    el, vl = h.edge_labels, h.vertex_labels
    for e in range(h.num_edges):
        eid = int(el[e]) if el is not None else e
        for v in h.edge(e):
            yield eid, int(vl[v]) if vl is not None else int(v)


def write_bipartite(h: Hypergraph, fh: IO[str]) -> None:
    """Write edge-major pairs; dense hypergraphs also get a size header."""
    if h.edge_labels is None and h.vertex_labels is None:
        fh.write(f"# hypergraph: n={h.num_vertices} m={h.num_edges}\n")
    for e, v in iter_pairs(h):
        fh.write(f"{e}\t{v}\n")


# --- statistics ------------------------------------------------------------


@dataclass(frozen=True)
class DegreeStats:
    num_vertices: int
    num_edges: int
    avg_edge_size: float
    max_vertex_degree: int
    max_edge_size: int
    edge_size_histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "n": self.num_vertices,
            "m": self.num_edges,
            "avg_edge_size": self.avg_edge_size,
            "max_vertex_degree": self.max_vertex_degree,
            "max_edge_size": self.max_edge_size,
            "histogram": {str(k): v for k, v in sorted(self.edge_size_histogram.items())},
        }


def degree_stats(h: Hypergraph) -> DegreeStats:
    sizes = h.edge_sizes
    degrees = h.vertex_degrees
    hist = Counter(int(x) for x in sizes)
    return DegreeStats(
        num_vertices=h.num_vertices,
        num_edges=h.num_edges,
        avg_edge_size=float(sizes.mean()) if sizes.size else 0.0,
        max_vertex_degree=int(degrees.max()) if degrees.size else 0,
        max_edge_size=int(sizes.max()) if sizes.size else 0,
        edge_size_histogram=dict(sorted(hist.items())),
    )
