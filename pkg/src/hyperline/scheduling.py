"""Partitioning of the hyperedge iteration space, degree relabeling and
workload accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .core import ID_DTYPE, Hypergraph

Strategy = Literal["blocked", "cyclic"]
RelabelOrder = Literal["ascending", "descending"]

# adaptive blocked ranges start as roughly this many pieces per worker
_PIECES_PER_WORKER = 4


@dataclass(frozen=True)
class PartitionPlan:
    """How outer hyperedge IDs are spread over workers.

    ``stride`` only matters for ``cyclic`` and defaults to ``workers``.
    ``chunk`` only matters for ``blocked``: ``None`` selects adaptive
    splitting with dynamic pickup, an integer selects fixed-size chunks dealt
    to workers in turn (reproducible per-worker profiles).
    """

    strategy: Strategy = "cyclic"
    workers: int = 1
    stride: Optional[int] = None
    chunk: Optional[int] = None

    def __post_init__(self):
        if self.strategy not in ("blocked", "cyclic"):
            raise ValueError(f"unknown partition strategy {self.strategy!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.chunk is not None and self.chunk < 1:
            raise ValueError("chunk must be >= 1")

    @property
    def effective_stride(self) -> int:
        return self.stride if self.stride is not None else self.workers

    @property
    def is_dynamic(self) -> bool:
        return self.strategy == "blocked" and self.chunk is None and self.workers > 1


def assign(plan: PartitionPlan, m: int) -> list[np.ndarray]:
    """Static per-worker ID sequences; together they cover ``0..m-1`` once.

    Cyclic with stride ``c`` splits the space into ``c`` lanes
    ``{l, l+c, l+2c, ...}``; lane ``l`` goes to worker ``l % workers``.
    Blocked with a fixed chunk deals contiguous chunks round-robin. Adaptive
    blocked reports its initial split, one contiguous block per worker.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    w = plan.workers
    if plan.strategy == "cyclic":
        c = plan.effective_stride
        lanes = [np.arange(l, m, c, dtype=ID_DTYPE) for l in range(c)]
        out = []
        for k in range(w):
            mine = lanes[k::w]
            out.append(np.sort(np.concatenate(mine)) if len(mine) > 1 else (mine[0] if mine else np.empty(0, ID_DTYPE)))
        return out
    if plan.chunk is None:
        return [np.asarray(b, dtype=ID_DTYPE) for b in np.array_split(np.arange(m, dtype=ID_DTYPE), w)]
    buckets: list[list[np.ndarray]] = [[] for _ in range(w)]
    for k, lo in enumerate(range(0, m, plan.chunk)):
        buckets[k % w].append(np.arange(lo, min(lo + plan.chunk, m), dtype=ID_DTYPE))
    return [np.concatenate(b) if b else np.empty(0, ID_DTYPE) for b in buckets]


def split_range(lo: int, hi: int, grain: int) -> list[tuple[int, int]]:
    """Recursively halve ``[lo, hi)`` until every piece is at most ``grain`` long."""
    if hi - lo <= grain:
        return [(lo, hi)] if hi > lo else []
    mid = lo + (hi - lo) // 2
    return split_range(lo, mid, grain) + split_range(mid, hi, grain)


def adaptive_chunks(plan: PartitionPlan, m: int) -> list[np.ndarray]:
    """Work pieces for adaptive blocked execution, in ascending ID order."""
    grain = max(1, math.ceil(m / (plan.workers * _PIECES_PER_WORKER)))
    return [np.arange(a, b, dtype=ID_DTYPE) for a, b in split_range(0, m, grain)]


# --- relabel by degree -----------------------------------------------------


@dataclass(frozen=True)
class RelabelMap:
    forward: np.ndarray  # old edge ID -> new edge ID
    backward: np.ndarray  # new edge ID -> old edge ID
    order: RelabelOrder

    def to_old(self, ids: np.ndarray) -> np.ndarray:
        return self.backward[np.asarray(ids, dtype=ID_DTYPE)]

    def to_new(self, ids: np.ndarray) -> np.ndarray:
        return self.forward[np.asarray(ids, dtype=ID_DTYPE)]


def relabel_by_degree(h: Hypergraph, order: RelabelOrder = "ascending") -> tuple[Hypergraph, RelabelMap]:
    """Permute hyperedge IDs so edge sizes are monotone in ``order``.

    Ties keep ascending original-ID order. Vertex IDs are left alone. The
    returned hypergraph's ``edge_labels`` still point at the input-file IDs.
    """
    if order not in ("ascending", "descending"):
        raise ValueError(f"unknown relabel order {order!r}")
    sizes = h.edge_sizes
    key = sizes if order == "ascending" else -sizes
    backward = np.argsort(key, kind="stable").astype(ID_DTYPE)
    forward = np.empty_like(backward)
    forward[backward] = np.arange(backward.size, dtype=ID_DTYPE)

    old_edges = np.repeat(np.arange(h.num_edges, dtype=ID_DTYPE), sizes)
    labels = h.edge_labels[backward] if h.edge_labels is not None else backward.copy()
    relabeled = Hypergraph.from_pairs(
        forward[old_edges],
        h.edge_idx,
        num_edges=h.num_edges,
        num_vertices=h.num_vertices,
        edge_labels=labels,
        vertex_labels=h.vertex_labels,
    )
    return relabeled, RelabelMap(forward=forward, backward=backward, order=order)


# --- workload --------------------------------------------------------------


@dataclass(frozen=True)
class WorkloadReport:
    workers: int
    min: int
    max: int
    mean: float
    stddev: float
    imbalance: float  # max / mean, 1.0 is perfect balance

    def to_dict(self) -> dict:
        return {
            "workers": self.workers,
            "min": self.min,
            "max": self.max,
            "mean": self.mean,
            "stddev": self.stddev,
            "imbalance": self.imbalance,
        }


def workload_profile(stats) -> WorkloadReport:
    """Summarize ``stats.per_worker_visits``; accepts a plain sequence too."""
    visits = getattr(stats, "per_worker_visits", stats)
    arr = np.asarray(list(visits), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no per-worker visit counts to profile")
    mean = float(arr.mean())
    return WorkloadReport(
        workers=int(arr.size),
        min=int(arr.min()),
        max=int(arr.max()),
        mean=mean,
        stddev=float(arr.std()),
        imbalance=float(arr.max() / mean) if mean > 0 else 1.0,
    )
