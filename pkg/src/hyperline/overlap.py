"""s-overlap kernels: naive all-pairs, wedge enumeration, the heuristic
wedge algorithm, and the sparse product with filtration.

Every algorithm returns ``(SLineEdgeList, RunStats)``. Pairs are always
reported with ``i < j``, sorted and duplicate-free, in the ID space of the
hypergraph that was passed in.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Optional, Sequence

import numpy as np

from . import _kernels
from .core import ID_DTYPE, Hypergraph
from .scheduling import PartitionPlan, adaptive_chunks, assign

SERIAL = PartitionPlan("blocked", workers=1)


@dataclass
class SLineEdgeList:
    s: int
    pairs: np.ndarray  # shape (k, 2), int64, rows (i, j) with i < j
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        self.pairs = np.asarray(self.pairs, dtype=ID_DTYPE).reshape(-1, 2)
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=ID_DTYPE)

    def __len__(self) -> int:
        return int(self.pairs.shape[0])

    def as_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.pairs}

    def as_list(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.pairs]

    def weight_map(self) -> dict[tuple[int, int], int]:
        if self.weights is None:
            raise ValueError("edge list carries no weights")
        return {(int(i), int(j)): int(w) for (i, j), w in zip(self.pairs, self.weights)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SLineEdgeList):
            return NotImplemented
        return self.s == other.s and np.array_equal(self.pairs, other.pairs)

    def relabeled(self, mapping: np.ndarray) -> "SLineEdgeList":
        """Map both endpoints through ``mapping`` and re-canonicalize."""
        mapping = np.asarray(mapping, dtype=ID_DTYPE)
        return canonical(self.s, mapping[self.pairs[:, 0]], mapping[self.pairs[:, 1]], self.weights)

    def write(self, fh: IO[str], labels: Optional[np.ndarray] = None, weights: bool = False) -> None:
        """One ``i<TAB>j[<TAB>w]`` line per pair; ``labels`` maps IDs for output."""
        if weights and self.weights is None:
            raise ValueError("edge list carries no weights")
        pairs = self.pairs if labels is None else np.asarray(labels)[self.pairs]
        for r in range(len(self)):
            i, j = int(pairs[r, 0]), int(pairs[r, 1])
            if i > j:
                i, j = j, i
            if weights:
                fh.write(f"{i}\t{j}\t{int(self.weights[r])}\n")
            else:
                fh.write(f"{i}\t{j}\n")


def canonical(s: int, left: np.ndarray, right: np.ndarray, weights: Optional[np.ndarray] = None) -> SLineEdgeList:
    """Orient pairs as (min, max), sort lexicographically and drop duplicates."""
    left = np.asarray(left, dtype=ID_DTYPE)
    right = np.asarray(right, dtype=ID_DTYPE)
    lo = np.minimum(left, right)
    hi = np.maximum(left, right)
    if lo.size == 0:
        return SLineEdgeList(s, np.empty((0, 2), ID_DTYPE), None if weights is None else np.empty(0, ID_DTYPE))
    if np.any(lo == hi):
        raise ValueError("self-pair in edge list")
    base = int(hi.max()) + 1
    if base <= 3_037_000_499:  # lo * base + hi stays inside int64
        key = lo * base + hi
        if weights is None:
            key = np.unique(key)
            return SLineEdgeList(s, np.column_stack((key // base, key % base)))
        order = np.argsort(key, kind="stable")
        key = key[order]
        keep = np.ones(key.size, dtype=bool)
        keep[1:] = key[1:] != key[:-1]
        lo, hi = lo[order], hi[order]
    else:
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        keep = np.ones(lo.size, dtype=bool)
        keep[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    w = None if weights is None else np.asarray(weights, dtype=ID_DTYPE)[order][keep]
    return SLineEdgeList(s, np.column_stack((lo[keep], hi[keep])), w)


@dataclass(frozen=True)
class HeuristicConfig:
    """Toggles for the heuristic wedge algorithm.

    The strictly-upper-triangular rule is not a toggle; it is always on.
    """

    degree_pruning: bool = True
    skip_visited: bool = True
    short_circuit: bool = True

    @classmethod
    def preset(cls, name: str) -> "HeuristicConfig":
        try:
            return PRESETS[name.lower()]
        except KeyError:
            raise ValueError(f"unknown heuristic preset {name!r}; expected one of {sorted(PRESETS)}") from None

    @property
    def name(self) -> str:
        for k, v in PRESETS.items():
            if v == self:
                return k
        on = [f for f, flag in (("prune", self.degree_pruning), ("visited", self.skip_visited), ("short", self.short_circuit)) if flag]
        return "+".join(on)


PRESETS = {
    "f0": HeuristicConfig(True, True, True),
    "f1": HeuristicConfig(True, False, False),
    "f2": HeuristicConfig(False, True, False),
    "f3": HeuristicConfig(False, False, True),
    "f4": HeuristicConfig(False, False, False),
}

ALL_CONFIGS = [HeuristicConfig(a, b, c) for a in (False, True) for b in (False, True) for c in (False, True)]


@dataclass
class RunStats:
    candidate_pairs: int = 0
    set_intersections: int = 0
    per_worker_visits: list[int] = field(default_factory=list)
    phase_times: dict[str, float] = field(default_factory=dict)
    comparisons: int = 0  # merge steps summed over all intersections

    def to_dict(self) -> dict:
        return {
            "candidate_pairs": int(self.candidate_pairs),
            "set_intersections": int(self.set_intersections),
            "per_worker_visits": [int(v) for v in self.per_worker_visits],
            "phase_times": dict(self.phase_times),
            "comparisons": int(self.comparisons),
        }


def _check_s(s: int) -> int:
    if int(s) != s or s < 1:
        raise ValueError(f"s must be an integer >= 1, got {s!r}")
    return int(s)


def _as_ids(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=ID_DTYPE)


def intersection_size(a: Sequence[int], b: Sequence[int]) -> int:
    """|a ∩ b| for two strictly ascending ID lists."""
    return int(_kernels.merge_intersect(_as_ids(a), _as_ids(b), 0)[0])


def intersects_at_least(a: Sequence[int], b: Sequence[int], s: int) -> bool:
    """True iff the lists share at least ``s`` IDs; stops at the s-th match."""
    s = _check_s(s)
    return int(_kernels.merge_intersect(_as_ids(a), _as_ids(b), s)[0]) >= s


def merge_steps(a: Sequence[int], b: Sequence[int], stop_at: int = 0) -> tuple[int, int]:
    """Instrumented merge: ``(common count, merge iterations)``."""
    c, st = _kernels.merge_intersect(_as_ids(a), _as_ids(b), int(stop_at))
    return int(c), int(st)


# --- algorithms ------------------------------------------------------------


def naive_s_overlap(h: Hypergraph, s: int) -> tuple[SLineEdgeList, RunStats]:
    """Test every unordered hyperedge pair. Quadratic in m; not guarded."""
    s = _check_s(s)
    t0 = time.perf_counter()
    pi, pj, pw, examined, steps = _kernels.naive_kernel(h.edge_ptr, h.edge_idx, s)
    stats = RunStats(
        candidate_pairs=int(examined),
        set_intersections=int(examined),
        per_worker_visits=[int(examined)],
        comparisons=int(steps),
    )
    stats.phase_times["overlap"] = time.perf_counter() - t0
    return SLineEdgeList(s, np.column_stack((pi, pj)), pw), stats


def naive_candidate_count(m: int) -> int:
    """Pairs the naive algorithm examines: m(m-1)/2."""
    return m * (m - 1) // 2


@lru_cache(maxsize=None)
def _pool(workers: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sline")


def _fan_out(workers: int, arg_lists: list[tuple], fn) -> list:
    """Run ``fn(*args)`` per worker; the calling thread takes worker 0."""
    if workers == 1:
        return [fn(*arg_lists[0])]
    futures = [_pool(workers - 1).submit(fn, *a) for a in arg_lists[1:]]
    first = fn(*arg_lists[0])
    return [first] + [f.result() for f in futures]


@dataclass
class _WorkerResult:
    pi: list = field(default_factory=list)
    pj: list = field(default_factory=list)
    pw: list = field(default_factory=list)
    visits: int = 0
    candidates: int = 0
    intersections: int = 0
    steps: int = 0

    def add(self, out) -> None:
        pi, pj, pw, visits, candidates, intersections, steps = out
        self.pi.append(pi)
        self.pj.append(pj)
        self.pw.append(pw)
        self.visits += int(visits)
        self.candidates += int(candidates)
        self.intersections += int(intersections)
        self.steps += int(steps)


def _run_wedges(h: Hypergraph, s: int, cfg: HeuristicConfig, plan: PartitionPlan, short_circuit: bool) -> list[_WorkerResult]:
    m = h.num_edges
    args = (h.edge_ptr, h.edge_idx, h.vertex_ptr, h.vertex_idx)
    flags = (s, cfg.degree_pruning, cfg.skip_visited, short_circuit)

    if plan.is_dynamic:
        pieces = adaptive_chunks(plan, m)
        cursor = iter(range(len(pieces)))
        lock = threading.Lock()

        def body() -> _WorkerResult:
            res = _WorkerResult()
            stamp = np.zeros(m, dtype=ID_DTYPE)
            while True:
                with lock:
                    k = next(cursor, None)
                if k is None:
                    return res
                res.add(_kernels.wedge_kernel(*args, pieces[k], *flags, stamp))

        return _fan_out(plan.workers, [()] * plan.workers, lambda: body())

    def run(ids: np.ndarray) -> _WorkerResult:
        res = _WorkerResult()
        res.add(_kernels.wedge_kernel(*args, ids, *flags, np.zeros(m, dtype=ID_DTYPE)))
        return res

    parts = assign(plan, m)
    return _fan_out(plan.workers, [(p,) for p in parts], run)


def _merge(s: int, results: list[_WorkerResult], want_weights: bool) -> tuple[SLineEdgeList, RunStats]:
    def gather(attr: str) -> np.ndarray:
        parts = [a for r in results for a in getattr(r, attr)]
        return np.concatenate(parts) if parts else np.empty(0, ID_DTYPE)

    pi, pj, pw = gather("pi"), gather("pj"), gather("pw")
    edges = canonical(s, pi, pj, pw if want_weights else None)
    stats = RunStats(
        candidate_pairs=sum(r.candidates for r in results),
        set_intersections=sum(r.intersections for r in results),
        per_worker_visits=[r.visits for r in results],
        comparisons=sum(r.steps for r in results),
    )
    return edges, stats


def wedge_s_overlap(h: Hypergraph, s: int) -> tuple[SLineEdgeList, RunStats]:
    """Test only pairs joined by a wedge e_i - v - e_j with j > i.

    A pair reached through several shared vertices is tested once per wedge;
    repeats are removed when the output is canonicalized. Weights are exact.
    """
    s = _check_s(s)
    t0 = time.perf_counter()
    results = _run_wedges(h, s, PRESETS["f4"], SERIAL, short_circuit=False)
    edges, stats = _merge(s, results, want_weights=True)
    stats.phase_times["overlap"] = time.perf_counter() - t0
    return edges, stats


def efficient_s_overlap(
    h: Hypergraph,
    s: int,
    cfg: HeuristicConfig = PRESETS["f0"],
    plan: PartitionPlan = SERIAL,
    weights: bool = False,
) -> tuple[SLineEdgeList, RunStats]:
    """Wedge enumeration with degree pruning, visited skipping and
    short-circuit intersection, each switchable through ``cfg``.

    The outer hyperedge loop is split across ``plan.workers`` threads
    according to ``plan``. Asking for ``weights`` forces full intersection
    counts, so short-circuiting is turned off for that run.
    """
    s = _check_s(s)
    t0 = time.perf_counter()
    results = _run_wedges(h, s, cfg, plan, short_circuit=cfg.short_circuit and not weights)
    edges, stats = _merge(s, results, want_weights=weights)
    stats.phase_times["overlap"] = time.perf_counter() - t0
    return edges, stats


def spgemm_product(h: Hypergraph) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """CSR of the full hyperedge adjacency product (diagonal included)."""
    ptr, cols, vals, acc = _kernels.spgemm_kernel(h.edge_ptr, h.edge_idx, h.vertex_ptr, h.vertex_idx)
    return ptr, cols, vals, int(acc)


def spgemm_filter_s_overlap(h: Hypergraph, s: int) -> tuple[SLineEdgeList, RunStats]:
    """Materialize the product row by row, then keep entries >= s above the diagonal.

    ``set_intersections`` counts the off-diagonal product entries the filter
    inspects (both triangles); visits count scalar accumulations.
    """
    s = _check_s(s)
    t0 = time.perf_counter()
    ptr, cols, vals, accumulations = spgemm_product(h)
    rows = np.repeat(np.arange(h.num_edges, dtype=ID_DTYPE), np.diff(ptr))
    off_diag = rows != cols
    keep = off_diag & (rows < cols) & (vals >= s)
    edges = SLineEdgeList(s, np.column_stack((rows[keep], cols[keep])), vals[keep])
    stats = RunStats(
        candidate_pairs=int(off_diag.sum()),
        set_intersections=int(off_diag.sum()),
        per_worker_visits=[accumulations],
    )
    stats.phase_times["overlap"] = time.perf_counter() - t0
    return edges, stats


ALGORITHMS = {
    "naive": naive_s_overlap,
    "wedge": wedge_s_overlap,
    "efficient": efficient_s_overlap,
    "spgemm": spgemm_filter_s_overlap,
}
