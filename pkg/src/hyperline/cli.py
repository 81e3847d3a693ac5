"""Command-line entry point: ``hyperline <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
import time
from importlib import resources
from typing import IO, Iterator, Optional

import numpy as np

from .core import HypergraphError, Hypergraph, degree_stats, load_bipartite
from .overlap import (
    ALGORITHMS,
    PRESETS,
    HeuristicConfig,
    RunStats,
    SLineEdgeList,
    efficient_s_overlap,
    naive_candidate_count,
)
from .postprocess import component_members, connected_components, spectral_profile, squeeze
from .scheduling import PartitionPlan, relabel_by_degree, workload_profile

log = logging.getLogger("hyperline")

WORKERS_ENV = "HYPERLINE_WORKERS"
PHASES = ("load", "relabel", "overlap", "squeeze", "components")
RELABEL_ORDERS = {"asc": "ascending", "desc": "descending"}


def stats_schema() -> dict:
    return json.loads(resources.files("hyperline").joinpath("stats.schema.json").read_text())


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError:
        log.warning("ignoring invalid %s=%r", WORKERS_ENV, raw)
        return 1


class _Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}

    @contextlib.contextmanager
    def phase(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        yield
        self.phases[name] = self.phases.get(name, 0.0) + time.perf_counter() - t0


@contextlib.contextmanager
def _open_out(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _dump_json(obj, path: Optional[str]) -> None:
    with _open_out(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- argument groups -------------------------------------------------------


def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("input")
    g.add_argument("--input", required=required, help="bipartite edge list (plain or gzip)")
    g.add_argument("--orientation", choices=("edge-major", "vertex-major"), default="edge-major")
    g.add_argument("--remap", choices=("auto", "always", "never"), default="auto", help="ID compaction policy")


def _add_schedule(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scheduling")
    g.add_argument("--partition", choices=("blocked", "cyclic"), default="cyclic")
    g.add_argument("--workers", type=_positive_int, default=None, help=f"worker threads (default ${WORKERS_ENV} or 1)")
    g.add_argument("--stride", type=_positive_int, default=None, help="cyclic stride (default: workers)")
    g.add_argument("--chunk", type=_positive_int, default=None, help="fixed blocked chunk size (default: adaptive)")
    g.add_argument("--relabel", choices=("none", "asc", "desc"), default="none")


def _add_overlap(p: argparse.ArgumentParser, s_required: bool = True) -> None:
    g = p.add_argument_group("overlap")
    g.add_argument("--s", type=_positive_int, required=s_required, help="overlap threshold (>= 1)")
    g.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="efficient")
    g.add_argument("--heuristics", choices=sorted(PRESETS), default=None, help="heuristic preset")
    g.add_argument("--degree-pruning", action="store_true")
    g.add_argument("--skip-visited", action="store_true")
    g.add_argument("--short-circuit", action="store_true")


def _heuristics(args, parser: argparse.ArgumentParser) -> HeuristicConfig:
    individual = args.degree_pruning or args.skip_visited or args.short_circuit
    if individual and args.heuristics is not None:
        parser.error("--heuristics cannot be combined with individual heuristic flags")
    if individual:
        return HeuristicConfig(args.degree_pruning, args.skip_visited, args.short_circuit)
    return PRESETS[args.heuristics or "f0"]


def _plan(args, partition: Optional[str] = None) -> PartitionPlan:
    workers = args.workers if args.workers is not None else _default_workers()
    return PartitionPlan(partition or args.partition, workers=workers, stride=args.stride, chunk=args.chunk)


# --- shared pipeline -------------------------------------------------------


def _load(args, timer: _Timer) -> Hypergraph:
    with timer.phase("load"):
        h = load_bipartite(args.input, orientation=args.orientation, remap=args.remap)
    log.info("loaded %r", h)
    return h


def _overlap(
    h: Hypergraph,
    s: int,
    algorithm: str,
    cfg: HeuristicConfig,
    plan: PartitionPlan,
    relabel: str,
    timer: _Timer,
    weights: bool = False,
) -> tuple[SLineEdgeList, RunStats]:
    """Run one algorithm; the result is in the dense (pre-relabel) ID space."""
    rmap = None
    target = h
    if relabel != "none":
        with timer.phase("relabel"):
            target, rmap = relabel_by_degree(h, RELABEL_ORDERS[relabel])
    with timer.phase("overlap"):
        if algorithm == "efficient":
            edges, stats = efficient_s_overlap(target, s, cfg, plan, weights=weights)
        else:
            edges, stats = ALGORITHMS[algorithm](target, s)
            if not weights:
                edges.weights = None
        if rmap is not None:
            edges = edges.relabeled(rmap.backward)
    return edges, stats


def _labels(h: Hypergraph) -> np.ndarray:
    return h.edge_labels if h.edge_labels is not None else np.arange(h.num_edges)


def _stats_doc(args, cfg: HeuristicConfig, plan: PartitionPlan, edges: SLineEdgeList, stats: RunStats, timer: _Timer) -> dict:
    doc = stats.to_dict()
    doc["phase_times"] = {k: timer.phases[k] for k in PHASES if k in timer.phases}
    doc.update(
        algorithm=args.algorithm,
        s=args.s,
        heuristics=cfg.name if args.algorithm == "efficient" else None,
        partition={"strategy": plan.strategy, "workers": plan.workers, "stride": plan.effective_stride, "chunk": plan.chunk},
        relabel=args.relabel,
        num_pairs=len(edges),
    )
    if stats.per_worker_visits:
        doc["workload"] = workload_profile(stats).to_dict()
    return doc


# --- subcommands -----------------------------------------------------------


def cmd_slinegraph(args, parser) -> int:
    cfg = _heuristics(args, parser)
    plan = _plan(args)
    timer = _Timer()
    h = _load(args, timer)
    edges, stats = _overlap(h, args.s, args.algorithm, cfg, plan, args.relabel, timer, weights=args.weights)
    labels = _labels(h)
    with _open_out(args.output) as fh:
        edges.write(fh, labels=labels, weights=args.weights)
    map_path = args.squeeze_map
    if map_path is None and args.output not in (None, "-"):
        map_path = args.output + ".squeeze.tsv"
    if map_path:
        with timer.phase("squeeze"):
            _, idmap = squeeze(edges)
            with open(map_path, "w", encoding="utf-8") as fh:
                for c, o in enumerate(idmap.to_original):
                    fh.write(f"{c}\t{int(labels[o])}\n")
    if args.stats:
        _dump_json(_stats_doc(args, cfg, plan, edges, stats, timer), args.stats)
    log.info("s=%d: %d line-graph edges", args.s, len(edges))
    return 0


def cmd_components(args, parser) -> int:
    cfg = _heuristics(args, parser)
    plan = _plan(args)
    timer = _Timer()
    h = _load(args, timer)
    edges, stats = _overlap(h, args.s, args.algorithm, cfg, plan, args.relabel, timer)
    with timer.phase("squeeze"):
        g, idmap = squeeze(edges)
    with timer.phase("components"):
        labels = connected_components(g)
        comps = component_members(labels)
    original = _labels(h)
    if args.output:
        with _open_out(args.output) as fh:
            for c in range(g.num_vertices):
                fh.write(f"{c}\t{int(original[idmap.to_original[c]])}\t{int(labels[c])}\n")
    if args.stats:
        _dump_json(_stats_doc(args, cfg, plan, edges, stats, timer), args.stats)
    sizes = sorted((int(m.size) for m in comps.values()), reverse=True)
    _dump_json({"s": args.s, "num_edges": len(edges), "num_vertices": g.num_vertices, "num_components": len(comps), "component_sizes": sizes}, None)
    return 0


def cmd_spectral(args, parser) -> int:
    timer = _Timer()
    h = _load(args, timer)
    smax = args.s_max if args.s_max is not None else degree_stats(h).max_edge_size
    rows = spectral_profile(h, range(args.s_min, smax + 1), component=args.component, plan=_plan(args), method=args.method)
    _dump_json(rows, args.output)
    return 0


def cmd_stats(args, parser) -> int:
    h = _load(args, _Timer())
    _dump_json(degree_stats(h).to_dict(), args.output)
    return 0


def _parse_cell(text: str) -> tuple[str, Optional[str], Optional[str]]:
    parts = text.split(":")
    algorithm = parts[0]
    if algorithm not in ALGORITHMS or len(parts) > 3:
        raise ValueError(f"bad cell {text!r}; expected algorithm[:preset[:partition]]")
    preset = parts[1] if len(parts) > 1 and parts[1] else None
    partition = parts[2] if len(parts) > 2 and parts[2] else None
    if preset is not None and preset not in PRESETS:
        raise ValueError(f"bad preset in cell {text!r}")
    if partition is not None and partition not in ("blocked", "cyclic"):
        raise ValueError(f"bad partition in cell {text!r}")
    if algorithm != "efficient" and (preset or partition):
        raise ValueError(f"cell {text!r}: only 'efficient' takes a preset and partition")
    return algorithm, preset, partition


def cmd_bench(args, parser) -> int:
    try:
        cells = [_parse_cell(c.strip()) for c in args.cells.split(",") if c.strip()]
    except ValueError as exc:
        parser.error(str(exc))
    if not cells:
        parser.error("--cells is empty")
    if args.input is None:
        if not (args.dry_count and args.num_edges is not None and all(a == "naive" for a, _, _ in cells)):
            parser.error("--input is required unless --dry-count --num-edges is used with naive cells only")

    h = _load(args, _Timer()) if args.input is not None else None
    m = h.num_edges if h is not None else args.num_edges
    plan_default = _plan(args)
    report: dict = {"s": args.s, "m": m, "repetitions": args.repetitions, "workers": plan_default.workers, "cells": []}
    reference: Optional[SLineEdgeList] = None
    consistent = True

    for algorithm, preset, partition in cells:
        name = ":".join(x for x in (algorithm, preset, partition) if x)
        cell: dict = {"cell": name, "algorithm": algorithm}
        if algorithm == "naive" and args.dry_count:
            cell.update(dry_count=True, counters={"candidate_pairs": naive_candidate_count(m)})
            report["cells"].append(cell)
            continue
        cfg = PRESETS[preset or "f0"]
        plan = _plan(args, partition or plan_default.strategy)
        if algorithm == "efficient":
            cell.update(heuristics=cfg.name, partition=plan.strategy)
        times, counters, edges = [], None, None
        for _ in range(args.repetitions):
            timer = _Timer()
            edges, stats = _overlap(h, args.s, algorithm, cfg, plan, args.relabel, timer)
            times.append(timer.phases["overlap"])
            run_counters = {k: v for k, v in stats.to_dict().items() if k != "phase_times"}
            if counters is not None and (counters["candidate_pairs"], counters["set_intersections"]) != (
                run_counters["candidate_pairs"],
                run_counters["set_intersections"],
            ):
                cell["counter_drift"] = True
            counters = counters or run_counters
        assert edges is not None and counters is not None
        if counters["per_worker_visits"]:
            counters["workload"] = workload_profile(counters["per_worker_visits"]).to_dict()
        if reference is None:
            reference = edges
        matches = edges == reference
        consistent &= matches
        cell.update(times=times, counters=counters, num_pairs=len(edges), matches_reference=bool(matches))
        report["cells"].append(cell)

    report["consistent"] = bool(consistent)
    _dump_json(report, args.output)
    if not consistent:
        log.error("edge sets differ between bench cells")
        return 1
    return 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperline", description="s-line graphs of hypergraphs")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slinegraph", help="write the s-line graph edge list")
    _add_input(p)
    _add_overlap(p)
    _add_schedule(p)
    p.add_argument("--output", default="-", help="edge list path ('-' for stdout)")
    p.add_argument("--stats", default=None, help="write run statistics JSON here")
    p.add_argument("--weights", action="store_true", help="add intersection size as a third column")
    p.add_argument("--squeeze-map", default=None, help="sidecar compact-ID map (default: OUTPUT.squeeze.tsv)")
    p.set_defaults(func=cmd_slinegraph)

    p = sub.add_parser("components", help="s-connected components of the s-line graph")
    _add_input(p)
    _add_overlap(p)
    _add_schedule(p)
    p.add_argument("--output", default=None, help="write compact_id, original_id, label rows here")
    p.add_argument("--stats", default=None)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("spectral", help="normalized algebraic connectivity per s")
    _add_input(p)
    _add_schedule(p)
    p.add_argument("--s-min", type=_positive_int, default=1)
    p.add_argument("--s-max", type=_positive_int, default=None, help="default: largest hyperedge size")
    p.add_argument("--component", choices=("largest", "all"), default="largest")
    p.add_argument("--method", choices=("auto", "jacobi", "lapack"), default="auto")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("bench", help="run a matrix of algorithm cells and cross-check them")
    _add_input(p, required=False)
    _add_overlap(p)
    _add_schedule(p)
    p.add_argument(
        "--cells",
        default="naive,efficient:f0:cyclic,efficient:f4:cyclic,spgemm",
        help="comma list of algorithm[:preset[:partition]]",
    )
    p.add_argument("--repetitions", type=_positive_int, default=1)
    p.add_argument("--dry-count", action="store_true", help="report naive candidate counts without running naive")
    p.add_argument("--num-edges", type=int, default=None, help="hyperedge count for --dry-count without --input")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="degree statistics as JSON")
    _add_input(p)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, parser)
    except (OSError, HypergraphError) as exc:
        print(f"hyperline: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
