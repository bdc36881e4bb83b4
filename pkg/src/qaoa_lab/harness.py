"""Experiment engine: instance ensembles, tilt-angle sweeps, CSV records and summaries.

Seed hierarchy
--------------
Every random choice derives from ``master_seed`` through
``numpy.random.SeedSequence(master_seed, spawn_key=key)`` with keys

* graph:      ``(n, graph_id)``
* warm cut:   ``(n, graph_id, bitstring_id)``
* optimizer:  ``(n, graph_id, bitstring_id, round(1000 * theta))``

so any single record can be regenerated without running the rest of the sweep
(:func:`run_record`).
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import metrics
from .classical import gw_local_search_cut, random_lo_cut
from .errors import InvalidParameterError, SizeLimitError
from .graph import MAX_ENUM_QUBITS, CutAssignment, Graph, generate_regular, max_cut_brute_force
from .optimize import OBJECTIVES, STRATEGIES, Objective, OptimizerConfig, optimize
from .sim import MIXERS, WarmStart, qaoa_state

log = logging.getLogger(__name__)

CUT_SOURCES = ("random_lo", "gw_lo")
DEFAULT_N_LIST = tuple(range(4, 21, 2))
LARGE_N = 22  # from here on an explicit opt-in is required

RECORD_FIELDS = ("n", "graph_id", "bitstring_id", "theta", "objective", "strategy", "expectation",
                 "approx_ratio", "gsp", "bsp", "cut_b", "max_cut", "gammas", "betas", "evals",
                 "wall_ms", "error")

SUMMARY_METRICS = ("expectation", "approx_ratio", "classical_ratio", "gsp", "bsp")


def default_counts(n: int) -> tuple[int, int]:
    """(graphs, bitstrings per graph) for an n-vertex ensemble."""
    if 4 <= n <= 18:
        return 30, 10
    if 20 <= n <= 24:
        return 10, 10
    if 26 <= n <= 28:
        return 6, 3
    raise InvalidParameterError(f"no default ensemble size for n={n}")


def default_thetas(n: int) -> list[float]:
    step = 5 if n >= 28 else 1
    return [float(t) for t in range(0, 91, step)]


def memory_estimate_bytes(n: int) -> int:
    # state, cost phases, cut table and one scratch copy
    return (1 << n) * (16 + 16 + 8 + 16)


@dataclass
class ExperimentConfig:
    n_list: list[int] = field(default_factory=lambda: list(DEFAULT_N_LIST))
    counts: dict[int, tuple[int, int]] | None = None
    theta_grid: list[float] | None = None
    degree: int = 3
    depth: int = 1
    mixer: str = "aligned"
    cut_source: str = "random_lo"
    objective: str = "expectation"
    strategy: str = "basin_hop"
    master_seed: int = 0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    records_path: str | None = None
    summary_path: str | None = None
    workers: int | None = None
    allow_large: bool = False
    record_timing: bool = False

    def __post_init__(self):
        if isinstance(self.optimizer, dict):
            self.optimizer = OptimizerConfig.from_dict(self.optimizer)
        if self.counts is not None:
            self.counts = {int(k): (int(v[0]), int(v[1])) for k, v in self.counts.items()}
        self.n_list = [int(n) for n in self.n_list]
        if self.theta_grid is not None:
            self.theta_grid = [float(t) for t in self.theta_grid]
        for name, value, allowed in (("mixer", self.mixer, MIXERS), ("cut_source", self.cut_source, CUT_SOURCES),
                                     ("objective", self.objective, OBJECTIVES),
                                     ("strategy", self.strategy, STRATEGIES)):
            if value not in allowed:
                raise InvalidParameterError(f"{name} must be one of {allowed}, got {value!r}")
        if self.depth < 1:
            raise InvalidParameterError("depth must be >= 1")

    def counts_for(self, n: int) -> tuple[int, int]:
        if self.counts and n in self.counts:
            return self.counts[n]
        return default_counts(n)

    def thetas_for(self, n: int) -> list[float]:
        return list(self.theta_grid) if self.theta_grid is not None else default_thetas(n)

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(**{**asdict(self.optimizer), "strategy": self.strategy})

    def validate_sizes(self) -> None:
        for n in self.n_list:
            if n > MAX_ENUM_QUBITS:
                raise SizeLimitError(f"n={n} exceeds the simulator limit of {MAX_ENUM_QUBITS} qubits")
            if n % 2 or n <= self.degree:
                raise InvalidParameterError(f"n={n} cannot host a {self.degree}-regular graph")
            if n >= LARGE_N and not self.allow_large:
                raise SizeLimitError(f"n={n} needs allow_large (about {memory_estimate_bytes(n) / 2**20:.0f} MiB "
                                     "per worker)")

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["counts"] is not None:
            d["counts"] = {str(k): list(v) for k, v in d["counts"].items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def child_seed(master_seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def theta_key(theta: float) -> int:
    return int(round(theta * 1000))


class Pair(NamedTuple):
    n: int
    graph_id: int
    bitstring_id: int
    graph: Graph
    cut: CutAssignment


def make_graph(cfg: ExperimentConfig, n: int, graph_id: int) -> Graph:
    return generate_regular(n, cfg.degree, child_seed(cfg.master_seed, n, graph_id))


def make_cut(cfg: ExperimentConfig, g: Graph, graph_id: int, bitstring_id: int) -> CutAssignment:
    seed = child_seed(cfg.master_seed, g.n, graph_id, bitstring_id)
    if cfg.cut_source == "gw_lo":
        return gw_local_search_cut(g, seed)
    return random_lo_cut(g, seed)


def build_ensemble(cfg: ExperimentConfig) -> list[Pair]:
    """All (graph, warm-start cut) pairs, ordered by n, graph id, bitstring id."""
    pairs = []
    for n in cfg.n_list:
        n_graphs, n_cuts = cfg.counts_for(n)
        for gid in range(n_graphs):
            g = make_graph(cfg, n, gid)
            for bid in range(n_cuts):
                pairs.append(Pair(n, gid, bid, g, make_cut(cfg, g, gid, bid)))
    return pairs


@dataclass
class SweepRecord:
    n: int
    graph_id: int
    bitstring_id: int
    theta: float
    objective: str
    strategy: str
    cut_b: float
    max_cut: float | None = None
    expectation: float | None = None
    approx_ratio: float | None = None
    gsp: float | None = None
    bsp: float | None = None
    gammas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    evals: int | None = None
    wall_ms: float | None = None
    error: str = ""

    @property
    def classical_ratio(self) -> float | None:
        if self.max_cut is None:
            return None
        return metrics.approximation_ratio(self.cut_b, self.max_cut)

    def to_row(self) -> dict:
        row = {}
        for name in RECORD_FIELDS:
            value = getattr(self, name)
            if name in ("gammas", "betas"):
                row[name] = ";".join(_fmt(x) for x in value)
            else:
                row[name] = _fmt(value)
        return row

    @classmethod
    def from_row(cls, row: dict) -> "SweepRecord":
        def num(key, conv=float):
            text = row.get(key, "")
            return conv(text) if text not in ("", None) else None

        def vec(key):
            text = row.get(key, "")
            return tuple(float(x) for x in text.split(";")) if text else ()

        return cls(n=int(row["n"]), graph_id=int(row["graph_id"]), bitstring_id=int(row["bitstring_id"]),
                   theta=float(row["theta"]), objective=row["objective"], strategy=row["strategy"],
                   cut_b=float(row["cut_b"]), max_cut=num("max_cut"), expectation=num("expectation"),
                   approx_ratio=num("approx_ratio"), gsp=num("gsp"), bsp=num("bsp"), gammas=vec("gammas"),
                   betas=vec("betas"), evals=num("evals", int), wall_ms=num("wall_ms"),
                   error=row.get("error", "") or "")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_one(cfg: ExperimentConfig, pair: Pair, theta: float, max_cut: float | None, optima) -> SweepRecord:
    """Optimise and score one (pair, theta) point.  Failures land in ``error``."""
    rec = SweepRecord(pair.n, pair.graph_id, pair.bitstring_id, float(theta), cfg.objective, cfg.strategy,
                      cut_b=pair.cut.value, max_cut=max_cut)
    start = time.perf_counter()
    try:
        g = pair.graph
        ws = WarmStart(pair.cut.bits, theta)
        obj = Objective(cfg.objective, g, ws, cfg.mixer, cfg.depth)
        seed = child_seed(cfg.master_seed, pair.n, pair.graph_id, pair.bitstring_id, theta_key(theta))
        res = optimize(obj, cfg.strategy, cfg.optimizer_config(), seed=seed)
        state = qaoa_state(g, ws, res.params, cfg.mixer)
        rep = metrics.report(state, g, pair.cut, max_cut, optima)
        rec.expectation = rep.expectation
        rec.approx_ratio = rep.approximation_ratio
        rec.gsp = rep.gsp
        rec.bsp = rep.bsp
        rec.gammas, rec.betas = res.params.gammas, res.params.betas
        rec.evals = res.evals
    except Exception as exc:  # one bad point must not sink a long sweep
        log.warning("record n=%s graph=%s cut=%s theta=%s failed: %s", pair.n, pair.graph_id,
                    pair.bitstring_id, theta, exc)
        rec.error = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    if cfg.record_timing:
        rec.wall_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return rec


def run_record(cfg: ExperimentConfig, n: int, graph_id: int, bitstring_id: int, theta: float) -> SweepRecord:
    """Regenerate a single record of a sweep from its coordinates alone."""
    g = make_graph(cfg, n, graph_id)
    pair = Pair(n, graph_id, bitstring_id, g, make_cut(cfg, g, graph_id, bitstring_id))
    opt = max_cut_brute_force(g)
    return run_one(cfg, pair, theta, opt.value, opt.optima)


def _pair_task(args) -> list[SweepRecord]:
    cfg, pair, thetas, max_cut, optima = args
    return [run_one(cfg, pair, t, max_cut, optima) for t in thetas]


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("QAOA_LAB_THREADS")
    workers = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        workers = min(workers, int(cap))
    return max(1, workers)


def iter_sweep(cfg: ExperimentConfig, workers: int | None = None) -> Iterator[SweepRecord]:
    """Yield records in task order (n, graph, bitstring, theta) regardless of worker count."""
    cfg.validate_sizes()
    for n in cfg.n_list:
        if n >= LARGE_N:
            log.warning("n=%d: roughly %.0f MiB per worker", n, memory_estimate_bytes(n) / 2**20)
    pairs = build_ensemble(cfg)
    optimum = {}
    tasks = []
    for pair in pairs:
        key = (pair.n, pair.graph_id)
        if key not in optimum:
            optimum[key] = max_cut_brute_force(pair.graph)
        opt = optimum[key]
        tasks.append((cfg, pair, cfg.thetas_for(pair.n), opt.value, opt.optima))
    workers = worker_count(workers if workers is not None else cfg.workers)
    if workers == 1:
        for task in tasks:
            yield from _pair_task(task)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_pair_task, tasks):
            yield from chunk


def run_sweep(cfg: ExperimentConfig, workers: int | None = None, out_path=None) -> list[SweepRecord]:
    """Run the sweep, streaming CSV rows to ``out_path`` (or ``cfg.records_path``) as they complete."""
    out_path = out_path or cfg.records_path
    records = []
    fh = open(out_path, "w", newline="") if out_path else None
    try:
        writer = None
        if fh:
            writer = csv.DictWriter(fh, fieldnames=RECORD_FIELDS, lineterminator="\n")
            writer.writeheader()
        for rec in iter_sweep(cfg, workers):
            records.append(rec)
            if writer:
                writer.writerow(rec.to_row())
                fh.flush()
    finally:
        if fh:
            fh.close()
    if cfg.summary_path and records:
        write_summary(aggregate(records, "theta", split_n=True), cfg.summary_path)
    return records


def write_records(records: Iterable[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RECORD_FIELDS, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow(rec.to_row())


def read_records(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        return [SweepRecord.from_row(row) for row in csv.DictReader(fh)]


def aggregate(records: Iterable[SweepRecord], group_by: str = "theta", split_n: bool = False,
              thetas: Iterable[float] | None = None, with_std: bool = True) -> list[dict]:
    """Mean (and population std) of each metric per group.

    ``group_by="theta"`` gives the curves against tilt angle; ``"n"`` the
    scaling curves.  ``split_n`` adds n as a second key for theta grouping
    (and theta for n grouping), ``thetas`` keeps only the listed angles.
    Records carrying an error are skipped.
    """
    if group_by not in ("theta", "n"):
        raise InvalidParameterError(f"group_by must be 'theta' or 'n', got {group_by!r}")
    keep = None if thetas is None else {float(t) for t in thetas}
    groups: dict[tuple, list[SweepRecord]] = {}
    for rec in records:
        if rec.error or (keep is not None and rec.theta not in keep):
            continue
        if group_by == "theta":
            key = (rec.n, rec.theta) if split_n else (rec.theta,)
        else:
            key = (rec.n, rec.theta) if split_n else (rec.n,)
        groups.setdefault(key, []).append(rec)
    if not groups:
        raise InvalidParameterError("no usable records to aggregate")
    key_names = ("n", "theta") if split_n else (group_by,)
    rows = []
    for key in sorted(groups):
        recs = groups[key]
        row = dict(zip(key_names, key))
        row["count"] = len(recs)
        for name in SUMMARY_METRICS:
            vals = [getattr(r, name) for r in recs]
            vals = np.array([v for v in vals if v is not None], dtype=float)
            row[f"mean_{name}"] = float(vals.mean()) if vals.size else None
            if with_std:
                row[f"std_{name}"] = float(vals.std()) if vals.size else None
        rows.append(row)
    return rows


def write_summary(rows: list[dict], path) -> None:
    if not rows:
        raise InvalidParameterError("nothing to write")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})


def classical_ceiling_violations(records: Iterable[SweepRecord], tol: float = 1e-9) -> list[SweepRecord]:
    """Records whose ratio beats the classical ratio of their own warm-start cut by more than ``tol``."""
    bad = []
    for rec in records:
        if rec.error or rec.approx_ratio is None or rec.theta == 0:
            continue
        if rec.approx_ratio > rec.classical_ratio + tol:
            bad.append(rec)
    return bad
