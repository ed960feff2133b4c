"""Multi-start experiment runner: seeded campaigns, aggregation, reports.

A campaign draws ``starts`` random simplex points (one child seed per start
index, so the draw is independent of scheduling), optimizes each with its
own objective counter, and aggregates success rate, best/mean value and
evaluation statistics. Starts are embarrassingly parallel; with
``concurrency > 1`` they run on a thread pool and are gathered in start
order, so per-start results are identical for any worker count. Reports are
emitted as a single-row CSV of the aggregates or as JSON mirroring the full
per-start records.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .benchfns import BenchmarkSpec, registry_lookup
from .gcdvss import TuningParams, optimize
from .simplex import random_simplex_point

REPORT_SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "benchmark",
    "dim",
    "preset",
    "seed",
    "starts",
    "success_percent",
    "min_value",
    "mean_value",
    "mean_evals",
    "wall_seconds",
)


def resolve_preset(preset: Union[str, TuningParams]) -> tuple[str, TuningParams]:
    """Normalize a preset name or explicit TuningParams to (label, params)."""
    if isinstance(preset, TuningParams):
        return "custom", preset
    return preset, TuningParams.preset(preset)


@dataclass(frozen=True)
class CampaignConfig:
    benchmark: str
    dim: Optional[int] = None
    starts: int = 20
    seed: int = 0
    preset: Union[str, TuningParams] = "default"
    concurrency: int = 1
    trace: bool = False
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        resolve_preset(self.preset)  # fail fast on unknown preset names


@dataclass(frozen=True)
class StartRecord:
    """Outcome of one optimization start."""

    index: int
    start_hash: str
    final_value: float
    evaluations: int
    iterations: int
    runs: int
    max_evals_per_iteration: int
    success: bool


@dataclass(frozen=True)
class BenchmarkResult:
    """Aggregate of a multi-start campaign."""

    benchmark: str
    dim: int
    dim_simplex: int
    preset: str
    seed: int
    starts: int
    concurrency: int
    known_optimum_value: float
    success_threshold: float
    records: list[StartRecord]
    wall_seconds: float
    success_count: int = field(init=False)
    success_percent: float = field(init=False)
    min_value: float = field(init=False)
    mean_value: float = field(init=False)
    mean_evaluations: float = field(init=False)

    def __post_init__(self):
        if not self.records:
            raise ValueError("a campaign result needs at least one start record")
        values = [r.final_value for r in self.records]
        wins = sum(r.success for r in self.records)
        object.__setattr__(self, "success_count", wins)
        object.__setattr__(self, "success_percent", 100.0 * wins / len(self.records))
        object.__setattr__(self, "min_value", min(values))
        object.__setattr__(self, "mean_value", sum(values) / len(values))
        object.__setattr__(
            self, "mean_evaluations", sum(r.evaluations for r in self.records) / len(self.records)
        )


def _start_points(spec: BenchmarkSpec, seed: int, starts: int):
    children = np.random.SeedSequence(seed).spawn(starts)
    return [random_simplex_point(spec.dim_simplex, np.random.default_rng(c)) for c in children]


def run_campaign(cfg: CampaignConfig) -> BenchmarkResult:
    """Run a seeded multi-start campaign; deterministic given the config."""
    spec = registry_lookup(cfg.benchmark, cfg.dim)
    preset_name, params = resolve_preset(cfg.preset)
    points = _start_points(spec, cfg.seed, cfg.starts)

    def one(i: int) -> StartRecord:
        objective = spec.fresh_objective()
        result = optimize(objective, points[i], params, trace=cfg.trace)
        return StartRecord(
            index=i,
            start_hash=hashlib.sha256(points[i].coords.tobytes()).hexdigest()[:16],
            final_value=result.value,
            evaluations=result.total_evaluations,
            iterations=sum(r.iterations for r in result.runs),
            runs=len(result.runs),
            max_evals_per_iteration=max(r.max_evals_per_iteration for r in result.runs),
            success=abs(result.value - spec.known_optimum_value) < spec.success_threshold,
        )

    begin = time.perf_counter()
    if cfg.concurrency > 1:
        with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
            records = list(pool.map(one, range(cfg.starts)))
    else:
        records = [one(i) for i in range(cfg.starts)]
    wall = time.perf_counter() - begin

    return BenchmarkResult(
        benchmark=spec.name,
        dim=spec.dim,
        dim_simplex=spec.dim_simplex,
        preset=preset_name,
        seed=cfg.seed,
        starts=cfg.starts,
        concurrency=cfg.concurrency,
        known_optimum_value=spec.known_optimum_value,
        success_threshold=spec.success_threshold,
        records=records,
        wall_seconds=wall,
    )


def result_to_dict(result: BenchmarkResult) -> dict:
    """JSON-ready dict with the full per-start records."""
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "benchmark": result.benchmark,
        "dim": result.dim,
        "dim_simplex": result.dim_simplex,
        "preset": result.preset,
        "seed": result.seed,
        "starts": result.starts,
        "concurrency": result.concurrency,
        "known_optimum_value": result.known_optimum_value,
        "success_threshold": result.success_threshold,
        "aggregates": {
            "success_count": result.success_count,
            "success_percent": result.success_percent,
            "min_value": result.min_value,
            "mean_value": result.mean_value,
            "mean_evaluations": result.mean_evaluations,
            "wall_seconds": result.wall_seconds,
        },
        "records": [
            {
                "index": r.index,
                "start_hash": r.start_hash,
                "final_value": r.final_value,
                "evaluations": r.evaluations,
                "iterations": r.iterations,
                "runs": r.runs,
                "max_evals_per_iteration": r.max_evals_per_iteration,
                "success": r.success,
            }
            for r in result.records
        ],
    }


def render_report(result: BenchmarkResult, format: str = "csv") -> str:
    """Render a campaign report as CSV (aggregate row) or JSON (full)."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerow(
            [
                result.benchmark,
                result.dim,
                result.preset,
                result.seed,
                result.starts,
                repr(result.success_percent),
                repr(result.min_value),
                repr(result.mean_value),
                repr(result.mean_evaluations),
                repr(result.wall_seconds),
            ]
        )
        return buf.getvalue()
    if format == "json":
        return json.dumps(result_to_dict(result), indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report format {format!r}; expected 'csv' or 'json'")


def emit_report(result: BenchmarkResult, format: str = "csv", path: Optional[str] = None) -> str:
    """Render and, when ``path`` is given, write a report; returns the text.

    Write failures surface as the interpreter's OSError.
    """
    text = render_report(result, format)
    if path is not None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text
