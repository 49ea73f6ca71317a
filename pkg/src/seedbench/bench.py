"""Experiment harness: repeated runs per algorithm, aggregation, table emission.

Stochastic algorithms get one derived seed per run; the single-pass seeder is
executed the same number of times and asserted identical across runs. Tables
report mean/min/max per metric in the fixed column order CS, ARI, RI, HI,
SIL, DB, err.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import validity
from .clustering import ClusterParams, Clustering, fuzzy_cmeans, kmeans
from .data import Dataset, load_csv, make_synthetic, synthetic_params
from .figures import emit_scatter_svg
from .seeding import seed_kmeanspp, seed_random, seed_spss
from .validity import METRIC_COLUMNS, MetricBundle

ALGORITHMS = ("kmeans-random", "kmeans++", "fuzzy-k", "spss")
EMIT_KINDS = ("csv", "markdown", "svg")
_SYNTH_RE = re.compile(r"^synthetic([1-5])$")


@dataclass
class ExperimentConfig:
    dataset: str                      # 'synthetic<1-5>' or a file path
    k: int | None = None
    algorithms: tuple[str, ...] = ALGORITHMS
    runs: int = 40
    base_rng_seed: int = 0
    dataset_seed: int = 0             # synthetic draw seed
    label_column: int | None = None   # real files only
    delimiter: str | None = ","
    output_dir: Path = Path("out")
    emit: tuple[str, ...] = EMIT_KINDS
    name: str | None = None
    params: ClusterParams = field(default_factory=ClusterParams)
    spss_squared_y: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        unknown = set(self.emit) - set(EMIT_KINDS)
        if unknown:
            raise ValueError(f"unknown emit kinds: {sorted(unknown)}")
        self.output_dir = Path(self.output_dir)


@dataclass
class RunReport:
    algorithm: str
    run: int
    seed: int | None
    metrics: MetricBundle
    iterations: int
    wall_time: float

    def to_json(self) -> str:
        payload = {
            "algorithm": self.algorithm,
            "run": self.run,
            "seed": self.seed,
            "metrics": {name: value for name, value in zip(METRIC_COLUMNS, self.metrics.as_row())},
            "iterations": self.iterations,
            "wall_time": self.wall_time,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, line: str) -> "RunReport":
        payload = json.loads(line)
        return cls(
            algorithm=payload["algorithm"],
            run=payload["run"],
            seed=payload["seed"],
            metrics=MetricBundle.from_row([payload["metrics"][c] for c in METRIC_COLUMNS]),
            iterations=payload["iterations"],
            wall_time=payload["wall_time"],
        )


@dataclass
class AlgorithmStats:
    mean: MetricBundle
    min: MetricBundle
    max: MetricBundle
    err_min_run: int
    err_max_run: int


@dataclass
class Aggregate:
    stats: dict[str, AlgorithmStats]


def derive_seed(base: int, algorithm: str, run: int) -> int:
    """Stable per-run seed: hashing keeps each algorithm's stream independent
    of which other algorithms are configured."""
    digest = hashlib.blake2s(f"{base}:{algorithm}:{run}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    match = _SYNTH_RE.match(cfg.dataset)
    if match:
        return make_synthetic(int(match.group(1)), cfg.dataset_seed)
    return load_csv(cfg.dataset, label_column=cfg.label_column, delimiter=cfg.delimiter)


def _resolve_k(cfg: ExperimentConfig, ds: Dataset) -> int:
    if cfg.k is not None:
        return cfg.k
    if ds.k_hint is not None:
        return ds.k_hint
    raise ValueError("k not given and dataset carries no class labels to infer it from")


def run_pipeline(ds: Dataset, algorithm: str, k: int, seed: int | None,
                 params: ClusterParams, spss_squared_y: bool = False) -> Clustering:
    """One seeding + clustering run of a named benchmark algorithm."""
    if algorithm == "spss":
        return kmeans(ds, seed_spss(ds, k, squared_y=spss_squared_y), params)
    if algorithm == "kmeans-random":
        return kmeans(ds, seed_random(ds, k, seed), params)
    if algorithm == "kmeans++":
        return kmeans(ds, seed_kmeanspp(ds, k, seed), params)
    if algorithm == "fuzzy-k":
        return fuzzy_cmeans(ds, seed_random(ds, k, seed), params)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_experiment(cfg: ExperimentConfig, ds: Dataset | None = None) -> list[RunReport]:
    """Execute cfg.runs runs of every configured algorithm.

    Stochastic algorithms draw run-derived seeds; the deterministic spss rows
    are executed every run and must come out identical (asserted here).
    """
    ds = ds if ds is not None else load_dataset(cfg)
    if ds.truth is None:
        raise ValueError("experiments need ground-truth labels for scoring")
    k = _resolve_k(cfg, ds)
    if k > ds.m:
        raise ValueError(f"k={k} exceeds dataset size m={ds.m}")
    reports: list[RunReport] = []
    for algorithm in cfg.algorithms:
        first_labels = None
        first_row = None
        for run in range(cfg.runs):
            deterministic = algorithm == "spss"
            seed = None if deterministic else derive_seed(cfg.base_rng_seed, algorithm, run)
            start = time.perf_counter()
            clustering = run_pipeline(ds, algorithm, k, seed, cfg.params, cfg.spss_squared_y)
            elapsed = time.perf_counter() - start
            bundle = validity.evaluate(ds, clustering)
            if deterministic:
                if first_labels is None:
                    first_labels, first_row = clustering.labels, bundle.as_row()
                else:
                    assert np.array_equal(first_labels, clustering.labels), \
                        "spss produced differing label vectors across runs"
                    assert bundle.as_row() == first_row, \
                        "spss produced differing metrics across runs"
            reports.append(RunReport(algorithm=algorithm, run=run, seed=seed,
                                     metrics=bundle, iterations=clustering.iterations,
                                     wall_time=elapsed))
    return reports


def aggregate(reports: list[RunReport]) -> Aggregate:
    """Column-wise mean/min/max per algorithm, plus the runs achieving the
    best and worst error rate."""
    if not reports:
        raise ValueError("no reports to aggregate")
    stats: dict[str, AlgorithmStats] = {}
    by_algorithm: dict[str, list[RunReport]] = {}
    for report in sorted(reports, key=lambda r: (r.algorithm, r.run)):
        by_algorithm.setdefault(report.algorithm, []).append(report)
    for algorithm, group in by_algorithm.items():
        rows = np.array([r.metrics.as_row() for r in group], dtype=float)
        errs = rows[:, METRIC_COLUMNS.index("err")]
        mins, maxs = rows.min(axis=0), rows.max(axis=0)
        # a constant column's mean is that constant, exactly; the naive
        # sum/n would drift by an ulp and break min = mean = max for
        # deterministic algorithms
        means = np.where(mins == maxs, mins, rows.mean(axis=0))
        stats[algorithm] = AlgorithmStats(
            mean=MetricBundle.from_row(means),
            min=MetricBundle.from_row(mins),
            max=MetricBundle.from_row(maxs),
            err_min_run=group[int(np.argmin(errs))].run,
            err_max_run=group[int(np.argmax(errs))].run,
        )
    return Aggregate(stats=stats)


def emit_table(agg: Aggregate, fmt: str, path) -> Path:
    """Write the aggregate as CSV (full precision) or Markdown (3 decimals),
    one row per (algorithm, statistic)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["algorithm", "statistic", *METRIC_COLUMNS])
            for algorithm, st in agg.stats.items():
                for stat_name, bundle in (("mean", st.mean), ("min", st.min), ("max", st.max)):
                    writer.writerow([algorithm, stat_name,
                                     *(repr(float(v)) for v in bundle.as_row())])
    elif fmt == "markdown":
        lines = ["| algorithm | statistic | " + " | ".join(METRIC_COLUMNS) + " |",
                 "|" + "---|" * (len(METRIC_COLUMNS) + 2)]
        for algorithm, st in agg.stats.items():
            for stat_name, bundle in (("mean", st.mean), ("min", st.min), ("max", st.max)):
                cells = " | ".join(f"{v:.3f}" for v in bundle.as_row())
                lines.append(f"| {algorithm} | {stat_name} | {cells} |")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    return path


def read_table_csv(path) -> dict[str, dict[str, MetricBundle]]:
    """Parse emit_table's CSV back into {algorithm: {statistic: bundle}}."""
    out: dict[str, dict[str, MetricBundle]] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["algorithm", "statistic", *METRIC_COLUMNS]:
            raise ValueError(f"unexpected table header: {header}")
        for row in reader:
            algorithm, stat_name, *values = row
            out.setdefault(algorithm, {})[stat_name] = \
                MetricBundle.from_row([float(v) for v in values])
    return out


def write_reports_jsonl(reports: list[RunReport], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(report.to_json() + "\n")
    return path


def read_reports_jsonl(path) -> list[RunReport]:
    return [RunReport.from_json(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


def emit_centroid_table(true_means: np.ndarray, obtained: np.ndarray, path) -> Path:
    """Reference means next to best-bijection-matched obtained centroids."""
    perm, dists = validity.match_centroids(obtained, true_means)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true_mean", "obtained_centroid", "distance"])
        for j, mu in enumerate(true_means):
            got = obtained[perm[j]]
            writer.writerow([" ".join(repr(float(v)) for v in mu),
                             " ".join(repr(float(v)) for v in got),
                             repr(float(dists[j]))])
    return path


def run_full(cfg: ExperimentConfig) -> dict[str, Path]:
    """Load data, run the experiment, and emit every configured artifact.

    Returns the emitted paths keyed by kind. Everything except wall-times in
    the run log is a pure function of the config.
    """
    ds = load_dataset(cfg)
    name = cfg.name or ds.name
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    reports = run_experiment(cfg, ds)
    agg = aggregate(reports)
    emitted: dict[str, Path] = {}
    emitted["runs"] = write_reports_jsonl(reports, out / f"{name}_runs.jsonl")
    if "csv" in cfg.emit:
        emitted["csv"] = emit_table(agg, "csv", out / f"{name}_table.csv")
    if "markdown" in cfg.emit:
        emitted["markdown"] = emit_table(agg, "markdown", out / f"{name}_table.md")
    match = _SYNTH_RE.match(cfg.dataset)
    if "spss" in cfg.algorithms:
        k = _resolve_k(cfg, ds)
        clustering = run_pipeline(ds, "spss", k, None, cfg.params, cfg.spss_squared_y)
        true_means = None
        if match:
            true_means = np.array([spec.mu for spec in
                                   synthetic_params(int(match.group(1)), cfg.dataset_seed)])
            emitted["centroids"] = emit_centroid_table(
                true_means, clustering.centroids, out / f"{name}_centroids.csv")
        if "svg" in cfg.emit and 2 <= ds.n <= 3:
            emitted["svg"] = emit_scatter_svg(ds, clustering, true_means,
                                              out / f"{name}_spss.svg")
    return emitted


def parse_config(path) -> ExperimentConfig:
    """Flat key = value experiment description; # starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    if "dataset" not in values:
        raise ValueError("config must set 'dataset'")

    def split_list(s: str) -> tuple[str, ...]:
        return tuple(v.strip() for v in s.split(",") if v.strip())

    kwargs: dict = {"dataset": values["dataset"]}
    if "k" in values:
        kwargs["k"] = int(values["k"])
    if "algorithms" in values:
        kwargs["algorithms"] = split_list(values["algorithms"])
    if "runs" in values:
        kwargs["runs"] = int(values["runs"])
    if "seed" in values:
        kwargs["base_rng_seed"] = int(values["seed"])
    if "dataset_seed" in values:
        kwargs["dataset_seed"] = int(values["dataset_seed"])
    if "label_column" in values:
        kwargs["label_column"] = int(values["label_column"])
    if "delimiter" in values:
        kwargs["delimiter"] = None if values["delimiter"] == "whitespace" else values["delimiter"]
    if "output_dir" in values:
        kwargs["output_dir"] = Path(values["output_dir"])
    if "emit" in values:
        kwargs["emit"] = split_list(values["emit"])
    if "name" in values:
        kwargs["name"] = values["name"]
    if "spss_squared_y" in values:
        kwargs["spss_squared_y"] = values["spss_squared_y"].lower() in ("1", "true", "yes")
    params = {}
    if "max_iterations" in values:
        params["max_iterations"] = int(values["max_iterations"])
    if "tolerance" in values:
        params["tolerance"] = float(values["tolerance"])
    if "fuzzifier" in values:
        params["fuzzifier"] = float(values["fuzzifier"])
    if params:
        kwargs["params"] = ClusterParams(**params)
    return ExperimentConfig(**kwargs)
