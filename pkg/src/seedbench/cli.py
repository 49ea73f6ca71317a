"""Command-line interface: run, seed, metrics, enrich, synth."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench, validity
from .clustering import assign
from .data import load_csv, make_synthetic, save_synthetic
from .enrichment import go_pvalue, read_queries
from .seeding import seed_kkz, seed_kmeanspp, seed_random, seed_spss
from .validity import METRIC_COLUMNS


def _add_dataset_args(parser):
    parser.add_argument("--data", help="delimited dataset file, or synthetic1..synthetic5")
    parser.add_argument("--dataset-seed", type=int, default=0,
                        help="draw seed for synthetic datasets (default 0)")
    parser.add_argument("--label-column", type=int, default=None,
                        help="index of the class-label column in a data file")
    parser.add_argument("--delimiter", default=",",
                        help="field delimiter; use 'whitespace' for any-blank splitting")


def _load_dataset(args):
    delim = None if args.delimiter == "whitespace" else args.delimiter
    m = bench._SYNTH_RE.match(args.data or "")
    if m:
        return make_synthetic(int(m.group(1)), args.dataset_seed)
    return load_csv(args.data, label_column=args.label_column, delimiter=delim)


def cmd_run(args) -> int:
    cfg = bench.parse_config(args.config)
    if args.output_dir:
        cfg.output_dir = Path(args.output_dir)
    emitted = bench.run_full(cfg)
    for kind, path in emitted.items():
        print(f"{kind}: {path}")
    return 0


def cmd_seed(args) -> int:
    ds = _load_dataset(args)
    k = args.k if args.k is not None else ds.k_hint
    if k is None:
        print("error: --k required for unlabeled datasets", file=sys.stderr)
        return 2
    if args.method == "spss":
        seeds = seed_spss(ds, k, squared_y=args.spss_squared_y)
    elif args.method == "kkz":
        seeds = seed_kkz(ds, k)
    elif args.method == "kmeans++":
        seeds = seed_kmeanspp(ds, k, args.seed)
    else:
        seeds = seed_random(ds, k, args.seed)
    text = seeds.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0


def _read_label_file(path) -> np.ndarray:
    values = [int(line.split(",")[0]) for line in Path(path).read_text(encoding="utf-8").splitlines()
              if line.strip() and not line.startswith("#")]
    return np.array(values)


def cmd_metrics(args) -> int:
    labels = _read_label_file(args.labels)
    truth = _read_label_file(args.truth)
    pc = validity.pair_counts(labels, truth)
    values = {
        "ARI": validity.adjusted_rand(pc),
        "RI": validity.rand_index(pc),
        "HI": validity.hubert_index(pc),
        "err": validity.error_rate(labels, truth),
    }
    if args.data:
        ds = _load_dataset(args)
        k = int(labels.max()) + 1
        centroids = np.vstack([ds.points[labels == j].mean(axis=0) for j in range(k)])
        values["SIL"] = validity.silhouette(ds, labels)
        values["DB"] = validity.davies_bouldin(ds, labels, centroids)
        values["CS"] = validity.cs_measure(ds, labels, centroids)
    print(",".join(METRIC_COLUMNS))
    print(",".join(repr(float(values[c])) if c in values else "nan" for c in METRIC_COLUMNS))
    return 0


def cmd_enrich(args) -> int:
    rows = [f"{q.n},{q.k},{q.g},{q.f},{go_pvalue(q)!r}" for q in read_queries(args.queries)]
    text = "n,k,g,f,pvalue\n" + "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    delim = None if args.delimiter == "whitespace" else args.delimiter
    data_path, meta_path = save_synthetic(args.id, args.seed, args.out, delimiter=delim or ",")
    print(data_path)
    print(meta_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seedbench",
                                     description="k-means seeding benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", help="override the config's output directory")
    p_run.set_defaults(func=cmd_run)

    p_seed = sub.add_parser("seed", help="print a seed set for a dataset and method")
    _add_dataset_args(p_seed)
    p_seed.add_argument("--method", choices=["spss", "kmeans++", "kkz", "random"],
                        default="spss")
    p_seed.add_argument("--k", type=int, default=None)
    p_seed.add_argument("--seed", type=int, default=0, help="rng seed for stochastic methods")
    p_seed.add_argument("--spss-squared-y", action="store_true",
                        help="sum squared neighbor distances for the spss budget")
    p_seed.add_argument("--out", help="write the seed record here instead of stdout")
    p_seed.set_defaults(func=cmd_seed)

    p_metrics = sub.add_parser("metrics", help="score a labels file against a truth file")
    p_metrics.add_argument("--labels", required=True, help="file with one cluster label per row")
    p_metrics.add_argument("--truth", required=True, help="file with one class label per row")
    _add_dataset_args(p_metrics)
    p_metrics.set_defaults(func=cmd_metrics)

    p_enrich = sub.add_parser("enrich", help="batch enrichment P-values from 'n k g f' rows")
    p_enrich.add_argument("--queries", required=True)
    p_enrich.add_argument("--out")
    p_enrich.set_defaults(func=cmd_enrich)

    p_synth = sub.add_parser("synth", help="write a synthetic dataset and its metadata")
    p_synth.add_argument("--id", type=int, required=True, choices=range(1, 6))
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--delimiter", default=",")
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
