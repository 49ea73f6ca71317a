"""Clustering-initialization library and benchmark harness.

Deterministic single-pass seeding plus k-means++/KKZ/random baselines, Lloyd
and fuzzy c-means clusterers, a full validity-index suite, Gaussian-mixture
dataset generators, and a hypergeometric enrichment score.
"""

from .clustering import ClusterParams, Clustering, assign, fuzzy_cmeans, kmeans
from .data import (Dataset, MvnSpec, SYNTHETIC_SPECS, distance_matrix, load_csv,
                   make_synthetic, sample_mvn, save_csv, save_synthetic,
                   synthetic_params)
from .enrichment import GoQuery, go_pvalue
from .seeding import (DensityProfile, SeedSet, seed_kkz, seed_kmeanspp,
                      seed_random, seed_spss, sumv)
from .validity import (METRIC_COLUMNS, MetricBundle, PairCounts, adjusted_rand,
                       cs_measure, davies_bouldin, error_rate, evaluate,
                       hubert_index, match_centroids, pair_counts, rand_index,
                       silhouette)

__version__ = "0.1.0"

__all__ = [
    "ClusterParams", "Clustering", "assign", "fuzzy_cmeans", "kmeans",
    "Dataset", "MvnSpec", "SYNTHETIC_SPECS", "distance_matrix", "load_csv",
    "make_synthetic", "sample_mvn", "save_csv", "save_synthetic", "synthetic_params",
    "GoQuery", "go_pvalue",
    "DensityProfile", "SeedSet", "seed_kkz", "seed_kmeanspp", "seed_random",
    "seed_spss", "sumv",
    "METRIC_COLUMNS", "MetricBundle", "PairCounts", "adjusted_rand", "cs_measure",
    "davies_bouldin", "error_rate", "evaluate", "hubert_index", "match_centroids",
    "pair_counts", "rand_index", "silhouette",
    "__version__",
]
