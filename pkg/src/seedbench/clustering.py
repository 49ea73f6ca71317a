"""Lloyd's k-means and fuzzy c-means, run from a given SeedSet to convergence."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset
from .seeding import SeedSet


@dataclass
class ClusterParams:
    max_iterations: int = 300
    tolerance: float = 1e-5
    fuzzifier: float = 2.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier must be > 1")


@dataclass
class Clustering:
    """Hard labels and final centroids; membership matrix for fuzzy runs."""

    labels: np.ndarray
    centroids: np.ndarray
    membership: np.ndarray | None = None
    iterations: int = 0
    converged: bool = False

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return (diff ** 2).sum(axis=-1)


def assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Nearest-centroid labels, lowest index on ties."""
    return _sq_dists(np.asarray(points, float), np.asarray(centroids, float)).argmin(axis=1)


def _repair_empty(labels: np.ndarray, sq: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point farthest from its own centroid,
    drawn only from clusters that can spare one."""
    for j in range(k):
        if (labels == j).any():
            continue
        sizes = np.bincount(labels, minlength=k)
        own = sq[np.arange(len(labels)), labels]
        candidates = np.where(sizes[labels] > 1, own, -1.0)
        donor = int(np.argmax(candidates))
        if candidates[donor] < 0:
            continue  # every nonempty cluster is a singleton; leave as-is
        labels[donor] = j
    return labels


def _wcss(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(_sq_dists(points, centroids)[np.arange(len(labels)), labels].sum())


def kmeans(ds: Dataset, seeds: SeedSet, params: ClusterParams | None = None) -> Clustering:
    """Lloyd iteration from the given seeds.

    Stops when labels are unchanged, the largest centroid shift drops below
    tolerance, or max_iterations is reached. Deterministic in its inputs.
    """
    params = params or ClusterParams()
    if seeds.k > ds.m:
        raise ValueError("more seeds than points")
    points = ds.points
    centroids = seeds.centroids.copy()
    k = seeds.k
    labels = None
    converged = False
    prev_wcss = np.inf
    iteration = 0
    for iteration in range(1, params.max_iterations + 1):
        sq = _sq_dists(points, centroids)
        new_labels = sq.argmin(axis=1)
        new_labels = _repair_empty(new_labels, sq, k)
        shift = 0.0
        for j in range(k):
            members = points[new_labels == j]
            if len(members):
                mean = members.mean(axis=0)
                shift = max(shift, float(np.linalg.norm(mean - centroids[j])))
                centroids[j] = mean
        wcss = _wcss(points, centroids, new_labels)
        assert wcss <= prev_wcss + 1e-9 * max(1.0, wcss), \
            f"objective increased: {prev_wcss} -> {wcss}"
        prev_wcss = wcss
        if labels is not None and np.array_equal(labels, new_labels):
            labels = new_labels
            converged = True
            break
        labels = new_labels
        if shift < params.tolerance:
            converged = True
            break
    return Clustering(labels=labels, centroids=centroids,
                      iterations=iteration, converged=converged)


def _memberships(points: np.ndarray, centroids: np.ndarray, fuzzifier: float) -> np.ndarray:
    """Row-stochastic membership matrix; a point coincident with a centroid
    gets an indicator row (the standard singularity rule)."""
    sq = _sq_dists(points, centroids)
    u = np.zeros_like(sq)
    zero_rows = (sq == 0.0).any(axis=1)
    if zero_rows.any():
        hit = sq[zero_rows].argmin(axis=1)
        u[np.flatnonzero(zero_rows), hit] = 1.0
    regular = ~zero_rows
    if regular.any():
        inv = (1.0 / sq[regular]) ** (1.0 / (fuzzifier - 1.0))
        u[regular] = inv / inv.sum(axis=1, keepdims=True)
    return u


def fuzzy_cmeans(ds: Dataset, seeds: SeedSet, params: ClusterParams | None = None) -> Clustering:
    """Standard fuzzy c-means from the given seed centroids.

    Alternates the membership update u_ij ∝ (1/||x_i - c_j||^2)^(1/(mf-1))
    with the weighted centroid update, stopping when the largest membership
    change drops below tolerance. Hard labels are the row argmax.
    """
    params = params or ClusterParams()
    if seeds.k > ds.m:
        raise ValueError("more seeds than points")
    points = ds.points
    centroids = seeds.centroids.copy()
    mf = params.fuzzifier
    u = _memberships(points, centroids, mf)
    converged = False
    iteration = 0
    for iteration in range(1, params.max_iterations + 1):
        weights = u ** mf
        centroids = (weights.T @ points) / weights.sum(axis=0)[:, None]
        new_u = _memberships(points, centroids, mf)
        delta = float(np.abs(new_u - u).max())
        u = new_u
        if delta < params.tolerance:
            converged = True
            break
    return Clustering(labels=u.argmax(axis=1), centroids=centroids, membership=u,
                      iterations=iteration, converged=converged)


def save_clustering(clustering: Clustering, path) -> Path:
    """One row per point: label, then the membership row when fuzzy; final
    centroids in a trailing comment block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for i, lab in enumerate(clustering.labels):
            fields = [str(int(lab))]
            if clustering.membership is not None:
                fields += [repr(float(v)) for v in clustering.membership[i]]
            fh.write(",".join(fields) + "\n")
        fh.write("# centroids\n")
        for row in clustering.centroids:
            fh.write("# " + ",".join(repr(float(v)) for v in row) + "\n")
    return path


def load_clustering(path) -> Clustering:
    labels = []
    membership = []
    centroids = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# centroids") or not line.strip():
            continue
        if line.startswith("#"):
            centroids.append([float(v) for v in line[1:].strip().split(",")])
            continue
        fields = line.split(",")
        labels.append(int(fields[0]))
        if len(fields) > 1:
            membership.append([float(v) for v in fields[1:]])
    return Clustering(labels=np.array(labels),
                      centroids=np.array(centroids),
                      membership=np.array(membership) if membership else None)
