"""Cluster validity: pair-counting indices, error rate, silhouette, DB, CS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .data import distance_matrix

MAX_MATCH_LABELS = 64

# Emission order used by every table and CSV row.
METRIC_COLUMNS = ("CS", "ARI", "RI", "HI", "SIL", "DB", "err")


@dataclass
class PairCounts:
    """Unordered point-pair agreement counts between two partitions.

    a: same cluster / same class, b: same/different, c: different/same,
    d: different/different. a+b+c+d = m(m-1)/2.
    """

    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass
class MetricBundle:
    cs: float
    ari: float
    ri: float
    hi: float
    sil: float
    db: float
    err: float

    def as_row(self) -> tuple[float, ...]:
        """Values in METRIC_COLUMNS order."""
        return (self.cs, self.ari, self.ri, self.hi, self.sil, self.db, self.err)

    @classmethod
    def from_row(cls, row) -> "MetricBundle":
        cs, ari, ri, hi, sil, db, err = row
        return cls(cs=cs, ari=ari, ri=ri, hi=hi, sil=sil, db=db, err=err)


def _as_labels(x) -> np.ndarray:
    arr = np.asarray(x, dtype=int)
    if arr.ndim != 1:
        raise ValueError("labels must be a 1-D vector")
    return arr


def pair_counts(labels, truth) -> PairCounts:
    """Count pair agreements via the contingency table (O(m + r*c))."""
    labels, truth = _as_labels(labels), _as_labels(truth)
    if labels.shape != truth.shape:
        raise ValueError("label vectors differ in length")
    m = len(labels)
    if m < 2:
        raise ValueError("need at least 2 points to form pairs")
    cont = _contingency(labels, truth)
    same_both = int((cont * (cont - 1) // 2).sum())
    same_cluster = int(sum(s * (s - 1) // 2 for s in cont.sum(axis=1)))
    same_class = int(sum(s * (s - 1) // 2 for s in cont.sum(axis=0)))
    total = m * (m - 1) // 2
    a = same_both
    b = same_cluster - same_both
    c = same_class - same_both
    return PairCounts(a=a, b=b, c=c, d=total - a - b - c)


def _contingency(labels: np.ndarray, truth: np.ndarray) -> np.ndarray:
    r, c = int(labels.max()) + 1, int(truth.max()) + 1
    cont = np.zeros((r, c), dtype=np.int64)
    np.add.at(cont, (labels, truth), 1)
    return cont


def rand_index(pc: PairCounts) -> float:
    return (pc.a + pc.d) / pc.total


def adjusted_rand(pc: PairCounts) -> float:
    """Hubert-Arabie chance correction, in its pair-counting form."""
    num = 2 * (pc.a * pc.d - pc.b * pc.c)
    den = (pc.a + pc.b) * (pc.b + pc.d) + (pc.a + pc.c) * (pc.c + pc.d)
    if den == 0:
        # both partitions trivial: identical iff no disagreeing pairs
        return 1.0 if pc.b == 0 and pc.c == 0 else 0.0
    return num / den


def hubert_index(pc: PairCounts) -> float:
    """(agreements - disagreements) / total pairs; equals 2*RI - 1."""
    return (pc.a + pc.d - pc.b - pc.c) / pc.total


def error_rate(labels, truth) -> float:
    """100 * misclassified / m under the best one-to-one matching of cluster
    labels to class labels (optimal assignment on the contingency table)."""
    labels, truth = _as_labels(labels), _as_labels(truth)
    if labels.shape != truth.shape:
        raise ValueError("label vectors differ in length")
    cont = _contingency(labels, truth)
    if max(cont.shape) > MAX_MATCH_LABELS:
        raise ValueError(f"more than {MAX_MATCH_LABELS} labels in one partition")
    rows, cols = linear_sum_assignment(cont, maximize=True)
    agree = int(cont[rows, cols].sum())
    return (len(labels) - agree) / len(labels) * 100.0


def match_centroids(obtained: np.ndarray, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Best bijection between two centroid sets, minimising total distance.

    Returns (perm, dists) with obtained[perm[j]] matched to reference[j].
    """
    obtained = np.asarray(obtained, float)
    reference = np.asarray(reference, float)
    gap = np.sqrt(((obtained[:, None, :] - reference[None, :, :]) ** 2).sum(axis=-1))
    rows, cols = linear_sum_assignment(gap)
    perm = np.empty(len(cols), dtype=int)
    perm[cols] = rows
    return perm, gap[rows, cols][np.argsort(cols)]


def _points_of(ds) -> np.ndarray:
    return np.asarray(getattr(ds, "points", ds), dtype=float)


def silhouette(ds, labels) -> float:
    """Mean over points of (b_i - a_i)/max(a_i, b_i); a_i is the mean
    distance to the point's own cluster (excluding itself), b_i the smallest
    mean distance to another cluster. Singletons contribute 0."""
    points = _points_of(ds)
    labels = _as_labels(labels)
    k = int(labels.max()) + 1
    if k < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    sizes = np.bincount(labels, minlength=k)
    if (sizes == 0).any():
        raise ValueError("every cluster must be nonempty")
    dist = distance_matrix(points)
    m = len(labels)
    sums = np.empty((m, k))
    for j in range(k):
        sums[:, j] = dist[:, labels == j].sum(axis=1)
    own = np.arange(m), labels
    a = sums[own] / np.maximum(sizes[labels] - 1, 1)
    means = sums / sizes
    means[own] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    valid = (sizes[labels] > 1) & (denom > 0)
    scores = np.where(valid, (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    return float(scores.mean())


def davies_bouldin(ds, labels, centroids) -> float:
    """Mean over clusters of the worst (S_i + S_j)/d(c_i, c_j) ratio, with
    S_i the mean member distance to centroid c_i. Lower is better."""
    points = _points_of(ds)
    labels = _as_labels(labels)
    centroids = np.asarray(centroids, float)
    k = centroids.shape[0]
    if k < 2:
        raise ValueError("Davies-Bouldin needs at least 2 clusters")
    scatter = np.empty(k)
    for j in range(k):
        members = points[labels == j]
        if len(members) == 0:
            raise ValueError(f"cluster {j} is empty")
        scatter[j] = np.linalg.norm(members - centroids[j], axis=1).mean()
    sep = distance_matrix(centroids)
    if (sep[~np.eye(k, dtype=bool)] == 0).any():
        raise ValueError("coincident centroids make Davies-Bouldin degenerate")
    worst = np.empty(k)
    for i in range(k):
        others = [j for j in range(k) if j != i]
        worst[i] = max((scatter[i] + scatter[j]) / sep[i, j] for j in others)
    return float(worst.mean())


def cs_measure(ds, labels, centroids) -> float:
    """Ratio of mean per-cluster maximum intra distances to summed minimum
    inter-centroid distances. Lower is better."""
    points = _points_of(ds)
    labels = _as_labels(labels)
    centroids = np.asarray(centroids, float)
    k = centroids.shape[0]
    if k < 2:
        raise ValueError("CS needs at least 2 clusters")
    dist = distance_matrix(points)
    numerator = 0.0
    for j in range(k):
        idx = np.flatnonzero(labels == j)
        if len(idx) == 0:
            raise ValueError(f"cluster {j} is empty")
        numerator += dist[np.ix_(idx, idx)].max(axis=1).mean()
    sep = distance_matrix(centroids)
    np.fill_diagonal(sep, np.inf)
    mins = sep.min(axis=1)
    denominator = float(mins.sum())
    if denominator == 0:
        raise ValueError("coincident centroids make CS degenerate")
    return numerator / denominator


def evaluate(ds, clustering, truth=None) -> MetricBundle:
    """All seven quantities for one clustering against ground truth."""
    truth = truth if truth is not None else ds.truth
    if truth is None:
        raise ValueError("ground truth required to evaluate")
    labels = clustering.labels
    pc = pair_counts(labels, truth)
    return MetricBundle(
        cs=cs_measure(ds, labels, clustering.centroids),
        ari=adjusted_rand(pc),
        ri=rand_index(pc),
        hi=hubert_index(pc),
        sil=silhouette(ds, labels),
        db=davies_bouldin(ds, labels, clustering.centroids),
        err=error_rate(labels, truth),
    )
