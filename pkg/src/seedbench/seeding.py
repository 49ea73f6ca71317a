"""Initial-centroid selection: single-pass (SPSS), k-means++, KKZ, random.

All four methods pick actual data points. SPSS and KKZ are fully
deterministic; k-means++ and random selection are deterministic given their
rng seed. Tie-breaks always resolve to the lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset, distance_matrix

METHOD_SPSS = "spss"
METHOD_KMEANSPP = "kmeans++"
METHOD_KKZ = "kkz"
METHOD_RANDOM = "random"


@dataclass
class SeedSet:
    """k chosen centroids, their source row indices, and provenance."""

    method: str
    centroids: np.ndarray
    source_indices: np.ndarray
    rng_seed: int | None = None

    def __post_init__(self):
        self.centroids = np.asarray(self.centroids, dtype=float)
        self.source_indices = np.asarray(self.source_indices, dtype=int)
        if len(set(self.source_indices.tolist())) != len(self.source_indices):
            raise ValueError("source indices must be pairwise distinct")

    @property
    def k(self) -> int:
        return len(self.source_indices)

    def to_text(self) -> str:
        lines = [
            f"method={self.method}",
            f"k={self.k}",
            f"rng_seed={'none' if self.rng_seed is None else self.rng_seed}",
            "indices=" + ",".join(str(i) for i in self.source_indices),
        ]
        for row in self.centroids:
            lines.append("centroid=" + ",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SeedSet":
        fields = {}
        centroids = []
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, value = line.partition("=")
            if key == "centroid":
                centroids.append([float(v) for v in value.split(",")])
            else:
                fields[key] = value
        seed = None if fields["rng_seed"] == "none" else int(fields["rng_seed"])
        return cls(method=fields["method"],
                   centroids=np.array(centroids),
                   source_indices=[int(i) for i in fields["indices"].split(",")],
                   rng_seed=seed)

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path


@dataclass
class DensityProfile:
    """Row sums of the distance matrix plus the index of the minimum."""

    sumv: np.ndarray
    h: int


def sumv(dist: np.ndarray) -> DensityProfile:
    """sumv[i] = sum of distances from point i to all others; h = argmin
    (lowest index on ties). The minimiser is the highest-density point."""
    dist = np.asarray(dist, dtype=float)
    sums = dist.sum(axis=1)
    return DensityProfile(sumv=sums, h=int(np.argmin(sums)))


def _check_k(ds: Dataset, k: int):
    if not 1 <= k <= ds.m:
        raise ValueError(f"k must be in 1..{ds.m}, got {k}")


def _split_rng(rng):
    """Accept an int seed or a Generator; report the seed when we know it."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), (int(rng) if rng is not None else None)


def _max_d_fallback(d: np.ndarray, chosen: list[int]) -> int:
    """Farthest unchosen point; used when the running sum never exceeds y."""
    masked = d.copy()
    masked[chosen] = -1.0
    return int(np.argmax(masked))


def _threshold_scan(d: np.ndarray, y: float, chosen: list[int]) -> int:
    """First index (dataset order) where the running sum of d^2 exceeds y.

    Already-chosen points contribute d = 0 and cannot trigger the strict
    inequality, so they are never re-selected.
    """
    csum = np.cumsum(d ** 2)
    idx = int(np.searchsorted(csum, y, side="right"))
    if idx >= len(d) or idx in chosen:
        return _max_d_fallback(d, chosen)
    return idx


def seed_spss(ds: Dataset, k: int, squared_y: bool = False) -> SeedSet:
    """Single-pass seed selection.

    The first centroid is the highest-density point X_h. The distance budget
    y is the sum of distances from X_h to its floor(m/k) nearest other
    points; each further centroid is the first point, in dataset order, at
    which the running sum of squared nearest-centroid distances exceeds y.
    Deterministic: no randomness anywhere.

    squared_y sums squared neighbor distances instead, reconciling the units
    of the budget with the d^2 accumulator. Off by default.
    """
    _check_k(ds, k)
    dist = distance_matrix(ds)
    profile = sumv(dist)
    chosen = [profile.h]
    neighbors = np.sort(np.delete(dist[profile.h], profile.h))[: ds.m // k]
    y = float((neighbors ** 2).sum() if squared_y else neighbors.sum())
    while len(chosen) < k:
        d = dist[:, chosen].min(axis=1)
        chosen.append(_threshold_scan(d, y, chosen))
    return SeedSet(method=METHOD_SPSS, centroids=ds.points[chosen],
                   source_indices=chosen)


def seed_kmeanspp(ds: Dataset, k: int, rng, first_index: int | None = None) -> SeedSet:
    """k-means++ seeding: uniform first point, then each next point sampled
    with probability proportional to its squared distance from the nearest
    chosen centroid (drawn by prefix-sum inversion of a uniform y).

    first_index pins the first choice, bypassing the rng draw; useful for
    distributional tests.
    """
    _check_k(ds, k)
    rng, seed = _split_rng(rng)
    first = int(rng.integers(ds.m)) if first_index is None else first_index
    chosen = [first]
    dist = distance_matrix(ds)
    while len(chosen) < k:
        d = dist[:, chosen].min(axis=1)
        total = float((d ** 2).sum())
        if total == 0.0:
            # every remaining point coincides with a centroid: pick uniformly
            remaining = np.setdiff1d(np.arange(ds.m), chosen)
            chosen.append(int(rng.choice(remaining)))
            continue
        y = float(rng.uniform(0.0, total))
        chosen.append(_threshold_scan(d, y, chosen))
    return SeedSet(method=METHOD_KMEANSPP, centroids=ds.points[chosen],
                   source_indices=chosen, rng_seed=seed)


def seed_kkz(ds: Dataset, k: int) -> SeedSet:
    """KKZ seeding: highest-norm point first, then repeatedly the point
    farthest from its nearest chosen centroid. Deterministic."""
    _check_k(ds, k)
    norms = np.linalg.norm(ds.points, axis=1)
    chosen = [int(np.argmax(norms))]
    dist = distance_matrix(ds)
    while len(chosen) < k:
        d = dist[:, chosen].min(axis=1)
        chosen.append(_max_d_fallback(d, chosen))
    return SeedSet(method=METHOD_KKZ, centroids=ds.points[chosen],
                   source_indices=chosen)


def seed_random(ds: Dataset, k: int, rng) -> SeedSet:
    """k distinct indices drawn uniformly without replacement."""
    _check_k(ds, k)
    rng, seed = _split_rng(rng)
    chosen = rng.choice(ds.m, size=k, replace=False).tolist()
    return SeedSet(method=METHOD_RANDOM, centroids=ds.points[chosen],
                   source_indices=chosen, rng_seed=seed)
