"""Datasets: delimited-file loading, Gaussian-mixture synthesis, distance geometry."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

# Eigenvalues below this floor are raised to it when a covariance matrix
# needs positive-semidefinite repair.
EIG_FLOOR = 1e-10
# A covariance whose most negative eigenvalue is beyond this (relative to the
# largest eigenvalue) is considered irreparably indefinite.
INDEFINITE_LIMIT = 1e-6


@dataclass
class Dataset:
    """A point matrix with optional ground-truth class labels.

    points is an (m, n) float array. truth, when present, holds m integer
    labels forming the contiguous range 0..c-1. Labels are evaluation-only.
    """

    name: str
    points: np.ndarray
    truth: np.ndarray | None = None
    k_hint: int | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] < 1 or self.points.shape[1] < 1:
            raise ValueError(f"points must be a non-empty 2-D matrix, got shape {self.points.shape}")
        if not np.isfinite(self.points).all():
            raise ValueError("points contain non-finite entries")
        if self.truth is not None:
            self.truth = np.asarray(self.truth, dtype=int)
            if self.truth.shape != (self.m,):
                raise ValueError(f"truth length {self.truth.shape} does not match m={self.m}")
            classes = np.unique(self.truth)
            if not np.array_equal(classes, np.arange(len(classes))):
                raise ValueError("truth labels must form a contiguous range 0..c-1")

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int | None:
        if self.truth is None:
            return None
        return int(self.truth.max()) + 1


@dataclass
class MvnSpec:
    """Parameters of one multivariate-normal cluster: mean, covariance, size."""

    mu: np.ndarray
    sigma: np.ndarray
    count: int

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.mu.ndim != 1:
            raise ValueError("mu must be a vector")
        if self.sigma.shape != (self.mu.size, self.mu.size):
            raise ValueError("sigma must be square and match mu's dimension")
        if self.count < 1:
            raise ValueError("count must be >= 1")


def _mirror_upper(sigma: np.ndarray) -> np.ndarray:
    """Mirror the upper triangle onto the lower to force exact symmetry."""
    upper = np.triu(sigma)
    return upper + np.triu(sigma, 1).T


def _covariance_factor(sigma: np.ndarray, name: str = "sigma") -> np.ndarray:
    """Return L with L @ L.T == sigma (after symmetrization and PSD repair).

    Negative eigenvalues within INDEFINITE_LIMIT of zero are clipped up to
    EIG_FLOOR; anything more negative is an error. Exact-zero eigenvalues are
    left alone so degenerate covariances sample without added noise.
    """
    sym = _mirror_upper(sigma)
    w, v = np.linalg.eigh(sym)
    scale = max(1.0, abs(w.max()))
    if w.min() < -INDEFINITE_LIMIT * scale:
        raise ValueError(
            f"{name} is indefinite beyond repair tolerance (min eigenvalue {w.min():.3e})"
        )
    if w.min() < -1e-12 * scale:
        log.warning("repaired %s: eigenvalues %s clipped to %g", name, w[w < EIG_FLOOR], EIG_FLOOR)
        w = np.where(w < EIG_FLOOR, EIG_FLOOR, w)
    else:
        w = np.clip(w, 0.0, None)  # numerical dust only; keeps exact zeros exact
    return v * np.sqrt(w)


def sample_mvn(spec: MvnSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw spec.count points from N(mu, sigma) via an affine transform of
    independent standard normals. Deterministic for a fixed rng state."""
    rng = np.random.default_rng(rng)
    L = _covariance_factor(spec.sigma)
    z = rng.standard_normal((spec.count, spec.mu.size))
    return spec.mu + z @ L.T


def _ratio_matrix(d: int) -> np.ndarray:
    return np.array([[min(i, j) / max(i, j) for j in range(1, d + 1)] for i in range(1, d + 1)])


def _min_matrix(d: int) -> np.ndarray:
    return np.array([[float(min(i, j)) for j in range(1, d + 1)] for i in range(1, d + 1)])


_SIGMA5_3 = _mirror_upper(np.array([
    [1, -1, -1, -1, -1, -1, -1, -1],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 3, 1, 1, 1, 1, 1],
    [0, 0, 0, 4, 2, 2, 2, 2],
    [0, 0, 0, 0, 5, 3, 3, 3],
    [0, 0, 0, 0, 0, 6, 4, 4],
    [0, 0, 0, 0, 0, 0, 7, 5],
    [0, 0, 0, 0, 0, 0, 0, 8],
], dtype=float))

# The five benchmark mixtures: (total size, list of (mu, sigma)). Cluster
# sizes follow the equal-split rule in make_synthetic.
SYNTHETIC_SPECS: dict[int, tuple[int, list[tuple[tuple, np.ndarray]]]] = {
    1: (350, [
        ((2, 3, 4), _ratio_matrix(3)),
        ((7, 6, 9), _min_matrix(3)),
    ]),
    2: (400, [
        ((-1, -1), np.diag([0.65, 0.65])),
        ((2, 2), np.array([[1.0, 0.7], [0.7, 1.0]])),
        ((-3, 3), np.diag([0.78, 0.78])),
        ((-6, 4), np.diag([0.5, 0.5])),
    ]),
    3: (300, [
        ((-1, -1), np.eye(2)),
        ((2, 2), np.eye(2)),
        ((-3, 3), np.diag([0.7, 0.7])),
    ]),
    4: (800, [
        ((-1, -1), np.diag([0.65, 0.65])),
        ((-8, -6), np.array([[1.0, 0.7], [0.7, 1.0]])),
        ((-3, 6), np.diag([0.2, 0.2])),
        ((-8, 14), np.diag([0.5, 0.5])),
        ((10, 12), np.diag([0.3, 0.3])),
        ((14, -14), np.diag([0.1, 0.1])),
    ]),
    5: (180, [
        ((1, 1, 2, 1, 0.5, 2, 1, 0.5), _ratio_matrix(8)),
        ((1, 1, 1, 1, 1, 1, 1, 1), _min_matrix(8)),
        ((1, -2, 0, -1, 0, -1, -2, -2), _SIGMA5_3),
    ]),
}


def _split_counts(m: int, k: int) -> list[int]:
    """Equal split: floor(m/k) per cluster, remainder to the lowest indices."""
    base, extra = divmod(m, k)
    return [base + (1 if j < extra else 0) for j in range(k)]


def _generate_synthetic(sid: int, rng) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Sample, shuffle, and canonicalize labels by first appearance.

    Returns (points, labels, order) where order[j] is the paper-order cluster
    index that canonical label j corresponds to.
    """
    if sid not in SYNTHETIC_SPECS:
        raise ValueError(f"synthetic id must be 1..5, got {sid}")
    rng = np.random.default_rng(rng)
    m, clusters = SYNTHETIC_SPECS[sid]
    counts = _split_counts(m, len(clusters))
    blocks = []
    labels = []
    for j, ((mu, sigma), count) in enumerate(zip(clusters, counts)):
        blocks.append(sample_mvn(MvnSpec(mu, sigma, count), rng))
        labels.extend([j] * count)
    points = np.vstack(blocks)
    labels = np.array(labels)
    perm = rng.permutation(m)
    points, labels = points[perm], labels[perm]
    # relabel by first appearance so written/reloaded truth is identical
    order = list(dict.fromkeys(labels.tolist()))
    remap = {old: new for new, old in enumerate(order)}
    labels = np.array([remap[v] for v in labels])
    return points, labels, order


def make_synthetic(sid: int, rng) -> Dataset:
    """Build benchmark mixture `sid` (1..5). Pure function of (sid, rng seed)."""
    points, labels, _ = _generate_synthetic(sid, rng)
    k = len(SYNTHETIC_SPECS[sid][1])
    return Dataset(name=f"synthetic{sid}", points=points, truth=labels, k_hint=k)


def synthetic_params(sid: int, seed) -> list[MvnSpec]:
    """Cluster parameters of make_synthetic(sid, seed), ordered so that
    params[j] generated the points with truth label j."""
    _, labels, order = _generate_synthetic(sid, seed)
    m, clusters = SYNTHETIC_SPECS[sid]
    counts = _split_counts(m, len(clusters))
    return [MvnSpec(clusters[o][0], clusters[o][1], counts[o]) for o in order]


def load_csv(path, label_column: int | None = None, delimiter: str | None = ",") -> Dataset:
    """Load a delimited text file, one point per row.

    label_column (by index) is extracted into truth and remapped to 0..c-1 by
    order of first appearance. A delimiter of None splits on whitespace.
    Ragged rows, non-numeric features and out-of-range label columns are
    reported with their row number.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such dataset file: {path}")
    rows = []
    raw_labels = []
    width = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(delimiter) if delimiter is not None else line.split()
            if width is None:
                width = len(fields)
                if label_column is not None and not -width <= label_column < width:
                    raise ValueError(f"row {lineno}: label column {label_column} out of range "
                                     f"for {width} fields")
            elif len(fields) != width:
                raise ValueError(f"row {lineno}: expected {width} fields, got {len(fields)}")
            if label_column is not None:
                raw_labels.append(fields[label_column])
                del fields[label_column]
            values = []
            for col, f in enumerate(fields):
                try:
                    v = float(f)
                except ValueError:
                    raise ValueError(f"row {lineno}: non-numeric feature field {f!r}") from None
                if not math.isfinite(v):
                    raise ValueError(f"row {lineno}: non-finite feature field {f!r}")
                values.append(v)
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    truth = None
    if label_column is not None:
        remap: dict[str, int] = {}
        truth = np.array([remap.setdefault(lab, len(remap)) for lab in raw_labels])
    return Dataset(name=path.stem, points=np.array(rows), truth=truth,
                   k_hint=None if truth is None else int(truth.max()) + 1)


def save_csv(ds: Dataset, path, delimiter: str = ",") -> Path:
    """Write a Dataset back to delimited text at full precision.

    Features are rendered with repr so reloading is bit-exact; truth, when
    present, is appended as the last column.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for i in range(ds.m):
            fields = [repr(float(v)) for v in ds.points[i]]
            if ds.truth is not None:
                fields.append(str(int(ds.truth[i])))
            fh.write(delimiter.join(fields) + "\n")
    return path


def save_synthetic(sid: int, seed: int, path, delimiter: str = ",") -> tuple[Path, Path]:
    """Write synthetic dataset `sid` plus a sidecar metadata file recording
    id, seed and the per-cluster (mu, sigma, count) in truth-label order."""
    ds = make_synthetic(sid, seed)
    out = save_csv(ds, path, delimiter=delimiter)
    meta = {
        "id": sid,
        "seed": seed,
        "label_column": ds.n,
        "clusters": [
            {"mu": spec.mu.tolist(), "sigma": spec.sigma.tolist(), "count": spec.count}
            for spec in synthetic_params(sid, seed)
        ],
    }
    meta_path = out.with_suffix(out.suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return out, meta_path


def distance_matrix(ds) -> np.ndarray:
    """Pairwise Euclidean distances as an (m, m) symmetric matrix with a zero
    diagonal. Accepts a Dataset or a raw point matrix."""
    pts = np.asarray(getattr(ds, "points", ds), dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))
