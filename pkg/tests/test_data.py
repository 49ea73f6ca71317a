import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedbench.data import (Dataset, MvnSpec, SYNTHETIC_SPECS, distance_matrix,
                            load_csv, make_synthetic, sample_mvn, save_csv,
                            save_synthetic, synthetic_params)


# ---------------------------------------------------------------- loading

def test_load_iris_shape(iris):
    assert iris.m == 150 and iris.n == 4 and iris.n_classes == 3


def test_load_single_row_no_labels(tmp_path):
    f = tmp_path / "one.csv"
    f.write_text("1.0,2.0\n")
    ds = load_csv(f)
    assert ds.m == 1 and ds.n == 2 and ds.truth is None


def test_load_remaps_labels_by_first_appearance(tmp_path):
    f = tmp_path / "three.csv"
    f.write_text("1.0,b\n2.0,a\n3.0,b\n")
    ds = load_csv(f, label_column=1)
    assert ds.truth.tolist() == [0, 1, 0]


def test_load_missing_file():
    with pytest.raises(FileNotFoundError):
        load_csv("does/not/exist.csv")


def test_load_ragged_rows_reports_row(tmp_path):
    f = tmp_path / "ragged.csv"
    f.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(ValueError, match="row 2"):
        load_csv(f)


def test_load_non_numeric_reports_row(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1.0,2.0\n3.0,oops\n")
    with pytest.raises(ValueError, match="row 2"):
        load_csv(f)


def test_load_label_column_out_of_range(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1.0,2.0\n")
    with pytest.raises(ValueError, match="label column"):
        load_csv(f, label_column=5)


def test_load_missing_values_are_hard_errors(tmp_path):
    f = tmp_path / "gap.csv"
    f.write_text("1.0,\n")
    with pytest.raises(ValueError):
        load_csv(f)


def test_whitespace_delimiter(tmp_path):
    f = tmp_path / "ws.txt"
    f.write_text("1.0  2.0\n3.0\t4.0\n")
    ds = load_csv(f, delimiter=None)
    assert ds.points.tolist() == [[1.0, 2.0], [3.0, 4.0]]


# ---------------------------------------------------------------- round trip

def test_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(7)
    pts = rng.standard_normal((23, 3)) * np.pi
    truth = np.array([0] + [1] * 10 + [0] * 6 + [2] * 6)
    ds = Dataset("rt", pts, truth=truth)
    path = save_csv(ds, tmp_path / "rt.csv")
    back = load_csv(path, label_column=3)
    assert (back.points == ds.points).all()
    assert (back.truth == ds.truth).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12), st.integers(1, 4), st.integers(0, 10_000))
def test_round_trip_property(tmp_path_factory, m, n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((m, n)) * rng.uniform(1e-3, 1e3)
    # canonical truth: labels appear in increasing order of first appearance
    truth = np.sort(rng.integers(0, min(m, 3), size=m))
    truth = np.unique(truth, return_inverse=True)[1]
    ds = Dataset("prop", pts, truth=truth)
    path = save_csv(ds, tmp_path_factory.mktemp("rt") / "ds.csv")
    back = load_csv(path, label_column=n)
    assert (back.points == ds.points).all()
    assert (back.truth == ds.truth).all()


def test_synthetic_round_trip(tmp_path):
    ds = make_synthetic(3, 11)
    path = save_csv(ds, tmp_path / "syn3.csv")
    back = load_csv(path, label_column=ds.n)
    assert (back.points == ds.points).all()
    assert (back.truth == ds.truth).all()


# ---------------------------------------------------------------- sampling

def test_sample_mvn_moments():
    spec = MvnSpec(mu=np.zeros(3), sigma=np.eye(3), count=10_000)
    for seed in range(5):
        draws = sample_mvn(spec, seed)
        assert np.abs(draws.mean(axis=0)).max() < 0.05
        assert np.abs(np.cov(draws.T) - np.eye(3)).max() < 0.1


def test_sample_mvn_degenerate_is_exact():
    spec = MvnSpec(mu=np.array([1.5, -2.5]), sigma=np.zeros((2, 2)), count=1)
    assert (sample_mvn(spec, 3) == spec.mu).all()


def test_sample_mvn_deterministic():
    spec = MvnSpec(mu=np.zeros(2), sigma=np.eye(2), count=5)
    assert (sample_mvn(spec, 42) == sample_mvn(spec, 42)).all()


def test_sample_mvn_mirrors_upper_triangle():
    # leading principal minors of the printed matrix are 1, 1, 1: no repair
    sigma = np.array([[1.0, 1.0, 1.0], [0.0, 2.0, 2.0], [0.0, 0.0, 3.0]])
    spec = MvnSpec(mu=np.array([7.0, 6.0, 9.0]), sigma=sigma, count=50_000)
    draws = sample_mvn(spec, 0)
    full = np.array([[1, 1, 1], [1, 2, 2], [1, 2, 3]], dtype=float)
    assert np.abs(np.cov(draws.T) - full).max() < 0.1


def test_sample_mvn_rejects_indefinite():
    spec = MvnSpec(mu=np.zeros(2), sigma=np.array([[1.0, 0.0], [0.0, -1.0]]), count=1)
    with pytest.raises(ValueError, match="indefinite"):
        sample_mvn(spec, 0)


# ---------------------------------------------------------------- synthetics

@pytest.mark.parametrize("sid,m,n,k", [
    (1, 350, 3, 2),
    (2, 400, 2, 4),
    (3, 300, 2, 3),
    (4, 800, 2, 6),
    (5, 180, 8, 3),
])
def test_synthetic_shapes(sid, m, n, k):
    ds = make_synthetic(sid, 0)
    assert (ds.m, ds.n, ds.k_hint) == (m, n, k)
    counts = np.bincount(ds.truth)
    assert counts.sum() == m and len(counts) == k
    # equal split with the remainder on the low generation indices
    assert sorted(counts.tolist()) == sorted(
        [m // k + (1 if j < m % k else 0) for j in range(k)])


def test_synthetic4_block_sizes():
    ds = make_synthetic(4, 0)
    assert sorted(np.bincount(ds.truth).tolist()) == [133, 133, 133, 133, 134, 134]


def test_synthetic_is_pure_function_of_seed():
    a = make_synthetic(2, 123)
    b = make_synthetic(2, 123)
    assert (a.points == b.points).all() and (a.truth == b.truth).all()
    c = make_synthetic(2, 124)
    assert not (a.points == c.points).all()


def test_synthetic_params_align_with_truth_labels():
    for sid in (1, 4):
        ds = make_synthetic(sid, 9)
        params = synthetic_params(sid, 9)
        for j, spec in enumerate(params):
            members = ds.points[ds.truth == j]
            assert len(members) == spec.count
            bound = 4 * np.sqrt(np.diag(spec.sigma).max() / spec.count)
            assert np.abs(members.mean(axis=0) - spec.mu).max() < bound


def test_synthetic_cluster_means_near_targets():
    # probabilistic bound: run 5 seeds, allow one failure per dataset id
    for sid in range(1, 6):
        failures = 0
        for seed in range(5):
            ds = make_synthetic(sid, seed)
            params = synthetic_params(sid, seed)
            ok = all(
                np.abs(ds.points[ds.truth == j].mean(axis=0) - spec.mu).max()
                < 4 * np.sqrt(np.diag(spec.sigma).max() / spec.count)
                for j, spec in enumerate(params)
            )
            failures += not ok
        assert failures <= 1, f"synthetic{sid}: cluster means drifted in {failures}/5 seeds"


def test_synthetic_truth_is_canonical():
    ds = make_synthetic(4, 3)
    seen = []
    for lab in ds.truth:
        if lab not in seen:
            seen.append(int(lab))
    assert seen == sorted(seen)


def test_save_synthetic_sidecar(tmp_path):
    data_path, meta_path = save_synthetic(1, 5, tmp_path / "syn1.csv")
    meta = json.loads(meta_path.read_text())
    assert meta["id"] == 1 and meta["seed"] == 5
    assert len(meta["clusters"]) == 2
    assert {c["count"] for c in meta["clusters"]} == {175}
    back = load_csv(data_path, label_column=meta["label_column"])
    ds = make_synthetic(1, 5)
    assert (back.points == ds.points).all()


def test_synthetic_rejects_bad_id():
    with pytest.raises(ValueError):
        make_synthetic(6, 0)


# ---------------------------------------------------------------- distances

def test_distance_matrix_345():
    d = distance_matrix(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert d[0, 1] == 5.0 and d[1, 0] == 5.0


def test_distance_matrix_single_point():
    assert distance_matrix(np.array([[7.0]])).tolist() == [[0.0]]


def test_distance_matrix_line():
    d = distance_matrix(np.array([[0.0], [1.0], [2.0]]))
    assert d.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 4), st.integers(0, 10_000))
def test_distance_matrix_invariants(m, n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((m, n)) * rng.uniform(0.1, 100)
    d = distance_matrix(pts)
    assert (np.diag(d) == 0).all()
    assert (d == d.T).all()
    assert (d >= 0).all() and np.isfinite(d).all()
    for _ in range(min(30, m ** 3)):
        i, j, l = rng.integers(0, m, size=3)
        assert d[i, l] <= d[i, j] + d[j, l] + 1e-9
