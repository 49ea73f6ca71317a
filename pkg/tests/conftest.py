import numpy as np
import pytest

from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

REAL_DATASETS = {
    # name -> (filename, label column, k)
    "iris": ("iris.csv", 4, 3),
    "wine": ("wine.csv", 13, 3),
    "glass": ("glass.csv", 9, 6),
}


def real_dataset(name):
    """Load a bundled real dataset, skipping the test if the file is absent
    (glass is not redistributable from this build environment)."""
    from seedbench.data import load_csv

    filename, label_column, k = REAL_DATASETS[name]
    path = DATA_DIR / filename
    if not path.is_file():
        pytest.skip(f"{filename} not present in data/ (see README for how to supply it)")
    ds = load_csv(path, label_column=label_column)
    assert ds.n_classes == k, f"{name}: expected {k} classes, found {ds.n_classes}"
    return ds


@pytest.fixture
def iris():
    return real_dataset("iris")


@pytest.fixture
def wine():
    return real_dataset("wine")


@pytest.fixture
def line5():
    """Five points on a line; small enough to trace by hand."""
    from seedbench.data import Dataset

    return Dataset("line5", np.array([[0.0], [1.0], [2.0], [10.0], [11.0]]))
