import numpy as np
import pytest

from rtentropy.datasets.dataset import Dataset

TABLE1_TRACE = """\
# id label function timestamp
1 IN Main 10728
2 IN FuncA 10750
3 OUT FuncA 10830
4 IN FuncB 10850
5 IN FuncC 10900
6 OUT FuncC 11000
7 OUT FuncB 11200
8 OUT Main 11290
"""


@pytest.fixture
def table1_text():
    return TABLE1_TRACE


@pytest.fixture
def table1_file(tmp_path):
    path = tmp_path / "t1.trace"
    path.write_text(TABLE1_TRACE)
    return path


def make_dataset(features, labels, prefix="i"):
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = np.column_stack([features, features, features])
    return Dataset(
        trace_ids=[f"{prefix}{i:04d}" for i in range(len(labels))],
        features=features,
        labels=list(labels),
    )


@pytest.fixture
def separable_data():
    """Five normal instances at h=0.1 and five failed at h=0.9, all three features equal."""
    return make_dataset([0.1] * 5 + [0.9] * 5, ["normal"] * 5 + ["failed"] * 5)


@pytest.fixture
def blobs_data():
    """400 normal and 100 failed instances in two well separated Gaussian blobs."""
    rng = np.random.default_rng(42)
    normal = rng.normal(loc=[2.0, 2.0, 2.0], scale=0.1, size=(400, 3))
    failed = rng.normal(loc=[1.0, 0.5, 0.75], scale=0.1, size=(100, 3))
    return make_dataset(np.vstack([normal, failed]), ["normal"] * 400 + ["failed"] * 100)


@pytest.fixture
def noisy_data():
    """500 instances whose labels only loosely follow the features."""
    rng = np.random.default_rng(7)
    x = rng.random((500, 3))
    p_failed = 0.2 + 0.4 * (x[:, 0] > 0.5)
    labels = np.where(rng.random(500) < p_failed, "failed", "normal")
    return make_dataset(x, labels)
