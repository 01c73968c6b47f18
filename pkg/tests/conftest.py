import numpy as np
import pytest

from compreg import ingest, regress


@pytest.fixture(scope="session")
def bundled_table():
    return ingest.load_bundled()


@pytest.fixture(scope="session")
def bundled_dataset(bundled_table):
    return ingest.to_regression_dataset(bundled_table)


@pytest.fixture(scope="session")
def bundled_fit(bundled_dataset):
    return regress.fit(bundled_dataset, labels=ingest.COMPONENT_LABELS,
                       ref_label=ingest.REF_LABEL)


@pytest.fixture
def make_dataset():
    """Factory for random full-rank datasets."""

    def _make(seed=0, n=20, g=2, p=1, sigma=1.0):
        rng = np.random.default_rng(seed)
        z = rng.normal(size=(n, p))
        y = rng.normal(scale=sigma, size=(n, g)) + z @ rng.normal(size=(p, g))
        return regress.RegressionDataset(y, z)

    return _make


@pytest.fixture
def data_csv(tmp_path, bundled_table):
    """Bundled dataset written to a temp CSV for CLI runs."""
    path = tmp_path / "tableA.csv"
    path.write_text(ingest.serialize_matches(bundled_table), encoding="utf-8")
    return str(path)
