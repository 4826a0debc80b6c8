import numpy as np
import pytest

from ionet.iot import FlowMatrix


def rng_for(*key) -> np.random.Generator:
    parts = key[0] if isinstance(key[0], tuple) else key
    packed = parts[0] if len(parts) == 1 else list(parts)
    return np.random.Generator(np.random.Philox(key=packed))


def random_matrix(key, n, density=0.4, loops=True, labels=None) -> FlowMatrix:
    rng = rng_for(key)
    cells = np.where(rng.random((n, n)) < density, 1.0 + 99.0 * rng.random((n, n)), 0.0)
    if not loops:
        np.fill_diagonal(cells, 0.0)
    labels = labels or tuple(f"s{i:02d}" for i in range(n))
    return FlowMatrix(tuple(labels), cells, "value", "2022")


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    return _write
