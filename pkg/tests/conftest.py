from __future__ import annotations

import random

import pytest

from zykovsat.graph_io import erdos_renyi


def random_graphs(count, n_lo, n_hi, ps=(0.2, 0.5, 0.8), base=0):
    """Deterministic corpus of (seed, graph) pairs."""
    out = []
    for i in range(count):
        rng = random.Random(base + i)
        n = rng.randint(n_lo, n_hi)
        p = rng.choice(ps)
        out.append((base + i, erdos_renyi(n, p, base + i)))
    return out


@pytest.fixture
def tmp_col(tmp_path):
    def write(text, name="g.col"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write
