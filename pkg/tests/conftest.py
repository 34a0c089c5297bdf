import pytest

from widthlab.instances import random_graph

EDGE_PROBS = (0.2, 0.4, 0.6)
CORPUS_SIZE = 200


def corpus_graphs():
    """200 seeded random graphs, 3 to 8 vertices, mixed densities."""
    out = []
    for seed in range(CORPUS_SIZE):
        n = 3 + seed % 6
        out.append((seed, random_graph(n, EDGE_PROBS[seed % 3], seed)))
    return out


@pytest.fixture(scope="session")
def corpus():
    return corpus_graphs()
