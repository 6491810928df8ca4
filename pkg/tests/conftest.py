import numpy as np
import pytest

import bisbm


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_bipartite(rng, n_a=12, n_b=18, n_edges=60, max_mult=3):
    types = bisbm.types_by_convention(n_a, n_a + n_b)
    us = rng.integers(0, n_a, n_edges)
    vs = n_a + rng.integers(0, n_b, n_edges)
    ws = rng.integers(1, max_mult + 1, n_edges)
    return bisbm.BipartiteGraph(types, us, vs, ws)


def random_typed_partition(rng, graph, k_a, k_b):
    asn = np.where(
        graph.vertex_type == 0,
        rng.integers(0, k_a, graph.num_vertices),
        k_a + rng.integers(0, k_b, graph.num_vertices),
    )
    return bisbm.Partition.typed(asn, k_a, k_b)


def random_untyped_partition(rng, graph, k):
    return bisbm.Partition(rng.integers(0, k, graph.num_vertices), num_groups=k)


ALL_MODELS = (bisbm.BISBM, bisbm.BISBM_DC, bisbm.SBM, bisbm.SBM_DC)
