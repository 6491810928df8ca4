import numpy as np
import pytest

import bisbm
from bisbm.errors import BisbmError
from bisbm.modularity import modularity


def cliques_with_bridge(n=6):
    us, vs = [], []
    for base in (0, n):
        for i in range(n):
            for j in range(i + 1, n):
                us.append(base + i)
                vs.append(base + j)
    us.append(n - 1)
    vs.append(n)
    return bisbm.UnipartiteGraph(2 * n, us, vs, np.ones(len(us), dtype=np.int64))


class TestGreedyModularity:
    def test_two_cliques(self):
        g = cliques_with_bridge()
        p = bisbm.greedy_modularity(g)
        assert p.num_groups == 2
        expect = bisbm.Partition([0] * 6 + [1] * 6)
        assert bisbm.nmi(p, expect) == 1.0

    def test_complete_graph_single_community(self):
        n = 8
        us, vs = zip(*[(i, j) for i in range(n) for j in range(i + 1, n)])
        g = bisbm.UnipartiteGraph(n, us, vs, np.ones(len(us), dtype=np.int64))
        p = bisbm.greedy_modularity(g)
        # any Q-maximal output is acceptable; the single community attains Q=0
        assert modularity(g, p) >= -1e-12
        assert p.num_groups == 1

    def test_weighted_graph_respects_weights(self):
        # two pairs weakly connected when unweighted, strongly via weights
        us = [0, 2, 1, 0]
        vs = [1, 3, 2, 3]
        ws = [10, 10, 1, 1]
        g = bisbm.UnipartiteGraph(4, us, vs, ws)
        p = bisbm.greedy_modularity(g)
        assert bisbm.nmi(p, bisbm.Partition([0, 0, 1, 1])) == 1.0

    def test_output_is_q_peak_of_merge_path(self):
        g = cliques_with_bridge(5)
        p = bisbm.greedy_modularity(g)
        q = modularity(g, p)
        # merging everything into one community is never better here
        assert q > modularity(g, bisbm.Partition(np.zeros(10, dtype=int)))

    def test_empty_graph_rejected(self):
        g = bisbm.UnipartiteGraph(3, [], [], [])
        with pytest.raises(BisbmError):
            bisbm.greedy_modularity(g)

    def test_hard_case_projection_partial_recovery(self):
        """Weighted b-projection of the default overlapping-community instance:
        recovery is imperfect but not zero."""
        inst = bisbm.make_hard_case()
        net = bisbm.sample_network(inst, seed=8)
        proj = net.projection("b", weighted=True)
        p = bisbm.greedy_modularity(proj)
        score = bisbm.nmi(p, inst.partition.restrict(inst.vertex_type, "b"))
        assert 0.0 < score < 1.0
