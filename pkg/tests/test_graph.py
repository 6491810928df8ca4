import io

import numpy as np
import pytest

import bisbm
from bisbm.errors import GraphFormatError, GraphValidationError, PartitionError

from conftest import random_bipartite, random_typed_partition


def k22():
    return bisbm.parse_edge_list(
        "0\t2\n0\t3\n1\t2\n1\t3\n", bisbm.types_by_convention(2, 4)
    )


class TestParsing:
    def test_basic_parse(self):
        g = bisbm.parse_edge_list("0\t2\n1\t2\n", bisbm.parse_types("0\ta\n1\ta\n2\tb\n"))
        assert g.num_vertices == 3
        assert g.total_edges == 2
        assert g.degree.tolist() == [1, 1, 2]

    def test_same_type_edge_rejected(self):
        with pytest.raises(GraphFormatError, match="same-type"):
            bisbm.parse_edge_list("0\t1\n", bisbm.parse_types("0\ta\n1\ta\n2\tb\n"))

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphFormatError, match="line 2"):
            bisbm.parse_edge_list("0\t2\nbogus line\n", bisbm.types_by_convention(2, 3))

    def test_unknown_vertex_id(self):
        with pytest.raises(GraphFormatError, match="unknown vertex id 9"):
            bisbm.parse_edge_list("0\t9\n", bisbm.types_by_convention(2, 3))

    def test_duplicate_lines_accumulate(self):
        g = bisbm.parse_edge_list("0\t2\n0\t2\n0\t2\t3\n", bisbm.types_by_convention(2, 3))
        assert g.total_edges == 5
        assert g.edges_w.tolist() == [5]

    def test_comments_and_blanks_ignored(self):
        g = bisbm.parse_edge_list(
            "# header\n\n0\t2\n  \n# trailing\n", bisbm.types_by_convention(2, 3)
        )
        assert g.total_edges == 1

    def test_southern_women_fixture(self):
        from importlib import resources

        data = resources.files("bisbm") / "data"
        types = bisbm.parse_types((data / "southern_women_types.tsv").read_text())
        g = bisbm.parse_edge_list((data / "southern_women_edges.tsv").read_text(), types)
        assert g.num_vertices == 32
        assert g.n_a == 18
        assert g.n_b == 14
        assert g.total_edges == 89

    def test_round_trip_identical(self, rng):
        g = random_bipartite(rng)
        text = bisbm.edge_list_text(g)
        g2 = bisbm.parse_edge_list(text, g.vertex_type)
        assert np.array_equal(g.edges_u, g2.edges_u)
        assert np.array_equal(g.edges_v, g2.edges_v)
        assert np.array_equal(g.edges_w, g2.edges_w)
        assert bisbm.edge_list_text(g2) == text

    def test_self_loop_rejected(self):
        with pytest.raises(GraphFormatError, match="self-loop"):
            bisbm.parse_edge_list("1\t1\n", bisbm.types_by_convention(2, 3))

    def test_types_file_round_trip(self):
        types = bisbm.types_by_convention(3, 7)
        assert np.array_equal(bisbm.parse_types(bisbm.types_text(types)), types)

    def test_empty_side_rejected(self):
        with pytest.raises(GraphValidationError):
            bisbm.BipartiteGraph(np.zeros(4, dtype=np.int8), [], [], [])


class TestProjection:
    def test_path_single_shared_neighbor(self):
        # a0 - b2 - a1
        g = bisbm.parse_edge_list("0\t2\n1\t2\n", bisbm.types_by_convention(2, 3))
        p = g.projection("a", weighted=True)
        assert p.num_vertices == 2
        assert p.edges_u.tolist() == [0]
        assert p.edges_v.tolist() == [1]
        assert p.edges_w.tolist() == [1]

    def test_k23_shared_count(self):
        g = bisbm.parse_edge_list(
            "0\t2\n0\t3\n0\t4\n1\t2\n1\t3\n1\t4\n", bisbm.types_by_convention(2, 5)
        )
        p = g.projection("a", weighted=True)
        assert p.edges_w.tolist() == [3]
        u = g.projection("a", weighted=False)
        assert u.edges_w.tolist() == [1]

    def test_matches_dense_matrix_square(self, rng):
        # off-diagonal of the side block of A^2, on 20 random graphs
        for _ in range(20):
            g = random_bipartite(rng, n_a=int(rng.integers(4, 12)),
                                 n_b=int(rng.integers(4, 12)),
                                 n_edges=int(rng.integers(10, 60)))
            a = g.adjacency()
            sq = a @ a
            for side in ("a", "b"):
                ids = g.side_vertices(side)
                block = sq[np.ix_(ids, ids)].copy()
                np.fill_diagonal(block, 0)
                p = g.projection(side, weighted=True)
                dense = np.zeros((ids.size, ids.size), dtype=np.int64)
                dense[p.edges_u, p.edges_v] = p.edges_w
                dense += dense.T
                assert np.array_equal(dense, block)

    def test_hard_case_projection_against_oracle(self):
        # N <= 200 downscaled variant of the overlapping-community instance
        inst = bisbm.make_hard_case(
            sizes_a=(20, 30, 10), sizes_b=(70, 70), mean_degree=8.0
        )
        net = bisbm.sample_network(inst, seed=11)
        a = net.adjacency()
        sq = a @ a
        ids = net.side_vertices("b")
        block = sq[np.ix_(ids, ids)].copy()
        np.fill_diagonal(block, 0)
        p = net.projection("b", weighted=True)
        dense = np.zeros((ids.size, ids.size), dtype=np.int64)
        dense[p.edges_u, p.edges_v] = p.edges_w
        dense += dense.T
        assert np.array_equal(dense, block)


class TestBlockStats:
    def test_k22_single_pair(self):
        stats = bisbm.block_stats(k22(), bisbm.Partition.typed([0, 0, 1, 1], 1, 1))
        assert stats.edge_counts[0, 1] == 4
        assert stats.group_sizes.tolist() == [2, 2]
        assert stats.group_degrees.tolist() == [4, 4]

    def test_singleton_groups(self, rng):
        g = random_bipartite(rng, n_a=5, n_b=5, n_edges=12)
        p = bisbm.Partition(np.arange(10), num_groups=10)
        stats = bisbm.block_stats(g, p)
        a = g.adjacency()
        assert np.array_equal(stats.edge_counts, a)  # diagonal zero: no loops
        assert np.array_equal(stats.group_degrees, g.degree)

    def test_against_brute_force(self, rng):
        g = random_bipartite(rng, n_a=25, n_b=25, n_edges=120)
        p = random_typed_partition(rng, g, 3, 4)
        stats = bisbm.block_stats(g, p)
        k = p.num_groups
        a = g.adjacency()
        expect = np.zeros((k, k), dtype=np.int64)
        for i in range(g.num_vertices):
            for j in range(g.num_vertices):
                if i != j:
                    expect[p.assignment[i], p.assignment[j]] += a[i, j]
        assert np.array_equal(stats.edge_counts, expect)
        assert stats.group_degrees.tolist() == stats.edge_counts.sum(axis=1).tolist()

    def test_degree_sum_identity(self, rng):
        for _ in range(5):
            g = random_bipartite(rng)
            p = random_typed_partition(rng, g, 2, 3)
            stats = bisbm.block_stats(g, p)
            assert stats.group_degrees.sum() == 2 * g.total_edges
            assert stats.group_sizes.sum() == g.num_vertices

    def test_relabel_invariance(self, rng):
        g = random_bipartite(rng)
        p = random_typed_partition(rng, g, 3, 2)
        stats = bisbm.block_stats(g, p)
        # swap the two type-b groups (indices 3 and 4)
        perm = np.array([0, 1, 2, 4, 3])
        p2 = bisbm.Partition.typed(perm[p.assignment], 3, 2)
        stats2 = bisbm.block_stats(g, p2)
        assert np.array_equal(stats2.edge_counts[np.ix_(perm, perm)], stats.edge_counts)
        assert np.array_equal(stats2.group_sizes[perm], stats.group_sizes)

    def test_length_mismatch(self, rng):
        g = random_bipartite(rng)
        with pytest.raises(PartitionError):
            bisbm.block_stats(g, bisbm.Partition(np.zeros(3, dtype=int), num_groups=1))


class TestPartition:
    def test_restrict_sizes(self):
        inst = bisbm.make_hard_case()
        pa = inst.partition.restrict(inst.vertex_type, "a")
        assert sorted(np.bincount(pa.assignment).tolist()) == [50, 100, 150]
        pb = inst.partition.restrict(inst.vertex_type, "b")
        assert np.bincount(pb.assignment).tolist() == [350, 350]

    def test_restrict_easy_case(self):
        inst = bisbm.make_easy_case()
        pa = inst.partition.restrict(inst.vertex_type, "a")
        assert pa.num_groups == 4
        assert pa.num_vertices == 1000

    def test_restrict_single_group_side(self):
        types = bisbm.types_by_convention(2, 4)
        p = bisbm.Partition.typed([0, 1, 2, 2], 2, 1)
        sub = p.restrict(types, "b")
        assert sub.num_groups == 1
        assert bisbm.nmi(sub, bisbm.Partition([0, 0])) == 0.0

    def test_restrict_mixed_type_rejected(self):
        types = bisbm.types_by_convention(2, 4)
        p = bisbm.Partition(np.array([0, 0, 0, 1]), num_groups=2)
        with pytest.raises(PartitionError):
            p.restrict(types, "a")

    def test_partition_file_round_trip(self, rng):
        p = bisbm.Partition(rng.integers(0, 4, 20), num_groups=4)
        text = bisbm.partition_text(p)
        p2 = bisbm.parse_partition(text)
        assert np.array_equal(p.assignment, p2.assignment)

    def test_canonical_relabel_invariant(self, rng):
        asn = rng.integers(0, 5, 30)
        p1 = bisbm.Partition(asn, num_groups=5)
        perm = rng.permutation(5)
        p2 = bisbm.Partition(perm[asn], num_groups=5)
        assert p1.canonical_key() == p2.canonical_key()
