import numpy as np
import pytest

import bisbm
from bisbm import generate as gen
from bisbm.errors import BisbmError


class TestSampler:
    def test_zero_rate_empty_graph(self):
        inst = bisbm.make_easy_case(n_per_side=40)
        zero = bisbm.BlockAffinity(np.zeros((8, 8)), corrected=False)
        net = bisbm.sample_network(inst, seed=0, omega=zero)
        assert net.total_edges == 0
        assert net.num_vertices == 80

    def test_uncorrected_total_edge_mean(self):
        """Two groups of 500, rate 0.01: mean total 2500, rel. error < 5%
        averaged over 20 seeds."""
        asn = np.concatenate([np.zeros(500, dtype=int), np.ones(500, dtype=int)])
        inst = bisbm.PlantedInstance(
            omega=bisbm.BlockAffinity([[0.0, 0.01], [0.01, 0.0]], corrected=False),
            partition=bisbm.Partition.typed(asn, 1, 1),
            label="pair",
        )
        totals = [bisbm.sample_network(inst, seed=s).total_edges for s in range(20)]
        assert abs(np.mean(totals) - 2500.0) / 2500.0 < 0.05

    def test_corrected_expected_degrees(self):
        """Per-vertex expected degree theta_i * kappa_{g_i} within 3 standard
        errors over 50 seeds."""
        inst = bisbm.make_hard_case(
            sizes_a=(20, 30, 10), sizes_b=(70, 70), mean_degree=12.0
        )
        w = inst.expected_block_edges()
        kappa = w.sum(axis=1)
        target = inst.theta * kappa[inst.partition.assignment]
        n_seeds = 50
        acc = np.zeros(inst.partition.num_vertices)
        for s in range(n_seeds):
            acc += bisbm.sample_network(inst, seed=s).degree
        mean = acc / n_seeds
        se = np.sqrt(np.maximum(target, 0.25) / n_seeds)
        z = (mean - target) / se
        # per-vertex 3 s.e. with a multiple-comparison allowance over N vertices
        assert np.abs(z).max() <= 4.5
        assert (np.abs(z) > 3.0).mean() <= 0.025
        assert abs(z.mean()) < 0.5

    def test_never_same_type_edges(self, rng):
        inst = bisbm.make_hard_case(sizes_a=(10, 15, 5), sizes_b=(35, 35))
        for seed in range(10):
            net = bisbm.sample_network(inst, seed=seed)
            assert (net.vertex_type[net.edges_u] != net.vertex_type[net.edges_v]).all()

    def test_deterministic_for_seed(self):
        inst = bisbm.make_easy_case(n_per_side=80)
        a = bisbm.sample_network(inst, seed=42)
        b = bisbm.sample_network(inst, seed=42)
        assert np.array_equal(a.edges_u, b.edges_u)
        assert np.array_equal(a.edges_w, b.edges_w)

    def test_block_count_moments(self):
        """Mean m_rs over 100 seeds within 3 s.e. of the analytic expectation,
        for every cross-type block, in both modes."""
        for inst in (
            bisbm.make_easy_case(n_per_side=40, mean_degree=6.0),
            bisbm.make_hard_case(sizes_a=(10, 15, 5), sizes_b=(35, 35), mean_degree=8.0),
        ):
            w = inst.expected_block_edges()
            k = inst.partition.num_groups
            n_seeds = 100
            acc = np.zeros((k, k))
            for s in range(n_seeds):
                net = bisbm.sample_network(inst, seed=s)
                acc += bisbm.block_stats(net, inst.partition).edge_counts
            mean = acc / n_seeds
            gt = inst.partition.group_type
            cross = np.not_equal.outer(gt, gt)
            se = np.sqrt(np.maximum(w, 0.25) / n_seeds)
            assert (np.abs(mean - w)[cross] <= 3.0 * se[cross] + 0.25).all()

    def test_group_level_strategy_same_moments(self, monkeypatch):
        """The >limit sampling path (group totals + endpoint placement) matches
        the per-pair path in distribution; verified by block moments."""
        inst = bisbm.make_hard_case(
            sizes_a=(10, 15, 5), sizes_b=(35, 35), mean_degree=8.0
        )
        w = inst.expected_block_edges()
        k = inst.partition.num_groups
        n_seeds = 150

        def block_means():
            acc = np.zeros((k, k))
            for s in range(n_seeds):
                net = bisbm.sample_network(inst, seed=s)
                acc += bisbm.block_stats(net, inst.partition).edge_counts
            return acc / n_seeds

        mean_pair = block_means()
        monkeypatch.setattr(gen, "PAIRWISE_SAMPLING_LIMIT", 0)
        mean_group = block_means()
        gt = inst.partition.group_type
        cross = np.not_equal.outer(gt, gt)
        se = np.sqrt(np.maximum(w, 0.25) / n_seeds)
        for mean in (mean_pair, mean_group):
            assert (np.abs(mean - w)[cross] <= 3.5 * se[cross] + 0.25).all()

    def test_uniform_theta_reduces_to_uncorrected(self):
        """Corrected sampling with uniform theta matches the reparameterized
        uncorrected sampler in its block moments."""
        sizes = [20, 20, 25, 25]
        asn = np.repeat(np.arange(4), sizes)
        part = bisbm.Partition.typed(asn, 2, 2)
        w = np.zeros((4, 4))
        w[0, 2] = w[2, 0] = 60.0
        w[1, 3] = w[3, 1] = 80.0
        w[0, 3] = w[3, 0] = 30.0
        theta = np.concatenate([np.full(s, 1.0 / s) for s in sizes])
        inst_c = bisbm.PlantedInstance(
            omega=bisbm.BlockAffinity(w, corrected=True),
            partition=part, theta=theta, label="c",
        )
        rates = w / np.outer(sizes, sizes)
        inst_u = bisbm.PlantedInstance(
            omega=bisbm.BlockAffinity(rates, corrected=False),
            partition=part, label="u",
        )
        n_seeds = 120
        acc_c = np.zeros((4, 4))
        acc_u = np.zeros((4, 4))
        for s in range(n_seeds):
            acc_c += bisbm.block_stats(
                bisbm.sample_network(inst_c, seed=s), part
            ).edge_counts
            acc_u += bisbm.block_stats(
                bisbm.sample_network(inst_u, seed=10_000 + s), part
            ).edge_counts
        se = np.sqrt(np.maximum(w, 0.25) * 2.0 / n_seeds)
        assert (np.abs(acc_c / n_seeds - acc_u / n_seeds) <= 3.0 * se + 0.5).all()


class TestInterpolation:
    def test_lambda_one_identity(self):
        inst = bisbm.make_hard_case()
        mixed = bisbm.interpolate_noise(inst, 1.0)
        assert np.array_equal(mixed.matrix, inst.omega.matrix)

    def test_lambda_zero_uncorrected_uniform_rate(self):
        inst = bisbm.make_easy_case()
        mixed = bisbm.interpolate_noise(inst, 0.0)
        gt = inst.partition.group_type
        cross = np.not_equal.outer(gt, gt)
        vals = mixed.matrix[cross]
        # structureless: one uniform per-pair rate on every cross-type pair
        assert np.allclose(vals, vals[0])
        assert vals[0] == pytest.approx(
            inst.expected_total_edges() / (1000.0 * 1000.0)
        )

    def test_total_preserved_all_lambda(self):
        for inst in (bisbm.make_easy_case(), bisbm.make_hard_case()):
            m_star = inst.expected_total_edges()
            for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
                mixed = bisbm.interpolate_noise(inst, lam)
                assert inst.expected_total_edges(mixed) == pytest.approx(
                    m_star, rel=1e-12
                )

    def test_affine_in_lambda(self):
        for inst in (bisbm.make_easy_case(), bisbm.make_hard_case()):
            end0 = bisbm.interpolate_noise(inst, 0.0).matrix
            end1 = bisbm.interpolate_noise(inst, 1.0).matrix
            for lam in (0.2, 0.5, 0.9):
                mixed = bisbm.interpolate_noise(inst, lam).matrix
                assert np.allclose(mixed, lam * end1 + (1 - lam) * end0, rtol=0, atol=1e-15)

    def test_corrected_noise_preserves_group_degrees(self):
        inst = bisbm.make_hard_case()
        w_planted = inst.expected_block_edges()
        kappa = w_planted.sum(axis=1)
        mixed = bisbm.interpolate_noise(inst, 0.0)
        assert np.allclose(mixed.matrix.sum(axis=1), kappa)

    def test_out_of_range_rejected(self):
        inst = bisbm.make_easy_case()
        for lam in (-0.1, 1.1):
            with pytest.raises(BisbmError):
                bisbm.interpolate_noise(inst, lam)


class TestCaseBuilders:
    def test_easy_group_structure(self):
        inst = bisbm.make_easy_case()
        assert inst.partition.k_a == 4 and inst.partition.k_b == 4
        assert np.bincount(inst.partition.assignment).tolist() == [250] * 8

    def test_easy_default_coupling(self):
        inst = bisbm.make_easy_case()
        assert inst.omega.matrix[0, 4] == pytest.approx(10.0 / 250.0)

    def test_easy_symmetric_under_component_permutation(self):
        inst = bisbm.make_easy_case()
        w = inst.omega.matrix
        # permute components (1<->2) on both sides simultaneously
        perm = np.array([1, 0, 2, 3, 5, 4, 6, 7])
        assert np.array_equal(w[np.ix_(perm, perm)], w)

    def test_easy_size_divisibility(self):
        with pytest.raises(BisbmError):
            bisbm.make_easy_case(n_per_side=10)

    def test_hard_theta_values(self):
        inst = bisbm.make_hard_case()
        asn = inst.partition.assignment
        g0 = inst.theta[asn == 0]
        assert g0.size == 100
        # half at 2x, half at x, summing to 1: x = 1/150
        assert np.isclose(sorted(set(np.round(g0, 12)))[0], 1.0 / 150.0)
        assert np.isclose(sorted(set(np.round(g0, 12)))[1], 2.0 / 150.0)
        sums = np.zeros(5)
        np.add.at(sums, asn, inst.theta)
        assert np.allclose(sums, 1.0)

    def test_hard_third_community_couples_equally(self):
        inst = bisbm.make_hard_case()
        w = inst.omega.matrix
        assert w[2, 3] == w[2, 4] > 0
        assert w[0, 4] == 0 and w[1, 3] == 0

    def test_hard_block_pattern_at_lambda_one(self):
        """Sampled adjacency sorted by the planted partition shows the
        five-block pattern: dense diagonal couplings, overlap row, empty
        off-blocks (checked as block-density ordering)."""
        inst = bisbm.make_hard_case()
        net = bisbm.sample_network(inst, seed=3)
        stats = bisbm.block_stats(net, inst.partition)
        sizes = inst.partition.group_sizes()
        dens = stats.edge_counts / np.outer(sizes, sizes)
        d = {(r, s): dens[r, s] for r in range(3) for s in (3, 4)}
        assert d[(0, 3)] > 5 * d[(0, 4)]
        assert d[(1, 4)] > 5 * d[(1, 3)]
        assert d[(2, 3)] > 5 * d[(0, 4)]
        assert abs(d[(2, 3)] - d[(2, 4)]) < 0.5 * d[(2, 3)]

    def test_hard_invalid_args(self):
        with pytest.raises(BisbmError):
            bisbm.make_hard_case(epsilon=1.0, gamma=None)
        with pytest.raises(BisbmError):
            bisbm.make_hard_case(epsilon=-1.0, gamma=2.0)


class TestClumpRing:
    def test_counts(self):
        g, p = bisbm.make_clump_ring(10, 2, 2)
        assert g.num_vertices == 40
        assert g.total_edges == 10 * 4 + 10
        assert p.k_a == 10 and p.k_b == 10

    def test_bipartite_valid_all_params(self):
        for c, (ca, cb) in ((3, (1, 1)), (5, (2, 3)), (8, (4, 2))):
            g, p = bisbm.make_clump_ring(c, ca, cb)
            assert (g.vertex_type[g.edges_u] != g.vertex_type[g.edges_v]).all()
            assert g.total_edges == c * ca * cb + c

    def test_invalid_counts(self):
        with pytest.raises(BisbmError):
            bisbm.make_clump_ring(2, 2, 2)
        with pytest.raises(BisbmError):
            bisbm.make_clump_ring(5, 0, 2)


class TestInstanceSerialization:
    def test_json_round_trip(self):
        for inst in (bisbm.make_easy_case(n_per_side=40), bisbm.make_hard_case()):
            doc = inst.to_json()
            back = bisbm.PlantedInstance.from_json(doc)
            assert np.allclose(back.omega.matrix, inst.omega.matrix)
            assert back.corrected == inst.corrected
            assert np.array_equal(back.partition.assignment, inst.partition.assignment)
            if inst.theta is not None:
                assert np.allclose(back.theta, inst.theta)
            assert back.label == inst.label

    def test_bad_documents_rejected(self):
        with pytest.raises(BisbmError):
            bisbm.PlantedInstance.from_json('{"mode": "nope"}')
        with pytest.raises(BisbmError):
            bisbm.PlantedInstance.from_json(
                '{"mode": "uncorrected", "K_a": 1, "K_b": 1, "sizes": [2], "omega": [[0,1],[1,0]]}'
            )
