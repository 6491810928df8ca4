"""Generative sampling from the (degree-corrected) bipartite block model and
construction of the synthetic benchmark instances.

Affinity units follow the model convention: in the uncorrected mode omega_rs
is the expected adjacency entry per vertex pair; in the corrected mode it is
the expected total edge count between groups r and s (per-vertex propensities
theta sum to 1 within each group, so theta_i theta_j omega_rs integrates to
omega_rs over a group pair).
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import BisbmError
from .graph import TYPE_A, TYPE_B, BipartiteGraph, Partition

# Per-pair Poisson sampling is exact but allocates an n_r x n_s block per
# group pair; beyond this many vertices the sampler switches to group-level
# Poisson totals with multinomial endpoint placement (same distribution).
PAIRWISE_SAMPLING_LIMIT = 20_000


@dataclass(frozen=True)
class BlockAffinity:
    """Symmetric K x K cross-type affinity matrix with its unit convention."""

    matrix: np.ndarray
    corrected: bool

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise BisbmError("affinity matrix must be square")
        if not np.allclose(m, m.T):
            raise BisbmError("affinity matrix must be symmetric")
        if (m < 0).any():
            raise BisbmError("affinity entries must be non-negative")
        object.__setattr__(self, "matrix", m)

    def check_bipartite_support(self, group_type):
        same = np.equal.outer(group_type, group_type)
        if (self.matrix[same] != 0).any():
            raise BisbmError("affinity must vanish on same-type group pairs")


@dataclass(frozen=True)
class PlantedInstance:
    """A planted partition, its affinity matrix, optional degree propensities,
    and a label naming the case."""

    omega: BlockAffinity
    partition: Partition
    theta: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        if self.partition.group_type is None:
            raise BisbmError("planted partition must be typed")
        if self.omega.matrix.shape[0] != self.partition.num_groups:
            raise BisbmError("affinity size does not match the group count")
        self.omega.check_bipartite_support(self.partition.group_type)
        if self.theta is not None:
            theta = np.asarray(self.theta, dtype=np.float64)
            if theta.shape != (self.partition.num_vertices,):
                raise BisbmError("theta must give one propensity per vertex")
            if (theta < 0).any():
                raise BisbmError("theta must be non-negative")
            sums = np.zeros(self.partition.num_groups)
            np.add.at(sums, self.partition.assignment, theta)
            occupied = self.partition.group_sizes() > 0
            if not np.allclose(sums[occupied], 1.0):
                raise BisbmError("theta must sum to 1 within each group")
            object.__setattr__(self, "theta", theta)
        if self.omega.corrected and self.theta is None:
            raise BisbmError("corrected instances need theta")
        if not self.omega.corrected and self.theta is not None:
            raise BisbmError("uncorrected instances do not take theta")

    @property
    def corrected(self):
        return self.omega.corrected

    @property
    def vertex_type(self):
        return self.partition.group_type[self.partition.assignment]

    def group_sizes(self):
        return self.partition.group_sizes()

    def expected_block_edges(self, omega=None):
        """Expected edge totals W_rs per unordered cross-type group pair,
        returned as a symmetric matrix."""
        omega = self.omega if omega is None else omega
        if omega.corrected:
            return omega.matrix.copy()
        sizes = self.group_sizes()
        return omega.matrix * np.outer(sizes, sizes)

    def expected_total_edges(self, omega=None):
        w = self.expected_block_edges(omega)
        gt = self.partition.group_type
        cross = np.not_equal.outer(gt, gt)
        return float(w[cross].sum()) / 2.0

    def to_dict(self):
        doc = {
            "mode": "degree-corrected" if self.corrected else "uncorrected",
            "K_a": self.partition.k_a,
            "K_b": self.partition.k_b,
            "sizes": self.group_sizes().tolist(),
            "omega": self.omega.matrix.tolist(),
            "label": self.label,
        }
        if self.theta is not None:
            doc["theta"] = self.theta.tolist()
        return doc

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc):
        try:
            mode = doc["mode"]
            k_a, k_b = int(doc["K_a"]), int(doc["K_b"])
            sizes = [int(s) for s in doc["sizes"]]
            omega = np.asarray(doc["omega"], dtype=np.float64)
            label = doc.get("label", "")
        except (KeyError, TypeError, ValueError) as exc:
            raise BisbmError(f"bad instance document: {exc}") from None
        if mode not in ("degree-corrected", "uncorrected"):
            raise BisbmError(f"bad instance mode {mode!r}")
        if len(sizes) != k_a + k_b:
            raise BisbmError("sizes must list one entry per group")
        assignment = np.repeat(np.arange(k_a + k_b), sizes)
        partition = Partition.typed(assignment, k_a, k_b)
        corrected = mode == "degree-corrected"
        theta = None
        if "theta" in doc and doc["theta"] is not None:
            theta = np.asarray(doc["theta"], dtype=np.float64)
        return cls(
            omega=BlockAffinity(omega, corrected=corrected),
            partition=partition,
            theta=theta,
            label=label,
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def with_omega(self, omega):
        return replace(self, omega=omega)


def interpolate_noise(instance, lam):
    """Affinity at mixing parameter lam: lam * planted + (1-lam) * random.

    The random component removes all block structure while preserving the
    planted instance's expected edge total: a uniform per-pair rate in the
    uncorrected mode, and kappa_r kappa_s-proportional block totals (expected
    degrees preserved) in the corrected mode.
    """
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise BisbmError(f"mixing parameter must be in [0, 1], got {lam}")
    gt = instance.partition.group_type
    cross = np.not_equal.outer(gt, gt)
    sizes = instance.group_sizes().astype(np.float64)
    w_planted = instance.expected_block_edges()
    m_star = w_planted[cross].sum() / 2.0
    if instance.corrected:
        kappa = w_planted.sum(axis=1)
        random_mat = np.where(cross, np.outer(kappa, kappa) / m_star, 0.0)
    else:
        n_a = sizes[gt == TYPE_A].sum()
        n_b = sizes[gt == TYPE_B].sum()
        rate = m_star / (n_a * n_b)
        random_mat = np.where(cross, rate, 0.0)
    mixed = lam * instance.omega.matrix + (1.0 - lam) * random_mat
    return BlockAffinity(mixed, corrected=instance.corrected)


def sample_network(instance, seed, omega=None):
    """Draw a bipartite multigraph from the instance (Poisson edge counts).

    Cross-type pair (i, j) receives multiplicity Poisson(omega_{g_i g_j})
    in the uncorrected mode or Poisson(theta_i theta_j omega_{g_i g_j}) in the
    corrected mode; same-type pairs get zero. Deterministic for a fixed seed.
    """
    omega = instance.omega if omega is None else omega
    if omega.corrected != instance.corrected:
        raise BisbmError("affinity mode does not match the instance mode")
    mat = omega.matrix
    if not np.isfinite(mat).all():
        raise BisbmError("affinity entries must be finite")
    rng = np.random.default_rng(seed)
    gt = instance.partition.group_type
    assignment = instance.partition.assignment
    k = instance.partition.num_groups
    members = [np.flatnonzero(assignment == r) for r in range(k)]
    pairwise = instance.partition.num_vertices <= PAIRWISE_SAMPLING_LIMIT

    us, vs, ws = [], [], []
    for r in range(k):
        if gt[r] != TYPE_A:
            continue
        for s in range(k):
            if gt[s] != TYPE_B:
                continue
            rate = mat[r, s]
            rows, cols = members[r], members[s]
            if rate == 0.0 or rows.size == 0 or cols.size == 0:
                continue
            if pairwise:
                if instance.corrected:
                    lam = rate * np.outer(
                        instance.theta[rows], instance.theta[cols]
                    )
                else:
                    lam = np.full((rows.size, cols.size), rate)
                counts = rng.poisson(lam)
                nz_r, nz_c = np.nonzero(counts)
                if nz_r.size:
                    us.append(rows[nz_r])
                    vs.append(cols[nz_c])
                    ws.append(counts[nz_r, nz_c])
            else:
                total_rate = rate if instance.corrected else rate * rows.size * cols.size
                total = rng.poisson(total_rate)
                if total == 0:
                    continue
                if instance.corrected:
                    ei = rng.choice(rows, size=total, p=instance.theta[rows])
                    ej = rng.choice(cols, size=total, p=instance.theta[cols])
                else:
                    ei = rows[rng.integers(0, rows.size, size=total)]
                    ej = cols[rng.integers(0, cols.size, size=total)]
                us.append(ei)
                vs.append(ej)
                ws.append(np.ones(total, dtype=np.int64))
    if us:
        us = np.concatenate(us)
        vs = np.concatenate(vs)
        ws = np.concatenate(ws)
    return BipartiteGraph(instance.vertex_type, us, vs, ws)


def make_easy_case(alpha=None, beta=None, gamma=None, delta=None,
                   n_per_side=1000, mean_degree=10.0):
    """Four non-overlapping community pairs with diagonal coupling.

    Uncorrected mode; K_a = K_b = 4, each side split evenly. Unset couplings
    default so that every vertex has expected degree `mean_degree`.
    """
    if n_per_side % 4:
        raise BisbmError("n_per_side must be divisible by 4")
    size = n_per_side // 4
    default = mean_degree / size
    couplings = [
        default if c is None else float(c) for c in (alpha, beta, gamma, delta)
    ]
    if any(c <= 0 for c in couplings):
        raise BisbmError("couplings must be positive")
    omega = np.zeros((8, 8))
    for i, c in enumerate(couplings):
        omega[i, 4 + i] = omega[4 + i, i] = c
    assignment = np.concatenate([
        np.repeat(np.arange(4), size),
        np.repeat(np.arange(4, 8), size),
    ])
    return PlantedInstance(
        omega=BlockAffinity(omega, corrected=False),
        partition=Partition.typed(assignment, 4, 4),
        label="easy",
    )


def make_hard_case(epsilon=None, gamma=None, sizes_a=(100, 150, 50),
                   sizes_b=(350, 350), degree_factor=2.0, mean_degree=10.0):
    """Overlapping-community, heterogeneous-degree instance.

    K_a = 3, K_b = 2: the first two type-a communities couple exclusively to
    one type-b community each (strength epsilon); the third couples equally
    to both (strength gamma). Degree-corrected mode: within every community
    half the vertices carry `degree_factor` times the propensity of the other
    half, normalized to sum to 1 per group. Unset strengths default so the
    expected mean degree is `mean_degree` with epsilon = 2 * gamma.
    """
    sizes_a = tuple(int(s) for s in sizes_a)
    sizes_b = tuple(int(s) for s in sizes_b)
    if len(sizes_a) != 3 or len(sizes_b) != 2:
        raise BisbmError("expected 3 type-a sizes and 2 type-b sizes")
    n = sum(sizes_a) + sum(sizes_b)
    m_star = mean_degree * n / 2.0
    # expected total = 2*epsilon + 2*gamma; defaults keep epsilon/gamma = 2
    if epsilon is None and gamma is None:
        gamma = m_star / 6.0
        epsilon = 2.0 * gamma
    elif epsilon is None or gamma is None:
        raise BisbmError("give both epsilon and gamma, or neither")
    epsilon, gamma = float(epsilon), float(gamma)
    if epsilon <= 0 or gamma <= 0:
        raise BisbmError("strengths must be positive")

    omega = np.zeros((5, 5))
    omega[0, 3] = omega[3, 0] = epsilon
    omega[1, 4] = omega[4, 1] = epsilon
    omega[2, 3] = omega[3, 2] = gamma
    omega[2, 4] = omega[4, 2] = gamma

    sizes = sizes_a + sizes_b
    assignment = np.repeat(np.arange(5), sizes)
    partition = Partition.typed(assignment, 3, 2)
    theta = np.empty(n)
    start = 0
    for size in sizes:
        hi = size // 2
        lo = size - hi
        base = 1.0 / (lo + degree_factor * hi)
        theta[start:start + hi] = degree_factor * base
        theta[start + hi:start + size] = base
        start += size
    return PlantedInstance(
        omega=BlockAffinity(omega, corrected=True),
        partition=partition,
        theta=theta,
        label="hard",
    )


def make_heterogeneous_case(n_a=300, n_b=800, k_a=3, k_b=3, mean_degree=13.0,
                            degree_factor=12.0, overlap=0.4):
    """Heterogeneous-degree stand-in used by the performance comparison.

    Degree-corrected mode with k_a = k_b communities per side, strong within-
    group degree heterogeneity, and partially overlapping block structure
    (`overlap` is the fraction of each group's edge mass spread uniformly over
    the other side's groups).
    """
    n = n_a + n_b
    m_star = mean_degree * n / 2.0
    k = k_a + k_b
    pattern = np.zeros((k, k))
    diag_pairs = min(k_a, k_b)
    share = m_star / diag_pairs
    for i in range(diag_pairs):
        pattern[i, k_a + i] = pattern[k_a + i, i] = share * (1.0 - overlap)
    for i in range(k_a):
        for j in range(k_b):
            pattern[i, k_a + j] += share * overlap * diag_pairs / (k_a * k_b)
            pattern[k_a + j, i] = pattern[i, k_a + j]
    sizes = [n_a // k_a + (1 if i < n_a % k_a else 0) for i in range(k_a)]
    sizes += [n_b // k_b + (1 if j < n_b % k_b else 0) for j in range(k_b)]
    assignment = np.repeat(np.arange(k), sizes)
    partition = Partition.typed(assignment, k_a, k_b)
    theta = np.empty(n)
    start = 0
    for size in sizes:
        hi = size // 2
        lo = size - hi
        base = 1.0 / (lo + degree_factor * hi)
        theta[start:start + hi] = degree_factor * base
        theta[start + hi:start + size] = base
        start += size
    return PlantedInstance(
        omega=BlockAffinity(pattern, corrected=True),
        partition=partition,
        theta=theta,
        label="heterogeneous",
    )


def make_clump_ring(num_clumps, clump_a=2, clump_b=2):
    """Deterministic ring of complete-bipartite clumps.

    Each clump is K_{clump_a, clump_b}; consecutive clumps are joined by one
    bridging edge from a type-a vertex of one clump to a type-b vertex of the
    next, closing a ring. Returns the graph and the per-clump planted
    partition (one type-a and one type-b group per clump).
    """
    num_clumps = int(num_clumps)
    clump_a, clump_b = int(clump_a), int(clump_b)
    if num_clumps < 3:
        raise BisbmError("need at least 3 clumps to close a ring")
    if clump_a < 1 or clump_b < 1:
        raise BisbmError("clump sizes must be >= 1")
    n_a = num_clumps * clump_a
    us, vs = [], []
    for c in range(num_clumps):
        a0 = c * clump_a
        b0 = n_a + c * clump_b
        for i in range(clump_a):
            for j in range(clump_b):
                us.append(a0 + i)
                vs.append(b0 + j)
        us.append(a0)  # bridge to the next clump's first b-vertex
        vs.append(n_a + ((c + 1) % num_clumps) * clump_b)
    types = np.concatenate([
        np.zeros(n_a, dtype=np.int8),
        np.ones(num_clumps * clump_b, dtype=np.int8),
    ])
    graph = BipartiteGraph(types, us, vs, np.ones(len(us), dtype=np.int64))
    assignment = np.concatenate([
        np.repeat(np.arange(num_clumps), clump_a),
        np.repeat(np.arange(num_clumps, 2 * num_clumps), clump_b),
    ])
    partition = Partition.typed(assignment, num_clumps, num_clumps)
    return graph, partition
