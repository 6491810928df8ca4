"""Profile log-likelihood objectives for the four block-model variants.

All objectives sum over ordered group pairs (each unordered cross-type pair
contributes twice) with the 0*ln 0 = 0 convention, so scores from different
code paths are directly comparable:

    bipartite,  uncorrected:  sum_{r,s: T_r != T_s} m_rs ln(m_rs / (n_r n_s))
    bipartite,  corrected:    sum_{r,s: T_r != T_s} m_rs ln(m_rs / (k_r k_s))
    unipartite, uncorrected:  sum_{r,s}             m_rs ln(m_rs / (n_r n_s))
    unipartite, corrected:    sum_{r,s}             m_rs ln(m_rs / (k_r k_s))

where k_r is the group degree sum and the unipartite sums include the doubled
diagonal m_rr. For pure-type partitions of bipartite graphs the unipartite
objective equals the bipartite one term by term (all same-type terms vanish),
which is what makes cross-model score comparisons meaningful.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BisbmError, PartitionError
from .graph import Partition, block_stats

BIPARTITE = "bipartite"
UNIPARTITE = "unipartite"


@dataclass(frozen=True)
class ModelSpec:
    """Which objective to optimize: graph structure x degree correction."""

    structure: str = BIPARTITE
    corrected: bool = True

    def __post_init__(self):
        if self.structure not in (BIPARTITE, UNIPARTITE):
            raise BisbmError(f"unknown structure {self.structure!r}")

    @property
    def bipartite(self):
        return self.structure == BIPARTITE

    def label(self):
        base = "bisbm" if self.bipartite else "sbm"
        return base + ("_dc" if self.corrected else "")


BISBM = ModelSpec(BIPARTITE, corrected=False)
BISBM_DC = ModelSpec(BIPARTITE, corrected=True)
SBM = ModelSpec(UNIPARTITE, corrected=False)
SBM_DC = ModelSpec(UNIPARTITE, corrected=True)


def _check_partition(graph, partition, model):
    if not isinstance(partition, Partition):
        raise PartitionError("expected a Partition")
    if partition.num_vertices != graph.num_vertices:
        raise PartitionError("partition does not cover the graph's vertex set")
    if model.bipartite:
        if not hasattr(graph, "vertex_type"):
            raise PartitionError("bipartite model requires a bipartite graph")
        if partition.group_type is None or not partition.matches_types(graph):
            raise PartitionError(
                "bipartite model requires a pure-type partition with matching group types"
            )


def objective_from_stats(stats, model, group_type, log_table):
    """Canonical objective evaluation; every scorer in the package funnels here.

    The loop order (r ascending, then s ascending) is fixed so that independently
    computed scores of the same partition are bit-for-bit identical.
    """
    m = stats.edge_counts
    c = stats.group_degrees if model.corrected else stats.group_sizes
    k = stats.num_groups
    lt = log_table
    bip = model.bipartite
    acc = 0.0
    for r in range(k):
        mr = m[r]
        cr = lt[c[r]]
        for s in range(k):
            if bip and group_type[r] == group_type[s]:
                continue
            mm = mr[s]
            if mm > 0:
                acc += mm * (lt[mm] - cr - lt[c[s]])
    return float(acc)


def log_likelihood(graph, partition, model):
    """Profile log-likelihood of `partition` under `model`, up to constants.

    Raises on an empty graph, and on a mixed-type or untyped partition when the
    model is bipartite.
    """
    model = _as_model(model)
    _check_partition(graph, partition, model)
    if graph.total_edges == 0:
        raise BisbmError("log-likelihood is undefined for an empty graph")
    stats = block_stats(graph, partition)
    gt = partition.group_type if partition.group_type is not None else None
    if model.bipartite and gt is None:
        raise PartitionError("bipartite model requires typed groups")
    return objective_from_stats(stats, model, gt, graph.log_table)


def adjusted_score(graph, partition, corrected):
    """Score a partition under the common unipartite objective.

    Used to compare bipartite and unipartite fits on one scale; for pure-type
    partitions this equals the bipartite objective exactly (the nesting
    constant between the two conventions is zero).
    """
    if isinstance(partition, Partition):
        untyped = Partition(partition.assignment, num_groups=partition.num_groups)
    else:
        untyped = Partition(np.asarray(partition))
    model = ModelSpec(UNIPARTITE, corrected=corrected)
    return log_likelihood(graph, untyped, model)


class SearchState:
    """A (partition, stats, score) triple kept consistent under vertex moves."""

    def __init__(self, graph, partition, model):
        model = _as_model(model)
        _check_partition(graph, partition, model)
        self.graph = graph
        self.model = model
        # own a copy: apply_move rewrites the assignment in place
        self.partition = Partition(
            partition.assignment.copy(),
            num_groups=partition.num_groups,
            group_type=partition.group_type,
        )
        self.stats = block_stats(graph, self.partition)
        gt = self.partition.group_type
        self.group_type = gt
        self.score = objective_from_stats(self.stats, model, gt, graph.log_table)

    def move_counts(self, vertex):
        """Multiplicity from `vertex` into each group under the current assignment."""
        d = np.zeros(self.stats.num_groups, dtype=np.int64)
        nbrs, w = self.graph.neighbors(vertex)
        np.add.at(d, self.partition.assignment[nbrs], w)
        return d

    def apply_move(self, vertex, target):
        """Move `vertex` to `target`, updating stats and score incrementally."""
        delta = delta_log_likelihood(self, vertex, target)
        g = self.partition.assignment
        r = int(g[vertex])
        d = self.move_counts(vertex)
        m = self.stats.edge_counts
        for x in range(self.stats.num_groups):
            dx = d[x]
            if dx == 0:
                continue
            if x == r:
                m[r, r] -= 2 * dx
            else:
                m[r, x] -= dx
                m[x, r] -= dx
            if x == target:
                m[target, target] += 2 * dx
            else:
                m[target, x] += dx
                m[x, target] += dx
        kv = int(self.graph.degree[vertex])
        self.stats.group_sizes[r] -= 1
        self.stats.group_sizes[target] += 1
        self.stats.group_degrees[r] -= kv
        self.stats.group_degrees[target] += kv
        g[vertex] = target
        self.score += delta
        return delta


def delta_log_likelihood(state, vertex, target):
    """Exact objective change of moving `vertex` to `target`.

    Touches only the O(K + k_vertex) affected terms; equals
    log_likelihood(after) - log_likelihood(before) up to float round-off.
    """
    model = state.model
    g = state.partition.assignment
    r = int(g[vertex])
    s = int(target)
    if s == r:
        raise PartitionError("vertex already in the target group")
    k = state.stats.num_groups
    if not 0 <= s < k:
        raise PartitionError(f"target group {s} out of range")
    if model.bipartite:
        vt = state.graph.vertex_type[vertex]
        if state.group_type[s] != vt:
            raise PartitionError(
                f"type mismatch: vertex {vertex} (type {int(vt)}) cannot join group {s}"
            )
    lt = state.graph.log_table
    m = state.stats.edge_counts
    c = state.stats.group_degrees if model.corrected else state.stats.group_sizes
    shift = int(state.graph.degree[vertex]) if model.corrected else 1
    d = state.move_counts(vertex)

    cr, cs = int(c[r]), int(c[s])
    cr_new, cs_new = cr - shift, cs + shift

    def term(mm, ca, cb):
        return 0.0 if mm == 0 else mm * (lt[mm] - lt[ca] - lt[cb])

    delta = 0.0
    if model.bipartite:
        side = state.group_type
        for x in range(k):
            if side[x] == side[r]:
                continue
            cx = int(c[x])
            dx = int(d[x])
            delta += 2.0 * (
                term(int(m[r, x]) - dx, cr_new, cx)
                - term(int(m[r, x]), cr, cx)
                + term(int(m[s, x]) + dx, cs_new, cx)
                - term(int(m[s, x]), cs, cx)
            )
        return float(delta)

    dr, ds = int(d[r]), int(d[s])
    for x in range(k):
        if x == r or x == s:
            continue
        cx = int(c[x])
        dx = int(d[x])
        delta += 2.0 * (
            term(int(m[r, x]) - dx, cr_new, cx)
            - term(int(m[r, x]), cr, cx)
            + term(int(m[s, x]) + dx, cs_new, cx)
            - term(int(m[s, x]), cs, cx)
        )
    delta += 2.0 * (
        term(int(m[r, s]) + dr - ds, cr_new, cs_new) - term(int(m[r, s]), cr, cs)
    )
    delta += term(int(m[r, r]) - 2 * dr, cr_new, cr_new) - term(int(m[r, r]), cr, cr)
    delta += term(int(m[s, s]) + 2 * ds, cs_new, cs_new) - term(int(m[s, s]), cs, cs)
    return float(delta)


@dataclass
class ParameterEstimates:
    """Plug-in maximum-likelihood parameters for a fitted partition."""

    omega: np.ndarray
    corrected: bool
    theta: np.ndarray | None = None
    undefined_theta_groups: tuple = ()


def estimate_parameters(graph, partition, model):
    """MLE plug-ins: omega_rs = m_rs/(n_r n_s) (uncorrected) or m_rs (corrected),
    and theta_i = k_i / kappa_{g_i} in the corrected mode.

    Groups with zero degree sum have undefined theta; they are reported in
    `undefined_theta_groups` and their vertices get theta = 0 (such vertices
    are necessarily isolated).
    """
    model = _as_model(model)
    _check_partition(graph, partition, model)
    stats = block_stats(graph, partition)
    m = stats.edge_counts.astype(np.float64)
    if model.corrected:
        omega = m.copy()
    else:
        nn = np.outer(stats.group_sizes, stats.group_sizes).astype(np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            omega = np.where(nn > 0, m / np.where(nn > 0, nn, 1), 0.0)
    if not model.corrected:
        return ParameterEstimates(omega=omega, corrected=False)
    kappa = stats.group_degrees
    g = partition.assignment
    undefined = tuple(
        int(r) for r in range(stats.num_groups)
        if kappa[r] == 0 and stats.group_sizes[r] > 0
    )
    denom = kappa[g].astype(np.float64)
    theta = np.where(denom > 0, graph.degree / np.where(denom > 0, denom, 1.0), 0.0)
    return ParameterEstimates(
        omega=omega, corrected=True, theta=theta, undefined_theta_groups=undefined
    )


def _as_model(model):
    if isinstance(model, ModelSpec):
        return model
    raise BisbmError(f"expected a ModelSpec, got {model!r}")
