"""Agglomerative greedy modularity maximization (weighted Newman-Girvan Q)."""

import numpy as np

from .errors import BisbmError
from .graph import Partition


def modularity(graph, partition):
    """Weighted Newman-Girvan modularity of a partition."""
    g = partition.assignment if isinstance(partition, Partition) else np.asarray(partition)
    two_w = 2.0 * graph.total_edges
    if two_w == 0:
        raise BisbmError("modularity is undefined for an empty graph")
    k = int(g.max()) + 1
    within = np.zeros(k)
    np.add.at(within, g[graph.edges_u], np.where(
        g[graph.edges_u] == g[graph.edges_v], graph.edges_w, 0
    ))
    strength = np.zeros(k)
    np.add.at(strength, g, graph.degree)
    return float(np.sum(2.0 * within / two_w - (strength / two_w) ** 2))


def greedy_modularity(graph):
    """Merge the community pair with the largest modularity gain until no gain
    remains; returns the partition at peak Q.

    Starts from singletons and only considers merging connected pairs, the
    classic agglomerative scheme. Weights count as edge multiplicities.
    """
    n = graph.num_vertices
    if n == 0 or graph.total_edges == 0:
        raise BisbmError("greedy modularity needs a non-empty graph")
    if n > 20_000:
        raise BisbmError("greedy modularity uses dense O(n^2) state; graph too large")
    two_w = 2.0 * graph.total_edges

    # community-level edge-weight fractions e_ij and strength fractions a_i
    e = np.zeros((n, n))
    e[graph.edges_u, graph.edges_v] = graph.edges_w / two_w
    e[graph.edges_v, graph.edges_u] = graph.edges_w / two_w
    a = graph.degree / two_w
    alive = np.ones(n, dtype=bool)
    parent = np.arange(n)

    q = float(-np.sum(a ** 2))
    best_q = q
    merges_at_best = 0
    merges = []

    # gain of merging i and j: 2 (e_ij - a_i a_j), only for connected pairs
    gain = 2.0 * (e - np.outer(a, a))
    gain[e == 0] = -np.inf
    np.fill_diagonal(gain, -np.inf)

    while True:
        flat = np.argmax(gain)
        i, j = divmod(int(flat), n)
        best_gain = gain[i, j]
        if not np.isfinite(best_gain) or best_gain <= 0:
            break
        # merge j into i (diagonal accumulates to e_ii + 2 e_ij + e_jj)
        e[i, :] += e[j, :]
        e[:, i] += e[:, j]
        a[i] += a[j]
        alive[j] = False
        parent[j] = i
        e[j, :] = 0.0
        e[:, j] = 0.0
        q += best_gain
        merges.append((i, j))
        if q > best_q:
            best_q = q
            merges_at_best = len(merges)
        gain[j, :] = -np.inf
        gain[:, j] = -np.inf
        row = 2.0 * (e[i, :] - a[i] * a)
        row[e[i, :] == 0] = -np.inf
        row[~alive] = -np.inf
        row[i] = -np.inf
        gain[i, :] = row
        gain[:, i] = row
        if not alive.sum() > 1:
            break

    # rebuild the partition at the peak by replaying merges up to it
    parent = np.arange(n)
    for i, j in merges[:merges_at_best]:
        parent[j] = i
    # path-compress to community roots
    for v in range(n):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
    _, labels = np.unique(parent, return_inverse=True)
    return Partition(labels.astype(np.int64))
