"""Kernighan-Lin-style maximum-likelihood partition search with restarts."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import engine as engine_mod
from .errors import BisbmError, PartitionError
from .graph import TYPE_A, TYPE_B, Partition
from .objective import ModelSpec, SearchState, delta_log_likelihood

SWEEP_IMPROVEMENT_TOL = 1e-10
LOCAL_OPTIMUM_TOL = 1e-12
_MAX_SWEEPS = 10_000


def _replicate_seed(seed, index):
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def _group_sides(model, k_a, k_b):
    if model.bipartite:
        return np.concatenate(
            [np.full(k_a, TYPE_A, dtype=np.int8), np.full(k_b, TYPE_B, dtype=np.int8)]
        )
    return np.zeros(k_a + k_b, dtype=np.int8)


def _random_assignment(rng, graph, model, k_a, k_b):
    n = graph.num_vertices
    if model.bipartite:
        g = np.empty(n, dtype=np.int64)
        a_mask = graph.vertex_type == TYPE_A
        g[a_mask] = rng.integers(0, k_a, size=int(a_mask.sum()))
        g[~a_mask] = k_a + rng.integers(0, k_b, size=int(n - a_mask.sum()))
        return g
    return rng.integers(0, k_a + k_b, size=n).astype(np.int64)


def _search_from(graph, g0, k, group_side, model, eng, sweep_times=None):
    """Sweeps until a full sweep yields no improvement; returns the best state."""
    g = np.array(g0, dtype=np.int64, copy=True, order="C")  # sweeps mutate g
    vertex_side = (
        graph.vertex_type.astype(np.int8)
        if model.bipartite
        else np.zeros(graph.num_vertices, dtype=np.int8)
    )
    stats_ws = [None, None, None, False]  # reused across the sweep loop
    args = (
        graph.indptr, graph.indices, graph.weights, graph.degree,
        vertex_side, group_side, g, int(k),
        bool(model.bipartite), bool(model.corrected), graph.log_table,
    )
    score = eng.initial_score(
        graph.indptr, graph.indices, graph.weights, graph.degree,
        group_side, g, int(k), bool(model.bipartite), bool(model.corrected),
        graph.log_table,
    )
    trajectory = [score]
    sweeps = 0
    while sweeps < _MAX_SWEEPS:
        before = g.copy()
        t0 = time.perf_counter()
        new_score = eng.sweep(*args, stats=stats_ws)
        if sweep_times is not None:
            sweep_times.append(time.perf_counter() - t0)
        sweeps += 1
        trajectory.append(new_score)
        if new_score > score + SWEEP_IMPROVEMENT_TOL:
            score = new_score
        else:
            # a non-improving sweep may still end on an equal-score drift
            # state; keep (g, score) consistent with the best state visited
            g[:] = before
            break
    return g, score, sweeps, trajectory


@dataclass
class FitResult:
    """Best partition over independent restarts, with per-replicate records."""

    model: ModelSpec
    k_a: int
    k_b: int
    best_partition: Partition
    best_score: float
    replicate_scores: list
    replicate_times: list
    pure_type_flags: list
    seeds: list
    sweeps: list
    has_empty_group: bool
    replicate_partitions: list | None = None
    trajectories: list | None = field(default=None, repr=False)

    @property
    def restarts(self):
        return len(self.replicate_scores)

    def to_dict(self, partition_file=None):
        return {
            "model": self.model.label(),
            "K_a": self.k_a,
            "K_b": self.k_b,
            "best_score": self.best_score,
            "best_partition_file": partition_file,
            "has_empty_group": self.has_empty_group,
            "replicates": [
                {
                    "seed": int(s),
                    "score": float(sc),
                    "seconds": float(t),
                    "pure_type": bool(p),
                }
                for s, sc, t, p in zip(
                    self.seeds, self.replicate_scores,
                    self.replicate_times, self.pure_type_flags,
                )
            ],
        }


def kl_fit(graph, model, k_a, k_b, restarts=100, seed=None, init=None,
           engine=None, keep_partitions=False, keep_trajectories=False):
    """Fit `model` with the given group counts, keeping the best of `restarts`
    independent searches.

    Bipartite models use k_a type-a groups and k_b type-b groups; unipartite
    models search over K = k_a + k_b untyped groups. Deterministic for a fixed
    seed and restart count. `init` replaces the random initialization (used
    for stability studies; typically with restarts=1).
    """
    model = _as_model(model)
    k_a, k_b = int(k_a), int(k_b)
    if restarts < 1:
        raise BisbmError("restarts must be >= 1")
    if model.bipartite:
        if k_a < 1 or k_b < 1:
            raise BisbmError("bipartite fits need k_a >= 1 and k_b >= 1")
        if not hasattr(graph, "vertex_type"):
            raise BisbmError("bipartite model requires a bipartite graph")
        if k_a > graph.n_a or k_b > graph.n_b:
            raise BisbmError("more groups than vertices on a side")
    else:
        # unipartite fits read K = k_a + k_b and ignore the split
        if k_a < 0 or k_b < 0 or k_a + k_b < 1:
            raise BisbmError("unipartite fits need K = k_a + k_b >= 1")
        if k_a + k_b > graph.num_vertices:
            raise BisbmError("more groups than vertices")
    if seed is None:
        seed = int(np.random.SeedSequence().generate_state(1)[0])
    eng = engine_mod.get_engine(engine)
    k = k_a + k_b
    group_side = _group_sides(model, k_a, k_b)

    init_arr = None
    if init is not None:
        init_arr = np.asarray(
            init.assignment if isinstance(init, Partition) else init, dtype=np.int64
        )
        if init_arr.size != graph.num_vertices:
            raise PartitionError("init partition does not cover the graph")
        if init_arr.min() < 0 or init_arr.max() >= k:
            raise PartitionError("init partition has out-of-range groups")

    scores, times, flags, seeds, sweep_counts = [], [], [], [], []
    partitions = []  # raw assignments; kept for best-selection tie-breaks
    trajectories = [] if keep_trajectories else None
    for rep in range(int(restarts)):
        rep_seed = _replicate_seed(seed, rep)
        rng = np.random.default_rng(rep_seed)
        g0 = init_arr.copy() if init_arr is not None else _random_assignment(
            rng, graph, model, k_a, k_b
        )
        t0 = time.perf_counter()
        g, score, sweeps, trajectory = _search_from(
            graph, g0, k, group_side, model, eng
        )
        elapsed = time.perf_counter() - t0
        scores.append(float(score))
        times.append(elapsed)
        seeds.append(rep_seed)
        sweep_counts.append(sweeps)
        partitions.append(g)
        if trajectories is not None:
            trajectories.append(trajectory)
        if model.bipartite:
            flags.append(True)
        else:
            flags.append(_is_pure_type(graph, g, k))

    best_idx = _select_best(scores, partitions)
    best_assignment = partitions[best_idx]
    best_score = scores[best_idx]
    if model.bipartite:
        best_partition = Partition.typed(best_assignment, k_a, k_b)
    else:
        best_partition = Partition(best_assignment, num_groups=k)
    sizes = np.bincount(best_assignment, minlength=k)
    result = FitResult(
        model=model,
        k_a=k_a,
        k_b=k_b,
        best_partition=best_partition,
        best_score=best_score,
        replicate_scores=scores,
        replicate_times=times,
        pure_type_flags=flags,
        seeds=seeds,
        sweeps=sweep_counts,
        has_empty_group=bool((sizes == 0).any()),
        replicate_partitions=(
            [Partition(p, num_groups=k) for p in partitions] if keep_partitions else None
        ),
        trajectories=trajectories,
    )
    return result


_TIE_REL_TOL = 1e-9


def _select_best(scores, partitions):
    """Highest score; ties resolved by the lexicographically smallest canonical
    assignment, then by replicate order. Deterministic regardless of how
    replicates were scheduled.

    Ties are detected with a small relative tolerance: equal-structure optima
    reached from different labelings sum the same objective terms in different
    orders, so their scores agree only to round-off.
    """
    best = max(scores)
    cut = best - _TIE_REL_TOL * (1.0 + abs(best))
    tied = [i for i, s in enumerate(scores) if s >= cut]
    if len(tied) == 1:
        return tied[0]
    keys = {i: Partition(partitions[i]).canonical_key() for i in tied}
    return min(tied, key=lambda i: (keys[i], i))


def _is_pure_type(graph, assignment, k):
    if not hasattr(graph, "vertex_type"):
        return True
    has_a = np.zeros(k, dtype=bool)
    has_b = np.zeros(k, dtype=bool)
    has_a[assignment[graph.vertex_type == TYPE_A]] = True
    has_b[assignment[graph.vertex_type == TYPE_B]] = True
    return bool(not (has_a & has_b).any())


def search_from_partition(graph, init, model, engine=None):
    """Run the sweep loop from a given partition (no random restarts).

    Returns (final_partition, final_score, per-sweep score trajectory).
    """
    model = _as_model(model)
    init = init if isinstance(init, Partition) else Partition(np.asarray(init))
    k = init.num_groups
    if model.bipartite:
        if init.group_type is None:
            raise PartitionError("bipartite search needs a typed partition")
        k_a, k_b = init.k_a, init.k_b
        group_side = _group_sides(model, k_a, k_b)
    else:
        group_side = np.zeros(k, dtype=np.int8)
    eng = engine_mod.get_engine(engine)
    g, score, _, trajectory = _search_from(
        graph, init.assignment, k, group_side, model, eng
    )
    if model.bipartite:
        final = Partition.typed(g, init.k_a, init.k_b)
    else:
        final = Partition(g, num_groups=k)
    return final, score, trajectory


def is_local_optimum(graph, partition, model, tol=LOCAL_OPTIMUM_TOL):
    """True iff no single admissible vertex move improves the objective by
    more than `tol` (type-respecting moves for bipartite models)."""
    model = _as_model(model)
    state = SearchState(graph, partition, model)
    k = partition.num_groups
    g = partition.assignment
    for v in range(graph.num_vertices):
        r = int(g[v])
        for s in range(k):
            if s == r:
                continue
            if model.bipartite and state.group_type[s] != graph.vertex_type[v]:
                continue
            if delta_log_likelihood(state, v, s) > tol:
                return False
    return True


def _as_model(model):
    if not isinstance(model, ModelSpec):
        raise BisbmError(f"expected a ModelSpec, got {model!r}")
    return model
