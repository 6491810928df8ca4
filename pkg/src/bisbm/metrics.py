"""Partition-comparison metrics: normalized mutual information and friends."""

import numpy as np

from .errors import BisbmError
from .graph import Partition


class ContingencyTable:
    """Joint group-count table N_rs for two partitions of one vertex set."""

    def __init__(self, x, y):
        x = _assignment(x)
        y = _assignment(y)
        if x.shape != y.shape:
            raise BisbmError("partitions cover different vertex sets")
        if x.size == 0:
            raise BisbmError("empty partitions")
        kx = int(x.max()) + 1
        ky = int(y.max()) + 1
        counts = np.bincount(x * ky + y, minlength=kx * ky).reshape(kx, ky)
        self.counts = counts
        self.row_totals = counts.sum(axis=1)
        self.col_totals = counts.sum(axis=0)
        self.total = int(counts.sum())


def nmi(x, y):
    """Normalized mutual information 2 I(X,Y) / (H(X) + H(Y)) in [0, 1].

    Plug-in probabilities Pr(X=r) = N_r/N; natural logs (they cancel in the
    ratio); 1 iff the partitions are identical up to relabeling. When both
    partitions are single groups the value is defined as 0: a constant
    partition carries no information.
    """
    table = ContingencyTable(x, y)
    n = table.total
    counts = table.counts
    px = table.row_totals / n
    py = table.col_totals / n
    hx = -np.sum(px[px > 0] * np.log(px[px > 0]))
    hy = -np.sum(py[py > 0] * np.log(py[py > 0]))
    if hx + hy == 0.0:
        return 0.0
    nz = counts > 0
    p_joint = counts[nz] / n
    outer = np.outer(table.row_totals, table.col_totals)[nz] / (n * n)
    info = float(np.sum(p_joint * np.log(p_joint / outer)))
    value = 2.0 * info / float(hx + hy)
    # guard round-off at the boundaries
    if value < 0.0:
        return 0.0
    return min(value, 1.0)


def pure_type_fraction(result, vertex_type=None):
    """Fraction of a fit's replicates whose partition never mixes vertex types.

    Uses the per-replicate flags when present, otherwise recomputes from the
    stored replicate partitions (requires `vertex_type`).
    """
    flags = getattr(result, "pure_type_flags", None)
    if flags:
        return float(np.mean([bool(f) for f in flags]))
    partitions = getattr(result, "replicate_partitions", None)
    if not partitions:
        raise BisbmError("fit result carries neither pure-type flags nor partitions")
    if vertex_type is None:
        raise BisbmError("vertex types required to recompute pure-type flags")
    return float(np.mean([p.is_pure_type(vertex_type) for p in partitions]))


def _assignment(p):
    if isinstance(p, Partition):
        return p.assignment
    return np.asarray(p, dtype=np.int64)
