"""Bipartite and projected unipartite graphs, partitions, and block statistics.

Graphs are immutable integer multigraphs stored in symmetric CSR form. Vertex
types are 0 ("a") and 1 ("b"); edges of a bipartite graph must join one vertex
of each type, and self-loops are rejected everywhere (projections drop the
diagonal of A²).
"""

import io

import numpy as np
import scipy.sparse as sp

from .errors import GraphFormatError, GraphValidationError, PartitionError

TYPE_A = 0
TYPE_B = 1
TYPE_NAMES = {"a": TYPE_A, "b": TYPE_B}
TYPE_LABELS = {TYPE_A: "a", TYPE_B: "b"}


def _log_table(size):
    # table[i] = ln i, with the 0*ln0 convention baked in as table[0] = 0.
    table = np.zeros(size, dtype=np.float64)
    if size > 1:
        table[1:] = np.log(np.arange(1, size, dtype=np.float64))
    return table


class _Graph:
    """Shared storage: symmetric CSR adjacency with integer multiplicities."""

    def __init__(self, num_vertices, edges_u, edges_v, edges_w):
        edges_u = np.asarray(edges_u, dtype=np.int64)
        edges_v = np.asarray(edges_v, dtype=np.int64)
        edges_w = np.asarray(edges_w, dtype=np.int64)
        if not (edges_u.shape == edges_v.shape == edges_w.shape):
            raise GraphValidationError("edge arrays must have equal length")
        n = int(num_vertices)
        if n < 1:
            raise GraphValidationError("graph needs at least one vertex")
        if edges_u.size:
            if edges_u.min() < 0 or max(edges_u.max(), edges_v.max()) >= n:
                raise GraphValidationError("edge endpoint out of range")
            if (edges_w <= 0).any():
                raise GraphValidationError("edge multiplicities must be positive")
            if (edges_u == edges_v).any():
                i = int(np.argmax(edges_u == edges_v))
                raise GraphValidationError(f"self-loop at vertex {edges_u[i]}")

        # Canonical edge list: u < v, sorted, duplicates merged.
        lo = np.minimum(edges_u, edges_v)
        hi = np.maximum(edges_u, edges_v)
        key = lo * n + hi
        order = np.argsort(key, kind="stable")
        lo, hi, w = lo[order], hi[order], edges_w[order]
        if lo.size:
            uniq, start = np.unique(key[order], return_index=True)
            w = np.add.reduceat(w, start)
            lo, hi = lo[start], hi[start]
        self.num_vertices = n
        self.edges_u = lo
        self.edges_v = hi
        self.edges_w = w

        adj = sp.coo_matrix(
            (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
            shape=(n, n),
            dtype=np.int64,
        ).tocsr()
        adj.sum_duplicates()
        self.indptr = adj.indptr.astype(np.int64)
        self.indices = adj.indices.astype(np.int64)
        self.weights = adj.data.astype(np.int64)
        csum = np.concatenate([[0], np.cumsum(self.weights)])
        self.degree = (csum[self.indptr[1:]] - csum[self.indptr[:-1]]).astype(np.int64)
        self.total_edges = int(w.sum())
        self._log_table = None

    @property
    def num_edges(self):
        """Total edge multiplicity m."""
        return self.total_edges

    @property
    def log_table(self):
        """Shared ln-lookup table covering every integer the objectives index."""
        if self._log_table is None:
            size = max(2 * self.total_edges, self.num_vertices) + 2
            self._log_table = _log_table(size)
        return self._log_table

    def neighbors(self, v):
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def adjacency(self):
        """Dense symmetric adjacency matrix (small graphs / tests only)."""
        a = np.zeros((self.num_vertices, self.num_vertices), dtype=np.int64)
        a[self.edges_u, self.edges_v] = self.edges_w
        a[self.edges_v, self.edges_u] = self.edges_w
        return a


class UnipartiteGraph(_Graph):
    """Simple weighted multigraph, typically a one-mode projection."""

    def __repr__(self):
        return f"UnipartiteGraph(n={self.num_vertices}, m={self.total_edges})"


class BipartiteGraph(_Graph):
    """Bipartite multigraph over two vertex classes with integer multiplicities."""

    def __init__(self, vertex_type, edges_u, edges_v, edges_w):
        vertex_type = np.asarray(vertex_type, dtype=np.int8)
        if vertex_type.ndim != 1:
            raise GraphValidationError("vertex_type must be one label per vertex")
        if not np.isin(vertex_type, (TYPE_A, TYPE_B)).all():
            raise GraphValidationError("vertex types must be 'a' or 'b'")
        super().__init__(vertex_type.size, edges_u, edges_v, edges_w)
        bad = vertex_type[self.edges_u] == vertex_type[self.edges_v]
        if bad.any():
            i = int(np.argmax(bad))
            raise GraphValidationError(
                f"same-type edge ({self.edges_u[i]}, {self.edges_v[i]})"
            )
        self.vertex_type = vertex_type
        self.n_a = int((vertex_type == TYPE_A).sum())
        self.n_b = self.num_vertices - self.n_a
        if self.n_a < 1 or self.n_b < 1:
            raise GraphValidationError("both vertex types must be non-empty")

    def __repr__(self):
        return (
            f"BipartiteGraph(n_a={self.n_a}, n_b={self.n_b}, m={self.total_edges})"
        )

    def side_vertices(self, side):
        return np.flatnonzero(self.vertex_type == _side_code(side))

    def biadjacency(self):
        """Dense N_a x N_b incidence block B (rows/cols in vertex-id order)."""
        a_ids = self.side_vertices(TYPE_A)
        b_ids = self.side_vertices(TYPE_B)
        pos_a = np.full(self.num_vertices, -1, dtype=np.int64)
        pos_b = np.full(self.num_vertices, -1, dtype=np.int64)
        pos_a[a_ids] = np.arange(a_ids.size)
        pos_b[b_ids] = np.arange(b_ids.size)
        b = np.zeros((a_ids.size, b_ids.size), dtype=np.int64)
        u, v, w = self.edges_u, self.edges_v, self.edges_w
        ua = self.vertex_type[u] == TYPE_A
        au = np.where(ua, u, v)
        bv = np.where(ua, v, u)
        b[pos_a[au], pos_b[bv]] = w
        return b

    def projection(self, side, weighted=True):
        """One-mode projection onto `side`.

        Weighted edges count shared opposite-type neighbors with multiplicity
        (the off-diagonal of the corresponding block of A²); unweighted edges
        are 1 wherever that count is positive. Vertex i of the projection is
        the i-th vertex of `side` in id order.
        """
        code = _side_code(side)
        keep = self.side_vertices(code)
        other = np.flatnonzero(self.vertex_type != code)
        pos_keep = np.full(self.num_vertices, -1, dtype=np.int64)
        pos_keep[keep] = np.arange(keep.size)
        pos_other = np.full(self.num_vertices, -1, dtype=np.int64)
        pos_other[other] = np.arange(other.size)

        u, v, w = self.edges_u, self.edges_v, self.edges_w
        on_side = self.vertex_type[u] == code
        su = np.where(on_side, u, v)
        ov = np.where(on_side, v, u)
        inc = sp.coo_matrix(
            (w, (pos_keep[su], pos_other[ov])),
            shape=(keep.size, other.size),
            dtype=np.int64,
        ).tocsr()
        p = (inc @ inc.T).tocoo()
        mask = (p.row < p.col) & (p.data > 0)
        pu, pv, pw = p.row[mask], p.col[mask], p.data[mask]
        if not weighted:
            pw = np.ones_like(pw)
        return UnipartiteGraph(keep.size, pu, pv, pw)


def _side_code(side):
    if side in (TYPE_A, TYPE_B):
        return int(side)
    try:
        return TYPE_NAMES[side]
    except (KeyError, TypeError):
        raise GraphValidationError(f"unknown side {side!r}; expected 'a' or 'b'") from None


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def parse_types(text):
    """Parse a types file ("id<TAB>{a|b}" per line) into a vertex-type array."""
    entries = {}
    for line_no, raw in enumerate(_lines(text, keep_position=True), start=1):
        if raw is None:
            continue
        fields = raw.split("\t")
        if len(fields) != 2:
            raise GraphFormatError("expected 'id<TAB>a|b'", line=line_no)
        try:
            vid = int(fields[0])
        except ValueError:
            raise GraphFormatError(f"bad vertex id {fields[0]!r}", line=line_no) from None
        label = fields[1].strip()
        if label not in TYPE_NAMES:
            raise GraphFormatError(f"bad type label {label!r}", line=line_no)
        if vid in entries:
            raise GraphFormatError(f"duplicate vertex id {vid}", line=line_no)
        entries[vid] = TYPE_NAMES[label]
    if not entries:
        raise GraphFormatError("empty types file")
    n = max(entries) + 1
    if min(entries) < 0 or len(entries) != n:
        missing = sorted(set(range(n)) - set(entries))[:5]
        raise GraphFormatError(f"vertex ids must cover 0..N-1; missing {missing}")
    types = np.empty(n, dtype=np.int8)
    for vid, t in entries.items():
        types[vid] = t
    return types


def types_by_convention(n_a, n_total):
    """Vertex types under the convention: indices 0..n_a-1 are type a."""
    if not (1 <= n_a < n_total):
        raise GraphValidationError("need 1 <= N_a < N")
    types = np.full(n_total, TYPE_B, dtype=np.int8)
    types[:n_a] = TYPE_A
    return types


def parse_edge_list(text, types):
    """Parse "u<TAB>v[<TAB>mult]" lines into a validated BipartiteGraph.

    `types` covers every referenced vertex (and fixes N, so isolated vertices
    are representable). Duplicate lines accumulate multiplicity; '#' lines are
    comments.
    """
    types = np.asarray(types, dtype=np.int8)
    us, vs, ws = [], [], []
    for line_no, raw in enumerate(_lines(text, keep_position=True), start=1):
        if raw is None:
            continue
        fields = raw.split("\t")
        if len(fields) not in (2, 3):
            raise GraphFormatError("expected 'u<TAB>v[<TAB>mult]'", line=line_no)
        try:
            u, v = int(fields[0]), int(fields[1])
            w = int(fields[2]) if len(fields) == 3 else 1
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", line=line_no) from None
        if not (0 <= u < types.size and 0 <= v < types.size):
            raise GraphFormatError(
                f"unknown vertex id {u if not 0 <= u < types.size else v}", line=line_no
            )
        if w <= 0:
            raise GraphFormatError(f"multiplicity must be positive, got {w}", line=line_no)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", line=line_no)
        if types[u] == types[v]:
            raise GraphFormatError(f"same-type edge ({u}, {v})", line=line_no)
        us.append(u)
        vs.append(v)
        ws.append(w)
    return BipartiteGraph(types, us, vs, ws)


def parse_unipartite_edge_list(text, num_vertices=None):
    """Parse a (possibly weighted) unipartite edge list."""
    us, vs, ws = [], [], []
    for line_no, raw in enumerate(_lines(text, keep_position=True), start=1):
        if raw is None:
            continue
        fields = raw.split("\t")
        if len(fields) not in (2, 3):
            raise GraphFormatError("expected 'u<TAB>v[<TAB>weight]'", line=line_no)
        try:
            u, v = int(fields[0]), int(fields[1])
            w = int(fields[2]) if len(fields) == 3 else 1
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", line=line_no) from None
        us.append(u)
        vs.append(v)
        ws.append(w)
    if num_vertices is None:
        if not us:
            raise GraphFormatError("empty edge list and no vertex count given")
        num_vertices = int(max(max(us), max(vs))) + 1
    return UnipartiteGraph(num_vertices, us, vs, ws)


def _lines(text, keep_position=False):
    if isinstance(text, (str, bytes)):
        stream = io.StringIO(text.decode() if isinstance(text, bytes) else text)
    else:
        stream = text
    for raw in stream:
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            if keep_position:
                yield None
            continue
        yield line


def edge_list_text(graph, header=None):
    """Serialize to the canonical edge-list format (sorted, merged pairs)."""
    out = []
    if header:
        for line in header.splitlines():
            out.append(f"# {line}")
    for u, v, w in zip(graph.edges_u, graph.edges_v, graph.edges_w):
        if w == 1:
            out.append(f"{u}\t{v}")
        else:
            out.append(f"{u}\t{v}\t{w}")
    return "\n".join(out) + "\n"


def types_text(types):
    return "".join(f"{i}\t{TYPE_LABELS[int(t)]}\n" for i, t in enumerate(types))


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

class Partition:
    """Group assignment over a fixed vertex set.

    Typed (bipartite) partitions carry one type label per group with type-a
    groups first: indices 0..K_a-1 are type a, K_a..K-1 are type b. Untyped
    partitions (group_type is None) are used for unipartite fits, where mixed
    groups are allowed.
    """

    def __init__(self, assignment, num_groups=None, group_type=None):
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.ndim != 1 or assignment.size == 0:
            raise PartitionError("assignment must be a non-empty vector")
        if num_groups is None:
            num_groups = int(assignment.max()) + 1
        num_groups = int(num_groups)
        if assignment.min() < 0 or assignment.max() >= num_groups:
            raise PartitionError("group index out of range")
        if group_type is not None:
            group_type = np.asarray(group_type, dtype=np.int8)
            if group_type.size != num_groups:
                raise PartitionError("group_type length must equal the group count")
            if (np.diff(group_type) < 0).any():
                raise PartitionError("type-a groups must precede type-b groups")
        self.assignment = assignment
        self.num_groups = num_groups
        self.group_type = group_type

    @classmethod
    def typed(cls, assignment, k_a, k_b):
        gt = np.concatenate(
            [np.full(k_a, TYPE_A, dtype=np.int8), np.full(k_b, TYPE_B, dtype=np.int8)]
        )
        return cls(assignment, num_groups=k_a + k_b, group_type=gt)

    @property
    def num_vertices(self):
        return self.assignment.size

    @property
    def is_typed(self):
        return self.group_type is not None

    @property
    def k_a(self):
        if self.group_type is None:
            return None
        return int((self.group_type == TYPE_A).sum())

    @property
    def k_b(self):
        if self.group_type is None:
            return None
        return int((self.group_type == TYPE_B).sum())

    def group_sizes(self):
        return np.bincount(self.assignment, minlength=self.num_groups)

    def matches_types(self, graph):
        """True iff every vertex sits in a group of its own type."""
        if self.group_type is None:
            return False
        return bool(
            (self.group_type[self.assignment] == graph.vertex_type).all()
        )

    def is_pure_type(self, vertex_type):
        """True iff no group mixes the two vertex types."""
        vertex_type = np.asarray(vertex_type)
        has_a = np.zeros(self.num_groups, dtype=bool)
        has_b = np.zeros(self.num_groups, dtype=bool)
        has_a[self.assignment[vertex_type == TYPE_A]] = True
        has_b[self.assignment[vertex_type == TYPE_B]] = True
        return not (has_a & has_b).any()

    def restrict(self, vertex_type, side):
        """Sub-partition over one side, with contiguous relabeled groups."""
        vertex_type = np.asarray(vertex_type)
        if not self.is_pure_type(vertex_type):
            raise PartitionError("cannot restrict a mixed-type partition by side")
        mask = vertex_type == _side_code(side)
        sub = self.assignment[mask]
        _, relabeled = np.unique(sub, return_inverse=True)
        return Partition(relabeled)

    def canonical(self):
        """Assignment relabeled by first appearance; equal iff same grouping."""
        _, first_idx, inverse = np.unique(
            self.assignment, return_index=True, return_inverse=True
        )
        rank = np.argsort(np.argsort(first_idx))
        return rank[inverse].astype(np.int64)

    def canonical_key(self):
        return self.canonical().tobytes()

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.num_groups == other.num_groups
            and np.array_equal(self.assignment, other.assignment)
            and (
                (self.group_type is None) == (other.group_type is None)
                and (self.group_type is None or np.array_equal(self.group_type, other.group_type))
            )
        )

    def __repr__(self):
        kind = "typed" if self.is_typed else "untyped"
        return f"Partition(n={self.num_vertices}, K={self.num_groups}, {kind})"


def parse_partition(text, num_vertices=None):
    """Parse a partition file ("id<TAB>group" per line)."""
    entries = {}
    for line_no, raw in enumerate(_lines(text, keep_position=True), start=1):
        if raw is None:
            continue
        fields = raw.split("\t")
        if len(fields) != 2:
            raise GraphFormatError("expected 'id<TAB>group'", line=line_no)
        try:
            vid, grp = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", line=line_no) from None
        if vid in entries:
            raise GraphFormatError(f"duplicate vertex id {vid}", line=line_no)
        entries[vid] = grp
    if not entries:
        raise GraphFormatError("empty partition file")
    n = num_vertices if num_vertices is not None else max(entries) + 1
    if len(entries) != n or min(entries) < 0 or max(entries) >= n:
        raise GraphFormatError("partition must cover vertex ids 0..N-1")
    assignment = np.empty(n, dtype=np.int64)
    for vid, grp in entries.items():
        assignment[vid] = grp
    if assignment.min() < 0:
        raise GraphFormatError("group indices must be non-negative")
    return Partition(assignment)


def partition_text(partition):
    return "".join(f"{i}\t{g}\n" for i, g in enumerate(partition.assignment))


# ---------------------------------------------------------------------------
# block statistics
# ---------------------------------------------------------------------------

class BlockStats:
    """Sufficient statistics (m_rs, n_r, kappa_r) for a (graph, partition) pair.

    The edge-count matrix uses the doubled-diagonal convention: m_rr is twice
    the total multiplicity inside group r, so kappa_r = sum_s m_rs equals the
    degree sum of group r for any partition.
    """

    __slots__ = ("edge_counts", "group_sizes", "group_degrees")

    def __init__(self, edge_counts, group_sizes, group_degrees):
        self.edge_counts = edge_counts
        self.group_sizes = group_sizes
        self.group_degrees = group_degrees

    @property
    def num_groups(self):
        return self.group_sizes.size


def block_stats(graph, partition):
    """Compute BlockStats; works for bipartite and unipartite graphs alike."""
    g = np.asarray(partition.assignment if isinstance(partition, Partition) else partition)
    if g.size != graph.num_vertices:
        raise PartitionError(
            f"partition covers {g.size} vertices, graph has {graph.num_vertices}"
        )
    k = int(partition.num_groups) if isinstance(partition, Partition) else int(g.max()) + 1
    m = np.zeros((k, k), dtype=np.int64)
    np.add.at(m, (g[graph.edges_u], g[graph.edges_v]), graph.edges_w)
    m = m + m.T  # doubles the diagonal, symmetrizes off-diagonal
    n = np.bincount(g, minlength=k).astype(np.int64)
    kappa = m.sum(axis=1)
    return BlockStats(m, n, kappa)
