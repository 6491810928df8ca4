"""Pure-Python sweep kernel.

One call runs a single Kernighan-Lin-style sweep: every movable vertex is
moved exactly once (greedy best move, or least-bad move when nothing
improves), then the best state passed through is restored. Candidate moves
are kept in a lazy max-heap: the cached best move of each unmoved vertex is
re-evaluated against the current state when it reaches the top, so a sweep
costs O(N K (K + <k>)) delta evaluations instead of the naive O(N^2 ...).

The Cython kernel in _sweep.pyx is an exact transliteration of this module
(same arithmetic in the same order, same tie-breaking), so the two engines
produce bit-identical trajectories; tests assert that. Keep them in sync.

Tie-breaking is deterministic: heap keys are (-delta, vertex, target,
version), so equal deltas prefer the lowest vertex index, then the lowest
target group.
"""

import heapq

ENGINE_NAME = "python"


def compute_stats(n, k, indptr, indices, weights, g):
    """Doubled-diagonal m_rs, group sizes, and group degree sums, as lists."""
    m = [[0] * k for _ in range(k)]
    cnt = [0] * k
    kappa = [0] * k
    for u in range(n):
        gu = g[u]
        cnt[gu] += 1
        row = m[gu]
        for j in range(indptr[u], indptr[u + 1]):
            w = weights[j]
            row[g[indices[j]]] += w
            kappa[gu] += w
    return m, cnt, kappa


def _objective(m, c, k, group_side, bipartite, lt):
    acc = 0.0
    for r in range(k):
        row = m[r]
        lcr = lt[c[r]]
        for s in range(k):
            if bipartite and group_side[r] == group_side[s]:
                continue
            mm = row[s]
            if mm > 0:
                acc += mm * (lt[mm] - lcr - lt[c[s]])
    return acc


def _best_move(v, g, m, c, k, d, touched, indptr, indices, weights,
               group_side, bipartite, corrected, degree, lt, keep_d=False):
    """Best (delta, target) for vertex v.

    With keep_d=True the per-group edge counts d stay filled on return so an
    immediately following _apply_move for the same vertex can reuse them.
    """
    r = g[v]
    for j in range(indptr[v], indptr[v + 1]):
        x = g[indices[j]]
        if d[x] == 0:
            touched.append(x)
        d[x] += weights[j]

    shift = degree[v] if corrected else 1
    cr = c[r]
    cr_new = cr - shift
    best_delta = None
    best_target = -1
    side_r = group_side[r]
    for s in range(k):
        if s == r:
            continue
        if bipartite and group_side[s] != side_r:
            continue
        cs = c[s]
        cs_new = cs + shift
        delta = 0.0
        if bipartite:
            for x in range(k):
                if group_side[x] == side_r:
                    continue
                cx = c[x]
                dx = d[x]
                mrx = m[r][x]
                msx = m[s][x]
                old = 0.0
                new = 0.0
                if mrx > 0:
                    old += mrx * (lt[mrx] - lt[cr] - lt[cx])
                if msx > 0:
                    old += msx * (lt[msx] - lt[cs] - lt[cx])
                mrx2 = mrx - dx
                msx2 = msx + dx
                if mrx2 > 0:
                    new += mrx2 * (lt[mrx2] - lt[cr_new] - lt[cx])
                if msx2 > 0:
                    new += msx2 * (lt[msx2] - lt[cs_new] - lt[cx])
                delta += 2.0 * (new - old)
        else:
            dr = d[r]
            ds = d[s]
            for x in range(k):
                if x == r or x == s:
                    continue
                cx = c[x]
                dx = d[x]
                mrx = m[r][x]
                msx = m[s][x]
                old = 0.0
                new = 0.0
                if mrx > 0:
                    old += mrx * (lt[mrx] - lt[cr] - lt[cx])
                if msx > 0:
                    old += msx * (lt[msx] - lt[cs] - lt[cx])
                mrx2 = mrx - dx
                msx2 = msx + dx
                if mrx2 > 0:
                    new += mrx2 * (lt[mrx2] - lt[cr_new] - lt[cx])
                if msx2 > 0:
                    new += msx2 * (lt[msx2] - lt[cs_new] - lt[cx])
                delta += 2.0 * (new - old)
            mrs = m[r][s]
            mrs2 = mrs + dr - ds
            if mrs > 0:
                delta -= 2.0 * mrs * (lt[mrs] - lt[cr] - lt[cs])
            if mrs2 > 0:
                delta += 2.0 * mrs2 * (lt[mrs2] - lt[cr_new] - lt[cs_new])
            mrr = m[r][r]
            mrr2 = mrr - 2 * dr
            if mrr > 0:
                delta -= mrr * (lt[mrr] - 2.0 * lt[cr])
            if mrr2 > 0:
                delta += mrr2 * (lt[mrr2] - 2.0 * lt[cr_new])
            mss = m[s][s]
            mss2 = mss + 2 * ds
            if mss > 0:
                delta -= mss * (lt[mss] - 2.0 * lt[cs])
            if mss2 > 0:
                delta += mss2 * (lt[mss2] - 2.0 * lt[cs_new])
        if best_delta is None or delta > best_delta:
            best_delta = delta
            best_target = s

    if not keep_d:
        for x in touched:
            d[x] = 0
        touched.clear()
    return best_delta, best_target


def _apply_move(v, s, g, m, cnt, kappa, d, touched, indptr, indices, weights,
                degree, d_ready=False):
    r = g[v]
    if not d_ready:
        for j in range(indptr[v], indptr[v + 1]):
            x = g[indices[j]]
            if d[x] == 0:
                touched.append(x)
            d[x] += weights[j]
    for x in touched:
        dx = d[x]
        if x == r:
            m[r][r] -= 2 * dx
        else:
            m[r][x] -= dx
            m[x][r] -= dx
        if x == s:
            m[s][s] += 2 * dx
        else:
            m[s][x] += dx
            m[x][s] += dx
        d[x] = 0
    touched.clear()
    kv = degree[v]
    cnt[r] -= 1
    cnt[s] += 1
    kappa[r] -= kv
    kappa[s] += kv
    g[v] = s


def sweep(indptr, indices, weights, degree, vertex_side, group_side, g_arr,
          k, bipartite, corrected, log_table, stats=None):
    """Run one sweep in place on g_arr; returns the exact score of the
    restored best state.

    `stats`, when given, is a mutable [m, cnt, kappa, valid] workspace reused
    across sweeps; it is left consistent with g_arr on return.
    """
    n = len(g_arr)
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    degree = degree.tolist()
    vertex_side = vertex_side.tolist()
    group_side = group_side.tolist()
    lt = log_table.tolist()
    g = g_arr.tolist()

    if stats is not None and stats[0] is not None and stats[3]:
        m, cnt, kappa = stats[0], stats[1], stats[2]
    else:
        m, cnt, kappa = compute_stats(n, k, indptr, indices, weights, g)
        if stats is not None:
            stats[0], stats[1], stats[2] = m, cnt, kappa
    if stats is not None:
        stats[3] = True
    c = kappa if corrected else cnt

    side_group_count = [0, 0]
    for r in range(k):
        side_group_count[group_side[r]] += 1

    d = [0] * k
    touched = []
    moved = [False] * n
    fresh_at = [-1] * n
    # heap entries are (-delta, vertex); the candidate target and the entry's
    # current key live in side arrays, so superseded duplicates are detected
    # by key mismatch (two live entries can only collide with identical keys,
    # in which case either pop performs the same action)
    target_of = [-1] * n
    cached_negd = [0.0] * n
    heap = []
    for v in range(n):
        if bipartite:
            if side_group_count[vertex_side[v]] < 2:
                continue
        elif k < 2:
            continue
        delta, target = _best_move(
            v, g, m, c, k, d, touched, indptr, indices, weights,
            group_side, bipartite, corrected, degree, lt,
        )
        fresh_at[v] = 0
        target_of[v] = target
        cached_negd[v] = -delta
        heap.append((-delta, v))
    heapq.heapify(heap)

    version = 0
    cum = 0.0
    best_cum = 0.0
    best_idx = 0
    moves = []
    while heap:
        neg_delta, v = heapq.heappop(heap)
        if moved[v] or neg_delta != cached_negd[v]:
            continue
        d_ready = False
        if fresh_at[v] != version:
            delta, target = _best_move(
                v, g, m, c, k, d, touched, indptr, indices, weights,
                group_side, bipartite, corrected, degree, lt, keep_d=True,
            )
            fresh_at[v] = version
            neg_delta = -delta
            target_of[v] = target
            cached_negd[v] = neg_delta
            # if the refreshed entry would not stay on top, re-queue it
            if heap and heap[0] < (neg_delta, v):
                for x in touched:
                    d[x] = 0
                touched.clear()
                heapq.heappush(heap, (neg_delta, v))
                continue
            d_ready = True
        else:
            target = target_of[v]
        moves.append((v, g[v], target))
        _apply_move(v, target, g, m, cnt, kappa, d, touched,
                    indptr, indices, weights, degree, d_ready=d_ready)
        moved[v] = True
        version += 1
        cum += -neg_delta
        if cum > best_cum:
            best_cum = cum
            best_idx = len(moves)

    for i in range(len(moves) - 1, best_idx - 1, -1):
        v, source, _ = moves[i]
        _apply_move(v, source, g, m, cnt, kappa, d, touched,
                    indptr, indices, weights, degree)

    for v in range(n):
        g_arr[v] = g[v]
    return _objective(m, c, k, group_side, bipartite, lt)


def initial_score(indptr, indices, weights, degree, group_side, g_arr, k,
                  bipartite, corrected, log_table):
    """Exact objective of the current assignment (no sweep)."""
    g = g_arr.tolist()
    m, cnt, kappa = compute_stats(
        len(g), k, indptr.tolist(), indices.tolist(), weights.tolist(), g
    )
    c = kappa if corrected else cnt
    return _objective(m, c, k, group_side.tolist(), bipartite, log_table.tolist())
