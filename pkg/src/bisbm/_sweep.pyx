# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cython sweep kernel.

Exact transliteration of _sweep_py (same arithmetic in the same order, same
lazy-heap selection and tie-breaking); the two engines must stay bit-for-bit
interchangeable. See _sweep_py for the algorithm description.
"""

import numpy as np

ENGINE_NAME = "cython"

ctypedef long long i64
ctypedef signed char i8


cdef struct BestMove:
    double delta
    i64 target
    Py_ssize_t n_touched  # filled d-counts left behind when keep_d


# Heap entries are packed 2 doubles wide: (-delta, vertex). The vertex index
# is far below 2^53, so double comparisons order entries exactly like the
# pure-Python engine's (float, int) tuples. An entry's candidate target and
# live key are kept in side arrays; a popped entry is superseded (and
# skipped) when its key no longer matches the vertex's live key.

cdef inline bint _entry_less(double a0, double a1, double b0, double b1) nogil:
    if a0 != b0:
        return a0 < b0
    return a1 < b1


cdef inline void _heap_sift_up(double* hp, Py_ssize_t pos) nogil:
    cdef double c0 = hp[2 * pos], c1 = hp[2 * pos + 1]
    cdef Py_ssize_t parent
    while pos > 0:
        parent = (pos - 1) >> 1
        if _entry_less(c0, c1, hp[2 * parent], hp[2 * parent + 1]):
            hp[2 * pos] = hp[2 * parent]
            hp[2 * pos + 1] = hp[2 * parent + 1]
            pos = parent
        else:
            break
    hp[2 * pos] = c0
    hp[2 * pos + 1] = c1


cdef inline void _heap_sift_down(double* hp, Py_ssize_t pos, Py_ssize_t size) nogil:
    cdef double c0 = hp[2 * pos], c1 = hp[2 * pos + 1]
    cdef Py_ssize_t child
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        if child + 1 < size and _entry_less(
            hp[2 * child + 2], hp[2 * child + 3], hp[2 * child], hp[2 * child + 1]
        ):
            child += 1
        if _entry_less(hp[2 * child], hp[2 * child + 1], c0, c1):
            hp[2 * pos] = hp[2 * child]
            hp[2 * pos + 1] = hp[2 * child + 1]
            pos = child
        else:
            break
    hp[2 * pos] = c0
    hp[2 * pos + 1] = c1


cdef void _compute_stats(Py_ssize_t n, Py_ssize_t k,
                         i64[::1] indptr, i64[::1] indices, i64[::1] weights,
                         i64[::1] g, i64[:, ::1] m, i64[::1] cnt,
                         i64[::1] kappa) nogil:
    cdef Py_ssize_t u, j
    cdef i64 gu, w
    for u in range(k):
        cnt[u] = 0
        kappa[u] = 0
        for j in range(k):
            m[u, j] = 0
    for u in range(n):
        gu = g[u]
        cnt[gu] += 1
        for j in range(indptr[u], indptr[u + 1]):
            w = weights[j]
            m[gu, g[indices[j]]] += w
            kappa[gu] += w


cdef double _objective(i64[:, ::1] m, i64[::1] c, Py_ssize_t k,
                       i8[::1] group_side, bint bipartite,
                       double[::1] lt) nogil:
    cdef double acc = 0.0, lcr
    cdef Py_ssize_t r, s
    cdef i64 mm
    for r in range(k):
        lcr = lt[c[r]]
        for s in range(k):
            if bipartite and group_side[r] == group_side[s]:
                continue
            mm = m[r, s]
            if mm > 0:
                acc += mm * (lt[mm] - lcr - lt[c[s]])
    return acc


cdef BestMove _best_move(Py_ssize_t v, i64[::1] g, i64[:, ::1] m, i64[::1] c,
                         Py_ssize_t k, i64[::1] d, i64[::1] touched,
                         i64[::1] indptr, i64[::1] indices, i64[::1] weights,
                         i8[::1] group_side, bint bipartite, bint corrected,
                         i64[::1] degree, double[::1] lt,
                         bint keep_d) nogil:
    cdef BestMove out
    cdef Py_ssize_t j, s, x, n_touched = 0
    cdef i64 r = g[v], gx, shift, cr, cr_new, cs, cs_new, cx, dx
    cdef i64 mrx, msx, mrx2, msx2, mrs, mrs2, mrr, mrr2, mss, mss2, dr, ds
    cdef double delta, old, new, best_delta = 0.0
    cdef bint have = False
    cdef i64 best_target = -1
    cdef i8 side_r = group_side[r]

    for j in range(indptr[v], indptr[v + 1]):
        gx = g[indices[j]]
        if d[gx] == 0:
            touched[n_touched] = gx
            n_touched += 1
        d[gx] += weights[j]

    shift = degree[v] if corrected else 1
    cr = c[r]
    cr_new = cr - shift
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
                mrx = m[r, x]
                msx = m[s, x]
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
                mrx = m[r, x]
                msx = m[s, x]
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
            mrs = m[r, s]
            mrs2 = mrs + dr - ds
            if mrs > 0:
                delta -= 2.0 * mrs * (lt[mrs] - lt[cr] - lt[cs])
            if mrs2 > 0:
                delta += 2.0 * mrs2 * (lt[mrs2] - lt[cr_new] - lt[cs_new])
            mrr = m[r, r]
            mrr2 = mrr - 2 * dr
            if mrr > 0:
                delta -= mrr * (lt[mrr] - 2.0 * lt[cr])
            if mrr2 > 0:
                delta += mrr2 * (lt[mrr2] - 2.0 * lt[cr_new])
            mss = m[s, s]
            mss2 = mss + 2 * ds
            if mss > 0:
                delta -= mss * (lt[mss] - 2.0 * lt[cs])
            if mss2 > 0:
                delta += mss2 * (lt[mss2] - 2.0 * lt[cs_new])
        if (not have) or delta > best_delta:
            have = True
            best_delta = delta
            best_target = s

    if not keep_d:
        for j in range(n_touched):
            d[touched[j]] = 0
        n_touched = 0
    out.delta = best_delta
    out.target = best_target
    out.n_touched = n_touched
    return out


cdef void _apply_move(Py_ssize_t v, i64 s, i64[::1] g, i64[:, ::1] m,
                      i64[::1] cnt, i64[::1] kappa, i64[::1] d,
                      i64[::1] touched, i64[::1] indptr, i64[::1] indices,
                      i64[::1] weights, i64[::1] degree,
                      Py_ssize_t n_touched_in) nogil:
    cdef Py_ssize_t j, n_touched = n_touched_in
    cdef i64 r = g[v], gx, x, dx, kv
    if n_touched_in < 0:
        n_touched = 0
        for j in range(indptr[v], indptr[v + 1]):
            gx = g[indices[j]]
            if d[gx] == 0:
                touched[n_touched] = gx
                n_touched += 1
            d[gx] += weights[j]
    for j in range(n_touched):
        x = touched[j]
        dx = d[x]
        if x == r:
            m[r, r] -= 2 * dx
        else:
            m[r, x] -= dx
            m[x, r] -= dx
        if x == s:
            m[s, s] += 2 * dx
        else:
            m[s, x] += dx
            m[x, s] += dx
        d[x] = 0
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

    `stats`, when given, is (m, cnt, kappa, valid): preallocated stat arrays
    reused across sweeps; they are left consistent with g_arr on return.
    """
    cdef i64[::1] indptr_v = indptr
    cdef i64[::1] indices_v = indices
    cdef i64[::1] weights_v = weights
    cdef i64[::1] degree_v = degree
    cdef i8[::1] vside = vertex_side
    cdef i8[::1] gside = group_side
    cdef i64[::1] g = g_arr
    cdef double[::1] lt = log_table
    cdef Py_ssize_t n = g_arr.shape[0]
    cdef Py_ssize_t kk = k
    cdef bint bip = bipartite
    cdef bint corr = corrected

    cdef i64[:, ::1] m
    cdef i64[::1] cnt
    cdef i64[::1] kappa
    cdef bint stats_valid = False
    if stats is not None and stats[0] is not None:
        # caller-maintained stats; sweeps preserve exact integer stats through
        # the rewind, so they stay consistent with g across calls
        m = stats[0]
        cnt = stats[1]
        kappa = stats[2]
        stats_valid = bool(stats[3])
    else:
        m_arr = np.empty((kk, kk), dtype=np.int64)
        cnt_arr = np.empty(kk, dtype=np.int64)
        kappa_arr = np.empty(kk, dtype=np.int64)
        m = m_arr
        cnt = cnt_arr
        kappa = kappa_arr
        if stats is not None:
            stats[0] = m_arr
            stats[1] = cnt_arr
            stats[2] = kappa_arr
    if not stats_valid:
        _compute_stats(n, kk, indptr_v, indices_v, weights_v, g, m, cnt, kappa)
    if stats is not None:
        stats[3] = True
    cdef i64[::1] c = kappa if corr else cnt

    cdef i64 side_group_count[2]
    side_group_count[0] = 0
    side_group_count[1] = 0
    cdef Py_ssize_t r
    for r in range(kk):
        side_group_count[gside[r]] += 1

    d_arr = np.zeros(kk, dtype=np.int64)
    touched_arr = np.empty(kk, dtype=np.int64)
    cdef i64[::1] d = d_arr
    cdef i64[::1] touched = touched_arr

    # lazy max-heap over candidate moves (stored as min-heap on -delta),
    # packed 2 doubles per entry for locality
    cdef Py_ssize_t cap = 4 * n + 16
    hp_arr = np.empty(2 * cap, dtype=np.float64)
    cdef double[::1] hp_view = hp_arr
    cdef double* hp = &hp_view[0]
    cdef Py_ssize_t heap_size = 0

    moved_arr = np.zeros(n, dtype=np.int8)
    fresh_arr = np.full(n, -1, dtype=np.int64)
    cdef i8[::1] moved = moved_arr
    cdef i64[::1] fresh_at = fresh_arr
    target_arr = np.full(n, -1, dtype=np.int64)
    negd_arr = np.zeros(n, dtype=np.float64)
    cdef i64[::1] target_of = target_arr
    cdef double[::1] cached_negd = negd_arr

    mv_v_arr = np.empty(n, dtype=np.int64)
    mv_from_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] mv_v = mv_v_arr
    cdef i64[::1] mv_from = mv_from_arr

    cdef BestMove bm
    cdef Py_ssize_t v, i, w_idx, n_touched_ready
    cdef i64 version = 0, target
    cdef double cum = 0.0, best_cum = 0.0, neg_delta
    cdef Py_ssize_t best_idx = 0, n_moves = 0

    with nogil:
        for v in range(n):
            if bip:
                if side_group_count[vside[v]] < 2:
                    continue
            elif kk < 2:
                continue
            bm = _best_move(v, g, m, c, kk, d, touched, indptr_v, indices_v,
                            weights_v, gside, bip, corr, degree_v, lt, False)
            fresh_at[v] = 0
            target_of[v] = bm.target
            cached_negd[v] = -bm.delta
            hp[2 * heap_size] = -bm.delta
            hp[2 * heap_size + 1] = <double> v
            heap_size += 1
        # bulk heapify (same pop order as the sequential-push heap for
        # distinct keys; equal-key duplicates trigger identical actions)
        for i in range((heap_size >> 1) - 1, -1, -1):
            _heap_sift_down(hp, i, heap_size)

        while heap_size > 0:
            neg_delta = hp[0]
            v = <Py_ssize_t> hp[1]
            heap_size -= 1
            if heap_size > 0:
                hp[0] = hp[2 * heap_size]
                hp[1] = hp[2 * heap_size + 1]
                _heap_sift_down(hp, 0, heap_size)
            if moved[v] or neg_delta != cached_negd[v]:
                continue
            n_touched_ready = -1
            if fresh_at[v] != version:
                bm = _best_move(v, g, m, c, kk, d, touched, indptr_v,
                                indices_v, weights_v, gside, bip, corr,
                                degree_v, lt, True)
                fresh_at[v] = version
                neg_delta = -bm.delta
                target = bm.target
                target_of[v] = target
                cached_negd[v] = neg_delta
                if heap_size > 0 and _entry_less(hp[0], hp[1], neg_delta,
                                                 <double> v):
                    # not on top anymore: clear the scan and re-queue
                    for i in range(bm.n_touched):
                        d[touched[i]] = 0
                    if heap_size >= cap:
                        # compact: drop dead entries (at most one live entry
                        # per unmoved vertex remains, so this makes room)
                        w_idx = 0
                        for i in range(heap_size):
                            if (not moved[<Py_ssize_t> hp[2 * i + 1]]
                                    and hp[2 * i]
                                    == cached_negd[<Py_ssize_t> hp[2 * i + 1]]):
                                hp[2 * w_idx] = hp[2 * i]
                                hp[2 * w_idx + 1] = hp[2 * i + 1]
                                w_idx += 1
                        heap_size = w_idx
                        for i in range((heap_size >> 1) - 1, -1, -1):
                            _heap_sift_down(hp, i, heap_size)
                    hp[2 * heap_size] = neg_delta
                    hp[2 * heap_size + 1] = <double> v
                    heap_size += 1
                    _heap_sift_up(hp, heap_size - 1)
                    continue
                n_touched_ready = bm.n_touched
            else:
                target = target_of[v]
            mv_v[n_moves] = v
            mv_from[n_moves] = g[v]
            n_moves += 1
            _apply_move(v, target, g, m, cnt, kappa, d, touched, indptr_v,
                        indices_v, weights_v, degree_v, n_touched_ready)
            moved[v] = 1
            version += 1
            cum += -neg_delta
            if cum > best_cum:
                best_cum = cum
                best_idx = n_moves

        for i in range(n_moves - 1, best_idx - 1, -1):
            _apply_move(mv_v[i], mv_from[i], g, m, cnt, kappa, d, touched,
                        indptr_v, indices_v, weights_v, degree_v, -1)

    return _objective(m, c, kk, gside, bip, lt)


def initial_score(indptr, indices, weights, degree, group_side, g_arr, k,
                  bipartite, corrected, log_table):
    """Exact objective of the current assignment (no sweep)."""
    cdef i64[::1] indptr_v = indptr
    cdef i64[::1] indices_v = indices
    cdef i64[::1] weights_v = weights
    cdef i64[::1] g = g_arr
    cdef i8[::1] gside = group_side
    cdef double[::1] lt = log_table
    cdef Py_ssize_t n = g_arr.shape[0]
    cdef Py_ssize_t kk = k
    m_arr = np.zeros((kk, kk), dtype=np.int64)
    cnt_arr = np.zeros(kk, dtype=np.int64)
    kappa_arr = np.zeros(kk, dtype=np.int64)
    cdef i64[:, ::1] m = m_arr
    cdef i64[::1] cnt = cnt_arr
    cdef i64[::1] kappa = kappa_arr
    _compute_stats(n, kk, indptr_v, indices_v, weights_v, g, m, cnt, kappa)
    cdef i64[::1] c = kappa if bool(corrected) else cnt
    return _objective(m, c, kk, gside, bool(bipartite), lt)
