# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled main loop of the bidirected DSCC algorithm.

Same contract and operation order as ``_pykernel``; the statistics it
reports must match the Python kernel exactly.  Per-node and per-list fields
are packed into small structs of 32-bit ints so that one random access
touches one cache line.
"""
from array import array

from libc.stdint cimport int32_t
from libc.stdlib cimport free, malloc, qsort, realloc
from libc.string cimport memset

ctypedef int32_t idx_t

cdef enum:
    IDX_MAX = 2147483647
    RADIX_BITS = 11


cdef struct Node:
    idx_t parent
    idx_t name  # valid at tree roots
    idx_t root_of  # valid at representatives
    idx_t rank
    idx_t mark


cdef struct Slot:
    idx_t head
    idx_t tail
    idx_t size
    idx_t inq


cdef struct Cell:
    idx_t val
    idx_t next


cdef struct State:
    Py_ssize_t n
    Py_ssize_t k
    Node *node
    Slot *slot
    Cell *cell
    Py_ssize_t ncells
    Py_ssize_t capcells
    idx_t *queue
    Py_ssize_t qcap
    Py_ssize_t qhead
    Py_ssize_t qlen
    bint lifo
    idx_t *reps
    idx_t *roots
    long long iterations
    long long sum_sprime
    long long unions
    long long finds
    long long splices


# -- disjoint sets ------------------------------------------------------------

cdef inline idx_t s_root(State *st, idx_t u) noexcept nogil:
    cdef Node *node = st.node
    cdef idx_t r = u, nxt
    while node[r].parent != r:
        r = node[r].parent
    while node[u].parent != r:
        nxt = node[u].parent
        node[u].parent = r
        u = nxt
    return r


cdef inline idx_t s_find(State *st, idx_t u) noexcept nogil:
    st.finds += 1
    return st.node[s_root(st, u)].name


cdef void s_union(State *st, Py_ssize_t nreps, idx_t x) noexcept nogil:
    cdef Node *node = st.node
    cdef Py_ssize_t a
    cdef idx_t r, best
    st.unions += 1
    for a in range(nreps):
        st.roots[a] = node[st.reps[a]].root_of
    best = node[x].root_of
    for a in range(nreps):
        if node[st.roots[a]].rank > node[best].rank:
            best = st.roots[a]
    for a in range(nreps):
        r = st.roots[a]
        if r != best:
            if node[r].rank == node[best].rank:
                node[best].rank += 1
            node[r].parent = best
    node[best].name = x
    node[x].root_of = best


# -- edge lists ---------------------------------------------------------------

cdef int s_append(State *st, idx_t s, idx_t v) noexcept nogil:
    cdef idx_t c
    cdef Cell *p
    cdef Slot *sl
    if st.ncells == st.capcells:
        if st.capcells >= IDX_MAX // 2:
            return -1
        st.capcells = st.capcells * 2 + 16
        p = <Cell *> realloc(st.cell, st.capcells * sizeof(Cell))
        if p == NULL:
            return -1
        st.cell = p
    sl = &st.slot[s]
    c = <idx_t> st.ncells
    st.ncells += 1
    st.cell[c].val = v
    st.cell[c].next = -1
    if sl.size == 0:
        sl.head = c
    else:
        st.cell[sl.tail].next = c
    sl.tail = c
    sl.size += 1
    return 0


cdef inline void s_clear(State *st, idx_t s) noexcept nogil:
    st.slot[s].head = -1
    st.slot[s].tail = -1
    st.slot[s].size = 0


cdef inline void s_move(State *st, idx_t src, idx_t dst) noexcept nogil:
    cdef Slot *a = &st.slot[src]
    cdef Slot *b = &st.slot[dst]
    if a.size == 0:
        return
    st.splices += 1
    if b.size == 0:
        b.head = a.head
    else:
        st.cell[b.tail].next = a.head
    b.tail = a.tail
    b.size += a.size
    s_clear(st, src)


cdef inline int s_set_single(State *st, idx_t s, idx_t v) noexcept nogil:
    cdef Slot *sl = &st.slot[s]
    cdef idx_t c = sl.head
    if c < 0:
        return s_append(st, s, v)
    st.cell[c].val = v
    st.cell[c].next = -1
    sl.tail = c
    sl.size = 1
    return 0


cdef inline void s_enqueue(State *st, idx_t s) noexcept nogil:
    if st.slot[s].inq:
        return
    st.slot[s].inq = 1
    st.queue[(st.qhead + st.qlen) % st.qcap] = s
    st.qlen += 1


cdef inline idx_t s_dequeue(State *st) noexcept nogil:
    cdef idx_t s
    st.qlen -= 1
    if st.lifo:
        s = st.queue[(st.qhead + st.qlen) % st.qcap]
    else:
        s = st.queue[st.qhead]
        st.qhead = (st.qhead + 1) % st.qcap
    st.slot[s].inq = 0
    return s


cdef Py_ssize_t s_collect(State *st, idx_t s, idx_t stamp) noexcept nogil:
    # Distinct representatives of the targets in list ``s`` into st.reps.
    cdef idx_t c = st.slot[s].head, r
    cdef Py_ssize_t nreps = 0
    while c >= 0:
        r = s_find(st, st.cell[c].val)
        if st.node[r].mark != stamp:
            st.node[r].mark = stamp
            st.reps[nreps] = r
            nreps += 1
        c = st.cell[c].next
    return nreps


# -- main loop ----------------------------------------------------------------

cdef int s_run(State *st) noexcept nogil:
    cdef idx_t s, u, i, j, v, x, dst, stamp = 0
    cdef idx_t k = <idx_t> st.k
    cdef Py_ssize_t a, nreps
    cdef bint u_in
    while st.qlen > 0:
        s = s_dequeue(st)
        st.iterations += 1
        u = s // k
        i = s % k
        if s_find(st, u) != u:
            continue
        st.sum_sprime += st.slot[s].size
        stamp += 1
        nreps = s_collect(st, s, stamp)
        u_in = st.node[u].mark == stamp
        if nreps >= 2:
            x = -1
            for a in range(nreps):
                v = st.reps[a]
                if v != u and (x < 0 or v < x):
                    x = v
            s_union(st, nreps, x)
            for j in range(k):
                dst = x * k + j
                for a in range(nreps):
                    v = st.reps[a]
                    if v == x:
                        continue
                    if v != u or j != i:
                        s_move(st, v * k + j, dst)
                    else:
                        s_clear(st, s)
                        if s_append(st, dst, x) < 0:
                            return -1
                if st.slot[dst].size >= 2:
                    s_enqueue(st, dst)
        else:
            x = st.reps[0]
        if not u_in or nreps == 1:
            if s_set_single(st, s, x) < 0:
                return -1
    return 0


cdef int s_densify(State *st) noexcept nogil:
    cdef idx_t s, x, u, r, j
    cdef idx_t k = <idx_t> st.k
    cdef idx_t stamp = -1
    cdef Py_ssize_t a, nreps
    for s in range(st.n * k):
        if st.slot[s].size < 2:
            continue
        nreps = s_collect(st, s, stamp)
        stamp -= 1
        if nreps >= 2:
            x = st.reps[0]
            for a in range(nreps):
                if st.reps[a] < x:
                    x = st.reps[a]
            s_union(st, nreps, x)
        if s_set_single(st, s, st.cell[st.slot[s].head].val) < 0:
            return -1
    for u in range(st.n):
        r = s_find(st, u)
        if r != u:
            for j in range(k):
                s_move(st, u * k + j, r * k + j)
    return 0


cdef int s_solve(State *st, bint densify) noexcept nogil:
    cdef idx_t s
    if densify and s_densify(st) < 0:
        return -1
    for s in range(st.n * st.k):
        if st.slot[s].size >= 2:
            s_enqueue(st, s)
    return s_run(st)


# -- state lifetime -----------------------------------------------------------

cdef void s_free(State *st) noexcept nogil:
    free(st.node)
    free(st.slot)
    free(st.cell)
    free(st.queue)
    free(st.reps)
    free(st.roots)


cdef int s_alloc(State *st, Py_ssize_t n, Py_ssize_t k, Py_ssize_t capcells, bint lifo) noexcept nogil:
    cdef Py_ssize_t u, slots = n * k
    memset(st, 0, sizeof(State))
    if slots >= IDX_MAX or capcells >= IDX_MAX // 2:
        return -2
    st.n = n
    st.k = k
    st.lifo = lifo
    st.node = <Node *> malloc((n + 1) * sizeof(Node))
    st.slot = <Slot *> malloc((slots + 1) * sizeof(Slot))
    st.capcells = capcells + 16
    st.cell = <Cell *> malloc(st.capcells * sizeof(Cell))
    st.queue = <idx_t *> malloc((slots + 1) * sizeof(idx_t))
    st.reps = <idx_t *> malloc((n + 1) * sizeof(idx_t))
    st.roots = <idx_t *> malloc((n + 1) * sizeof(idx_t))
    st.qcap = slots + 1
    if (st.node == NULL or st.slot == NULL or st.cell == NULL or st.queue == NULL
            or st.reps == NULL or st.roots == NULL):
        s_free(st)
        return -1
    for u in range(n):
        st.node[u].parent = <idx_t> u
        st.node[u].name = <idx_t> u
        st.node[u].root_of = <idx_t> u
        st.node[u].rank = 0
        st.node[u].mark = 0
    for u in range(slots):
        st.slot[u].head = -1
        st.slot[u].tail = -1
        st.slot[u].size = 0
        st.slot[u].inq = 0
    return 0


cdef dict s_stats(State *st):
    return {
        "iterations": st.iterations,
        "sum_sprime": st.sum_sprime,
        "unions": st.unions,
        "finds": st.finds,
        "splices": st.splices,
    }


cdef int raise_alloc(int rc) except -1:
    if rc == -2:
        raise OverflowError("graph too large for 32-bit kernel indices")
    raise MemoryError()


def reach(Py_ssize_t n, Py_ssize_t k, src, dst, lab, bint densify=True, str order="fifo"):
    """Compiled counterpart of ``_pykernel.reach``."""
    cdef const long long[:] S = array("q", src)
    cdef const long long[:] D = array("q", dst)
    cdef const long long[:] L = array("q", lab)
    cdef State st
    cdef Py_ssize_t u, e, m = S.shape[0]
    cdef int rc = 0
    if order not in ("fifo", "lifo"):
        raise ValueError(f"unknown queue order {order!r}")
    rc = s_alloc(&st, n, k, m + n, order == "lifo")
    if rc < 0:
        raise_alloc(rc)
    try:
        with nogil:
            for e in range(m):
                rc = s_append(&st, <idx_t> (S[e] * k + L[e] - 1), <idx_t> D[e])
                if rc < 0:
                    break
            if rc == 0:
                rc = s_solve(&st, densify)
        if rc != 0:
            raise MemoryError()
        rep = [st.node[s_root(&st, <idx_t> u)].name for u in range(n)]
        stats = s_stats(&st)
    finally:
        s_free(&st)
    return rep, stats


# -- whole pipeline on signed edge codes --------------------------------------

cdef int cmp_ll(const void *a, const void *b) noexcept nogil:
    cdef long long x = (<const long long *> a)[0], y = (<const long long *> b)[0]
    return (x > y) - (x < y)


cdef void sort_run(long long *a, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    # Insertion sort for the short runs seen here; qsort for long ones.
    cdef Py_ssize_t i, j
    cdef long long x
    if hi - lo > 32:
        qsort(a + lo, hi - lo, sizeof(long long), cmp_ll)
        return
    for i in range(lo + 1, hi):
        x = a[i]
        j = i - 1
        while j >= lo and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


cdef int mirror_ok_buckets(Py_ssize_t n, Py_ssize_t k, Py_ssize_t m, const long long *S,
                           const long long *D, const long long *L) noexcept nogil:
    # Bidirected iff, at every node, the (neighbour, code) keys of outgoing
    # edges equal the (neighbour, -code) keys of incoming edges as multisets.
    # Both sides are bucketed by node with a counting sort and compared
    # sequentially.  1 = bidirected, 0 = not, -1 = out of memory.
    cdef long long span = 2 * k + 1
    cdef Py_ssize_t e, u, pos
    cdef int ok = 1
    cdef Py_ssize_t *ostart = <Py_ssize_t *> malloc((n + 2) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *istart = <Py_ssize_t *> malloc((n + 2) * sizeof(Py_ssize_t))
    cdef long long *okey = <long long *> malloc((m + 1) * sizeof(long long))
    cdef long long *ikey = <long long *> malloc((m + 1) * sizeof(long long))
    if ostart == NULL or istart == NULL or okey == NULL or ikey == NULL:
        free(ostart); free(istart); free(okey); free(ikey)
        return -1
    memset(ostart, 0, (n + 2) * sizeof(Py_ssize_t))
    memset(istart, 0, (n + 2) * sizeof(Py_ssize_t))
    for e in range(m):
        ostart[S[e] + 2] += 1
        istart[D[e] + 2] += 1
    for u in range(n):
        if ostart[u + 2] != istart[u + 2]:
            ok = 0
            break
        ostart[u + 2] += ostart[u + 1]
        istart[u + 2] += istart[u + 1]
    if ok:
        # Scatter; afterwards start[u + 1] is the end of bucket u.
        for e in range(m):
            pos = ostart[S[e] + 1]
            ostart[S[e] + 1] = pos + 1
            okey[pos] = D[e] * span + L[e] + k
            pos = istart[D[e] + 1]
            istart[D[e] + 1] = pos + 1
            ikey[pos] = S[e] * span - L[e] + k
        for u in range(n):
            sort_run(okey, ostart[u], ostart[u + 1])
            sort_run(ikey, istart[u], istart[u + 1])
        for e in range(m):
            if okey[e] != ikey[e]:
                ok = 0
                break
    free(ostart); free(istart); free(okey); free(ikey)
    return ok


cdef unsigned long long *radix_sort(unsigned long long *a, unsigned long long *tmp,
                                    Py_ssize_t cnt, int bits, Py_ssize_t *count) noexcept nogil:
    # LSD radix sort on the low ``bits`` bits, digits of at most RADIX_BITS.
    # Returns whichever buffer holds the sorted keys.
    cdef int passes = (bits + RADIX_BITS - 1) // RADIX_BITS
    cdef int width, shift = 0, p
    cdef Py_ssize_t i, nb, total, c
    cdef unsigned long long mask
    cdef unsigned long long *t
    if passes == 0:
        return a
    width = (bits + passes - 1) // passes
    nb = (<Py_ssize_t> 1) << width
    mask = <unsigned long long> (nb - 1)
    for p in range(passes):
        memset(count, 0, nb * sizeof(Py_ssize_t))
        for i in range(cnt):
            count[(a[i] >> shift) & mask] += 1
        total = 0
        for i in range(nb):
            c = count[i]
            count[i] = total
            total += c
        for i in range(cnt):
            c = (a[i] >> shift) & mask
            tmp[count[c]] = a[i]
            count[c] += 1
        t = a
        a = tmp
        tmp = t
        shift += width
    return a


cdef int mirror_ok(Py_ssize_t n, Py_ssize_t k, Py_ssize_t m, const long long *S,
                   const long long *D, const long long *L) noexcept nogil:
    # Every edge is keyed as (low end, high end, code seen from the low end);
    # edges leaving their low end go to one side, the rest to the other, and
    # an epsilon self-loop is its own mirror.  Bidirected iff both sides are
    # equal multisets, decided by radix sorting them.  Falls back to per-node
    # buckets when the packed key would not fit.
    cdef unsigned long long span = 2 * k + 1, key
    cdef unsigned long long limit = (<unsigned long long> n) * n * span
    cdef Py_ssize_t e, na = 0, nb = 0
    cdef long long u, v, c
    cdef int bits = 0, ok = 1
    cdef unsigned long long *a
    cdef unsigned long long *b
    cdef unsigned long long *tmp
    cdef unsigned long long *sa
    cdef unsigned long long *sb
    cdef Py_ssize_t *count
    if m == 0:
        return 1
    if n == 0 or (limit >> 62) != 0 or limit / span / n != <unsigned long long> n:
        return mirror_ok_buckets(n, k, m, S, D, L)
    while (limit - 1) >> bits:
        bits += 1
    a = <unsigned long long *> malloc((m + 1) * sizeof(unsigned long long))
    b = <unsigned long long *> malloc((m + 1) * sizeof(unsigned long long))
    tmp = <unsigned long long *> malloc((m + 1) * sizeof(unsigned long long))
    count = <Py_ssize_t *> malloc(((<Py_ssize_t> 1) << RADIX_BITS) * sizeof(Py_ssize_t))
    if a == NULL or b == NULL or tmp == NULL or count == NULL:
        free(a); free(b); free(tmp); free(count)
        return -1
    for e in range(m):
        u = S[e]
        v = D[e]
        c = L[e]
        if u < v or (u == v and c > 0):
            a[na] = (<unsigned long long> (u * n + v)) * span + <unsigned long long> (c + k)
            na += 1
        elif u > v or c < 0:
            b[nb] = (<unsigned long long> (v * n + u)) * span + <unsigned long long> (k - c)
            nb += 1
    if na != nb:
        ok = 0
    else:
        sa = radix_sort(a, tmp, na, bits, count)
        sb = radix_sort(b, a if sa == tmp else tmp, nb, bits, count)
        for e in range(na):
            if sa[e] != sb[e]:
                ok = 0
                break
    free(a); free(b); free(tmp); free(count)
    return ok


cdef Py_ssize_t eps_map(Py_ssize_t n, Py_ssize_t m, const long long *S, const long long *D,
                        const long long *L, idx_t *node_map) noexcept nogil:
    # node_map[u] = epsilon component of u, numbered in order of lowest
    # member; returns the component count, or -1 when out of memory.
    cdef Py_ssize_t e, u, count = 0
    cdef idx_t a, b, r
    cdef idx_t *par = <idx_t *> malloc((n + 1) * sizeof(idx_t))
    if par == NULL:
        return -1
    for u in range(n):
        par[u] = <idx_t> u
        node_map[u] = -1
    for e in range(m):
        if L[e] != 0:
            continue
        a = <idx_t> S[e]
        while par[a] != a:
            par[a] = par[par[a]]
            a = par[a]
        b = <idx_t> D[e]
        while par[b] != b:
            par[b] = par[par[b]]
            b = par[b]
        if a < b:
            par[b] = a
        elif b < a:
            par[a] = b
    for u in range(n):
        r = <idx_t> u
        while par[r] != r:
            r = par[r]
        if node_map[r] < 0:
            node_map[r] = <idx_t> count
            count += 1
        node_map[u] = node_map[r]
    free(par)
    return count


def dscc(Py_ssize_t n, Py_ssize_t k, src, dst, lab, bint densify=True, str order="fifo"):
    """Mirror check, epsilon contraction and main loop over all edges.

    ``lab`` holds signed label codes.  Returns ``(class_of, classes, stats)``
    with ``class_of[u]`` the smallest node id of ``u``'s class, or None in
    place of all three when the graph is not bidirected.
    """
    cdef const long long[:] S = src
    cdef const long long[:] D = dst
    cdef const long long[:] L = lab
    cdef Py_ssize_t m = S.shape[0], e, u, n2 = 0, classes = 0
    cdef const long long *ps = NULL
    cdef const long long *pd = NULL
    cdef const long long *pl = NULL
    cdef idx_t r
    cdef idx_t *node_map = NULL
    cdef idx_t *cls = NULL
    cdef State st
    cdef int ok = 1, rc = 0
    if order not in ("fifo", "lifo"):
        raise ValueError(f"unknown queue order {order!r}")
    if n >= IDX_MAX:
        raise OverflowError("graph too large for 32-bit kernel indices")
    if m:
        ps = &S[0]
        pd = &D[0]
        pl = &L[0]
        with nogil:
            ok = mirror_ok(n, k, m, ps, pd, pl)
        if ok < 0:
            raise MemoryError()
        if ok == 0:
            return None, None, None
    node_map = <idx_t *> malloc((n + 1) * sizeof(idx_t))
    cls = <idx_t *> malloc((n + 1) * sizeof(idx_t))
    if node_map == NULL or cls == NULL:
        free(node_map); free(cls)
        raise MemoryError()
    try:
        with nogil:
            n2 = eps_map(n, m, ps, pd, pl, node_map)
        if n2 < 0:
            raise MemoryError()
        rc = s_alloc(&st, n2, k, m // 2 + n2, order == "lifo")
        if rc < 0:
            raise_alloc(rc)
        try:
            with nogil:
                for e in range(m):
                    if pl[e] < 0:
                        rc = s_append(&st, <idx_t> (node_map[ps[e]] * k - pl[e] - 1), node_map[pd[e]])
                        if rc < 0:
                            break
                if rc == 0:
                    rc = s_solve(&st, densify)
                if rc == 0:
                    # Canonical class id: the smallest original member.
                    for u in range(n2):
                        cls[u] = -1
                    for u in range(n):
                        r = st.node[s_root(&st, node_map[u])].name
                        if cls[r] < 0:
                            cls[r] = <idx_t> u
                            classes += 1
                        node_map[u] = cls[r]
            if rc != 0:
                raise MemoryError()
            class_of = [node_map[u] for u in range(n)]
            stats = s_stats(&st)
        finally:
            s_free(&st)
    finally:
        free(node_map)
        free(cls)
    return class_of, classes, stats
