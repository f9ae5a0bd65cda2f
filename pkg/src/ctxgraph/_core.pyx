# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled graph kernels (bitset rows, n <= 31).

Mirrors ``_pycore`` routine for routine; see that module for the reference
semantics.
"""

from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memset

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil
    int __builtin_ctz(unsigned int) nogil

cdef enum:
    MAXN = 32
    MAXAUT = 96

MAX_KEY_ORDER = 11


cdef inline int popc(uint32_t x) noexcept nogil:
    return __builtin_popcount(x)


cdef inline int ctz(uint32_t x) noexcept nogil:
    return __builtin_ctz(x)


# -- canonical labelling -----------------------------------------------------

ctypedef struct Canon:
    int n
    uint32_t adj[MAXN]
    int have_first
    uint32_t first_code[MAXN]
    int first_order[MAXN]
    uint32_t best_code[MAXN]
    int best_order[MAXN]
    int nauto
    signed char autos[MAXAUT][MAXN]


cdef void refine(Canon* C, uint32_t* cells, int* ncells) noexcept nogil:
    cdef int n = C.n
    cdef int changed = 1
    cdef int w, x, v, c, c0, ng, k, differ
    cdef uint32_t W, X, m
    cdef uint32_t buckets[MAXN + 1]
    cdef uint32_t groups[MAXN]
    while changed:
        changed = 0
        w = 0
        while w < ncells[0]:
            W = cells[w]
            x = 0
            while x < ncells[0]:
                X = cells[x]
                if X & (X - 1) == 0:
                    x += 1
                    continue
                v = ctz(X)
                c0 = popc(C.adj[v] & W)
                differ = 0
                m = X & (X - 1)
                while m:
                    v = ctz(m)
                    m &= m - 1
                    if popc(C.adj[v] & W) != c0:
                        differ = 1
                        break
                if not differ:
                    x += 1
                    continue
                memset(buckets, 0, sizeof(uint32_t) * (n + 1))
                m = X
                while m:
                    v = ctz(m)
                    m &= m - 1
                    buckets[popc(C.adj[v] & W)] |= (<uint32_t>1) << v
                ng = 0
                for c in range(n + 1):
                    if buckets[c]:
                        groups[ng] = buckets[c]
                        ng += 1
                k = ncells[0] - 1
                while k > x:
                    cells[k + ng - 1] = cells[k]
                    k -= 1
                for k in range(ng):
                    cells[x + k] = groups[k]
                ncells[0] += ng - 1
                changed = 1
                break
            if changed:
                break
            w += 1


cdef void leaf_code(Canon* C, int* order, uint32_t* code) noexcept nogil:
    cdef int n = C.n
    cdef int i, j
    cdef uint32_t row, col
    code[0] = 0
    for j in range(1, n):
        row = C.adj[order[j]]
        col = 0
        for i in range(j):
            col = (col << 1) | ((row >> order[i]) & 1)
        code[j] = col


cdef inline int cmp_code(uint32_t* a, uint32_t* b, int n) noexcept nogil:
    cdef int j
    for j in range(1, n):
        if a[j] != b[j]:
            return 1 if a[j] > b[j] else -1
    return 0


cdef void record_auto(Canon* C, int* src, int* dst) noexcept nogil:
    cdef int k
    if C.nauto >= MAXAUT:
        return
    for k in range(C.n):
        C.autos[C.nauto][src[k]] = <signed char>dst[k]
    C.nauto += 1


cdef inline int uf_find(int* parent, int a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef int same_orbit_as_explored(Canon* C, int* prefix, int depth, int v,
                                int* explored, int nexp) noexcept nogil:
    cdef int parent[MAXN]
    cdef int a, g, k, ok, ra, rb, used = 0
    cdef int n = C.n
    for a in range(n):
        parent[a] = a
    for g in range(C.nauto):
        ok = 1
        for k in range(depth):
            if C.autos[g][prefix[k]] != prefix[k]:
                ok = 0
                break
        if not ok:
            continue
        used = 1
        for a in range(n):
            ra = uf_find(parent, a)
            rb = uf_find(parent, C.autos[g][a])
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    if not used:
        return 0
    ra = uf_find(parent, v)
    for k in range(nexp):
        if uf_find(parent, explored[k]) == ra:
            return 1
    return 0


cdef int search(Canon* C, uint32_t* cells_in, int ncells, int* prefix,
                int depth, int on_first) noexcept nogil:
    cdef uint32_t cells[MAXN]
    cdef uint32_t child[MAXN]
    cdef uint32_t code[MAXN]
    cdef int order[MAXN]
    cdef int explored[MAXN]
    cdef int n = C.n
    cdef int i, t, size, s, v, nexp, jump, c
    cdef uint32_t T, m
    memcpy(cells, cells_in, sizeof(uint32_t) * ncells)
    refine(C, cells, &ncells)
    if ncells == n:
        for i in range(n):
            order[i] = ctz(cells[i])
        leaf_code(C, order, code)
        if not C.have_first:
            C.have_first = 1
            memcpy(C.first_code, code, sizeof(uint32_t) * n)
            memcpy(C.best_code, code, sizeof(uint32_t) * n)
            memcpy(C.first_order, order, sizeof(int) * n)
            memcpy(C.best_order, order, sizeof(int) * n)
            return 0
        if cmp_code(code, C.first_code, n) == 0:
            record_auto(C, C.first_order, order)
            return 1
        c = cmp_code(code, C.best_code, n)
        if c > 0:
            memcpy(C.best_code, code, sizeof(uint32_t) * n)
            memcpy(C.best_order, order, sizeof(int) * n)
        elif c == 0:
            record_auto(C, C.best_order, order)
        return 0
    t = -1
    size = n + 1
    for i in range(ncells):
        s = popc(cells[i])
        if 1 < s < size:
            t = i
            size = s
    T = cells[t]
    nexp = 0
    m = T
    while m:
        v = ctz(m)
        m &= m - 1
        if nexp > 0 and C.nauto > 0:
            if same_orbit_as_explored(C, prefix, depth, v, explored, nexp):
                continue
        memcpy(child, cells, sizeof(uint32_t) * t)
        child[t] = (<uint32_t>1) << v
        child[t + 1] = T & ~((<uint32_t>1) << v)
        memcpy(&child[t + 2], &cells[t + 1], sizeof(uint32_t) * (ncells - t - 1))
        prefix[depth] = v
        jump = search(C, child, ncells + 1, prefix, depth + 1, on_first and nexp == 0)
        explored[nexp] = v
        nexp += 1
        if jump and not on_first:
            return 1
    return 0


cdef void canon_run(Canon* C) noexcept nogil:
    cdef uint32_t cells[MAXN]
    cdef int prefix[MAXN]
    cdef int i
    C.have_first = 0
    C.nauto = 0
    if C.n <= 1:
        for i in range(C.n):
            C.best_order[i] = i
        return
    cells[0] = <uint32_t>((<uint64_t>1 << C.n) - 1)
    search(C, cells, 1, prefix, 0, 1)


cdef uint64_t best_key(Canon* C) noexcept nogil:
    cdef uint64_t key = 0
    cdef int j
    for j in range(1, C.n):
        key = (key << j) | C.best_code[j]
    return key


def canonical_order(int n, adj):
    if n > 31:
        raise ValueError("at most 31 vertices")
    cdef Canon C
    cdef int i
    C.n = n
    for i in range(n):
        C.adj[i] = <uint32_t>adj[i]
    canon_run(&C)
    return [C.best_order[i] for i in range(n)]


def canonical_key(int n, adj):
    if n > MAX_KEY_ORDER:
        raise ValueError("integer keys support at most 11 vertices")
    cdef Canon C
    cdef int i
    C.n = n
    for i in range(n):
        C.adj[i] = <uint32_t>adj[i]
    canon_run(&C)
    return best_key(&C)


# -- enumeration -------------------------------------------------------------

cdef inline void decode(int n, uint64_t key, uint32_t* adj) noexcept nogil:
    cdef int i, j
    cdef int pos = n * (n - 1) // 2
    for i in range(n):
        adj[i] = 0
    for j in range(1, n):
        for i in range(j):
            pos -= 1
            if (key >> pos) & 1:
                adj[i] |= (<uint32_t>1) << j
                adj[j] |= (<uint32_t>1) << i


def decode_key(int n, key):
    cdef uint32_t adj[MAXN]
    decode(n, <uint64_t>key, adj)
    return [adj[i] for i in range(n)]


def expand_level(int n, const uint64_t[::1] keys):
    if n + 1 > MAX_KEY_ORDER:
        raise ValueError("integer keys support at most 11 vertices")
    cdef Py_ssize_t p, nkeys = keys.shape[0]
    cdef Py_ssize_t cap = 1 << 16, count = 0
    cdef uint64_t* buf = <uint64_t*>malloc(cap * sizeof(uint64_t))
    cdef uint64_t* grown
    cdef uint64_t table[4096]
    cdef unsigned char used[4096]
    cdef int slots[4096]
    cdef int nused, h, u, k, ok
    cdef uint32_t S, adj[MAXN]
    cdef int deg[MAXN]
    cdef uint64_t c
    cdef Canon C
    cdef int m = n + 1
    if buf == NULL:
        raise MemoryError()
    memset(used, 0, sizeof(used))
    try:
        with nogil:
            C.n = m
            for p in range(nkeys):
                decode(n, keys[p], adj)
                for u in range(n):
                    deg[u] = popc(adj[u])
                nused = 0
                for S in range(<uint32_t>1 << n):
                    k = popc(S)
                    ok = 1
                    for u in range(n):
                        if deg[u] + <int>((S >> u) & 1) < k:
                            ok = 0
                            break
                    if not ok:
                        continue
                    for u in range(n):
                        C.adj[u] = adj[u] | (((S >> u) & 1) << n)
                    C.adj[n] = S
                    canon_run(&C)
                    c = best_key(&C)
                    h = <int>((c * <uint64_t>0x9E3779B97F4A7C15) >> 52)
                    while used[h] and table[h] != c:
                        h = (h + 1) & 4095
                    if used[h]:
                        continue
                    used[h] = 1
                    table[h] = c
                    slots[nused] = h
                    nused += 1
                    if count == cap:
                        cap *= 2
                        grown = <uint64_t*>realloc(buf, cap * sizeof(uint64_t))
                        if grown == NULL:
                            with gil:
                                raise MemoryError()
                        buf = grown
                    buf[count] = c
                    count += 1
                for u in range(nused):
                    used[slots[u]] = 0
        out = np.empty(count, dtype=np.uint64)
        if count:
            memcpy(cnp.PyArray_DATA(out), buf, count * sizeof(uint64_t))
        return out
    finally:
        free(buf)


cdef int connected(int n, uint32_t* adj) noexcept nogil:
    cdef uint32_t seen, frontier, nxt, m
    cdef int v
    if n == 0:
        return 1
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            v = ctz(m)
            m &= m - 1
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == <uint32_t>((<uint64_t>1 << n) - 1)


def is_connected(int n, adj):
    cdef uint32_t a[MAXN]
    cdef int i
    for i in range(n):
        a[i] = <uint32_t>adj[i]
    return bool(connected(n, a))


def connected_mask(int n, const uint64_t[::1] keys):
    cdef Py_ssize_t p, nkeys = keys.shape[0]
    out = np.zeros(nkeys, dtype=bool)
    cdef cnp.npy_bool[::1] o = out
    cdef uint32_t adj[MAXN]
    with nogil:
        for p in range(nkeys):
            decode(n, keys[p], adj)
            o[p] = connected(n, adj)
    return out


# -- independence, clique cover, maximal cliques ------------------------------

cdef void mc_expand(uint32_t* radj, int size, uint32_t P, int* best) noexcept nogil:
    cdef int verts[MAXN]
    cdef int colors[MAXN]
    cdef int nv = 0, color = 0, idx, v
    cdef uint32_t uncolored = P, avail, low, newP
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & (~avail + 1)
            v = ctz(avail)
            avail &= ~radj[v] & ~low
            uncolored &= ~low
            verts[nv] = v
            colors[nv] = color
            nv += 1
    idx = nv - 1
    while idx >= 0:
        if size + colors[idx] <= best[0]:
            return
        v = verts[idx]
        newP = P & radj[v]
        if newP:
            mc_expand(radj, size + 1, newP, best)
        elif size + 1 > best[0]:
            best[0] = size + 1
        P &= ~((<uint32_t>1) << v)
        idx -= 1


cdef int max_clique(int n, uint32_t* adj) noexcept nogil:
    cdef int order[MAXN]
    cdef int rank[MAXN]
    cdef uint32_t radj[MAXN]
    cdef int i, j, v, tmp, best = 0
    cdef uint32_t m, r
    if n == 0:
        return 0
    for i in range(n):
        order[i] = i
    # stable insertion sort: descending degree, ties by index
    for i in range(1, n):
        v = order[i]
        j = i - 1
        while j >= 0 and popc(adj[order[j]]) < popc(adj[v]):
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = v
    for i in range(n):
        rank[order[i]] = i
    for v in range(n):
        m = adj[v]
        r = 0
        while m:
            i = ctz(m)
            m &= m - 1
            r |= (<uint32_t>1) << rank[i]
        radj[rank[v]] = r
    mc_expand(radj, 0, <uint32_t>((<uint64_t>1 << n) - 1), &best)
    return best


cdef inline void complement_rows(int n, uint32_t* adj, uint32_t* out) noexcept nogil:
    cdef uint32_t full = <uint32_t>((<uint64_t>1 << n) - 1)
    cdef int v
    for v in range(n):
        out[v] = full & ~adj[v] & ~((<uint32_t>1) << v)


cdef int alpha_of(int n, uint32_t* adj) noexcept nogil:
    cdef uint32_t comp[MAXN]
    complement_rows(n, adj, comp)
    return max_clique(n, comp)


def independence_number(int n, adj):
    cdef uint32_t a[MAXN]
    cdef int i
    for i in range(n):
        a[i] = <uint32_t>adj[i]
    return alpha_of(n, a)


cdef int cover_place(int n, uint32_t* adj, int k, uint32_t* members,
                     int nm, int v) noexcept nogil:
    cdef int c
    cdef uint32_t bit, old
    if v == n:
        return 1
    bit = (<uint32_t>1) << v
    for c in range(nm):
        if members[c] & ~adj[v] == 0:
            old = members[c]
            members[c] = old | bit
            if cover_place(n, adj, k, members, nm, v + 1):
                return 1
            members[c] = old
    if nm < k:
        members[nm] = bit
        if cover_place(n, adj, k, members, nm + 1, v + 1):
            return 1
    return 0


cdef int cover_at_most(int n, uint32_t* adj, int k) noexcept nogil:
    cdef uint32_t members[MAXN]
    return cover_place(n, adj, k, members, 0, 0)


def clique_cover_at_most(int n, adj, int k):
    cdef uint32_t a[MAXN]
    cdef int i
    for i in range(n):
        a[i] = <uint32_t>adj[i]
    return bool(cover_at_most(n, a, k))


cdef void bk(uint32_t* adj, uint32_t R, uint32_t P, uint32_t X, list out):
    cdef uint32_t m, bit, cand
    cdef int u, v, pivot = -1, best = -1, c
    if P == 0:
        if X == 0:
            out.append(R)
        return
    m = P | X
    while m:
        u = ctz(m)
        m &= m - 1
        c = popc(P & adj[u])
        if c > best:
            pivot = u
            best = c
    cand = P & ~adj[pivot]
    while cand:
        v = ctz(cand)
        cand &= cand - 1
        bit = (<uint32_t>1) << v
        bk(adj, R | bit, P & adj[v], X & adj[v], out)
        P &= ~bit
        X |= bit


def maximal_cliques(int n, adj):
    cdef uint32_t a[MAXN]
    cdef int i
    for i in range(n):
        a[i] = <uint32_t>adj[i]
    out = []
    if n:
        bk(a, 0, <uint32_t>((<uint64_t>1 << n) - 1), 0, out)
    out.sort()
    return out


def screen_keys(int n, const uint64_t[::1] keys):
    cdef Py_ssize_t p, nkeys = keys.shape[0]
    conn = np.zeros(nkeys, dtype=bool)
    alpha = np.zeros(nkeys, dtype=np.int32)
    tight = np.zeros(nkeys, dtype=bool)
    cdef cnp.npy_bool[::1] co = conn
    cdef cnp.npy_bool[::1] ti = tight
    cdef int[::1] al = alpha
    cdef uint32_t adj[MAXN]
    cdef int a
    with nogil:
        for p in range(nkeys):
            decode(n, keys[p], adj)
            if not connected(n, adj):
                continue
            co[p] = 1
            a = alpha_of(n, adj)
            al[p] = a
            ti[p] = cover_at_most(n, adj, a)
    return conn, alpha, tight
