"""Pure-Python graph kernels.

Reference implementation of every routine in ``_core.pyx``.  Both backends
walk the same search trees, so they return identical results; this module is
used when the compiled extension is unavailable or when ``CTX_PURE_PYTHON``
is set.

Graphs are passed as ``(n, adj)`` where ``adj[i]`` is the neighbourhood
bitmask of vertex ``i``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

MAX_KEY_ORDER = 11


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(x: int) -> int:
    return bin(x).count("1")


# -- canonical labelling -----------------------------------------------------


def _refine(adj: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition (list of cell masks)."""
    cells = list(cells)
    changed = True
    while changed:
        changed = False
        for w in range(len(cells)):
            W = cells[w]
            for x in range(len(cells)):
                X = cells[x]
                if X & (X - 1) == 0:
                    continue
                groups: dict[int, int] = {}
                for v in _bits(X):
                    c = _popcount(adj[v] & W)
                    groups[c] = groups.get(c, 0) | (1 << v)
                if len(groups) > 1:
                    cells[x : x + 1] = [groups[c] for c in sorted(groups)]
                    changed = True
                    break
            if changed:
                break
    return cells


def _leaf_code(adj: Sequence[int], order: list[int]) -> int:
    code = 0
    n = len(order)
    for j in range(1, n):
        row = adj[order[j]]
        for i in range(j):
            code = (code << 1) | ((row >> order[i]) & 1)
    return code


def _orbit_roots(n: int, gens: list[list[int]]) -> list[int]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for a in range(n):
            ra, rb = find(a), find(g[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return [find(a) for a in range(n)]


def canonical_order(n: int, adj: Sequence[int]) -> list[int]:
    """Return the canonical vertex order: position k holds original vertex.

    The order maximises the column-ordered upper-triangle bit string over
    all leaves of the individualisation-refinement tree.  Automorphisms
    found at leaves prune the tree without changing the maximum.
    """
    if n <= 1:
        return list(range(n))
    adj = list(adj)
    state = {"first": None, "best": None}
    autos: list[list[int]] = []

    def record(src: list[int], dst: list[int]):
        perm = [0] * n
        for a, b in zip(src, dst):
            perm[a] = b
        autos.append(perm)

    def search(cells: list[int], prefix: list[int], on_first: bool) -> bool:
        cells = _refine(adj, cells)
        if len(cells) == n:
            order = [c.bit_length() - 1 for c in cells]
            code = _leaf_code(adj, order)
            first = state["first"]
            if first is None:
                state["first"] = state["best"] = (code, order)
                return False
            if code == first[0]:
                record(first[1], order)
                return True
            best = state["best"]
            if code > best[0]:
                state["best"] = (code, order)
            elif code == best[0]:
                record(best[1], order)
            return False
        t, size = -1, n + 1
        for i, c in enumerate(cells):
            s = _popcount(c)
            if 1 < s < size:
                t, size = i, s
        T = cells[t]
        explored: list[int] = []
        for v in _bits(T):
            if explored:
                gens = [g for g in autos if all(g[u] == u for u in prefix)]
                if gens:
                    roots = _orbit_roots(n, gens)
                    if any(roots[v] == roots[u] for u in explored):
                        continue
            child = cells[:t] + [1 << v, T & ~(1 << v)] + cells[t + 1 :]
            jump = search(child, prefix + [v], on_first and not explored)
            explored.append(v)
            if jump and not on_first:
                return True
        return False

    search([(1 << n) - 1], [], True)
    return state["best"][1]


def canonical_key(n: int, adj: Sequence[int]) -> int:
    """Canonical upper-triangle code as an integer (graph6 bit order)."""
    return _leaf_code(adj, canonical_order(n, adj))


# -- enumeration -------------------------------------------------------------


def decode_key(n: int, key: int) -> list[int]:
    adj = [0] * n
    pos = n * (n - 1) // 2
    for j in range(1, n):
        for i in range(j):
            pos -= 1
            if (key >> pos) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def expand_level(n: int, keys) -> np.ndarray:
    """Canonical keys of all one-vertex extensions of the given n-vertex graphs.

    The new vertex must have minimum degree in the extension; every graph on
    n+1 vertices arises this way from some parent.  Output is deduplicated
    per parent only.
    """
    m = n + 1
    out: list[int] = []
    for key in keys:
        adj = decode_key(n, int(key))
        deg = [_popcount(a) for a in adj]
        seen = set()
        for S in range(1 << n):
            k = _popcount(S)
            ok = True
            for u in range(n):
                if deg[u] + ((S >> u) & 1) < k:
                    ok = False
                    break
            if not ok:
                continue
            ext = [adj[u] | (((S >> u) & 1) << n) for u in range(n)] + [S]
            c = canonical_key(m, ext)
            if c not in seen:
                seen.add(c)
                out.append(c)
    return np.array(out, dtype=np.uint64)


def is_connected(n: int, adj: Sequence[int]) -> bool:
    if n == 0:
        return True
    full = (1 << n) - 1
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def connected_mask(n: int, keys) -> np.ndarray:
    return np.array([is_connected(n, decode_key(n, int(k))) for k in keys], dtype=bool)


# -- independence, clique cover, maximal cliques ------------------------------


def _max_clique(n: int, adj: Sequence[int]) -> int:
    """Maximum clique size by branch and bound with greedy colouring bounds.

    Vertices are ordered by descending degree, ties by index.
    """
    if n == 0:
        return 0
    order = sorted(range(n), key=lambda v: (-_popcount(adj[v]), v))
    rank = [0] * n
    for r, v in enumerate(order):
        rank[v] = r
    # relabel so that bit position == rank
    radj = [0] * n
    for v in range(n):
        m = 0
        for u in _bits(adj[v]):
            m |= 1 << rank[u]
        radj[rank[v]] = m
    best = [0]

    def expand(size: int, P: int):
        # greedy colouring of P in rank order
        verts: list[int] = []
        colors: list[int] = []
        uncolored = P
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~radj[v] & ~low
                uncolored &= ~low
                verts.append(v)
                colors.append(color)
        for idx in range(len(verts) - 1, -1, -1):
            if size + colors[idx] <= best[0]:
                return
            v = verts[idx]
            newP = P & radj[v]
            if newP:
                expand(size + 1, newP)
            elif size + 1 > best[0]:
                best[0] = size + 1
            P &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best[0]


def complement_adj(n: int, adj: Sequence[int]) -> list[int]:
    full = (1 << n) - 1
    return [full & ~adj[v] & ~(1 << v) for v in range(n)]


def independence_number(n: int, adj: Sequence[int]) -> int:
    return _max_clique(n, complement_adj(n, adj))


def clique_cover_at_most(n: int, adj: Sequence[int], k: int) -> bool:
    """True iff the vertices can be partitioned into at most k cliques."""
    members: list[int] = []

    def place(v: int) -> bool:
        if v == n:
            return True
        bit = 1 << v
        for c in range(len(members)):
            if members[c] & ~adj[v] == 0:
                old_m = members[c]
                members[c] = old_m | bit
                if place(v + 1):
                    return True
                members[c] = old_m
        if len(members) < k:
            members.append(bit)
            if place(v + 1):
                return True
            members.pop()
        return False

    return place(0)


def maximal_cliques(n: int, adj: Sequence[int]) -> list[int]:
    """All maximal cliques as sorted bitmasks (Bron-Kerbosch, Tomita pivot)."""
    out: list[int] = []

    def bk(R: int, P: int, X: int):
        if P == 0:
            if X == 0:
                out.append(R)
            return
        pivot, best = -1, -1
        for u in _bits(P | X):
            c = _popcount(P & adj[u])
            if c > best:
                pivot, best = u, c
        for v in _bits(P & ~adj[pivot]):
            bit = 1 << v
            bk(R | bit, P & adj[v], X & adj[v])
            P &= ~bit
            X |= bit

    if n:
        bk(0, (1 << n) - 1, 0)
    out.sort()
    return out


def screen_keys(n: int, keys):
    """Per-key (connected, alpha, cover_equals_alpha) arrays for the scan."""
    conn = np.zeros(len(keys), dtype=bool)
    alpha = np.zeros(len(keys), dtype=np.int32)
    tight = np.zeros(len(keys), dtype=bool)
    for i, key in enumerate(keys):
        adj = decode_key(n, int(key))
        conn[i] = is_connected(n, adj)
        if not conn[i]:
            continue
        a = independence_number(n, adj)
        alpha[i] = a
        tight[i] = clique_cover_at_most(n, adj, a)
    return conn, alpha, tight
