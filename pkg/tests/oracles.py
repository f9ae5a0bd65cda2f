"""Independent brute-force references used by the tests.

None of these call into ctxgraph's kernels: they enumerate subsets,
permutations or polytope vertices directly, or count via Burnside's lemma.
"""

import itertools
import math
from fractions import Fraction
from functools import lru_cache


def adj_from_edges(n, edges):
    adj = [0] * n
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return tuple(adj)


def edges_of(n, adj):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if (adj[i] >> j) & 1]


def is_connected(n, adj):
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for w in range(n):
            if (adj[v] >> w) & 1 and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def brute_alpha(n, adj):
    best = 0
    for S in range(1 << n):
        k = bin(S).count("1")
        if k <= best:
            continue
        if all(not (adj[v] & S) for v in range(n) if (S >> v) & 1):
            best = k
    return best


def all_cliques(n, adj):
    out = []
    for S in range(1, 1 << n):
        vs = [v for v in range(n) if (S >> v) & 1]
        if all((adj[a] >> b) & 1 for a, b in itertools.combinations(vs, 2)):
            out.append(S)
    return out


def brute_maximal_cliques(n, adj):
    cl = all_cliques(n, adj)
    cs = set(cl)
    return sorted(S for S in cl if not any((S | (1 << v)) in cs for v in range(n) if not (S >> v) & 1))


def brute_min_clique_cover(n, adj):
    """Fewest cliques partitioning the vertices (exhaustive over colourings of the complement)."""
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if col[0] != 0:
                continue
            if all(col[i] != col[j] or (adj[i] >> j) & 1 for i in range(n) for j in range(i + 1, n)):
                return k
    return n


def _solve_exact(M, rhs):
    """Gaussian elimination over Fractions; None if singular."""
    k = len(M)
    A = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(M, rhs)]
    for c in range(k):
        p = next((r for r in range(c, k) if A[r][c] != 0), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        for r in range(k):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [A[i][-1] / A[i][i] for i in range(k)]


def brute_fractional_packing(n, adj):
    """alpha* by enumerating vertices of {0 <= w <= 1, w(C) <= 1 for all cliques C}.

    Each vertex is the solution of n tight constraints; only practical for n <= 5.
    """
    cons = [([1 if (S >> v) & 1 else 0 for v in range(n)], 1) for S in all_cliques(n, adj)]
    for v in range(n):
        e = [0] * n
        e[v] = -1
        cons.append((e, 0))
    best = Fraction(0)
    for rows in itertools.combinations(range(len(cons)), n):
        w = _solve_exact([cons[r][0] for r in rows], [cons[r][1] for r in rows])
        if w is None:
            continue
        if all(sum(a * x for a, x in zip(row, w)) <= b for row, b in cons):
            best = max(best, sum(w))
    return best


def max_code_canonical(n, adj):
    """Brute-force canonical code: lexicographically largest upper-triangle code over all n! relabellings."""
    best = -1
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for v, p in enumerate(perm):
            inv[p] = v
        code = 0
        for j in range(1, n):
            for i in range(j):
                code = (code << 1) | ((adj[inv[j]] >> inv[i]) & 1)
        best = max(best, code)
    return best


@lru_cache(maxsize=None)
def _partitions(n, max_part=None):
    max_part = n if max_part is None else max_part
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, max_part), 0, -1):
        out += [(k,) + rest for rest in _partitions(n - k, k)]
    return out


def burnside_graph_count(n):
    """Number of unlabelled graphs on n vertices via the cycle index of the pair action."""
    total = Fraction(0)
    for lam in _partitions(n):
        # permutations of cycle type lam
        mult = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        size = math.factorial(n)
        for k, m in mult.items():
            size //= k**m * math.factorial(m)
        cycles = sum(p // 2 for p in lam)
        cycles += sum(math.gcd(a, b) for a, b in itertools.combinations(lam, 2))
        total += size * 2**cycles
    return int(total / math.factorial(n))


def connected_counts_from_all(all_counts):
    """Inverse Euler transform: connected counts c_1..c_N from all-graph counts a_1..a_N."""
    N = len(all_counts)
    c = []
    for n in range(1, N + 1):
        poly = [0] * (n + 1)
        poly[0] = 1
        for k, ck in enumerate(c, start=1):
            factor = [0] * (n + 1)
            for j in range(0, n // k + 1):
                factor[k * j] = math.comb(ck + j - 1, j)
            poly = [sum(poly[i] * factor[d - i] for i in range(d + 1)) for d in range(n + 1)]
        c.append(all_counts[n - 1] - poly[n])
    return c


def labelled_classes(n, canon, connected_only=True):
    """Set of canonical codes over all 2^(n choose 2) labelled graphs."""
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    seen = set()
    for mask in range(1 << len(pairs)):
        adj = adj_from_edges(n, [p for b, p in enumerate(pairs) if (mask >> b) & 1])
        if connected_only and not is_connected(n, adj):
            continue
        seen.add(canon(n, adj))
    return seen


def theta_odd_cycle(n):
    c = math.cos(math.pi / n)
    return n * c / (1 + c)
