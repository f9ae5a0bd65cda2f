"""Simple undirected graphs on up to 31 vertices, canonical forms, enumeration
of connected graphs up to isomorphism, and graph6 text I/O."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._backend import kernels

MAX_ORDER = 31
_CHUNK = 4096


class GraphFormatError(ValueError):
    """Malformed graph6 input."""


@dataclass(frozen=True)
class Graph:
    """Graph on vertices ``0..n-1``; ``adj[i]`` is the neighbour bitmask of ``i``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise ValueError(f"vertex count must be in 1..{MAX_ORDER}, got {self.n}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency has wrong number of rows")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full or (row >> i) & 1:
                raise ValueError(f"row {i} has out-of-range bits or a loop")
            for j in range(self.n):
                if ((row >> j) & 1) != ((self.adj[j] >> i) & 1):
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError("loops are not allowed")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, tuple(adj))

    @classmethod
    def from_key(cls, n: int, key: int) -> "Graph":
        """Graph whose upper-triangle bits (column order, x01 first) form ``key``."""
        return cls(n, tuple(int(r) for r in kernels.decode_key(n, int(key))))

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.n) for i in range(j) if self.has_edge(i, j)]

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph in which old vertex ``v`` becomes ``perm[v]``."""
        adj = [0] * self.n
        for i, j in self.edges():
            adj[perm[i]] |= 1 << perm[j]
            adj[perm[j]] |= 1 << perm[i]
        return Graph(self.n, tuple(adj))

    def key(self) -> int:
        code = 0
        for j in range(1, self.n):
            for i in range(j):
                code = (code << 1) | ((self.adj[j] >> i) & 1)
        return code


@dataclass(frozen=True)
class CanonicalGraph:
    graph: Graph
    cert: bytes


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for j in range(n) for i in range(j)])


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << i) for i, row in enumerate(g.adj)))


def is_connected(g: Graph) -> bool:
    return bool(kernels.is_connected(g.n, g.adj))


def canonical_form(g: Graph) -> CanonicalGraph:
    order = kernels.canonical_order(g.n, g.adj)
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos
    h = g.relabel(perm)
    return CanonicalGraph(h, write_graph6(h).encode("ascii"))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n:
        return False
    return canonical_form(g).cert == canonical_form(h).cert


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def all_graph_keys(n: int) -> np.ndarray:
    """Sorted canonical keys of every graph (connected or not) on n <= 11 vertices."""
    if not 1 <= n <= kernels.MAX_KEY_ORDER:
        raise ValueError(f"integer keys need 1 <= n <= {kernels.MAX_KEY_ORDER}")
    if n == 1:
        return np.zeros(1, dtype=np.uint64)
    parents = all_graph_keys(n - 1)
    parts = [
        np.unique(kernels.expand_level(n - 1, parents[i : i + _CHUNK]))
        for i in range(0, len(parents), _CHUNK)
    ]
    return np.unique(np.concatenate(parts))


@lru_cache(maxsize=None)
def connected_keys(n: int) -> np.ndarray:
    """Sorted canonical keys of the connected graphs on n <= 11 vertices."""
    keys = all_graph_keys(n)
    out = keys[kernels.connected_mask(n, keys)]
    out.setflags(write=False)
    return out


def _generic_level(n: int) -> list[int]:
    # Python-int keys for orders past the 64-bit key limit.
    if n <= kernels.MAX_KEY_ORDER:
        return [int(k) for k in all_graph_keys(n)]
    found = set()
    for key in _generic_level(n - 1):
        parent = Graph.from_key(n - 1, key) if n - 1 <= kernels.MAX_KEY_ORDER else _from_big_key(n - 1, key)
        deg = [parent.degree(u) for u in range(n - 1)]
        for S in range(1 << (n - 1)):
            k = bin(S).count("1")
            if any(deg[u] + ((S >> u) & 1) < k for u in range(n - 1)):
                continue
            adj = [parent.adj[u] | (((S >> u) & 1) << (n - 1)) for u in range(n - 1)] + [S]
            found.add(canonical_form(Graph(n, tuple(adj))).graph.key())
    return sorted(found)


def _from_big_key(n: int, key: int) -> Graph:
    adj = [0] * n
    pos = n * (n - 1) // 2
    for j in range(1, n):
        for i in range(j):
            pos -= 1
            if (key >> pos) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def enumerate_connected(n: int) -> Iterator[Graph]:
    """Yield one canonical representative per isomorphism class of connected
    graphs on ``n`` vertices, in ascending certificate order.

    Graphs are built by adding a minimum-degree vertex to every graph on
    ``n - 1`` vertices and deduplicating canonical forms.  Practical up to
    ``n = 10``; larger orders are supported but slow.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"n must be in 1..{MAX_ORDER}, got {n!r}")
    if n <= kernels.MAX_KEY_ORDER:
        for key in connected_keys(n):
            yield Graph.from_key(n, int(key))
        return
    for key in _generic_level(n):
        g = _from_big_key(n, key)
        if is_connected(g):
            yield g


def count_connected(n: int) -> int:
    if n <= kernels.MAX_KEY_ORDER:
        return len(connected_keys(n))
    return sum(1 for _ in enumerate_connected(n))


# -- graph6 ------------------------------------------------------------------


def write_graph6(g: Graph) -> str:
    n = g.n
    if n > 62:
        raise ValueError("graph6 writer supports n <= 62")
    bits = [(g.adj[j] >> i) & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def parse_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise GraphFormatError("empty graph6 string")
    codes = [ord(ch) - 63 for ch in s]
    if any(not 0 <= c <= 63 for c in codes):
        bad = next(ch for ch, c in zip(s, codes) if not 0 <= c <= 63)
        raise GraphFormatError(f"byte {bad!r} outside the graph6 range 63..126")
    n = codes[0]
    if n == 63:
        raise GraphFormatError("graphs with more than 62 vertices are not supported")
    if not 1 <= n <= MAX_ORDER:
        raise GraphFormatError(f"vertex count {n} outside supported range 1..{MAX_ORDER}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(codes) - 1 != nbytes:
        raise GraphFormatError(f"expected {nbytes} data bytes for n={n}, got {len(codes) - 1}")
    adj = [0] * n
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if (codes[1 + pos // 6] >> (5 - pos % 6)) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            pos += 1
    if nbits % 6 and codes[-1] & ((1 << (6 - nbits % 6)) - 1):
        raise GraphFormatError("nonzero padding bits")
    return Graph(n, tuple(adj))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        if line.strip():
            yield parse_graph6(line)
