"""Brute-force oracles and fixture generators.

Nothing here shares code paths with the reconstruction algorithms beyond
the basic graph types: consistency is decided by enumerating labelled
graphs and testing k-set connectivity directly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import Graph, InvalidParameter, KSetInstance, mask_connected, to_mask

MAX_BRUTE_N = 8


@dataclass(frozen=True)
class GraphFilter:
    connected: bool = False
    triangle_free: bool = False
    max_degree: int | None = None

    def accepts(self, g: Graph) -> bool:
        if self.connected and not g.is_connected():
            return False
        if self.triangle_free and not g.is_triangle_free():
            return False
        if self.max_degree is not None and g.max_degree() > self.max_degree:
            return False
        return True


def brute_force_consistent(inst: KSetInstance, flt: GraphFilter | None = None) -> set[Graph]:
    """Every labelled graph on ``inst.n`` vertices consistent with ``inst`` and passing ``flt``.

    Edge masks are explored in lexicographic pair order; a k-set is checked
    as soon as its last pair is fixed, which prunes whole subtrees.
    """
    n = inst.n
    if n > MAX_BRUTE_N:
        raise InvalidParameter(f"brute force is capped at n <= {MAX_BRUTE_N} (got n={n})")
    flt = flt or GraphFilter()
    pairs = list(itertools.combinations(range(n), 2))
    idx = {p: i for i, p in enumerate(pairs)}
    checks = [[] for _ in pairs]
    for m, conn in inst.listed():
        c = [v for v in range(n) if m >> v & 1]
        checks[idx[(c[-2], c[-1])]].append((m, conn))
    cap = flt.max_degree if flt.max_degree is not None else n
    rows = [0] * n
    out = set()

    def rec(i):
        if i == len(pairs):
            g = Graph.from_adjacency(rows)
            if flt.accepts(g):
                out.add(g)
            return
        a, b = pairs[i]
        for bit in (0, 1):
            if bit:
                if rows[a].bit_count() >= cap or rows[b].bit_count() >= cap:
                    continue
                if flt.triangle_free and rows[a] & rows[b]:
                    continue
                rows[a] |= 1 << b
                rows[b] |= 1 << a
            if all(mask_connected(rows, m) == conn for m, conn in checks[i]):
                rec(i + 1)
            if bit:
                rows[a] &= ~(1 << b)
                rows[b] &= ~(1 << a)

    if not pairs:
        g = Graph(n, frozenset())
        return {g} if flt.accepts(g) and all(mask_connected(rows, m) == c for m, c in inst.listed()) else set()
    rec(0)
    return out


# ---------------------------------------------------------------------------
# whole-space tables (vectorised): every labelled graph on n vertices at once


@dataclass
class GraphTable:
    """Every labelled graph on ``n`` vertices, indexed by edge mask.

    Bit ``i`` of a mask is the i-th pair in lexicographic order.
    """

    n: int
    pairs: list
    masks: np.ndarray
    connected: np.ndarray
    triangle_free: np.ndarray
    max_degree: np.ndarray

    def graph(self, mask: int) -> Graph:
        return Graph(self.n, frozenset(p for i, p in enumerate(self.pairs) if mask >> i & 1))

    def mask_of(self, g: Graph) -> int:
        return sum(1 << i for i, p in enumerate(self.pairs) if p in g.edges)


@lru_cache(maxsize=None)
def graph_table(n: int) -> GraphTable:
    if n > 7:
        raise InvalidParameter("whole-space tables are capped at n <= 7")
    pairs = list(itertools.combinations(range(n), 2))
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    adj = [np.zeros_like(masks) for _ in range(n)]
    for i, (a, b) in enumerate(pairs):
        bit = (masks >> i) & 1
        adj[a] |= bit << b
        adj[b] |= bit << a
    reach = np.ones_like(masks)
    for _ in range(n):
        new = reach.copy()
        for v in range(n):
            new |= np.where((reach >> v) & 1 == 1, adj[v], 0)
        reach = new
    tri = np.zeros(masks.shape, dtype=bool)
    idx = {p: i for i, p in enumerate(pairs)}
    for a, b, c in itertools.combinations(range(n), 3):
        tri |= ((masks >> idx[a, b]) & (masks >> idx[a, c]) & (masks >> idx[b, c]) & 1) == 1
    deg = np.stack([np.bitwise_count(a) for a in adj]) if n else np.zeros((1, 1), dtype=np.int64)
    return GraphTable(n, pairs, masks, reach == (1 << n) - 1, ~tri, deg.max(axis=0))


def _subset_connectivity_lookup(k: int) -> np.ndarray:
    """lookup[edge-mask of a k-vertex graph] -> connected?"""
    pairs = list(itertools.combinations(range(k), 2))
    out = np.zeros(1 << len(pairs), dtype=bool)
    for m in range(1 << len(pairs)):
        rows = [0] * k
        for i, (a, b) in enumerate(pairs):
            if m >> i & 1:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
        out[m] = mask_connected(rows, (1 << k) - 1)
    return out


@lru_cache(maxsize=None)
def signature_table(n: int, k: int):
    """Connected-k-set signature of every graph on ``n`` vertices.

    Returns ``(subsets, sig)`` where ``sig[mask]`` has bit ``j`` set iff the
    j-th k-subset (lexicographic) induces a connected subgraph. Two graphs
    share a signature iff they are consistent with the same complete
    instance.
    """
    table = graph_table(n)
    subsets = list(itertools.combinations(range(n), k))
    if len(subsets) > 63:
        raise InvalidParameter("signature does not fit in 63 bits")
    lookup = _subset_connectivity_lookup(k)
    idx = {p: i for i, p in enumerate(table.pairs)}
    sig = np.zeros_like(table.masks)
    for j, s in enumerate(subsets):
        local = np.zeros_like(table.masks)
        for li, (a, b) in enumerate(itertools.combinations(s, 2)):
            local |= ((table.masks >> idx[a, b]) & 1) << li
        sig |= lookup[local].astype(np.int64) << j
    return subsets, sig


def instance_from_signature(n: int, k: int, signature: int) -> KSetInstance:
    subsets, _ = signature_table(n, k)
    return KSetInstance(n, k, frozenset(to_mask(s) for j, s in enumerate(subsets) if signature >> j & 1))


class ConsistencyClasses:
    """Groups every graph on ``n`` vertices by its complete k-set instance."""

    def __init__(self, n: int, k: int, flt: GraphFilter | None = None):
        self.n, self.k = n, k
        self.table = graph_table(n)
        _, sig = signature_table(n, k)
        keep = np.ones(sig.shape, dtype=bool)
        flt = flt or GraphFilter()
        if flt.connected:
            keep &= self.table.connected
        if flt.triangle_free:
            keep &= self.table.triangle_free
        if flt.max_degree is not None:
            keep &= self.table.max_degree <= flt.max_degree
        self.masks = np.nonzero(keep)[0]
        sigs = sig[self.masks]
        order = np.argsort(sigs, kind="stable")
        self.masks = self.masks[order]
        self.sigs = sigs[order]
        self.classes, self.starts, self.counts = np.unique(self.sigs, return_index=True, return_counts=True)

    def __iter__(self):
        """Yield ``(instance, graphs)`` for each signature among the kept graphs."""
        for s, st, c in zip(self.classes, self.starts, self.counts):
            graphs = {self.table.graph(int(m)) for m in self.masks[st : st + c]}
            yield instance_from_signature(self.n, self.k, int(s)), graphs

    def __len__(self):
        return len(self.classes)


# ---------------------------------------------------------------------------
# fixtures


def all_graphs(n: int, flt: GraphFilter | None = None):
    """Every labelled graph on ``n`` vertices passing ``flt`` (n <= 7)."""
    table = graph_table(n)
    keep = np.ones(table.masks.shape, dtype=bool)
    flt = flt or GraphFilter()
    if flt.connected:
        keep &= table.connected
    if flt.triangle_free:
        keep &= table.triangle_free
    if flt.max_degree is not None:
        keep &= table.max_degree <= flt.max_degree
    for m in np.nonzero(keep)[0]:
        yield table.graph(int(m))


def random_triangle_free_connected(n: int, seed: int) -> Graph:
    """Seeded random connected triangle-free graph.

    Vertices get a random side; candidate pairs are tried in random order,
    cross-side pairs far more often, and a pair is added only if it closes
    no triangle. Remaining components are then joined by triangle-safe
    edges.
    """
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    rng = random.Random(seed)
    side = [rng.random() < 0.5 for _ in range(n)]
    rows = [0] * n
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    p_cross = rng.uniform(1.5, 3.0) / n
    for a, b in pairs:
        p = p_cross if side[a] != side[b] else p_cross / 6
        if rng.random() < p and not rows[a] & rows[b]:
            rows[a] |= 1 << b
            rows[b] |= 1 << a

    def components():
        left = (1 << n) - 1
        comps = []
        while left:
            c = _reach(rows, left & -left)
            comps.append(c)
            left &= ~c
        return comps

    comps = components()
    while len(comps) > 1:
        a_comp, b_comp = comps[0], comps[1]
        a_ids = [v for v in range(n) if a_comp >> v & 1]
        b_ids = [v for v in range(n) if b_comp >> v & 1]
        a = rng.choice(a_ids)
        b = rng.choice(b_ids)
        # different components share no neighbours, so this edge is triangle-safe
        rows[a] |= 1 << b
        rows[b] |= 1 << a
        comps = components()
    return Graph.from_adjacency(rows)


def _reach(rows, start: int) -> int:
    seen = frontier = start
    while frontier:
        nxt = 0
        for v in range(len(rows)):
            if frontier >> v & 1:
                nxt |= rows[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


__all__ = [
    "GraphFilter",
    "brute_force_consistent",
    "ConsistencyClasses",
    "signature_table",
    "graph_table",
    "all_graphs",
    "random_triangle_free_connected",
    "MAX_BRUTE_N",
]
