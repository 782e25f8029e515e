"""Backtracking enumeration of graphs on a small vertex region."""

from __future__ import annotations

import itertools

from .core import KSetInstance, PartialGraph, QueryCounter, mask_connected, to_ids, to_mask


def local_graphs(
    inst: KSetInstance,
    seed: int,
    seed_nbhd: int,
    max_degree: int | None = None,
    triangle_free: bool = False,
    counter: QueryCounter | None = None,
):
    """Yield adjacency rows of every graph F on ``seed | seed_nbhd`` such that

    * N_F(seed) == seed_nbhd,
    * every k-subset of the region has the connectivity the instance says,
    * the degree cap and triangle-freeness hold when requested.

    Vertices are added one at a time (seed first); the pairs joining a new
    vertex to the earlier ones are assigned non-edge first, and each k-subset
    is checked as soon as its last pair is decided.
    """
    verts = to_ids(seed) + to_ids(seed_nbhd)
    k = inst.k
    pairs = [(verts[i], verts[j]) for j in range(len(verts)) for i in range(j)]
    idx = {}
    for i, (a, b) in enumerate(pairs):
        idx[a, b] = idx[b, a] = i
    checks = [[] for _ in pairs]
    if len(verts) >= k:
        for c in itertools.combinations(verts, k):
            m = to_mask(c)
            checks[max(idx[p] for p in itertools.combinations(c, 2))].append((m, inst.query(m, counter)))
    # each neighbour must end up adjacent to the seed
    needs = [[] for _ in pairs]
    seed_ids = to_ids(seed)
    for y in to_ids(seed_nbhd):
        last = max(idx[s, y] for s in seed_ids)
        needs[last].append(y)

    n = inst.n
    e = [0] * n
    cap = max_degree if max_degree is not None else n
    total = len(pairs)

    def ok(i):
        for y in needs[i]:
            if not e[y] & seed:
                return False
        for m, conn in checks[i]:
            if mask_connected(e, m) != conn:
                return False
        return True

    def rec(i):
        if i == total:
            yield tuple(e)
            return
        a, b = pairs[i]
        if ok(i):
            yield from rec(i + 1)
        if e[a].bit_count() < cap and e[b].bit_count() < cap and not (triangle_free and e[a] & e[b]):
            e[a] |= 1 << b
            e[b] |= 1 << a
            if ok(i):
                yield from rec(i + 1)
            e[a] &= ~(1 << b)
            e[b] &= ~(1 << a)

    if total == 0:
        if not seed_nbhd:
            yield tuple(e)
        return
    yield from rec(0)


def region_partial_graph(n: int, region: int, rows) -> PartialGraph:
    """Partial graph knowing exactly the pairs inside ``region`` (as in ``rows``)."""
    ne = [0] * n
    for v in to_ids(region):
        ne[v] = region & ~rows[v] & ~(1 << v)
    return PartialGraph(n, rows, ne)
