"""Enumeration of connected triangle-free graphs consistent with a complete instance.

Two routes produce candidates: around a vertex of degree at least 2k-4
(kernel discovery followed by the unique completion), and, for graphs
with smaller maximum degree, from every local graph on the closed
neighbourhood of a fixed connected k-set. Every candidate is filtered
against the instance at the end.
"""

from __future__ import annotations

import itertools

from .core import (
    ContractError,
    Graph,
    InvalidParameter,
    KSetInstance,
    NoConnectedCompletion,
    PartialGraph,
    PartialGraphBuilder,
    QueryCounter,
    UnsupportedInstance,
    rows_consistent,
    bfs_prefix,
    bits,
    popcount,
    to_ids,
    to_mask,
    neighborhood_of_set,
    subsets_of,
)
from .layering import ProbeStats, _layer_single_rows, build_layering
from .search import local_graphs, region_partial_graph


def _complete_only(inst: KSetInstance) -> None:
    if not inst.complete:
        raise ContractError("a complete instance is required")


def _candidate_ok(g: Graph, inst: KSetInstance) -> bool:
    return g.is_triangle_free() and rows_consistent(g.adj, inst)


def tf_finish(
    inst: KSetInstance,
    h: PartialGraph,
    t,
    counter: QueryCounter | None = None,
    stats: ProbeStats | None = None,
) -> Graph | None:
    """The unique triangle-free supergraph of ``h`` consistent with ``inst``
    keeping N(t) = N_h(t), or None.

    Requires every pair inside N_h[t] to be known already. Returns None as
    well when the layering from ``t`` cannot reach every vertex.
    """
    _complete_only(inst)
    t = to_mask(t)
    k = inst.k
    nb = h.neighborhood(t)
    if not nb:
        raise ContractError(f"seed set {to_ids(t)} has no known neighbours")
    closed = t | nb
    for v in bits(closed):
        if h.unknown_row(v) & closed:
            raise ContractError("pairs inside the closed neighbourhood of the seed must be known")
    counter = counter if counter is not None else QueryCounter()
    try:
        lay = build_layering(inst, h, t, counter, stats)
    except NoConnectedCompletion:
        return None

    layers = lay.layers
    b = lay.refined.builder()
    e, ne = b.e, b.ne
    lower = layers[0]  # L_0 | ... | L_{i-2}
    for i in range(2, len(layers)):
        li, prev, prev2 = layers[i], layers[i - 1], layers[i - 2]
        for v in bits(li):
            for w in bits(b.unknown_row(v) & li & ~((1 << (v + 1)) - 1)):
                if e[v] & e[w] & prev:
                    decide = False
                else:
                    xv_bit = e[v] & prev
                    xv_bit &= -xv_bit
                    xv = xv_bit.bit_length() - 1
                    root = e[xv] & prev2
                    if not root:
                        return None
                    root &= -root
                    z = bfs_prefix(e, root.bit_length() - 1, lower, k - 3)
                    if z is None:
                        return None
                    decide = inst.probe((1 << v) | (1 << w) | xv_bit | z, counter)
                if decide:
                    e[v] |= 1 << w
                    e[w] |= 1 << v
                else:
                    ne[v] |= 1 << w
                    ne[w] |= 1 << v
        lower |= prev
    for v in range(inst.n):
        if b.unknown_row(v):
            raise AssertionError("unknown pair left outside a single layer")
    g = Graph.from_adjacency(e)
    if g.adj != tuple(e):
        raise AssertionError("adjacency rows not symmetric")
    if h.neighborhood(t) != _open_nbhd(g.adj, t) or not _candidate_ok(g, inst):
        return None
    return g


def _open_nbhd(adj, s: int) -> int:
    acc = 0
    for v in bits(s):
        acc |= adj[v]
    return acc & ~s


def _check_kernel_args(inst: KSetInstance, u: int, xs) -> int:
    _complete_only(inst)
    k = inst.k
    if k < 3:
        raise ContractError("kernel discovery needs k >= 3; k = 2 is read off directly")
    xs = list(xs)
    if len(xs) != 2 * k - 4 or len(set(xs)) != len(xs):
        raise InvalidParameter(f"need {2 * k - 4} distinct candidate neighbours, got {xs}")
    if u in xs:
        raise InvalidParameter("u must not be among its candidate neighbours")
    if not all(0 <= x < inst.n for x in xs + [u]):
        raise InvalidParameter("vertex id out of range")
    return to_mask(xs)


def tf_kernel(inst: KSetInstance, u: int, xs, counter: QueryCounter | None = None):
    """Neighbourhood X of ``u``, second neighbourhood Y and a partial graph
    known on every pair touching {u} | X | Y, assuming ``xs`` are neighbours
    of ``u`` in a triangle-free consistent graph.

    Returns ``(X, Y, h)`` with X, Y as bitmasks, or None when the probe
    answers contradict that assumption.
    """
    z = _check_kernel_args(inst, u, xs)
    return _kernel(inst, u, z, counter if counter is not None else QueryCounter())


def _kernel(inst: KSetInstance, u: int, z: int, counter: QueryCounter):
    n, k = inst.n, inst.k
    q = inst.probe
    ub = 1 << u
    full = (1 << n) - 1

    # Z itself must look like an independent set of neighbours of u.
    for zz in subsets_of(z, k - 1):
        if not q(ub | zz, counter):
            return None
    if popcount(z) >= k:
        for zz in subsets_of(z, k):
            if q(zz, counter):
                return None

    z_small = list(subsets_of(z, k - 2))
    z_large = list(subsets_of(z, k - 1))
    x = z
    for v in bits(full & ~(z | ub)):
        vb = 1 << v
        if all(q(vb | ub | s, counter) for s in z_small) and not any(q(vb | s, counter) for s in z_large):
            x |= vb

    b = PartialGraphBuilder.blank(n)
    e, ne = b.e, b.ne
    others = full & ~ub
    e[u] = x
    ne[u] = others & ~x
    for v in bits(others):
        if x >> v & 1:
            e[v] |= ub
            ne[v] |= x & ~(1 << v)
        else:
            ne[v] |= ub

    x_small = list(subsets_of(x, k - 2))
    x_large = list(subsets_of(x, k - 1))
    y = 0
    nbx = {}
    for v in bits(others & ~x):
        vb = 1 << v
        in_y = False
        disc = 0
        for s in x_small:
            if q(vb | ub | s, counter):
                in_y = True
            else:
                disc |= s
        conn = 0
        for s in x_large:
            if q(vb | s, counter):
                conn |= s
        mine = conn if conn else x & ~disc
        if in_y != bool(mine):
            return None
        e[v] |= mine
        ne[v] |= x & ~mine
        for w in bits(x):
            if mine >> w & 1:
                e[w] |= vb
            else:
                ne[w] |= vb
        if in_y:
            y |= vb
            nbx[v] = mine

    for v, w in itertools.combinations(to_ids(y), 2):
        if nbx[v] & nbx[w]:
            edge = False
        else:
            probe = None
            for a, c in ((v, w), (w, v)):
                xw = nbx[c] & -nbx[c]
                free = x & ~xw & ~nbx[a]
                if k == 3:
                    probe = (1 << a) | (1 << c) | xw
                    break
                if popcount(free) >= k - 4:
                    filler = to_mask(to_ids(free)[: k - 4])
                    probe = ub | (1 << a) | (1 << c) | xw | filler
                    break
            if probe is None:
                return None
            edge = q(probe, counter)
        b.set(v, w, 1 if edge else 0)

    if y:
        _layer_single_rows(inst, b, ub | x, counter)
    return x, y, b.freeze()


def tf_large_degree(
    inst: KSetInstance,
    u: int,
    xs,
    counter: QueryCounter | None = None,
    stats: ProbeStats | None = None,
) -> Graph | None:
    """The unique triangle-free consistent graph with ``xs`` among the neighbours of ``u``, or None."""
    res = tf_kernel(inst, u, xs, counter)
    if res is None:
        return None
    x, y, h = res
    t = (1 << u) | x
    if not y:
        if t != (1 << inst.n) - 1:
            return None
        g = h.to_graph()
        return g if _candidate_ok(g, inst) else None
    return tf_finish(inst, h, t, counter, stats)


def tf_enumerate(inst: KSetInstance, stats: ProbeStats | None = None) -> set[Graph]:
    """Every connected triangle-free graph consistent with the complete instance."""
    _complete_only(inst)
    n, k = inst.n, inst.k
    if n < k:
        raise UnsupportedInstance(f"n={n} < k={k}")
    if k == 2:
        g = Graph.from_edges(n, (to_ids(s) for s in inst.connected))
        return {g} if g.is_connected() and g.is_triangle_free() else set()

    counter = QueryCounter()
    found: dict = {}
    finish_memo: dict = {}

    def finish(h, t):
        key = (h, t)
        if key not in finish_memo:
            finish_memo[key] = tf_finish(inst, h, t, counter, stats)
        return finish_memo[key]

    # vertices of degree >= 2k-4
    for u in range(n):
        rest = [v for v in range(n) if v != u]
        for xs in itertools.combinations(rest, 2 * k - 4):
            res = _kernel(inst, u, to_mask(xs), counter)
            if res is None:
                continue
            x, y, h = res
            t = (1 << u) | x
            if y:
                g = finish(h, t)
            elif t == (1 << n) - 1:
                g = h.to_graph()
            else:
                g = None
            if g is not None:
                found[g.key()] = g

    # maximum degree below 2k-4
    if inst.connected:
        t = min(inst.connected, key=to_ids)
        nb = neighborhood_of_set(inst, t, counter)
        for rows in local_graphs(inst, t, nb, max_degree=2 * k - 5, triangle_free=True, counter=counter):
            if nb:
                g = finish(region_partial_graph(n, t | nb, rows), t)
            elif t == (1 << n) - 1:
                g = Graph.from_adjacency(rows)
            else:
                g = None
            if g is not None:
                found[g.key()] = g

    return {g for g in found.values() if g.is_connected() and _candidate_ok(g, inst)}


__all__ = ["tf_finish", "tf_kernel", "tf_large_degree", "tf_enumerate"]
