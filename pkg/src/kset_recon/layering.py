"""Single-layer edge determination and BFS-style layerings.

Both operations refine a partial graph using connectivity probes on a
complete instance. Probe counts are checked against the bounds
``|V| * |N_H(T)|`` (one layer) and ``|V|^2`` (full layering).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    ContractError,
    KSetInstance,
    NoConnectedCompletion,
    PartialGraph,
    PartialGraphBuilder,
    QueryCounter,
    bfs_prefix,
    bits,
    mask_connected,
    popcount,
    to_ids,
    to_mask,
)


@dataclass
class ProbeStats:
    """Per-invocation probe usage, collected for bound checks.

    Each entry is ``(probes_used, bound)``.
    """

    layer_single: list = field(default_factory=list)
    layering: list = field(default_factory=list)
    localization_violations: list = field(default_factory=list)

    def violations(self) -> list[tuple[str, int, int]]:
        out = [("layer_single", u, b) for u, b in self.layer_single if u > b]
        out += [("layering", u, b) for u, b in self.layering if u > b]
        return out


@dataclass(frozen=True)
class Layering:
    layers: tuple  # bitmasks L_0 .. L_l
    refined: PartialGraph
    queries: int = 0

    def layer_ids(self) -> list[tuple[int, ...]]:
        return [to_ids(m) for m in self.layers]

    def layer_of(self) -> list[int]:
        idx = [-1] * self.refined.n
        for i, m in enumerate(self.layers):
            for v in bits(m):
                idx[v] = i
        return idx

    def dump(self) -> str:
        return "".join(f"L{i}: {' '.join(map(str, to_ids(m)))}\n" for i, m in enumerate(self.layers))


def _check_seed(inst: KSetInstance, e, t: int, *, need_neighbors: bool = True) -> int:
    if not inst.complete:
        raise ContractError("a complete instance is required")
    if t == 0 or not mask_connected(e, t):
        raise ContractError(f"seed set {to_ids(t)} is not connected in the partial graph")
    if popcount(t) < inst.k - 1:
        raise ContractError(f"seed set {to_ids(t)} has fewer than k-1={inst.k - 1} vertices")
    nb = 0
    for v in bits(t):
        nb |= e[v]
    nb &= ~t
    if need_neighbors and not nb:
        raise ContractError(f"seed set {to_ids(t)} has no known neighbours")
    return nb


def _layer_single_rows(inst: KSetInstance, b: PartialGraphBuilder, t: int, counter: QueryCounter) -> int:
    """Refine ``b`` in place; returns the number of probes used."""
    e, ne = b.e, b.ne
    n, k = inst.n, inst.k
    full = (1 << n) - 1
    nb = 0
    for v in bits(t):
        nb |= e[v]
    nb &= ~t
    outside = full & ~(nb | t)
    start = counter.count
    for y in bits(nb):
        todo = outside & ~(e[y] | ne[y])
        if not todo:
            continue
        # C_y: BFS inside h[t] from the lowest-id neighbour of y in t.
        root = (e[y] & t) & -(e[y] & t)
        cy = bfs_prefix(e, root.bit_length() - 1, t, k - 2)
        base = cy | (1 << y)
        for x in bits(todo):
            if inst.probe(base | (1 << x), counter):
                e[x] |= 1 << y
                e[y] |= 1 << x
            else:
                ne[x] |= 1 << y
                ne[y] |= 1 << x
    return counter.count - start


def layer_single(
    inst: KSetInstance,
    h: PartialGraph,
    t,
    counter: QueryCounter | None = None,
    stats: ProbeStats | None = None,
) -> PartialGraph:
    """Decide every unknown pair between N_h(t) and V - N_h[t]."""
    t = to_mask(t)
    nb = _check_seed(inst, h.e, t)
    counter = counter if counter is not None else QueryCounter()
    b = h.builder()
    used = _layer_single_rows(inst, b, t, counter)
    bound = inst.n * popcount(nb)
    if stats is not None:
        stats.layer_single.append((used, bound))
    if used > bound:
        raise AssertionError(f"layer_single used {used} probes > {bound}")
    return b.freeze()


def build_layering(
    inst: KSetInstance,
    h: PartialGraph,
    t,
    counter: QueryCounter | None = None,
    stats: ProbeStats | None = None,
) -> Layering:
    """Layer V by known-edge distance from ``t``, deciding all cross-layer pairs.

    Raises NoConnectedCompletion when the closed neighbourhoods stop
    growing before covering V.
    """
    t = to_mask(t)
    n = inst.n
    full = (1 << n) - 1
    _check_seed(inst, h.e, t, need_neighbors=False)
    counter = counter if counter is not None else QueryCounter()
    start = counter.count
    b = h.builder()
    e, ne = b.e, b.ne

    # H_0: seed vertices get non-edges to everything outside N_h[t].
    nb = 0
    for v in bits(t):
        nb |= e[v]
    nb &= ~t
    far = full & ~(nb | t)
    for v in bits(t):
        newly = far & ~ne[v]
        ne[v] |= far
        for x in bits(newly):
            ne[x] |= 1 << v

    layers = [t]
    covered = t
    while covered != full:
        nb = 0
        for v in bits(covered):
            nb |= e[v]
        nb &= ~covered
        if not nb:
            raise NoConnectedCompletion(f"vertices {to_ids(full & ~covered)} unreachable from the seed")
        used = _layer_single_rows(inst, b, covered, counter)
        bound = n * popcount(nb)
        if stats is not None:
            stats.layer_single.append((used, bound))
        if used > bound:
            raise AssertionError(f"layer_single used {used} probes > {bound}")
        layers.append(nb)
        covered |= nb

    used = counter.count - start
    if stats is not None:
        stats.layering.append((used, n * n))
    if used > n * n:
        raise AssertionError(f"build_layering used {used} probes > {n * n}")
    return Layering(tuple(layers), b.freeze(), used)


__all__ = ["Layering", "ProbeStats", "layer_single", "build_layering"]
