"""Clear and fake non-neighbours, and uniqueness certification.

Every classification here is computed from the instance of the graph
itself. ``certify_unique`` simply runs the matching enumerator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    ContractError,
    Graph,
    InvalidParameter,
    KSetInstance,
    _check_k,
    bits,
    closure,
    connected_ksets,
    is_consistent,
    to_ids,
)


def _vertex(n: int, u: int) -> None:
    if not 0 <= u < n:
        raise InvalidParameter(f"vertex {u} out of range for n={n}")


def swap_property_holds(g: Graph, k: int, u: int, v: int) -> bool:
    """For every connected k-set S with v in S and u outside, some swap
    (S - v') + u with v' != v is connected too."""
    if not g.has_edge(u, v):
        raise ContractError(f"({u}, {v}) is not an edge")
    inst = connected_ksets(g, k)
    ub, vb = 1 << u, 1 << v
    for s in inst.connected:
        if s & vb and not s & ub:
            if not any(inst.is_connected_set((s & ~(1 << w)) | ub) for w in bits(s & ~vb)):
                return False
    return True


def _one_side(inst: KSetInstance, u: int, v: int) -> bool:
    # condition (i): S connected, v in S, u not in S, every swap keeping v disconnected
    ub, vb = 1 << u, 1 << v
    for s in inst.connected:
        if s & vb and not s & ub:
            if not any(inst.is_connected_set((s & ~(1 << w)) | ub) for w in bits(s & ~vb)):
                return True
    return False


def clear_non_neighbors(inst: KSetInstance, u: int, v: int) -> bool:
    if not inst.complete:
        raise ContractError("a complete instance is required")
    if u == v:
        raise InvalidParameter("u and v must differ")
    _vertex(inst.n, u)
    _vertex(inst.n, v)
    return _one_side(inst, u, v) or _one_side(inst, v, u)


def isolated_certificate(g: Graph, u: int, k: int) -> int | None:
    """A component of size >= k of g - N[u], as a bitmask, or None.

    The component of lowest minimum id wins.
    """
    _vertex(g.n, u)
    left = ((1 << g.n) - 1) & ~(g.adj[u] | (1 << u))
    rest = left
    while left:
        comp = closure(g.adj, left & -left, rest)
        if comp.bit_count() >= k:
            return comp
        left &= ~comp
    return None


@dataclass(frozen=True)
class FakeNeighborReport:
    u: int
    v: int
    c_u: int
    c_v: int
    bound_ok: bool
    witness: Graph | None

    @property
    def union_size(self) -> int:
        return (self.c_u | self.c_v).bit_count()


def fake_neighbor_analysis(g: Graph, k: int, u: int, v: int, inst: KSetInstance | None = None) -> FakeNeighborReport:
    if g.has_edge(u, v):
        raise ContractError(f"({u}, {v}) is an edge")
    inst = inst if inst is not None else connected_ksets(g, k)
    if clear_non_neighbors(inst, u, v):
        raise ContractError(f"{u} and {v} are clear non-neighbours")
    c_u = closure(g.adj, 1 << u, ~g.adj[v] & ((1 << g.n) - 1))
    c_v = closure(g.adj, 1 << v, ~g.adj[u] & ((1 << g.n) - 1))
    bound_ok = c_u.bit_count() <= k - 1 and c_v.bit_count() <= k - 1
    witness = None
    if (c_u | c_v).bit_count() <= k - 1:
        witness = g.add_edge(u, v)
    return FakeNeighborReport(u, v, c_u, c_v, bound_ok, witness)


def pair_report_line(g: Graph, k: int, u: int, v: int, inst: KSetInstance | None = None) -> str:
    """``pair u v: clear|fake c_u=<ids> c_v=<ids> witness=<yes|no>``.

    Edges are not analysed; ``u``, ``v`` must be a non-adjacent pair.
    """
    inst = inst if inst is not None else connected_ksets(g, k)
    if g.has_edge(u, v):
        raise ContractError(f"({u}, {v}) is an edge")
    if clear_non_neighbors(inst, u, v):
        return f"pair {u} {v}: clear c_u=- c_v=- witness=no"
    rep = fake_neighbor_analysis(g, k, u, v, inst)
    return f"pair {u} {v}: fake c_u={_ids(rep.c_u)} c_v={_ids(rep.c_v)} witness={'yes' if rep.witness else 'no'}"


def _ids(mask: int) -> str:
    return ",".join(map(str, to_ids(mask))) or "-"


_CLASS_RE = re.compile(r"^(triangle-free|bounded-degree\s+(\d+))$")


def parse_class(name: str):
    """``"triangle-free"`` -> None, ``"bounded-degree 3"`` -> 3."""
    m = _CLASS_RE.match(name.strip())
    if not m:
        raise InvalidParameter(f"unknown graph class {name!r}")
    return None if m.group(2) is None else int(m.group(2))


@dataclass(frozen=True)
class UniquenessResult:
    unique: bool
    others: tuple


def certify_unique(g: Graph, k: int, graph_class: str = "triangle-free") -> UniquenessResult:
    from .bounded_degree import bd_enumerate
    from .triangle_free import tf_enumerate

    d = parse_class(graph_class)
    _check_k(g.n, k)
    if not g.is_connected():
        raise InvalidParameter("graph must be connected")
    inst = connected_ksets(g, k)
    if d is None:
        if not g.is_triangle_free():
            raise InvalidParameter("graph is not triangle-free")
        found = set(tf_enumerate(inst))
    else:
        if g.max_degree() > d:
            raise InvalidParameter(f"graph has max degree {g.max_degree()} > {d}")
        found = set(bd_enumerate(inst, d))
    if g not in found:
        raise AssertionError("enumeration missed the input graph")
    others = tuple(sorted((h for h in found if h != g), key=Graph.key))
    return UniquenessResult(not others, others)


def check_consistent_witness(g: Graph, k: int, rep: FakeNeighborReport) -> bool:
    return rep.witness is None or is_consistent(rep.witness, connected_ksets(g, k))


__all__ = [
    "swap_property_holds",
    "clear_non_neighbors",
    "isolated_certificate",
    "FakeNeighborReport",
    "fake_neighbor_analysis",
    "pair_report_line",
    "certify_unique",
    "UniquenessResult",
    "parse_class",
]
