"""Graphs, partial graphs and k-set instances.

Vertices are dense integer ids ``0..n-1``. Vertex subsets are handled
internally as int bitmasks (bit ``v`` set <=> ``v`` in the subset); the
public functions accept any iterable of ids as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

EDGE = 1
NON_EDGE = 0
UNKNOWN = -1


class ReconstructionError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(ReconstructionError, ValueError):
    pass


class ContractError(ReconstructionError):
    """An operation was called outside its precondition."""


class NoConnectedCompletion(ReconstructionError):
    """The layering could not reach every vertex from the seed set."""


class UnsupportedInstance(ReconstructionError):
    pass


# ---------------------------------------------------------------------------
# bitmask helpers

def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_ids(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def popcount(mask: int) -> int:
    return mask.bit_count()


def closure(adj, start: int, within: int) -> int:
    """Vertices reachable from ``start`` using rows ``adj`` inside ``within``."""
    seen = start & within
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def mask_connected(adj, s: int) -> bool:
    return closure(adj, s & -s, s) == s


def bfs_prefix(adj, start: int, within: int, size: int) -> int | None:
    """First ``size`` vertices discovered by a BFS from ``start`` inside ``within``.

    Neighbours are discovered in increasing id order, so the result is
    deterministic and always induces a connected subgraph. Returns None when
    the component of ``start`` is smaller than ``size``.
    """
    if size <= 0:
        return 0
    order = [start]
    seen = 1 << start
    i = 0
    while i < len(order) and len(order) < size:
        for w in bits(adj[order[i]] & within & ~seen):
            seen |= 1 << w
            order.append(w)
        i += 1
    if len(order) < size:
        return None
    return to_mask(order[:size])


@lru_cache(maxsize=1 << 16)
def subsets_of(mask: int, size: int) -> tuple[int, ...]:
    """All ``size``-element submasks of ``mask`` in lexicographic order of ids."""
    return tuple(to_mask(c) for c in itertools.combinations(to_ids(mask), size))


def pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise InvalidParameter(f"self-loop {u}-{v}")
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# graphs

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1``."""

    n: int
    edges: frozenset
    labels: Mapping[int, str] | None = field(default=None, compare=False, hash=False)
    adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rows = [0] * self.n
        for u, v in self.edges:
            if u >= v or v >= self.n or u < 0:
                raise InvalidParameter(f"bad edge ({u}, {v}) for n={self.n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "adj", tuple(rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels=None) -> "Graph":
        return cls(n, frozenset(pair(u, v) for u, v in edges), labels)

    @classmethod
    def from_adjacency(cls, rows) -> "Graph":
        n = len(rows)
        return cls(n, frozenset((u, v) for u in range(n) for v in bits(rows[u] >> (u + 1) << (u + 1))))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def key(self) -> tuple:
        """Canonical sort key (vertex count, sorted edge list)."""
        return (self.n, tuple(sorted(self.edges)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> set[int]:
        return set(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def max_degree(self) -> int:
        return max((popcount(r) for r in self.adj), default=0)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return mask_connected(self.adj, (1 << self.n) - 1)

    def is_triangle_free(self) -> bool:
        for u, v in self.edges:
            if self.adj[u] & self.adj[v]:
                return False
        return True

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges | {pair(u, v)}, self.labels)

    def relabel(self, perm) -> "Graph":
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))


def path_graph(order) -> Graph:
    """Path visiting the ids of ``order`` in sequence, on n = len(order) vertices."""
    order = list(order)
    return Graph.from_edges(len(order), zip(order, order[1:]))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(r: int) -> Graph:
    """K_{1,r} with centre 0."""
    return Graph.from_edges(r + 1, ((0, i) for i in range(1, r + 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


# ---------------------------------------------------------------------------
# partial graphs

class PartialGraph:
    """Classification of every vertex pair as EDGE, NON_EDGE or UNKNOWN.

    Stored as two tuples of adjacency bitmasks (known edges, known
    non-edges); a pair in neither is unknown, so the three classes always
    partition all pairs as long as the rows are symmetric and disjoint
    (see :meth:`audit`).
    """

    __slots__ = ("n", "e", "ne")

    def __init__(self, n: int, e, ne):
        self.n = n
        self.e = tuple(e)
        self.ne = tuple(ne)

    @classmethod
    def empty(cls, n: int) -> "PartialGraph":
        return cls(n, [0] * n, [0] * n)

    @classmethod
    def from_graph(cls, g: Graph) -> "PartialGraph":
        full = (1 << g.n) - 1
        return cls(g.n, g.adj, [full & ~g.adj[v] & ~(1 << v) for v in range(g.n)])

    @classmethod
    def from_pairs(cls, n: int, edges=(), non_edges=()) -> "PartialGraph":
        b = PartialGraphBuilder.blank(n)
        for u, v in edges:
            b.set(u, v, EDGE)
        for u, v in non_edges:
            b.set(u, v, NON_EDGE)
        return b.freeze()

    def builder(self) -> "PartialGraphBuilder":
        return PartialGraphBuilder(self.n, list(self.e), list(self.ne))

    def status(self, u: int, v: int) -> int:
        if self.e[u] >> v & 1:
            return EDGE
        if self.ne[u] >> v & 1:
            return NON_EDGE
        return UNKNOWN

    def unknown_row(self, v: int) -> int:
        return ((1 << self.n) - 1) & ~(self.e[v] | self.ne[v] | (1 << v))

    def pairs(self, status: int) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            if status == EDGE:
                row = self.e[u]
            elif status == NON_EDGE:
                row = self.ne[u]
            else:
                row = self.unknown_row(u)
            out.extend((u, v) for v in bits(row >> (u + 1) << (u + 1)))
        return out

    def edges(self):
        return self.pairs(EDGE)

    def non_edges(self):
        return self.pairs(NON_EDGE)

    def unknown(self):
        return self.pairs(UNKNOWN)

    def num_unknown(self) -> int:
        return sum(popcount(self.unknown_row(v)) for v in range(self.n)) // 2

    def neighborhood(self, s) -> int:
        """Open neighbourhood N_H(s) over known edges, as a bitmask."""
        s = to_mask(s)
        acc = 0
        for v in bits(s):
            acc |= self.e[v]
        return acc & ~s

    def is_refined_by(self, other: "PartialGraph") -> bool:
        """True if ``other`` is a partial supergraph of ``self``."""
        return all(
            (a & ~b) == 0 and (c & ~d) == 0
            for a, b, c, d in zip(self.e, other.e, self.ne, other.ne)
        )

    def admits(self, g: Graph) -> bool:
        """True if ``g`` is a supergraph of this partial graph."""
        return all((self.e[v] & ~g.adj[v]) == 0 and (self.ne[v] & g.adj[v]) == 0 for v in range(self.n))

    def to_graph(self) -> Graph:
        if self.num_unknown():
            raise ContractError("partial graph still has unknown pairs")
        return Graph.from_adjacency(self.e)

    def audit(self) -> None:
        """Raise ContractError unless the three pair classes partition all pairs."""
        for u in range(self.n):
            if self.e[u] & self.ne[u]:
                raise ContractError(f"vertex {u}: pair both edge and non-edge")
            if (self.e[u] | self.ne[u]) >> u & 1:
                raise ContractError(f"vertex {u}: self pair classified")
            if (self.e[u] | self.ne[u]) >> self.n:
                raise ContractError(f"vertex {u}: id out of range")
            for v in bits(self.e[u]):
                if not self.e[v] >> u & 1:
                    raise ContractError(f"edge row asymmetry at {u},{v}")
            for v in bits(self.ne[u]):
                if not self.ne[v] >> u & 1:
                    raise ContractError(f"non-edge row asymmetry at {u},{v}")

    def __eq__(self, other):
        return isinstance(other, PartialGraph) and (self.n, self.e, self.ne) == (other.n, other.e, other.ne)

    def __hash__(self):
        return hash((self.n, self.e, self.ne))

    def __repr__(self):
        return f"PartialGraph(n={self.n}, E={self.edges()}, unknown={self.num_unknown()})"


class PartialGraphBuilder:
    """Mutable rows used while refining; :meth:`freeze` returns a PartialGraph."""

    __slots__ = ("n", "e", "ne")

    def __init__(self, n, e, ne):
        self.n = n
        self.e = e
        self.ne = ne

    @classmethod
    def blank(cls, n):
        return cls(n, [0] * n, [0] * n)

    def status(self, u, v):
        if self.e[u] >> v & 1:
            return EDGE
        if self.ne[u] >> v & 1:
            return NON_EDGE
        return UNKNOWN

    def set(self, u, v, status):
        if u == v:
            raise InvalidParameter("self pair")
        bu, bv = 1 << u, 1 << v
        self.e[u] &= ~bv
        self.e[v] &= ~bu
        self.ne[u] &= ~bv
        self.ne[v] &= ~bu
        if status == EDGE:
            self.e[u] |= bv
            self.e[v] |= bu
        elif status == NON_EDGE:
            self.ne[u] |= bv
            self.ne[v] |= bu

    def unknown_row(self, v):
        return ((1 << self.n) - 1) & ~(self.e[v] | self.ne[v] | (1 << v))

    def freeze(self) -> PartialGraph:
        return PartialGraph(self.n, self.e, self.ne)


# ---------------------------------------------------------------------------
# k-set instances

class QueryCounter:
    """Counts membership probes into the connected/disconnected families."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def __repr__(self):
        return f"QueryCounter({self.count})"


@dataclass(frozen=True)
class KSetInstance:
    """Connected (and, in partial mode, disconnected) k-subsets of ``0..n-1``.

    In complete mode only the connected family is stored; every other
    k-subset is disconnected. Sets are stored as bitmasks.
    """

    n: int
    k: int
    connected: frozenset
    disconnected: frozenset = frozenset()
    complete: bool = True

    def __post_init__(self):
        if self.k < 2:
            raise InvalidParameter(f"k must be >= 2, got {self.k}")
        if self.complete and self.disconnected:
            raise InvalidParameter("complete instances store only the connected family")
        limit = 1 << self.n
        for fam in (self.connected, self.disconnected):
            for s in fam:
                if s >= limit or s < 0 or popcount(s) != self.k:
                    raise InvalidParameter(f"invalid {self.k}-set {to_ids(s)} for n={self.n}")
        if self.connected & self.disconnected:
            raise InvalidParameter("a set is listed as both connected and disconnected")

    @classmethod
    def build(cls, n: int, k: int, connected=(), disconnected=(), complete: bool = True) -> "KSetInstance":
        return cls(
            n,
            k,
            frozenset(to_mask(s) for s in connected),
            frozenset(to_mask(s) for s in disconnected),
            complete,
        )

    def query(self, s, counter: QueryCounter | None = None):
        """True if ``s`` is listed connected, False if disconnected, None if unlisted."""
        if counter is not None:
            counter.count += 1
        s = to_mask(s)
        if s in self.connected:
            return True
        if self.complete:
            if popcount(s) != self.k or s >> self.n:
                raise InvalidParameter(f"{to_ids(s)} is not a {self.k}-subset of the vertex set")
            return False
        if s in self.disconnected:
            return False
        return None

    def probe(self, mask: int, counter: QueryCounter) -> bool:
        """Fast membership probe for a valid k-subset bitmask of a complete instance."""
        counter.count += 1
        return mask in self.connected

    def is_connected_set(self, s, counter: QueryCounter | None = None) -> bool:
        return self.query(s, counter) is True

    def connected_sets(self) -> list[tuple[int, ...]]:
        return sorted(to_ids(s) for s in self.connected)

    def disconnected_sets(self) -> list[tuple[int, ...]]:
        """Explicit disconnected family; materialises the complement in complete mode."""
        if not self.complete:
            return sorted(to_ids(s) for s in self.disconnected)
        return [c for c in itertools.combinations(range(self.n), self.k) if to_mask(c) not in self.connected]

    def listed(self) -> Iterator[tuple[int, bool]]:
        """(mask, is_connected) for every classified set."""
        if self.complete:
            for c in itertools.combinations(range(self.n), self.k):
                m = to_mask(c)
                yield m, m in self.connected
        else:
            for m in self.connected:
                yield m, True
            for m in self.disconnected:
                yield m, False


def _check_k(n: int, k: int) -> None:
    if not 2 <= k <= n:
        raise InvalidParameter(f"need 2 <= k <= n, got k={k}, n={n}")


def connected_ksets(g: Graph, k: int) -> KSetInstance:
    """The complete instance of ``g``: all k-subsets inducing a connected subgraph."""
    _check_k(g.n, k)
    return KSetInstance(g.n, k, _connected_masks(g.adj, g.n, k))


@lru_cache(maxsize=64)
def kset_masks(n: int, k: int) -> tuple[int, ...]:
    """Every k-subset of ``0..n-1`` as a bitmask, in lexicographic order."""
    return tuple(to_mask(c) for c in itertools.combinations(range(n), k))


def _connected_masks(adj, n: int, k: int) -> frozenset:
    return frozenset(m for m in kset_masks(n, k) if mask_connected(adj, m))


def rows_consistent(adj, inst: "KSetInstance") -> bool:
    """Consistency of the graph given by adjacency rows, stopping at the first mismatch."""
    if inst.complete:
        conn = inst.connected
        for m in kset_masks(inst.n, inst.k):
            if mask_connected(adj, m) != (m in conn):
                return False
        return True
    return all(mask_connected(adj, s) for s in inst.connected) and not any(
        mask_connected(adj, s) for s in inst.disconnected
    )


def is_connected_subset(g: Graph | PartialGraph, s) -> bool:
    """Connectivity of the subgraph induced on ``s`` by (known) edges."""
    s = to_mask(s)
    if s == 0:
        raise InvalidParameter("empty vertex subset")
    if s >> g.n:
        raise InvalidParameter(f"vertex id out of range in {to_ids(s)}")
    adj = g.adj if isinstance(g, Graph) else g.e
    return mask_connected(adj, s)


def is_consistent(g: Graph, inst: KSetInstance) -> bool:
    if g.n != inst.n:
        raise InvalidParameter(f"graph has {g.n} vertices, instance has {inst.n}")
    return rows_consistent(g.adj, inst)


def neighborhood_of_set(inst: KSetInstance, t, counter: QueryCounter | None = None) -> int:
    """N_G(t) as a bitmask, identical for every graph consistent with ``inst``.

    ``v`` outside ``t`` is a neighbour iff swapping it for some member of
    ``t`` keeps the set connected.
    """
    if not inst.complete:
        raise ContractError("neighborhood_of_set needs a complete instance")
    t = to_mask(t)
    if t not in inst.connected:
        raise InvalidParameter(f"{to_ids(t)} is not a connected {inst.k}-set of the instance")
    out = 0
    members = to_ids(t)
    for v in range(inst.n):
        if t >> v & 1:
            continue
        for u in members:
            if inst.query((t & ~(1 << u)) | (1 << v), counter):
                out |= 1 << v
                break
    return out
