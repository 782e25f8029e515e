"""Bounded-degree reconstruction through skeletons.

A skeleton is a partial graph whose unknown pairs are confined to small
disjoint cells, together with the graphs each cell may take. Every
completion (one choice per cell) is a connected graph of maximum degree at
most ``d`` consistent with the instance, and every such graph is a
completion of some skeleton in the family returned by :func:`bd_skeletons`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    EDGE,
    NON_EDGE,
    UNKNOWN,
    ContractError,
    Graph,
    InvalidParameter,
    KSetInstance,
    NoConnectedCompletion,
    PartialGraph,
    QueryCounter,
    bfs_prefix,
    bits,
    closure,
    kset_masks,
    mask_connected,
    neighborhood_of_set,
    popcount,
    to_ids,
    to_mask,
)
from .layering import ProbeStats, build_layering
from .search import local_graphs, region_partial_graph


@dataclass(frozen=True)
class Skeleton:
    h: PartialGraph
    cells: tuple  # bitmasks
    collections: tuple  # per cell: tuple of frozensets of pairs

    @property
    def width(self) -> int:
        return max((popcount(c) for c in self.cells), default=0)

    def num_completions(self) -> int:
        out = 1
        for coll in self.collections:
            out *= len(coll)
        return out

    def audit(self, d: int | None = None) -> None:
        """Raise ContractError if a structural invariant fails."""
        self.h.audit()
        seen = 0
        inside = set()
        for cell, coll in zip(self.cells, self.collections):
            if cell & seen:
                raise ContractError("cells overlap")
            seen |= cell
            for p in itertools.combinations(to_ids(cell), 2):
                inside.add(p)
            for cg in coll:
                for a, b in cg:
                    if not (cell >> a & 1 and cell >> b & 1):
                        raise ContractError("cell graph leaves its cell")
        if set(self.h.unknown()) != inside:
            raise ContractError("unknown pairs must be exactly the within-cell pairs")
        if d is not None and self.width > d:
            raise ContractError(f"width {self.width} > {d}")
        if len(self.cells) != len(self.collections):
            raise ContractError("one collection per cell is required")

    def to_text(self) -> str:
        out = ["skeleton v1", f"n {self.h.n}", "section H"]
        out.extend(f"e {u} {v}" for u, v in self.h.edges())
        out.extend(f"x {u} {v}" for u, v in self.h.non_edges())
        out.append("section CELLS")
        out.extend("V " + " ".join(map(str, to_ids(c))) for c in self.cells)
        out.append("section COLLECTIONS")
        for i, coll in enumerate(self.collections):
            for cg in sorted(sorted(g) for g in coll):
                out.append(" ".join([f"G {i}"] + [f"{a}-{b}" for a, b in cg]))
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Skeleton":
        from .formats import ParseError

        lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), 1)]
        lines = [(i, ln) for i, ln in lines if ln]
        if not lines or lines[0][1] != "skeleton v1":
            raise ParseError(lines[0][0] if lines else 0, "expected header 'skeleton v1'")
        if len(lines) < 2 or not lines[1][1].startswith("n "):
            raise ParseError(lines[1][0] if len(lines) > 1 else 0, "expected 'n <int>'")
        n = int(lines[1][1].split()[1])
        edges, non_edges, cells, colls = [], [], [], []
        section = None
        for lineno, ln in lines[2:]:
            parts = ln.split()
            if parts[0] == "section":
                section = parts[1]
            elif section == "H" and parts[0] in ("e", "x") and len(parts) == 3:
                (edges if parts[0] == "e" else non_edges).append((int(parts[1]), int(parts[2])))
            elif section == "CELLS" and parts[0] == "V":
                cells.append(to_mask(int(p) for p in parts[1:]))
                colls.append([])
            elif section == "COLLECTIONS" and parts[0] == "G":
                i = int(parts[1])
                if i >= len(colls):
                    raise ParseError(lineno, f"no cell {i}")
                colls[i].append(frozenset(tuple(map(int, p.split("-"))) for p in parts[2:]))
            else:
                raise ParseError(lineno, f"unexpected line {ln!r}")
        h = PartialGraph.from_pairs(n, edges, non_edges)
        return cls(h, tuple(cells), tuple(tuple(c) for c in colls))


def skeletons_to_text(family) -> str:
    """Several skeletons in one file, separated by ``---`` lines."""
    return "---\n".join(sk.to_text() for sk in family)


def skeletons_from_text(text: str) -> list[Skeleton]:
    blocks, cur = [], []
    for line in text.splitlines(keepends=True):
        if line.strip() == "---":
            blocks.append("".join(cur))
            cur = []
        else:
            cur.append(line)
    if "".join(cur).strip():
        blocks.append("".join(cur))
    return [Skeleton.from_text(b) for b in blocks if b.strip()]


def edge_importance(s, h: PartialGraph, u: int, v: int) -> bool:
    """Whether the unknown pair ``uv`` can flip the connectivity of ``s``.

    Not important iff a known-edge path joins u and v inside ``s``, or ``s``
    is disconnected even with every non-non-edge present.
    """
    s = to_mask(s)
    if not (s >> u & 1 and s >> v & 1):
        raise ContractError("pair endpoints must lie in the k-set")
    if h.status(u, v) != -1:
        raise ContractError(f"pair ({u}, {v}) is not unknown")
    return _important(s, h.e, h.ne, u, v)


def _important(s: int, e, ne, u: int, v: int) -> bool:
    if closure(e, 1 << u, s) >> v & 1:
        return False
    optimistic = [0] * len(e)
    for x in bits(s):
        optimistic[x] = s & ~ne[x] & ~(1 << x)
    return mask_connected(optimistic, s)


def _check_args(inst: KSetInstance, d: int) -> None:
    if not inst.complete:
        raise ContractError("a complete instance is required")
    if d < 1:
        raise InvalidParameter(f"max degree must be >= 1, got {d}")
    if inst.n < inst.k:
        raise InvalidParameter(f"n={inst.n} < k={inst.k}")


def bd_skeletons(inst: KSetInstance, d: int, stats: ProbeStats | None = None) -> list[Skeleton]:
    """Skeletons of width <= d covering exactly the connected consistent graphs with max degree <= d."""
    _check_args(inst, d)
    n, k = inst.n, inst.k
    full = (1 << n) - 1
    if not inst.connected:
        return []
    if k == 2:
        g = Graph.from_edges(n, (to_ids(s) for s in inst.connected))
        if g.is_connected() and g.max_degree() <= d:
            return [Skeleton(PartialGraph.from_graph(g), (), ())]
        return []

    counter = QueryCounter()
    t = min(inst.connected, key=to_ids)
    nb = neighborhood_of_set(inst, t, counter)
    if popcount(nb) > d * k:
        return []
    family = []
    for rows in local_graphs(inst, t, nb, max_degree=d, counter=counter):
        h = region_partial_graph(n, t | nb, rows)
        if not nb:
            if t == full:
                family.append(Skeleton(h, (), ()))
            continue
        sk = _skeleton_from(inst, h, t, d, counter, stats)
        if sk is not None:
            family.append(sk)
    return family


def _skeleton_from(inst, h, t, d, counter, stats) -> Skeleton | None:
    n, k = inst.n, inst.k
    try:
        lay = build_layering(inst, h, t, counter, stats)
    except NoConnectedCompletion:
        return None
    layers = lay.layers
    b = lay.refined.builder()
    e, ne = b.e, b.ne
    if any(popcount(r) > d for r in e):
        return None

    # Step 2: cells, then every unknown pair outside the cells.
    cells = []
    group_of = {}
    for i in range(2, len(layers)):
        groups = {}
        for v in bits(layers[i]):
            groups.setdefault(e[v] & layers[i - 1], []).append(v)
        for members in groups.values():
            cm = to_mask(members)
            for v in members:
                group_of[v] = cm
            if len(members) > d:
                return None
            if len(members) > 1:
                cells.append(cm)
    lower = layers[0]
    for i in range(2, len(layers)):
        li, prev, prev2 = layers[i], layers[i - 1], layers[i - 2]
        for a in bits(li):
            for c in bits(b.unknown_row(a) & li & ~((1 << (a + 1)) - 1)):
                if group_of[a] == group_of[c]:
                    continue
                u, v = (a, c) if e[a] & prev & ~e[c] else (c, a)
                w_bit = e[u] & prev & ~e[v]
                w_bit &= -w_bit
                w = w_bit.bit_length() - 1
                root = e[w] & prev2
                if not root:
                    return None
                root &= -root
                cset = bfs_prefix(e, root.bit_length() - 1, lower, k - 3)
                if cset is None:
                    return None
                b.set(u, v, EDGE if inst.probe(cset | (1 << u) | (1 << v) | w_bit, counter) else NON_EDGE)
        lower |= prev

    # Step 3: (k-1)-subgraph rule inside cells, to a fixpoint.
    cells.sort(key=lambda c: to_ids(c))
    changed = True
    while changed:
        changed = False
        for cell in cells:
            for a, c in itertools.combinations(to_ids(cell), 2):
                if b.status(a, c) != -1:
                    continue
                for u, v in ((a, c), (c, a)):
                    allowed = ne[v] | (1 << u)
                    g1 = bfs_prefix(e, u, allowed, k - 1)
                    if g1 is not None:
                        b.set(u, v, EDGE if inst.probe(g1 | (1 << v), counter) else NON_EDGE)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break

    if any(popcount(r) > d for r in e):
        return None
    # drop the candidate if its known pairs already contradict a k-set
    for m in kset_masks(n, k):
        conn = m in inst.connected
        if conn:
            optimistic = [(m & ~ne[x] & ~(1 << x)) for x in range(n)]
            if not mask_connected(optimistic, m):
                return None
        elif mask_connected(e, m):
            return None

    hstar = b.freeze()
    collections = _collections(inst, hstar, cells, d, stats)
    if collections is None:
        return None
    # Pairs a cell had decided in Step 3 move into its cell graphs, so the
    # skeleton's partial graph leaves every within-cell pair unknown.
    out = hstar.builder()
    for cell in cells:
        for a, c in itertools.combinations(to_ids(cell), 2):
            out.set(a, c, UNKNOWN)
    return Skeleton(out.freeze(), tuple(cells), tuple(tuple(c) for c in collections))


def _collections(inst, hstar: PartialGraph, cells, d, stats):
    n, k = inst.n, inst.k
    e, ne = hstar.e, hstar.ne
    cell_of = [-1] * n
    for j, c in enumerate(cells):
        for v in bits(c):
            cell_of[v] = j

    # k-sets with at least one unknown pair, bucketed by the cells they meet
    relevant = [[] for _ in cells]
    for m in kset_masks(n, k):
        unknown_pairs = []
        for v in bits(m):
            for w in bits(hstar.unknown_row(v) & m & ~((1 << (v + 1)) - 1)):
                unknown_pairs.append((v, w))
        if not unknown_pairs:
            continue
        important = [p for p in unknown_pairs if _important(m, e, ne, *p)]
        if len({cell_of[p[0]] for p in important}) > 1 and stats is not None:
            stats.localization_violations.append((to_ids(m), important))
        touched = {cell_of[v] for v in bits(m) if cell_of[v] >= 0}
        for j in touched:
            relevant[j].append(m)

    out = []
    for j, cell in enumerate(cells):
        verts = to_ids(cell)
        cell_pairs = [p for p in itertools.combinations(verts, 2) if hstar.status(*p) == -1]
        fixed = frozenset(p for p in itertools.combinations(verts, 2) if hstar.status(*p) == EDGE)
        fixed_deg = {v: popcount(e[v]) for v in verts}
        keep = []
        for choice in range(1 << len(cell_pairs)):
            chosen = [p for i, p in enumerate(cell_pairs) if choice >> i & 1]
            deg = dict(fixed_deg)
            for a, c in chosen:
                deg[a] += 1
                deg[c] += 1
            if max(deg.values(), default=0) > d:
                continue
            rows = list(e)
            for a, c in chosen:
                rows[a] |= 1 << c
                rows[c] |= 1 << a
            if all(_satisfies(m, m in inst.connected, rows, hstar, cell) for m in relevant[j]):
                keep.append(fixed | frozenset(chosen))
        if not keep:
            return None
        out.append(keep)
    return out


def _satisfies(m: int, conn: bool, rows, hstar: PartialGraph, cell: int) -> bool:
    """Connectivity of ``m`` with the cell fixed and other unknown pairs set
    pessimistically: absent for a connected set, present for a disconnected one."""
    if conn:
        return mask_connected(rows, m)
    local = list(rows)
    for v in bits(m):
        if cell >> v & 1:
            extra = hstar.unknown_row(v) & m & ~cell
        else:
            extra = hstar.unknown_row(v) & m
        local[v] |= extra
        for w in bits(extra):
            local[w] |= 1 << v
    return not mask_connected(local, m)


def completions(sk: Skeleton):
    """Every completion of ``sk``, in product order of the collections."""
    base = list(sk.h.e)
    for choice in itertools.product(*sk.collections):
        rows = list(base)
        for cg in choice:
            for a, c in cg:
                rows[a] |= 1 << c
                rows[c] |= 1 << a
        yield Graph.from_adjacency(rows)


def bd_enumerate(inst: KSetInstance, d: int, stats: ProbeStats | None = None):
    """Connected consistent graphs of maximum degree <= d, without repeats."""
    seen = set()
    for sk in bd_skeletons(inst, d, stats):
        for g in completions(sk):
            key = g.key()
            if key not in seen:
                seen.add(key)
                yield g


__all__ = [
    "Skeleton",
    "skeletons_to_text",
    "skeletons_from_text",
    "edge_importance", "bd_skeletons", "completions", "bd_enumerate"]
