"""Line-oriented text formats for graphs, instances and graph streams.

Graph file::

    graph v1
    n 4
    label 0 a
    e 0 1

Instance file::

    kset v1
    n 4
    k 3
    mode complete
    C 0 1 2

In partial mode ``D`` lines list disconnected sets. A graph stream is a
sequence of graph blocks separated by ``---`` lines. ``#`` starts a comment
anywhere on a line. Serialisation is canonical: sorted ids, sorted lines.
"""

from __future__ import annotations

from .core import Graph, InvalidParameter, KSetInstance, to_ids, to_mask


class ParseError(InvalidParameter):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _int(tok: str, lineno: int) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None
    if val < 0:
        raise ParseError(lineno, f"negative value {val}")
    return val


def _header(it, expected: str):
    try:
        lineno, line = next(it)
    except StopIteration:
        raise ParseError(0, f"empty input, expected {expected!r}") from None
    if line != expected:
        raise ParseError(lineno, f"expected header {expected!r}, got {line!r}")
    return lineno


def _field(it, name: str, prev_lineno: int) -> tuple[int, int]:
    try:
        lineno, line = next(it)
    except StopIteration:
        raise ParseError(prev_lineno, f"missing {name!r} line") from None
    parts = line.split()
    if len(parts) != 2 or parts[0] != name:
        raise ParseError(lineno, f"expected '{name} <int>', got {line!r}")
    return lineno, _int(parts[1], lineno)


def _parse_graph_lines(it) -> Graph:
    lineno = _header(it, "graph v1")
    lineno, n = _field(it, "n", lineno)
    edges = set()
    labels = {}
    for lineno, line in it:
        parts = line.split()
        tag = parts[0]
        if tag == "e":
            if len(parts) != 3:
                raise ParseError(lineno, "edge line needs exactly two ids")
            u, v = _int(parts[1], lineno), _int(parts[2], lineno)
            if u >= n or v >= n:
                raise ParseError(lineno, f"vertex id >= n={n}")
            if u == v:
                raise ParseError(lineno, "self-loop")
            p = (min(u, v), max(u, v))
            if p in edges:
                raise ParseError(lineno, f"duplicate pair {p}")
            edges.add(p)
        elif tag == "label":
            bits = line.split(None, 2)
            if len(bits) != 3:
                raise ParseError(lineno, "label line needs an id and a string")
            v = _int(bits[1], lineno)
            if v >= n:
                raise ParseError(lineno, f"vertex id >= n={n}")
            if v in labels:
                raise ParseError(lineno, f"duplicate label for {v}")
            labels[v] = bits[2]
        else:
            raise ParseError(lineno, f"unknown line {line!r}")
    return Graph(n, frozenset(edges), labels or None)


def parse_graph(text: str) -> Graph:
    return _parse_graph_lines(_lines(text))


def serialize_graph(g: Graph) -> str:
    out = ["graph v1", f"n {g.n}"]
    if g.labels:
        out.extend(f"label {v} {g.labels[v]}" for v in sorted(g.labels))
    out.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(out) + "\n"


def parse_instance(text: str) -> KSetInstance:
    it = _lines(text)
    lineno = _header(it, "kset v1")
    lineno, n = _field(it, "n", lineno)
    lineno, k = _field(it, "k", lineno)
    try:
        lineno, line = next(it)
    except StopIteration:
        raise ParseError(lineno, "missing 'mode' line") from None
    parts = line.split()
    if len(parts) != 2 or parts[0] != "mode" or parts[1] not in ("complete", "partial"):
        raise ParseError(lineno, "expected 'mode complete|partial'")
    complete = parts[1] == "complete"
    if k < 2 or k > n:
        raise ParseError(lineno, f"need 2 <= k <= n, got k={k}, n={n}")
    fams = {"C": set(), "D": set()}
    for lineno, line in it:
        parts = line.split()
        tag = parts[0]
        if tag not in fams:
            raise ParseError(lineno, f"unknown line {line!r}")
        if tag == "D" and complete:
            raise ParseError(lineno, "D lines are not allowed in complete mode")
        ids = [_int(p, lineno) for p in parts[1:]]
        if len(ids) != k or len(set(ids)) != k:
            raise ParseError(lineno, f"set must have exactly {k} distinct ids")
        if max(ids) >= n:
            raise ParseError(lineno, f"vertex id >= n={n}")
        m = to_mask(ids)
        if m in fams["C"] or m in fams["D"]:
            raise ParseError(lineno, f"duplicate set {sorted(ids)}")
        fams[tag].add(m)
    return KSetInstance(n, k, frozenset(fams["C"]), frozenset(fams["D"]), complete)


def serialize_instance(inst: KSetInstance) -> str:
    out = ["kset v1", f"n {inst.n}", f"k {inst.k}", "mode " + ("complete" if inst.complete else "partial")]
    out.extend("C " + " ".join(map(str, s)) for s in sorted(to_ids(m) for m in inst.connected))
    if not inst.complete:
        out.extend("D " + " ".join(map(str, s)) for s in sorted(to_ids(m) for m in inst.disconnected))
    return "\n".join(out) + "\n"


def serialize_stream(graphs) -> str:
    blocks = [serialize_graph(g) for g in sorted(graphs, key=Graph.key)]
    return "---\n".join(blocks)


def parse_stream(text: str) -> list[Graph]:
    graphs = []
    chunk: list[str] = []
    for raw in text.splitlines() + ["---"]:
        if raw.strip() == "---":
            if any(line.split("#", 1)[0].strip() for line in chunk):
                graphs.append(parse_graph("\n".join(chunk)))
            chunk = []
        else:
            chunk.append(raw)
    return graphs


__all__ = [
    "ParseError",
    "parse_graph",
    "serialize_graph",
    "parse_instance",
    "serialize_instance",
    "parse_stream",
    "serialize_stream",
]
