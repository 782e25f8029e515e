"""Partial-information reconstruction: the 3-SAT gadget and a small solver.

``reduce_3sat`` turns a 3-CNF formula into a partial k-set instance that has
a consistent graph exactly when the formula is satisfiable. ``solve_partial``
decides such instances by backtracking over the pairs that occur inside
some listed k-set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .core import (
    Graph,
    InvalidParameter,
    KSetInstance,
    PartialGraph,
    UnsupportedInstance,
    bits,
    closure,
    connected_ksets,
    to_ids,
    to_mask,
)
from .formats import ParseError


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple  # tuples of 3 non-zero ints, DIMACS sign convention

    def __post_init__(self):
        if self.num_vars < 0:
            raise InvalidParameter("negative variable count")
        for c in self.clauses:
            if len(c) != 3:
                raise InvalidParameter(f"clause {c} does not have exactly 3 literals")
            vs = [abs(lit) for lit in c]
            if 0 in vs or max(vs) > self.num_vars:
                raise InvalidParameter(f"clause {c} mentions an unknown variable")
            if len(set(vs)) != 3:
                raise InvalidParameter(f"clause {c} repeats a variable")

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i]`` is the value of variable i+1."""
        return all(any((lit > 0) == assignment[abs(lit) - 1] for lit in c) for c in self.clauses)

    def brute_force_sat(self):
        """A satisfying assignment (tuple of bools) or None."""
        for a in itertools.product((False, True), repeat=self.num_vars):
            if self.satisfied_by(a):
                return a
        return None

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, "expected 'p cnf <vars> <clauses>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(lineno, "non-integer header field") from None
            continue
        if header is None:
            raise ParseError(lineno, "clause before the 'p cnf' header")
        for tok in line.split():
            try:
                tokens.append((lineno, int(tok)))
            except ValueError:
                raise ParseError(lineno, f"bad literal {tok!r}") from None
    if header is None:
        raise ParseError(0, "missing 'p cnf' header")
    clauses, cur = [], []
    for lineno, lit in tokens:
        if lit == 0:
            if len(cur) != 3:
                raise ParseError(lineno, f"clause of arity {len(cur)}, expected 3")
            if len({abs(x) for x in cur}) != 3:
                raise ParseError(lineno, f"clause {cur} repeats a variable")
            if max(abs(x) for x in cur) > header[0]:
                raise ParseError(lineno, f"clause {cur} exceeds {header[0]} variables")
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if cur:
        raise ParseError(tokens[-1][0], "last clause is not 0-terminated")
    if len(clauses) != header[1]:
        raise ParseError(0, f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def all_sign_clauses(num_vars: int = 3) -> list[tuple]:
    """Every clause over 3 distinct variables with every sign pattern."""
    out = []
    for vs in itertools.combinations(range(1, num_vars + 1), 3):
        for signs in itertools.product((1, -1), repeat=3):
            out.append(tuple(s * v for s, v in zip(signs, vs)))
    return out


def unsat_formula() -> CnfFormula:
    """All eight sign patterns over variables 1, 2, 3."""
    return CnfFormula(3, tuple(all_sign_clauses(3)))


def random_formula(rng: random.Random, num_vars: int = 3, max_clauses: int = 4) -> CnfFormula:
    pool = all_sign_clauses(num_vars)
    m = rng.randint(1, max_clauses)
    return CnfFormula(num_vars, tuple(rng.sample(pool, m)))


# ---------------------------------------------------------------------------
# the gadget


@dataclass(frozen=True)
class GadgetInstance:
    inst: KSetInstance
    h: PartialGraph
    roles: dict = field(compare=False, hash=False)  # name -> id

    def role(self, name: str) -> int:
        return self.roles[name]

    def roles_text(self) -> str:
        return "".join(f"role {name} {vid}\n" for name, vid in sorted(self.roles.items(), key=lambda t: t[1]))


def _gadget_roles(n: int, k: int) -> dict:
    roles = {}

    def add(name):
        roles[name] = len(roles)

    add("v")
    for j in range(1, k):
        add(f"v^{j}")
    for i in range(1, k - 2):
        add(f"u_{i}")
        for j in range(1, k):
            add(f"u_{i}^{j}")
    for i in range(1, k - 2):
        add(f"w_{i}")
        for j in range(1, k):
            add(f"w_{i}^{j}")
    for i in range(1, n + 1):
        for s in ("x", "y"):
            add(f"{s}_{i}")
            for j in range(1, k):
                add(f"{s}_{i}^{j}")
    return roles


def reduce_3sat(phi: CnfFormula, k: int) -> GadgetInstance:
    if k < 4:
        raise UnsupportedInstance(f"the reduction needs k >= 4, got k={k}")
    nv = phi.num_vars
    r = _gadget_roles(nv, k)
    size = len(r)
    assert size == 2 * nv * k + k + 2 * (k - 3) * k
    us = range(1, k - 2)
    priv = range(1, k)

    edges = set()

    def e(a, b):
        x, y = r[a], r[b]
        edges.add((min(x, y), max(x, y)))

    for i in us:
        e(f"u_{i}", "v")
        for j in priv:
            e(f"u_{i}", f"u_{i}^{j}")
            e(f"w_{i}", f"w_{i}^{j}")
        for a in range(1, nv + 1):
            e(f"w_{i}", f"x_{a}")
            e(f"w_{i}", f"y_{a}")
    for j in priv:
        e("v", f"v^{j}")
    for a in range(1, nv + 1):
        for j in priv:
            e(f"x_{a}", f"x_{a}^{j}")
            e(f"y_{a}", f"y_{a}^{j}")
        for b in range(1, nv + 1):
            if a != b:
                e(f"x_{a}", f"x_{b}")
                e(f"y_{a}", f"y_{b}")
                e(f"x_{a}", f"y_{b}")
    unknown = {(min(r["v"], r[f"{s}_{a}"]), max(r["v"], r[f"{s}_{a}"])) for a in range(1, nv + 1) for s in "xy"}
    non_edges = [p for p in itertools.combinations(range(size), 2) if p not in edges and p not in unknown]
    h = PartialGraph.from_pairs(size, sorted(edges), non_edges)
    full = Graph.from_edges(size, edges)

    connected, disconnected = set(), set()

    def add_induced(names):
        ids = sorted(r[x] for x in names)
        local = {vid: i for i, vid in enumerate(ids)}
        sub = Graph.from_edges(len(ids), [(local[a], local[b]) for a, b in full.edges if a in local and b in local])
        sub_inst = connected_ksets(sub, k)
        for m, conn in sub_inst.listed():
            gm = to_mask(ids[i] for i in bits(m))
            (connected if conn else disconnected).add(gm)

    block_v = ["v"] + [f"v^{j}" for j in priv]
    block_u = [f"u_{i}" for i in us] + [f"u_{i}^{j}" for i in us for j in priv]
    block_w = [f"w_{i}" for i in us] + [f"w_{i}^{j}" for i in us for j in priv]
    add_induced(block_v + block_u)  # family 1
    add_induced(block_v + block_w)  # family 2
    for a in range(1, nv + 1):  # family 3
        names = [f"x_{a}", f"y_{a}"] + [f"{s}_{a}^{j}" for s in "xy" for j in priv]
        add_induced(names + block_u)
    u_all = [r[f"u_{i}"] for i in us]
    for a in range(1, nv + 1):  # family 4
        disconnected.add(to_mask([r[f"x_{a}"], r[f"y_{a}"], r["v"]] + u_all))
    for c in phi.clauses:  # family 5
        zs = [r[f"x_{lit}"] if lit > 0 else r[f"y_{-lit}"] for lit in c]
        connected.add(to_mask(zs + [r["v"]] + u_all[: k - 4]))
    clash = connected & disconnected
    if clash:
        raise AssertionError(f"gadget k-set listed with both classes: {to_ids(min(clash))}")
    inst = KSetInstance(size, k, frozenset(connected), frozenset(disconnected), complete=False)
    return GadgetInstance(inst, h, r)


def check_witness_structure(gi: GadgetInstance, g: Graph, num_vars: int) -> list[str]:
    """Violations of the structure any consistent graph must have (empty if fine)."""
    k = gi.inst.k
    r = gi.roles
    v = r["v"]
    bad = []
    for i in range(1, k - 2):
        if not g.has_edge(v, r[f"u_{i}"]):
            bad.append(f"u_{i} v missing")
        if g.has_edge(v, r[f"w_{i}"]):
            bad.append(f"w_{i} v present")
        for a in range(1, num_vars + 1):
            for s in "xy":
                if g.has_edge(r[f"{s}_{a}"], r[f"u_{i}"]):
                    bad.append(f"{s}_{a} u_{i} present")
    for a in range(1, num_vars + 1):
        if g.has_edge(v, r[f"x_{a}"]) and g.has_edge(v, r[f"y_{a}"]):
            bad.append(f"x_{a} v and y_{a} v both present")
    return bad


def assignment_from_witness(gi: GadgetInstance, g: Graph, num_vars: int) -> tuple:
    v = gi.roles["v"]
    return tuple(g.has_edge(v, gi.roles[f"x_{a}"]) for a in range(1, num_vars + 1))


# ---------------------------------------------------------------------------
# solver


class BudgetExceeded(Exception):
    """Raised internally when the decision budget runs out."""


BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class SolveStats:
    nodes: int = 0  # decisions
    conflicts: int = 0
    propagations: int = 0


class _Solver:
    """Conflict-driven search over the pairs inside listed k-sets.

    Each listed set propagates on its own: a set that must be connected
    forces every bridge of (S minus its known non-edges) to be an edge, and
    a set that must stay disconnected forbids every pair that would connect
    its known edges. The explanation of either inference is the set's known
    non-edges (resp. known edges), which lets conflicts be turned into
    learned clauses over pairs.
    """

    def __init__(self, inst: KSetInstance, budget: int | None):
        self.n = n = inst.n
        self.budget = budget
        self.stats = SolveStats()
        self.sets = [(m, True) for m in sorted(inst.connected)] + [(m, False) for m in sorted(inst.disconnected)]
        pair_id = {}
        self.pairs = []
        self.set_pairs = []
        for m, _ in self.sets:
            ids = []
            for a, b in itertools.combinations(to_ids(m), 2):
                if (a, b) not in pair_id:
                    pair_id[a, b] = len(self.pairs)
                    self.pairs.append((a, b))
                ids.append(pair_id[a, b])
            self.set_pairs.append(ids)
        npairs = len(self.pairs)
        self.watch = [[] for _ in range(npairs)]
        for si, ids in enumerate(self.set_pairs):
            for q in ids:
                self.watch[q].append(si)
        self.value = [-1] * npairs
        self.level = [0] * npairs
        self.reason = [None] * npairs
        self.e = [0] * n
        self.ne = [0] * n
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.clauses = []
        self.clause_watch = [[] for _ in range(2 * npairs)]  # literal -> clause ids
        self.activity = [0.0] * npairs
        self.bump = 1.0
        self.table = _LocalTable(inst.k)
        self.sat = [False] * len(self.sets)
        self.sat_trail = []  # (level, set id) in order of satisfaction
        self.rank = {q: i for i, q in enumerate(sorted(range(npairs), key=lambda q: (-len(self.watch[q]), self.pairs[q])))}

    # -- assignment -----------------------------------------------------

    def assign(self, q, val, reason):
        a, b = self.pairs[q]
        self.value[q] = val
        self.level[q] = len(self.trail_lim)
        self.reason[q] = reason
        rows = self.e if val else self.ne
        rows[a] |= 1 << b
        rows[b] |= 1 << a
        self.trail.append(q)

    def backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        mark = self.trail_lim[lvl]
        while len(self.trail) > mark:
            q = self.trail.pop()
            a, b = self.pairs[q]
            rows = self.e if self.value[q] else self.ne
            rows[a] &= ~(1 << b)
            rows[b] &= ~(1 << a)
            self.value[q] = -1
            self.reason[q] = None
        del self.trail_lim[lvl:]
        st = self.sat_trail
        while st and st[-1][0] > lvl:
            self.sat[st.pop()[1]] = False
        self.qhead = min(self.qhead, len(self.trail))

    # -- propagation ----------------------------------------------------

    def check_set(self, si):
        """None if fine (possibly after assigning), else a conflict (list of pairs)."""
        value = self.value
        sp = self.set_pairs[si]
        em = nm = 0
        for i, q in enumerate(sp):
            val = value[q]
            if val == 1:
                em |= 1 << i
            elif val == 0:
                nm |= 1 << i
        conn = self.sets[si][1]
        kind, forced = self.table.lookup(conn, em, nm)
        if kind == _OK and not forced:
            return None
        if kind == _SAT:
            self._satisfied(si)
            return None
        want = 0 if conn else 1
        reason = [q for q in sp if value[q] == want]
        if kind == _CONFLICT:
            return reason
        fval = 1 if conn else 0
        for i in forced:
            self.assign(sp[i], fval, reason)
        return None

    def _satisfied(self, si):
        self.sat[si] = True
        self.sat_trail.append((len(self.trail_lim), si))

    def check_clause(self, ci, false_lit):
        """Two-watched-literal update; returns a conflict or None."""
        lits = self.clauses[ci]
        value = self.value
        if lits[0] == false_lit:
            lits[0], lits[1] = lits[1], lits[0]
        first = lits[0]
        if value[first >> 1] == first & 1:
            self.clause_watch[false_lit].append(ci)
            return None
        for i in range(2, len(lits)):
            lit = lits[i]
            if value[lit >> 1] != 1 - (lit & 1):
                lits[1], lits[i] = lits[i], lits[1]
                self.clause_watch[lits[1]].append(ci)
                return None
        self.clause_watch[false_lit].append(ci)
        if value[first >> 1] == -1:
            self.assign(first >> 1, first & 1, [lit >> 1 for lit in lits[1:]])
            return None
        return [lit >> 1 for lit in lits]

    def propagate(self):
        while self.qhead < len(self.trail):
            q = self.trail[self.qhead]
            self.qhead += 1
            sat = self.sat
            for si in self.watch[q]:
                if sat[si]:
                    continue
                self.stats.propagations += 1
                confl = self.check_set(si)
                if confl is not None:
                    return confl
            false_lit = (q << 1) | (1 - self.value[q])
            pending = self.clause_watch[false_lit]
            self.clause_watch[false_lit] = []
            for idx, ci in enumerate(pending):
                confl = self.check_clause(ci, false_lit)
                if confl is not None:
                    self.clause_watch[false_lit].extend(pending[idx + 1 :])
                    return confl
        return None

    # -- learning -------------------------------------------------------

    def analyze(self, confl):
        cur = len(self.trail_lim)
        seen = set()
        out = []
        path = 0
        idx = len(self.trail) - 1
        reason = confl
        while True:
            for q in reason:
                if q in seen or self.level[q] == 0:
                    continue
                seen.add(q)
                self.activity[q] += self.bump
                if self.level[q] == cur:
                    path += 1
                else:
                    out.append(q)
            while self.trail[idx] not in seen:
                idx -= 1
            uip = self.trail[idx]
            idx -= 1
            path -= 1
            if path == 0:
                break
            reason = self.reason[uip]
        self.bump *= 1.05
        back = max((self.level[q] for q in out), default=0)
        return uip, out, back

    def learn(self, uip, out, back):
        # clause: pair uip flips, or some pair in ``out`` flips
        lits = [(uip << 1) | (1 - self.value[uip])]
        others = sorted(out, key=lambda q: -self.level[q])
        lits += [(q << 1) | (1 - self.value[q]) for q in others]
        flip = 1 - self.value[uip]
        self.backtrack(back)
        if len(lits) > 1:
            ci = len(self.clauses)
            self.clauses.append(lits)
            self.clause_watch[lits[0]].append(ci)
            self.clause_watch[lits[1]].append(ci)
        self.assign(uip, flip, list(others))

    # -- search ---------------------------------------------------------

    def pick(self):
        best, key = None, None
        for q in range(len(self.pairs)):
            if self.value[q] == -1:
                kq = (self.activity[q], -self.rank[q])
                if key is None or kq > key:
                    best, key = q, kq
        return best

    def solve(self) -> bool:
        for si in range(len(self.sets)):
            if self.check_set(si) is not None:
                return False
        while True:
            confl = self.propagate()
            if confl is not None:
                self.stats.conflicts += 1
                if not self.trail_lim:
                    return False
                if not any(self.level[q] == len(self.trail_lim) for q in confl):
                    # conflict entirely below the current level: backtrack first
                    lvl = max((self.level[q] for q in confl), default=0)
                    if lvl == 0:
                        return False
                    self.backtrack(lvl)
                uip, out, back = self.analyze(confl)
                self.learn(uip, out, back)
                continue
            q = self.pick()
            if q is None:
                return True
            self.stats.nodes += 1
            if self.budget is not None and self.stats.nodes > self.budget:
                raise BudgetExceeded
            self.trail_lim.append(len(self.trail))
            self.assign(q, 0, None)


_OK, _SAT, _CONFLICT = 0, 1, 2


class _LocalTable:
    """Outcome of a k-set given which of its pairs are known edges (``em``)
    and known non-edges (``nm``), over local pair indices."""

    def __init__(self, k: int):
        local = list(itertools.combinations(range(k), 2))
        self.size = len(local)
        full_v = (1 << k) - 1
        conn = []
        for mask in range(1 << self.size):
            rows = [0] * k
            for i, (a, b) in enumerate(local):
                if mask >> i & 1:
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
            conn.append(closure(rows, 1, full_v) == full_v)
        self.conn = conn
        self.cache = {}

    def lookup(self, want_conn: bool, em: int, nm: int):
        key = (want_conn, em, nm)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        conn = self.conn
        opt = ((1 << self.size) - 1) & ~nm
        unknown = [i for i in range(self.size) if not (em | nm) >> i & 1]
        if want_conn:
            if conn[em]:
                out = (_SAT, ())
            elif not conn[opt]:
                out = (_CONFLICT, ())
            else:
                out = (_OK, tuple(i for i in unknown if not conn[opt & ~(1 << i)]))
        else:
            if conn[em]:
                out = (_CONFLICT, ())
            elif not conn[opt]:
                out = (_SAT, ())
            else:
                out = (_OK, tuple(i for i in unknown if conn[em | 1 << i]))
        self.cache[key] = out
        return out


def solve_partial(inst: KSetInstance, budget: int | None = None, stats: SolveStats | None = None):
    """A graph satisfying every listed k-set, None if there is none, or
    ``BUDGET_EXCEEDED`` when more than ``budget`` decisions are needed.

    Pairs outside every listed set are non-edges in the returned graph.
    """
    s = _Solver(inst, budget)
    try:
        ok = s.solve()
    except BudgetExceeded:
        ok = BUDGET_EXCEEDED
    finally:
        if stats is not None:
            stats.nodes, stats.conflicts, stats.propagations = s.stats.nodes, s.stats.conflicts, s.stats.propagations
    if ok == BUDGET_EXCEEDED:
        return BUDGET_EXCEEDED
    if not ok:
        return None
    return Graph.from_edges(inst.n, [s.pairs[q] for q, val in enumerate(s.value) if val == 1])


__all__ = [
    "CnfFormula",
    "parse_dimacs",
    "GadgetInstance",
    "reduce_3sat",
    "solve_partial",
    "SolveStats",
    "BUDGET_EXCEEDED",
    "check_witness_structure",
    "assignment_from_witness",
    "all_sign_clauses",
    "unsat_formula",
    "random_formula",
]
