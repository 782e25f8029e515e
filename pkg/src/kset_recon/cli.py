"""Command-line front end.

Exit codes: 0 success, 1 negative answer (no graph / not unique / no
solution), 2 usage or input errors, 3 solver budget exhausted.
"""

from __future__ import annotations

import argparse
import sys

from . import formats
from .bounded_degree import bd_skeletons, completions, skeletons_to_text
from .core import ReconstructionError, connected_ksets
from .hardness import BUDGET_EXCEEDED, parse_dimacs, reduce_3sat, solve_partial
from .reference import random_triangle_free_connected
from .triangle_free import tf_enumerate
from .uniqueness import certify_unique, pair_report_line

DEFAULT_SEED = 20240501


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def cmd_gen(args) -> int:
    if args.graph is None and args.random_tf is None:
        raise UsageError("gen needs --graph or --random-tf")
    if args.graph is not None:
        g = formats.parse_graph(_read(args.graph))
    else:
        g = random_triangle_free_connected(args.random_tf, args.seed)
        if args.graph_out:
            _write(args.graph_out, formats.serialize_graph(g))
    inst = connected_ksets(g, args.k)
    _write(args.out, formats.serialize_instance(inst))
    _log(args, f"n={inst.n} k={inst.k} connected={len(inst.connected)}")
    return 0


def cmd_reconstruct_tf(args) -> int:
    inst = formats.parse_instance(_read(args.instance))
    graphs = tf_enumerate(inst)
    _write(args.out, formats.serialize_stream(graphs))
    _log(args, f"{len(graphs)} graph(s)")
    return 0 if graphs else 1


def cmd_reconstruct_bd(args) -> int:
    inst = formats.parse_instance(_read(args.instance))
    family = bd_skeletons(inst, args.max_degree)
    if args.skeletons:
        _write(args.skeletons, skeletons_to_text(family))
    found = 0
    if args.enumerate or not args.skeletons:
        seen = {}
        for sk in family:
            for g in completions(sk):
                seen.setdefault(g.key(), g)
                if args.limit is not None and len(seen) >= args.limit:
                    break
            if args.limit is not None and len(seen) >= args.limit:
                break
        found = len(seen)
        _write(args.out, formats.serialize_stream(seen.values()))
        _log(args, f"{len(family)} skeleton(s), {found} graph(s)")
        return 0 if found else 1
    _log(args, f"{len(family)} skeleton(s)")
    return 0 if family else 1


def _class_arg(text: str) -> str:
    if text == "tf":
        return "triangle-free"
    if text.startswith("bd:") and text[3:].isdigit():
        return f"bounded-degree {int(text[3:])}"
    raise argparse.ArgumentTypeError(f"expected tf or bd:<D>, got {text!r}")


def cmd_unique(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    res = certify_unique(g, args.k, args.graph_class)
    if res.unique:
        print("unique")
        return 0
    print(f"not-unique ({len(res.others)} alternatives)")
    return 1


def cmd_analyze_pairs(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    inst = connected_ksets(g, args.k)
    lines = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                lines.append(pair_report_line(g, args.k, u, v, inst))
    _write(args.out, "".join(line + "\n" for line in lines))
    return 0


def cmd_reduce(args) -> int:
    phi = parse_dimacs(_read(args.cnf))
    gi = reduce_3sat(phi, args.k)
    _write(args.out, formats.serialize_instance(gi.inst))
    if args.roles:
        _write(args.roles, gi.roles_text())
    _log(args, f"|V|={gi.inst.n} connected={len(gi.inst.connected)} disconnected={len(gi.inst.disconnected)}")
    return 0


def cmd_solve(args) -> int:
    inst = formats.parse_instance(_read(args.instance))
    res = solve_partial(inst, args.budget)
    if res == BUDGET_EXCEEDED:
        _log(args, f"budget of {args.budget} decisions exceeded")
        return 3
    if res is None:
        _log(args, "no consistent graph")
        return 1
    _write(args.out, formats.serialize_graph(res))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kset-recon", description="Graph reconstruction from connected k-sets.")
    p.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random fixtures")
    # the global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="graph -> complete instance")
    g.add_argument("--graph")
    g.add_argument("--random-tf", type=int, metavar="N", help="random connected triangle-free graph on N vertices")
    g.add_argument("--graph-out", help="where to save the random graph")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reconstruct", parents=[common], help="enumerate consistent graphs")
    rsub = r.add_subparsers(dest="mode", required=True)
    tf = rsub.add_parser("tf", parents=[common], help="connected triangle-free graphs")
    tf.add_argument("--instance", required=True)
    tf.add_argument("--out")
    tf.set_defaults(func=cmd_reconstruct_tf)
    bd = rsub.add_parser("bd", parents=[common], help="connected graphs of bounded degree")
    bd.add_argument("--instance", required=True)
    bd.add_argument("--max-degree", type=int, required=True)
    bd.add_argument("--skeletons", help="write the skeleton family here")
    bd.add_argument("--enumerate", action="store_true", help="also stream completions")
    bd.add_argument("--limit", type=int)
    bd.add_argument("--out")
    bd.set_defaults(func=cmd_reconstruct_bd)

    u = sub.add_parser("unique", parents=[common], help="is a graph the only one in its class with its k-sets?")
    u.add_argument("--graph", required=True)
    u.add_argument("--k", type=int, required=True)
    u.add_argument("--class", dest="graph_class", type=_class_arg, required=True, metavar="tf|bd:D")
    u.set_defaults(func=cmd_unique)

    a = sub.add_parser("analyze", parents=[common], help="structural analysis")
    asub = a.add_subparsers(dest="what", required=True)
    ap = asub.add_parser("pairs", parents=[common], help="clear/fake classification of every non-edge")
    ap.add_argument("--graph", required=True)
    ap.add_argument("--k", type=int, required=True)
    ap.add_argument("--out")
    ap.set_defaults(func=cmd_analyze_pairs)

    rd = sub.add_parser("reduce", parents=[common], help="3-CNF (DIMACS) -> partial instance")
    rd.add_argument("--cnf", required=True)
    rd.add_argument("--k", type=int, required=True)
    rd.add_argument("--out", required=True)
    rd.add_argument("--roles")
    rd.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[common], help="find a graph satisfying a partial instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--budget", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ReconstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


__all__ = ["main", "build_parser"]
