"""Command-line interface: extract, reconstruct, check, enumerate, generate, verify.

Exit status: 0 success or unique, 1 inconsistent input (or a verify
mismatch), 2 ambiguous with witnesses printed, 3 usage or input errors,
4 budget exhausted with partial output marked.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import oracle
from .classes import (
    reconstruct_max_planar,
    reconstruct_outerplanar_2connected,
    reconstruct_triangle_free,
)
from .core import (
    BudgetExceeded,
    Graph,
    KSetCollection,
    ReconError,
    ReconstructionResult,
    ambiguous,
    extract_ksets,
    format_graph,
    format_ksets,
    inconsistent,
    parse_graph,
    parse_ksets,
    to_dot,
    unique,
    verify_result,
)
from .ksets import (
    InfeasibleK,
    gen_infmany,
    infmany_twin,
    reconstruct_high_girth,
    reconstruct_random_like,
    reconstruct_tree_ksets,
)
from .sat import check_unique
from .tree import reconstruct_tree

OK, INCONSISTENT, AMBIGUOUS, USAGE, BUDGET = 0, 1, 2, 3, 4

CLASSES = ("any", "tree", "triangle-free", "outerplanar2c", "max-planar", "tree-ksets", "random-like", "girth-gt-k")
TRIPLES_ONLY = {"tree", "triangle-free", "outerplanar2c", "max-planar"}


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


def _emit_graph(g: Graph, dot: bool) -> None:
    sys.stdout.write(to_dot(g) if dot else format_graph(g))


def _emit_witnesses(ws, dot: bool) -> None:
    for i, g in enumerate(ws):
        sys.stdout.write(f"# witness {i + 1}\n")
        _emit_graph(g, dot)


def _any(kc: KSetCollection, args) -> ReconstructionResult:
    if kc.k == 3:
        rep = check_unique(kc, connected_only=args.connected_only)
        if rep.status == "inconsistent":
            return inconsistent("no graph has these connected triples")
        if args.connected_only:
            if not rep.connected_count:
                return inconsistent("no connected graph has these connected triples")
            if rep.connected_unique:
                conn = [g for g in rep.witnesses if g.is_connected()]
                return unique(conn[0]) if conn else _connected_oracle(kc, args)
            return _connected_oracle(kc, args)
        return rep.as_result()
    return _connected_oracle(kc, args)


def _connected_oracle(kc: KSetCollection, args) -> ReconstructionResult:
    filters = ("connected",) if args.connected_only else ()
    rep = oracle.enumerate_consistent(kc, filters=filters, cap=10, jobs=args.jobs)
    if not rep.complete:
        raise BudgetExceeded("oracle budget exhausted")
    if rep.count == 0:
        return inconsistent("no graph has these connected sets")
    if rep.count == 1:
        return unique(rep.witnesses[0])
    return ambiguous(rep.witnesses, f"{rep.count} graphs share these connected sets")


def _dispatch(cls: str) -> Callable[[KSetCollection, argparse.Namespace], ReconstructionResult]:
    table: dict[str, Callable] = {
        "any": _any,
        "tree": lambda kc, a: reconstruct_tree(kc),
        "triangle-free": lambda kc, a: reconstruct_triangle_free(kc),
        "outerplanar2c": lambda kc, a: reconstruct_outerplanar_2connected(kc),
        "max-planar": lambda kc, a: reconstruct_max_planar(kc),
        "tree-ksets": lambda kc, a: reconstruct_tree_ksets(kc),
        "random-like": lambda kc, a: reconstruct_random_like(kc),
        "girth-gt-k": lambda kc, a: reconstruct_high_girth(kc),
    }
    return table[cls]


def reconstruct(kc: KSetCollection, cls: str, args) -> ReconstructionResult:
    if cls in TRIPLES_ONLY and kc.k != 3:
        raise UsageError(f"--class {cls} needs connected triples (k = 3), got k = {kc.k}")
    try:
        res = _dispatch(cls)(kc, args)
    except InfeasibleK as exc:
        return ambiguous(exc.witnesses, str(exc))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return verify_result(res, kc) if args.verify else res


def _report(res: ReconstructionResult, dot: bool) -> int:
    if res.status in ("unique", "found"):
        _emit_graph(res.graph, dot)
        return OK
    if res.status == "ambiguous":
        sys.stderr.write(f"ambiguous: {res.reason}\n")
        _emit_witnesses(res.witnesses, dot)
        return AMBIGUOUS
    sys.stderr.write(f"inconsistent: {res.reason}\n")
    return INCONSISTENT


def cmd_extract(args) -> int:
    g = parse_graph(_read(args.graph))
    if not 2 <= args.k <= g.n:
        raise UsageError(f"need 2 <= k <= n = {g.n}")
    sys.stdout.write(format_ksets(extract_ksets(g, args.k)))
    return OK


def cmd_reconstruct(args) -> int:
    kc = parse_ksets(_read(args.ksets))
    return _report(reconstruct(kc, args.cls, args), args.dot)


def cmd_check_unique(args) -> int:
    kc = parse_ksets(_read(args.ksets))
    if kc.k != 3:
        res = _connected_oracle(kc, args)
    else:
        rep = check_unique(kc, connected_only=args.connected_only)
        if rep.status == "inconsistent":
            sys.stdout.write("inconsistent\n")
            return INCONSISTENT
        sys.stdout.write("unique\n" if rep.unique else f"not unique (at least {rep.solution_count_lower_bound})\n")
        if args.connected_only:
            verdict = "unique" if rep.connected_unique else f"not unique ({rep.connected_count} found)"
            sys.stdout.write(f"connected: {verdict}\n")
        _emit_witnesses(rep.witnesses, False)
        return OK if rep.unique else AMBIGUOUS
    sys.stdout.write({"unique": "unique\n", "ambiguous": "not unique\n"}.get(res.status, "inconsistent\n"))
    _emit_witnesses(res.witnesses, False)
    return {"unique": OK, "ambiguous": AMBIGUOUS}.get(res.status, INCONSISTENT)


def cmd_enumerate(args) -> int:
    kc = parse_ksets(_read(args.ksets))
    for f in args.filter:
        oracle.predicate(f)  # unknown names fail here as usage errors
    rep = oracle.enumerate_consistent(
        kc, filters=tuple(args.filter), cap=args.caps, budget=args.budget, max_n=args.max_n, jobs=args.jobs
    )
    sys.stdout.write(rep.format())
    if not rep.complete:
        sys.stderr.write("budget exhausted: report is partial\n")
        return BUDGET
    return OK


def _family(args) -> Graph:
    fam, s = args.family, args.seed

    def need(name: str):
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"--family {fam} needs --{name}")
        return v

    simple = {
        "path": lambda: oracle.gen_path(need("n")),
        "star": lambda: oracle.gen_star(need("n") - 1),
        "cycle": lambda: oracle.gen_cycle(need("n")),
        "complete": lambda: oracle.gen_complete(need("n")),
        "tree": lambda: oracle.gen_tree(need("n"), s),
        "gnp": lambda: oracle.gen_gnp(need("n"), args.p, s),
        "bipartite": lambda: oracle.gen_bipartite(need("n"), args.p, s),
        "cycle-chords": lambda: oracle.gen_cycle_chords(need("n"), need("chords"), s),
        "apollonian": lambda: oracle.gen_apollonian(need("n"), s),
        "wheel": lambda: oracle.gen_wheel(need("n") - 1),
        "fan": lambda: oracle.gen_fan(need("n")),
        "bipyramid": lambda: oracle.gen_bipyramid(need("n") - 2),
        "octahedron": oracle.gen_octahedron,
        "icosahedron": oracle.gen_icosahedron,
        "petersen": oracle.gen_petersen,
        "unicyclic": lambda: oracle.gen_unicyclic(need("cycle"), need("n") - need("cycle"), s),
        "infmany": lambda: gen_infmany(need("k"), need("n")),
        "infmany-twin": lambda: infmany_twin(need("k"), need("n")),
    }
    if fam in simple:
        g = simple[fam]()
    else:
        params = {name: getattr(args, name) for name in ("m", "r", "leaves", "pairs", "s", "outside")}
        pair = oracle.gen_ambiguous_family(fam, **{k: v for k, v in params.items() if v is not None})
        g = pair[args.variant]
    if args.subdivide:
        g = oracle.gen_subdivided(g, args.subdivide)
    return g


FAMILIES = (
    "path", "star", "cycle", "complete", "tree", "gnp", "bipartite", "cycle-chords", "apollonian",
    "wheel", "fan", "bipyramid", "octahedron", "icosahedron", "petersen", "unicyclic", "infmany",
    "infmany-twin", "complete-minus-matching", "star-plus-matching", "p4-dominated", "twin-triangle",
)


def cmd_gen(args) -> int:
    try:
        g = _family(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit_graph(g, args.dot)
    return OK


def cmd_verify(args) -> int:
    g = parse_graph(_read(args.graph))
    if not 2 <= args.k <= g.n:
        raise UsageError(f"need 2 <= k <= n = {g.n}")
    kc = extract_ksets(g, args.k)
    res = reconstruct(kc, args.cls, args)
    if res.status == "unique" and res.graph.edge_set() == g.edge_set():
        sys.stdout.write("identical\n")
        return OK
    if res.status in ("unique", "found"):
        lost = sorted(g.edge_set() - res.graph.edge_set())
        extra = sorted(res.graph.edge_set() - g.edge_set())
        sys.stdout.write("differs\n")
        for a, b in lost:
            sys.stdout.write(f"- {g.labels[a]} {g.labels[b]}\n")
        for a, b in extra:
            sys.stdout.write(f"+ {g.labels[a]} {g.labels[b]}\n")
        return INCONSISTENT
    sys.stdout.write(f"{res.status}: {res.reason}\n")
    return AMBIGUOUS if res.status == "ambiguous" else INCONSISTENT


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which here means "ambiguous"
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ksetrecon", description="Reconstruct graphs from their connected k-sets.")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the oracle")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    # the same two flags are accepted after the subcommand too
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("extract", parents=[common], help="list the connected k-sets of a graph")
    e.add_argument("graph")
    e.add_argument("--k", type=int, required=True)
    e.set_defaults(func=cmd_extract)

    def recon_flags(q, class_required: bool) -> None:
        q.add_argument("--class", dest="cls", choices=CLASSES, default=None if class_required else "any",
                       required=class_required)
        q.add_argument("--verify", action="store_true", help="re-extract the output and compare")
        q.add_argument("--connected-only", action="store_true", help="only count connected graphs")
        q.add_argument("--dot", action="store_true", help="print graphs in DOT")

    r = sub.add_parser("reconstruct", parents=[common], help="recover a graph from its k-sets")
    r.add_argument("ksets")
    recon_flags(r, False)
    r.set_defaults(func=cmd_reconstruct)

    c = sub.add_parser("check-unique", parents=[common], help="decide whether the k-sets determine the graph")
    c.add_argument("ksets")
    c.add_argument("--connected-only", action="store_true")
    c.set_defaults(func=cmd_check_unique)

    n = sub.add_parser("enumerate", parents=[common], help="list every graph with these k-sets (small n)")
    n.add_argument("ksets")
    n.add_argument("--filter", action="append", default=[], help="class predicate, repeatable")
    n.add_argument("--caps", type=int, default=50, help="most witnesses to print")
    n.add_argument("--budget", type=int, default=5_000_000, help="search node budget")
    n.add_argument("--max-n", type=int, default=None)
    n.set_defaults(func=cmd_enumerate)

    g = sub.add_parser("gen", parents=[common], help="print a generated graph")
    g.add_argument("--family", choices=FAMILIES, required=True)
    for name in ("n", "k", "chords", "cycle", "m", "r", "leaves", "pairs", "s", "outside", "subdivide"):
        g.add_argument(f"--{name}", type=int, default=None)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--variant", type=int, choices=(0, 1), default=0, help="which graph of an ambiguous pair")
    g.add_argument("--dot", action="store_true")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="round-trip a graph through extraction and reconstruction")
    v.add_argument("graph")
    v.add_argument("--k", type=int, required=True)
    recon_flags(v, True)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return BUDGET
    except (UsageError, ReconError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
