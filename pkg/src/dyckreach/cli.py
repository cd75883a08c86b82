"""Command-line frontend: ``dyckreach <command> ...``.

Exit codes: 0 success (or true/accept), 1 false/reject, 2 input errors,
3 mode mismatch, 4 stale summary.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .bench import ALGOS, FAMILIES, run_bench, to_csv
from .bidirected import bidirected_reach
from .errors import DyckError, NotBidirected, ParseError, StaleSummary
from .generators import bidirected_random, ktree, program_valid_random, random_cnf, union_seq_random
from .graph import LabeledGraph, read_graph, write_graph
from .libclient import (
    ProcessStats,
    SummaryArtifact,
    analyze_client,
    preprocess_library,
    same_method_query,
    validate_program_valid,
)
from .oracle import dsccs_from_closure, dyck_closure, dyck_reachable
from .reductions import CnfGrammar, cfl_parse_via_dyck, union_graph

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_MODE, EXIT_STALE = 0, 1, 2, 3, 4
GEN_FAMILIES = ("bidirected-random", "program-valid-random", "union-seq-random", "ktree", "cnf-random")


class ModeMismatch(DyckError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str, algo: str) -> LabeledGraph:
    g = read_graph(_read(path))
    if algo == "fast" and g.mode != "bidirected":
        raise ModeMismatch(f"{path}: algo 'fast' needs a bidirected-mode graph, got mode {g.mode}")
    return g


# -- commands -----------------------------------------------------------------

def cmd_dscc(args) -> int:
    g = _load_graph(args.file, args.algo)
    stats = None
    if args.algo == "fast":
        part, stats = bidirected_reach(g)
    else:
        part = dsccs_from_closure(dyck_closure(g))
    _emit(part.listing(g.names), args.out)
    if args.stats_json:
        if stats is not None:
            d = {key: getattr(stats, key) for key in ("n", "m", "k", "classes", "iterations", "sum_sprime", "unions", "finds")}
        else:
            d = {"n": g.n, "m": g.m, "k": g.k, "classes": len(part.classes)}
        _emit(json.dumps(d, sort_keys=True) + "\n", args.stats_json if args.stats_json != "-" else None)
    return EXIT_OK


def cmd_query(args) -> int:
    g = _load_graph(args.file, args.algo)
    u, v = g.node_id(args.u), g.node_id(args.v)
    if args.algo == "fast":
        ans = bidirected_reach(g)[0].query(u, v)
    else:
        ans = dyck_reachable(g, u, v)
    print("true" if ans else "false")
    return EXIT_OK if ans else EXIT_FALSE


def cmd_summarize(args) -> int:
    pvg = validate_program_valid(read_graph(_read(args.libfile)))
    art = preprocess_library(pvg)
    _emit(art.dumps(), args.out)
    if args.dump_td:
        lines = []
        for j, ms in sorted(art.methods.items()):
            lines.append(f"method {j}")
            lines.extend(ms.bag_lines)
        _emit("\n".join(lines) + "\n", args.dump_td)
    return EXIT_OK


def _query_pairs(args) -> list[tuple[str, str]]:
    pairs = []
    if args.queries:
        for lineno, raw in enumerate(_read(args.queries).splitlines(), 1):
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ParseError("expected 'u v'", lineno)
            pairs.append((parts[0], parts[1]))
    if len(args.pairs) % 2:
        raise ParseError("query nodes must come in pairs")
    pairs.extend(zip(args.pairs[::2], args.pairs[1::2]))
    return pairs


def cmd_analyze(args) -> int:
    summary = SummaryArtifact.loads(_read(args.summary))
    pvg = validate_program_valid(read_graph(_read(args.clientfile)))
    pairs = _query_pairs(args)
    ids = [(pvg.base.node_id(a), pvg.base.node_id(b)) for a, b in pairs]
    index = analyze_client(summary, pvg, stats=ProcessStats())
    out = []
    for (a, b), (u, v) in zip(pairs, ids):
        out.append(f"{a} {b} {'true' if same_method_query(pvg, index, u, v) else 'false'}\n")
    _emit("".join(out), args.out)
    return EXIT_OK


def cmd_parse(args) -> int:
    grammar = CnfGrammar.parse(_read(args.grammar))
    ok = cfl_parse_via_dyck(grammar, args.string)
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else random.SystemRandom().getrandbits(63)
    header = [f"seed {seed}", f"family {args.family}"]
    fam = args.family
    if fam == "bidirected-random":
        g = bidirected_random(args.n, args.m if args.m is not None else 2 * args.n, args.k, seed)
        text = write_graph(g, comments=header)
    elif fam == "program-valid-random":
        g = program_valid_random(args.methods, args.nodes_per_method, args.call_sites, seed, b=args.b, width=args.width)
        text = write_graph(g, comments=header)
    elif fam == "union-seq-random":
        seq = union_seq_random(args.n, args.ops if args.ops is not None else args.n - 1, seed)
        if args.emit == "graph":
            text = write_graph(union_graph(seq), comments=header)
        else:
            text = "".join(f"# {h}\n" for h in header) + seq.dumps()
    elif fam == "ktree":
        kt = ktree(args.n, args.width, seed, args.keep)
        names = [f"v{u}" for u in range(kt.n)]
        g = LabeledGraph(names, 1, [(a, b, 0) for a, b in kt.edges] + [(b, a, 0) for a, b in kt.edges], mode="bidirected")
        text = write_graph(g, comments=header + [f"treewidth <= {args.width}"])
    else:
        grammar = random_cnf(args.nonterminals, args.terminals, args.rules, seed)
        text = "".join(f"# {h}\n" for h in header) + grammar.dumps()
    _emit(text, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    algos = [a for a in args.algos.split(",") if a]
    print(f"# seed {args.seed}", file=sys.stderr)
    rows = run_bench(args.family, sizes, algos, args.seed, warmup=args.warmup, reps=args.reps, parallel=args.parallel)
    _emit(to_csv(rows), args.out)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyckreach", description="Dyck reachability toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dscc", help="list the DSCCs of a graph")
    s.add_argument("file")
    s.add_argument("--algo", choices=("fast", "naive"), default="fast")
    s.add_argument("--out")
    s.add_argument("--stats-json", metavar="PATH")
    s.set_defaults(func=cmd_dscc)

    s = sub.add_parser("query", help="is V Dyck-reachable from U")
    s.add_argument("file")
    s.add_argument("u")
    s.add_argument("v")
    s.add_argument("--algo", choices=("fast", "naive"), default="fast")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("summarize", help="summarize a library program")
    s.add_argument("libfile")
    s.add_argument("--out")
    s.add_argument("--dump-td", metavar="PATH")
    s.set_defaults(func=cmd_summarize)

    s = sub.add_parser("analyze", help="answer same-method queries on a client using a library summary")
    s.add_argument("summary")
    s.add_argument("clientfile")
    s.add_argument("pairs", nargs="*", metavar="NODE")
    s.add_argument("--queries", metavar="FILE")
    s.add_argument("--out")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("parse", help="decide membership of STRING via Dyck reachability")
    s.add_argument("grammar")
    s.add_argument("string")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("gen", help="generate a seeded random instance")
    s.add_argument("family", choices=GEN_FAMILIES)
    s.add_argument("--seed", type=int)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--m", type=int)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--ops", type=int)
    s.add_argument("--emit", choices=("sequence", "graph"), default="sequence")
    s.add_argument("--methods", type=int, default=5)
    s.add_argument("--nodes-per-method", type=int, default=10)
    s.add_argument("--call-sites", type=int, default=8)
    s.add_argument("--b", type=int, default=3)
    s.add_argument("--width", type=int, default=2)
    s.add_argument("--keep", type=float, default=1.0)
    s.add_argument("--nonterminals", type=int, default=3)
    s.add_argument("--terminals", type=int, default=2)
    s.add_argument("--rules", type=int, default=4)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="time DSCC engines, CSV output")
    s.add_argument("--family", choices=FAMILIES, default="bidirected-random")
    s.add_argument("--sizes", default="1000,2000,4000")
    s.add_argument("--algos", default="fast,naive", help=f"comma list from {','.join(ALGOS)}")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--parallel", action="store_true")
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--warmup", type=int, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StaleSummary as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALE
    except (NotBidirected, ModeMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except (DyckError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
