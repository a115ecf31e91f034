"""Command-line front end.

Exit status: 0 on success, 1 when a computation rejects its input (the module's
error message goes to stderr verbatim), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from dataclasses import dataclass
from typing import Callable

from . import fgh, funseq, graph, hopda, lextree, pairtypes
from . import ordinal as O
from .funseq import TableSystem, system_by_name

FORMATS = ("text", "json", "csv", "dot")


class UsageError(Exception):
    pass


@dataclass
class Output:
    json: object
    text: str | None = None
    csv: str | None = None
    dot: str | None = None


# schema file (under caucal_ordinals/schemas) describing each command's JSON output
SCHEMAS = {
    ("ord", "compare"): "ord_compare",
    ("ord", "add"): "ordinal_result",
    ("ord", "fundseq"): "ordinal_result",
    ("ord", "tower"): "ordinal_result",
    ("path", "find"): "path",
    ("path", "enumerate"): "path_list",
    ("path", "stepdown"): "chain",
    ("check", "bachmann"): "check",
    ("check", "schmidt"): "check",
    ("fgh", "eval"): "fgh_eval",
    ("fgh", "dominate"): "domination",
    ("fgh", "coherent"): "coherent",
    ("graph", "unfold"): "graph",
    ("graph", "treegraph"): "graph",
    ("graph", "query"): "query",
    ("graph", "dot"): "graph",
    ("hopda", "run"): "hopda_run",
    ("hopda", "graph"): "graph",
    ("hopda", "contract"): "graph",
    ("hopda", "pump"): "pump",
    ("types", "pair"): "pair_type",
    ("types", "compose"): "pair_type",
    ("lextree", "order"): "lextree_order",
    ("lextree", "cofinal"): "cofinal",
    ("lextree", "bachmannize"): "cofinal",
    ("lextree", "standard"): "cofinal",
}


def load_schema(name: str) -> dict:
    """A shipped JSON schema, by the names used in :data:`SCHEMAS`."""
    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.json").read_text("utf-8"))


# -- input helpers -----------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _ordinal(text: str) -> O.Ordinal:
    return O.parse(text)


def _naturals(text: str) -> list[int]:
    """``3``, ``1,4,9`` or an inclusive range ``0..10``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected naturals like '5', '1,2,3' or '0..10', got {text!r}") from None


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return value


def _pos(text: str) -> int:
    value = _nat(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return value


def _system(args, name_attr="system", table_attr="table"):
    sys_ = system_by_name(getattr(args, name_attr))
    table = getattr(args, table_attr, None)
    if table:
        sys_ = TableSystem.from_text(_read(table), fallback=sys_)
    return sys_


def _bound(args) -> graph.Bound:
    return graph.Bound(args.bound_vertices, args.bound_path)


def _budget(args) -> fgh.EvalBudget:
    return fgh.EvalBudget(args.budget_steps, args.budget_bits)


def _fmt(a) -> str:
    return O.format_ordinal(a)


def _graph_output(g: graph.FiniteGraph, complete: bool = True) -> Output:
    data = graph.to_adjacency(g)
    data["complete"] = complete
    lines = [f"{g.label(u)} ; {c} ; {g.label(w)}" for u, c, w in g.edges]
    lines += [g.label(v) for v in g.vertices if not g.out_edges(v) and not g.in_edges(v)]
    if g.root is not None:
        lines.insert(0, f"root: {g.label(g.root)}")
    return Output(data, "\n".join(lines), dot=graph.to_dot(g))


# -- ord ---------------------------------------------------------------------------------


def cmd_ord_compare(args):
    a, b = _ordinal(args.a), _ordinal(args.b)
    sym = {O.Cmp.LESS: "<", O.Cmp.EQUAL: "=", O.Cmp.GREATER: ">"}[O.compare(a, b)]
    return Output({"a": _fmt(a), "b": _fmt(b), "result": sym}, sym)


def cmd_ord_add(args):
    r = O.add(_ordinal(args.a), _ordinal(args.b))
    return Output({"result": _fmt(r), "cnf": r.to_json()}, _fmt(r))


def cmd_ord_fundseq(args):
    sys_ = _system(args)
    x = _ordinal(args.ordinal)
    if args.count is not None:
        seq = [sys_.fundamental(x, n) for n in range(args.n, args.n + args.count)]
        text = "\n".join(_fmt(y) for y in seq)
        return Output({"result": _fmt(seq[0]) if seq else None,
                       "sequence": [_fmt(y) for y in seq]}, text,
                      csv="n,value\n" + "".join(f"{args.n + i},{_fmt(y)}\n" for i, y in enumerate(seq)))
    r = sys_.fundamental(x, args.n)
    return Output({"result": _fmt(r), "cnf": r.to_json()}, _fmt(r))


def cmd_ord_tower(args):
    r = O.omega_tower(args.k)
    return Output({"result": _fmt(r), "cnf": r.to_json()}, _fmt(r))


# -- path --------------------------------------------------------------------------------


def cmd_path_find(args):
    sys_ = _system(args)
    a, b = _ordinal(args.source), _ordinal(args.target)
    p = funseq.greedy_min_path(sys_, a, b, args.step_cap)
    text = f"({','.join(map(str, p))})  measure {funseq.path_measure(p)}"
    return Output({"from": _fmt(a), "to": _fmt(b), "path": list(p), "measure": funseq.path_measure(p)}, text)


def cmd_path_enumerate(args):
    sys_ = _system(args)
    a, b = _ordinal(args.source), _ordinal(args.target)
    paths = funseq.enumerate_paths(sys_, a, b, args.cap)
    rows = [{"path": list(p), "measure": funseq.path_measure(p)} for p in paths]
    text = "\n".join(f"({','.join(map(str, r['path']))}) {r['measure']}" for r in rows)
    csv = "measure,path\n" + "".join(f"{r['measure']},{' '.join(map(str, r['path']))}\n" for r in rows)
    return Output({"from": _fmt(a), "to": _fmt(b), "cap": args.cap, "paths": rows}, text, csv=csv)


def cmd_path_stepdown(args):
    sys_ = _system(args)
    chain = []
    truncated = False
    try:
        for x in funseq.step_down_chain(sys_, _ordinal(args.ordinal), args.limit):
            chain.append(x)
    except funseq.StepLimitError:
        truncated = True
    return Output({"chain": [_fmt(x) for x in chain], "truncated": truncated},
                  " > ".join(_fmt(x) for x in chain) + (" > ..." if truncated else ""))


# -- check -------------------------------------------------------------------------------


def _limit_sample(args) -> list:
    sample = [x for x in O.ordinals_below(args.top_exponent, args.max_coefficient) if x.is_limit]
    if args.sample is not None and args.sample < len(sample):
        sample = sorted(random.Random(args.seed).sample(sample, args.sample))
    return sample


def _check_output(report: funseq.CheckReport) -> Output:
    data = report.to_json(_fmt)
    n_bad = len(report.violations)
    lines = [f"{report.property}: {'ok' if report.ok else 'FAILED'} ({report.checked} checks, "
             f"{n_bad} violation{'' if n_bad == 1 else 's'})"]
    lines += ["  " + ", ".join(f"{k}={v}" for k, v in w.items()) for w in data["violations"]]
    csv = "x,n,detail\n" + "".join(
        f"{w['x']},{w['n']},{' '.join(f'{k}={v}' for k, v in w.items() if k not in ('x', 'n'))}\n"
        for w in data["violations"])
    return Output(data, "\n".join(lines), csv=csv)


def cmd_check_bachmann(args):
    return _check_output(funseq.check_bachmann(_system(args), _limit_sample(args), args.n_cap))


def cmd_check_schmidt(args):
    return _check_output(funseq.check_schmidt_coherent(_system(args), _limit_sample(args), args.n_cap))


# -- fgh ---------------------------------------------------------------------------------


def cmd_fgh_eval(args):
    out = fgh.fgh_eval(_system(args), _ordinal(args.ordinal), args.x, _budget(args))
    data = {"ordinal": _fmt(_ordinal(args.ordinal)), "x": args.x, **out.to_json()}
    return Output(data, str(out))


def cmd_fgh_dominate(args):
    s1 = _system(args, "system1", "table1")
    s2 = _system(args, "system2", "table2")
    table = fgh.domination_experiment(s1, s2, _ordinal(args.a), _ordinal(args.b), args.xs, _budget(args))
    text = table.to_csv().replace(",", "\t") + f"crossover: {table.crossover}"
    return Output(table.to_json(_fmt), text, csv=table.to_csv())


def cmd_fgh_coherent(args):
    report = fgh.check_coherent_dom(_system(args), _ordinal(args.a), _ordinal(args.b), args.xs, _budget(args))
    lines = [f"path ({','.join(map(str, report.path))}) measure {report.measure}: "
             f"{'holds' if report.holds else 'VIOLATED'}"]
    lines += [f"  x={r.x}: {r.lhs} vs {r.rhs} -> {r.verdict}" for r in report.rows]
    if report.skipped:
        lines.append(f"  skipped x < {report.measure}: {report.skipped}")
    csv = "x,lhs,rhs,verdict\n" + "".join(f"{r.x},{r.lhs},{r.rhs},{r.verdict}\n" for r in report.rows)
    return Output(report.to_json(), "\n".join(lines), csv=csv)


# -- graph -------------------------------------------------------------------------------


def _load_graph(args) -> graph.FiniteGraph:
    return graph.parse_graph_text(_read(args.graph))


def _vertex(g, name):
    if name is None:
        if g.root is None:
            raise UsageError("the graph has no root; pass --root")
        return g.root
    if not g.has_vertex(name):
        raise graph.VertexNotFoundError(f"{name!r} is not a vertex")
    return name


def cmd_graph_unfold(args):
    g = _load_graph(args)
    return _graph_output(graph.unfold(g, _vertex(g, args.root), args.depth))


def cmd_graph_treegraph(args):
    return _graph_output(graph.treegraph(_load_graph(args), args.color, args.depth))


def cmd_graph_query(args):
    g = _load_graph(args)
    result = graph.regular_path_query(g, _vertex(g, args.start), args.regex, _bound(args))
    lines = [f"{g.label(v)}\t{' '.join(str(c) for c in w) or 'ε'}" for v, w in result.targets.items()]
    if not result.complete:
        lines.append("# incomplete: exploration bound reached")
    csv = "vertex,witness\n" + "".join(f"{g.label(v)},{' '.join(map(str, w))}\n" for v, w in result.targets.items())
    return Output(result.to_json(g.label), "\n".join(lines), csv=csv)


def cmd_graph_dot(args):
    g = _load_graph(args)
    if args.inverse:
        g = graph.inverse_closure(g)
    out = _graph_output(g)
    out.text = out.dot
    return out


# -- hopda -------------------------------------------------------------------------------


def _load_pds(args) -> hopda.PushdownSystem:
    if args.example:
        return hopda.PushdownSystem.from_text(hopda.EXAMPLES[args.example])
    if not args.system:
        raise UsageError("pass --system FILE or --example NAME")
    return hopda.PushdownSystem.from_text(_read(args.system))


def cmd_hopda_run(args):
    sys_ = _load_pds(args)
    ex = hopda.explore_configurations(sys_, _bound(args))
    rows = []
    lines = []
    for w in ex.order:
        succ = hopda.one_step_successors(sys_, w)
        rows.append({"config": str(w), "successors": [{"transition": str(t), "config": str(w2)} for t, w2 in succ]})
        lines.append(f"{w}: " + ("; ".join(f"-{t.label}-> {w2}" for t, w2 in succ) or "(no moves)"))
    if not ex.complete:
        lines.append("# incomplete: exploration bound reached")
    return Output({"complete": ex.complete, "configurations": rows}, "\n".join(lines))


def cmd_hopda_graph(args):
    ex = hopda.explore_configurations(_load_pds(args), _bound(args))
    return _graph_output(ex.graph, ex.complete)


def cmd_hopda_contract(args):
    bound = _bound(args)
    lazy = hopda.epsilon_contraction(hopda.configuration_graph(_load_pds(args)), bound.max_vertices)
    ex = graph.explore(lazy, bound)
    return _graph_output(ex.graph, ex.complete)


def cmd_hopda_pump(args):
    value = hopda.pumping_threshold(args.level, args.m, args.c, args.budget_bits)
    return Output({"level": args.level, "m": args.m, "c": args.c, "threshold": str(value)}, str(value))


# -- types -------------------------------------------------------------------------------


def _load_automaton(args) -> pairtypes.WordAutomaton:
    if args.regex:
        return pairtypes.WordAutomaton.from_regex(args.regex)
    if args.automaton:
        return pairtypes.WordAutomaton.from_text(_read(args.automaton))
    raise UsageError("pass --automaton FILE or --regex EXPR")


def _type_output(t: pairtypes.VertexPairType) -> Output:
    return Output(t.to_json(), str(t))


def cmd_types_pair(args):
    g = _load_graph(args)
    aut = _load_automaton(args)
    return _type_output(pairtypes.pair_type(aut, g, _vertex(g, args.v1), _vertex(g, args.v2), _bound(args)))


def _load_type(path) -> pairtypes.VertexPairType:
    try:
        data = json.loads(_read(path))
        return pairtypes.VertexPairType({tuple(p) for p in data["forward"]}, {tuple(p) for p in data["backward"]})
    except (ValueError, KeyError, TypeError) as exc:
        raise pairtypes.AutomatonError(f"{path}: not a pair type ({exc})") from None


def cmd_types_compose(args):
    types = [_load_type(p) for p in args.type]
    need = 2 if args.mode == "collinear" else 3
    if len(types) != need:
        raise UsageError(f"--mode {args.mode} needs exactly {need} --type arguments")
    fn = pairtypes.compose_collinear if args.mode == "collinear" else pairtypes.compose_forked
    return _type_output(fn(*types))


# -- lextree -----------------------------------------------------------------------------


def _tree_vertex(t, text):
    return t.parse(text)


def cmd_lextree_order(args):
    t = lextree.LexTree(args.k)
    data = {"k": args.k, "language": lextree.order_language(t)}
    text = data["language"]
    if args.v1 is not None and args.v2 is not None:
        v1, v2 = _tree_vertex(t, args.v1), _tree_vertex(t, args.v2)
        sym = {O.Cmp.LESS: "<", O.Cmp.EQUAL: "=", O.Cmp.GREATER: ">"}[lextree.lex_compare(t, v1, v2)]
        data["comparison"] = sym
        data["ordinals"] = [_fmt(lextree.vertex_to_ordinal(t, v)) for v in (v1, v2)]
        text = sym
    return Output(data, text)


def _entries_output(t, v0, entries, extra=None) -> Output:
    names = [t.format(u) for u in entries]
    data = {"k": t.k, "vertex": t.format(v0), "entries": names, **(extra or {})}
    return Output(data, "\n".join(names), csv="n,vertex\n" + "".join(f"{i},{u}\n" for i, u in enumerate(names)))


def cmd_lextree_cofinal(args):
    t = lextree.LexTree(args.k)
    v0 = _tree_vertex(t, args.vertex)
    aut = lextree.default_automaton(t)
    return _entries_output(t, v0, lextree.construct_cofinal(t, v0, args.count, aut, args.select))


def cmd_lextree_bachmannize(args):
    t = lextree.LexTree(args.k)
    v0 = _tree_vertex(t, args.vertex)
    base = lextree.cofinal_system(t, args.select)
    return _entries_output(t, v0, lextree.bachmannize(t, base, v0, args.count))


def cmd_lextree_standard(args):
    t = lextree.LexTree(args.k)
    v0 = _tree_vertex(t, args.vertex)
    cap = _ordinal(args.cap) if args.cap else None
    rel = lextree.standard_relation_on_tree(t, cap)
    entries = [rel.fundamental(v0, n) for n in range(args.count)] if lextree.is_limit_vertex(t, v0) else []
    return _entries_output(t, v0, entries, {"level": rel.level(v0)})


# -- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    """Global flags; subcommands accept them too, without overriding earlier values."""

    def d(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--format", choices=FORMATS, default=d("text"))
    p.add_argument("--bound-vertices", type=_pos, default=d(graph.DEFAULT_MAX_VERTICES))
    p.add_argument("--bound-path", type=_pos, default=d(graph.DEFAULT_MAX_PATH))
    p.add_argument("--budget-steps", type=_pos, default=d(fgh.DEFAULT_MAX_STEPS))
    p.add_argument("--budget-bits", type=_pos, default=d(fgh.DEFAULT_MAX_BITS))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--config", default=d(None), help="JSON file of defaults for the global flags")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="caucal-ordinals", allow_abbrev=False,
                description="Ordinals, cofinal sequences and presentations by graphs.")
    _global_flags(p, defaults=True)
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, help_):
        sp = groups.add_parser(name, help=help_, allow_abbrev=False)
        return sp.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(sub, name, fn: Callable, help_):
        c = sub.add_parser(name, help=help_, allow_abbrev=False)
        _global_flags(c, defaults=False)
        c.set_defaults(handler=fn)
        return c

    def system_flags(c, table=True):
        c.add_argument("--system", default="st", choices=sorted(funseq.SYSTEMS))
        if table:
            c.add_argument("--table", help="file of 'x ; n ; s(x,n)' overrides")

    ordg = group("ord", "ordinal arithmetic")
    for name, fn, help_ in (("compare", cmd_ord_compare, "compare two ordinals"),
                            ("add", cmd_ord_add, "ordinal sum")):
        c = cmd(ordg, name, fn, help_)
        c.add_argument("--a", required=True)
        c.add_argument("--b", required=True)
    c = cmd(ordg, "fundseq", cmd_ord_fundseq, "fundamental sequence entry")
    c.add_argument("--ordinal", required=True)
    c.add_argument("--n", type=_nat, required=True)
    c.add_argument("--count", type=_nat, help="emit this many entries starting at n")
    system_flags(c)
    c = cmd(ordg, "tower", cmd_ord_tower, "the tower w^w^...^w of height k")
    c.add_argument("--k", type=_nat, required=True)

    pathg = group("path", "path codes")
    for name, fn, help_ in (("find", cmd_path_find, "least-measure path by greedy descent"),
                            ("enumerate", cmd_path_enumerate, "all paths up to a measure cap")):
        c = cmd(pathg, name, fn, help_)
        c.add_argument("--from", dest="source", required=True)
        c.add_argument("--to", dest="target", required=True)
        system_flags(c)
        if name == "find":
            c.add_argument("--step-cap", type=_pos, default=funseq.DEFAULT_STEP_CAP)
        else:
            c.add_argument("--cap", type=_nat, required=True)
    c = cmd(pathg, "stepdown", cmd_path_stepdown, "the step-down chain to zero")
    c.add_argument("--ordinal", required=True)
    c.add_argument("--limit", type=_pos, default=1000)
    system_flags(c)

    checkg = group("check", "properties of sequence systems")
    for name, fn in (("bachmann", cmd_check_bachmann), ("schmidt", cmd_check_schmidt)):
        c = cmd(checkg, name, fn, f"{name} property over limits below w^top")
        system_flags(c)
        c.add_argument("--top-exponent", type=_nat, default=2)
        c.add_argument("--max-coefficient", type=_pos, default=3)
        c.add_argument("--n-cap", type=_nat, default=4)
        c.add_argument("--sample", type=_nat, help="random subsample size (uses --seed)")

    fghg = group("fgh", "fast-growing hierarchy")
    c = cmd(fghg, "eval", cmd_fgh_eval, "evaluate F_a(x)")
    system_flags(c)
    c.add_argument("--ordinal", required=True)
    c.add_argument("--x", type=_nat, required=True)
    c = cmd(fghg, "dominate", cmd_fgh_dominate, "compare F^system2_b against F^system1_a")
    for i in ("1", "2"):
        c.add_argument(f"--system{i}", default="st", choices=sorted(funseq.SYSTEMS))
        c.add_argument(f"--table{i}")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--xs", type=_naturals, default=list(range(1, 6)))
    c = cmd(fghg, "coherent", cmd_fgh_coherent, "F_a(x) >= F_b(x) from the path measure on")
    system_flags(c)
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--xs", type=_naturals, default=list(range(0, 8)))

    graphg = group("graph", "colored graphs")
    c = cmd(graphg, "unfold", cmd_graph_unfold, "bounded unfolding")
    c.add_argument("--graph", required=True)
    c.add_argument("--root")
    c.add_argument("--depth", type=_nat, required=True)
    c = cmd(graphg, "treegraph", cmd_graph_treegraph, "bounded treegraph")
    c.add_argument("--graph", required=True)
    c.add_argument("--color", default="e")
    c.add_argument("--depth", type=_pos, required=True)
    c = cmd(graphg, "query", cmd_graph_query, "regular path query in the inverse closure")
    c.add_argument("--graph", required=True)
    c.add_argument("--start")
    c.add_argument("--regex", required=True)
    c = cmd(graphg, "dot", cmd_graph_dot, "emit a graph")
    c.add_argument("--graph", required=True)
    c.add_argument("--inverse", action="store_true", help="emit the inverse closure")

    hopdag = group("hopda", "higher-order pushdown systems")
    for name, fn, help_ in (("run", cmd_hopda_run, "reachable configurations and moves"),
                            ("graph", cmd_hopda_graph, "configuration graph"),
                            ("contract", cmd_hopda_contract, "configuration graph with silent moves contracted")):
        c = cmd(hopdag, name, fn, help_)
        c.add_argument("--system")
        c.add_argument("--example", choices=sorted(hopda.EXAMPLES))
    c = cmd(hopdag, "pump", cmd_hopda_pump, "path-length threshold beth(level-1, (m+1)c)")
    c.add_argument("--level", type=_pos, required=True)
    c.add_argument("--m", type=_nat, required=True)
    c.add_argument("--c", type=_nat, required=True)

    typesg = group("types", "vertex pair types")
    c = cmd(typesg, "pair", cmd_types_pair, "type of a vertex pair")
    c.add_argument("--graph", required=True)
    c.add_argument("--automaton")
    c.add_argument("--regex")
    c.add_argument("--v1", required=True)
    c.add_argument("--v2", required=True)
    c = cmd(typesg, "compose", cmd_types_compose, "compose pair types")
    c.add_argument("--mode", choices=("collinear", "forked"), required=True)
    c.add_argument("--type", action="append", default=[], help="JSON pair type file (repeat)")

    lexg = group("lextree", "lexicographic trees for w^k")
    c = cmd(lexg, "order", cmd_lextree_order, "order language, or compare two vertices")
    c.add_argument("--k", type=_pos, required=True)
    c.add_argument("--v1")
    c.add_argument("--v2")
    for name, fn, help_ in (("cofinal", cmd_lextree_cofinal, "cone-chain cofinal sequence"),
                            ("bachmannize", cmd_lextree_bachmannize, "thinned sequence with the Bachmann property"),
                            ("standard", cmd_lextree_standard, "standard sequence pulled back to the tree")):
        c = cmd(lexg, name, fn, help_)
        c.add_argument("--k", type=_pos, required=True)
        c.add_argument("--vertex", required=True, help="block form such as 'a^2 b^3'")
        c.add_argument("--count", type=_nat, default=5)
        if name == "standard":
            c.add_argument("--cap", help="ordinal cap (default w^k)")
        else:
            c.add_argument("--select", choices=lextree.SELECT_MODES, default="auto")
    return p


CONFIG_KEYS = ("format", "bound_vertices", "bound_path", "budget_steps", "budget_bits", "seed")


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, ValueError) as exc:
            parser.error(f"--config: cannot load {args.config}: {exc}")
        unknown = set(config) - set(CONFIG_KEYS)
        if unknown:
            parser.error(f"--config: unknown keys {sorted(unknown)}")
        if "format" in config and config["format"] not in FORMATS:
            parser.error(f"--config: format must be one of {FORMATS}")
        parser.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out: Output = args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (ValueError, OverflowError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    rendered = {"json": None if out.json is None else json.dumps(out.json, indent=2, ensure_ascii=False),
                "text": out.text, "csv": out.csv, "dot": out.dot}[args.format]
    if rendered is None:
        print(f"usage error: --format {args.format} is not available for '{args.group} {args.command}'",
              file=stderr)
        return 2
    stdout.write(rendered if rendered.endswith("\n") else rendered + "\n")
    return 0


def main() -> None:
    sys.exit(run())
