"""Command line entry point: ``fotw SUBCOMMAND ...``.

Exit codes: 0 success (and TRUE for sentences in ``eval``), 1 FALSE sentence
or failed verification, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .decomposition import (
    check_decomposition,
    formula_stratification,
    fotw,
    parse_stratified_graph,
    stratified_treewidth,
)
from .errors import FotwError
from .evaluation import eval_naive, evaluate
from .formula import normalize_formula, parse, render
from .game import cops_win
from .order import analyze, compute_ad, compute_ad_prime
from .structures import parse_structure
from .translate import fokm_width, rename_to_k_vars, to_fokm
from .xenerp import is_xenerp, to_xenerp

EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FotwError(f"cannot read {path}: {exc.strerror}") from exc


def _formula(path: str):
    f, _ = parse(_read(path))
    return normalize_formula(f)


def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=_jsonable))
    else:
        print(text)


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=str)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _pairs(rel) -> list:
    return sorted([a, b] for a, b in rel if a != b)


# ----------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    f = _formula(args.file)
    a = analyze(f)
    ok, witness = is_xenerp(f, a)
    data = {
        "formula": render(f),
        "free": sorted(a.free),
        "quantifiers": {v: a.kind[v] for v in sorted(a.kind)},
        "preceq": _pairs(a.preceq),
        "entangled": sorted({tuple(sorted(p)) for p in a.entangled if p[0] != p[1]}),
        "ead": dict(sorted(a.ead.items())),
        "ad": dict(sorted(a.ad.items())),
        "xenerp": ok,
        "witness": witness,
    }
    lines = [f"formula   {data['formula']}", f"free      {', '.join(data['free']) or '-'}"]
    lines.append("preceq    " + (", ".join(f"{a_} < {b}" for a_, b in data["preceq"]) or "-"))
    lines.append("entangled " + (", ".join(f"{a_} ~ {b}" for a_, b in data["entangled"]) or "-"))
    lines.append("variable  Q       ead ad")
    for v in sorted(a.ead):
        lines.append(f"{v:<9} {a.kind.get(v, 'free'):<7} {a.ead[v]:<3} {a.ad[v]}")
    lines.append(f"xenerp    {'yes' if ok else f'no (witness {witness})'}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_xenerp(args) -> int:
    f = _formula(args.file)
    trace: list = []
    g = to_xenerp(f, trace)
    if args.show_steps and not args.json:
        for which, x, y in trace:
            print(f"# {which}: {x} past {y}")
    data = {"input": render(f), "output": render(g), "steps": [list(t) for t in trace]}
    _emit(args, data, render(g))
    return 0


def _load_graph_or_formula(path: str, depth: str):
    if path.endswith(".g"):
        return parse_stratified_graph(_read(path)), None
    f = _formula(path)
    if depth == "ead":
        return formula_stratification(f), f
    d = compute_ad(f) if depth == "ad" else compute_ad_prime(f)
    return formula_stratification(f, d), f


def cmd_width(args) -> int:
    sg, f = _load_graph_or_formula(args.file, args.depth)
    if f is not None and args.depth == "ead":
        w, _ = fotw(f)
    else:
        w, _ = stratified_treewidth(sg)
    _emit(args, {"width": w, "depth": args.depth}, str(w))
    return 0


def cmd_decompose(args) -> int:
    sg, f = _load_graph_or_formula(args.file, args.depth)
    if f is not None and args.depth == "ead":
        _, td = fotw(f)
    else:
        _, td = stratified_treewidth(sg)
    report = check_decomposition(sg, td)
    if not report.ok:
        raise FotwError("internal: decomposition failed validation: " + "; ".join(report.violations))
    if args.json:
        print(td.to_json())
    elif args.dot:
        print(td.to_dot())
    else:
        print(td.to_text())
    return 0


def cmd_translate(args) -> int:
    f = _formula(args.file)
    w, td = fotw(f)
    k = args.k if args.k is not None else w + 1
    trace: list = []
    g = to_fokm(f, td, k, trace)
    h = rename_to_k_vars(g, k)
    if args.show_steps and not args.json:
        for step in trace:
            print("# " + json.dumps(step, sort_keys=True, default=_jsonable))
    data = {"fotw": w, "k": k, "fokm_width": fokm_width(g), "output": render(h), "steps": trace}
    _emit(args, data, render(h))
    return 0


def cmd_eval(args) -> int:
    f = _formula(args.file)
    s = parse_structure(_read(args.structure))
    answer = eval_naive(f, s) if args.naive else evaluate(f, s)
    data = {
        "schema": list(answer.schema),
        "tuples": sorted([list(t) for t in answer.tuples], key=str),
    }
    if answer.is_sentence:
        data["value"] = answer.truth
    _emit(args, data, answer.render())
    if answer.is_sentence and not answer.truth:
        return EXIT_FALSE
    return 0


def cmd_game(args) -> int:
    sg, _ = _load_graph_or_formula(args.file, "ead")
    result = cops_win(sg, args.k, args.monotone)
    data = {"win": result.win, "k": args.k, "monotone": args.monotone}
    if args.strategy and result.win:
        data["strategy"] = result.table()
    text = "WIN" if result.win else "LOSE"
    if args.strategy and result.win:
        text += "\n" + "\n".join(result.table())
    _emit(args, data, text)
    return 0


def _run_suites(args, names, kwargs_for) -> int:
    results = [checks.SUITES[n](**kwargs_for(n)) for n in names]
    results.sort(key=lambda r: r.name)
    if args.json:
        print(json.dumps([r.to_dict() for r in results], indent=2, sort_keys=True, default=str))
    else:
        for r in results:
            print(r.summary())
            for msg in r.failures[:5]:
                print(f"    {msg}")
    return 0 if all(r.ok for r in results) else EXIT_FALSE


def cmd_verify(args) -> int:
    names = args.suite or [n for n in checks.SUITES if n not in ("fixtures", "scaling")]
    counted = {"oracle", "depth", "xenerp", "translate", "eval", "game", "ctree"}

    def kwargs_for(name):
        kw = {}
        if name in counted:
            kw["seed"] = args.seed
            if args.count is not None:
                kw["count"] = args.count
        elif name == "families":
            kw["seed"] = args.seed
        return kw

    return _run_suites(args, names, kwargs_for)


def cmd_selftest(args) -> int:
    return _run_suites(args, ["fixtures"], lambda name: {})


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized work")

    p = argparse.ArgumentParser(prog="fotw", description="first-order tree-width toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="quantifier order, ead and ad")
    s.add_argument("file")
    s.set_defaults(run=cmd_analyze)

    s = sub.add_parser("xenerp", parents=[common], help="rewrite into xenerp normal form")
    s.add_argument("file")
    s.add_argument("--show-steps", action="store_true")
    s.set_defaults(run=cmd_xenerp)

    for name, run, text in (
        ("width", cmd_width, "stratified tree-width of a formula (.fo) or graph (.g)"),
        ("decompose", cmd_decompose, "optimal stratified tree decomposition"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.add_argument("--depth", choices=("ead", "ad", "adprime"), default="ead",
                       help="depth function for formula inputs")
        if name == "decompose":
            s.add_argument("--dot", action="store_true", help="Graphviz output")
        s.set_defaults(run=run)

    s = sub.add_parser("translate", parents=[common], help="compile into the k-variable fragment")
    s.add_argument("file")
    s.add_argument("--k", type=int, default=None, help="variable budget (default fotw + 1)")
    s.add_argument("--show-steps", action="store_true")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula on a structure")
    s.add_argument("file")
    s.add_argument("--structure", required=True)
    s.add_argument("--naive", action="store_true", help="use direct recursive semantics")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("game", parents=[common], help="solve the stratified cops-and-robbers game")
    s.add_argument("file", help="graph (.g) or formula (.fo) file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--monotone", action="store_true")
    s.add_argument("--strategy", action="store_true", help="print the winning strategy")
    s.set_defaults(run=cmd_game)

    s = sub.add_parser("verify", parents=[common], help="randomized property suites")
    s.add_argument("--suite", action="append", choices=sorted(checks.SUITES))
    s.add_argument("--count", type=int, default=None, help="instances per suite")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("selftest", parents=[common], help="check the shipped example fixtures")
    s.set_defaults(run=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.run(args)
    except FotwError as exc:
        print(f"fotw: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"fotw: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
