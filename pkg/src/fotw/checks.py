"""Property suites over fixtures and random instances.

Each suite returns a ``SuiteResult``; the CLI ``verify``/``selftest``
commands and the acceptance tests share them.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from .decomposition import (
    StratifiedGraph,
    brute_force_tw,
    check_decomposition,
    component_tree,
    decomposition_to_ordering,
    formula_stratification,
    fotw,
    normalize,
    ordering_to_decomposition,
    ordering_width,
    reference_component_tree,
    stratified_treewidth,
    treewidth_decomposition,
)
from .evaluation import eval_naive, evaluate, formulas_equivalent
from .families import qcf, reordering_phi, star
from .formula import (
    formula_graph,
    is_prenex,
    normalize_formula,
    parse,
    size,
    variables,
    vocabulary_of,
)
from .game import verify_games_theorem
from .generate import random_cq, random_formula, random_prenex, random_stratified_graph
from .order import analyze, compute_ad, compute_ad_prime, compute_ead
from .structures import random_structure
from .translate import fokm_width, rename_to_k_vars, to_fokm
from .xenerp import is_xenerp, to_prenex, to_xenerp


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures, {self.seconds:.2f}s"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "cases": self.cases,
            "failures": self.failures[:20],
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }


def _timed(name: str):
    def wrap(fn: Callable) -> Callable:
        def run(*args, **kwargs) -> SuiteResult:
            result = SuiteResult(name)
            start = time.perf_counter()
            fn(result, *args, **kwargs)
            result.seconds = time.perf_counter() - start
            return result

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


# ------------------------------------------------------------------ fixtures


def fixture_names() -> list:
    root = resources.files("fotw") / "fixtures"
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".fo"))


def fixture_path(name: str):
    return resources.files("fotw") / "fixtures" / name


def load_fixture(name: str):
    """(formula, expected values) for a shipped ``.fo`` fixture."""
    text = fixture_path(f"{name}.fo").read_text()
    f, _ = parse(text)
    side = fixture_path(f"{name}.json")
    expected = json.loads(side.read_text()) if side.is_file() else {}
    return f, expected


def _pairs(rel) -> list:
    return sorted([a, b] for a, b in rel if a != b)


@_timed("fixtures")
def selftest(result: SuiteResult) -> None:
    """Every fixture against its sidecar of expected values."""
    for name in fixture_names():
        f, exp = load_fixture(name)
        f = normalize_formula(f)
        result.cases += 1
        a = analyze(f)
        checks = {
            "ead": lambda: {v: a.ead[v] for v in exp["ead"]},
            "ad": lambda: {v: a.ad[v] for v in exp["ad"]},
            "preceq": lambda: _pairs(a.preceq),
            "fotw": lambda: fotw(f)[0],
            "tw": lambda: treewidth_decomposition(*_graph_parts(f))[0],
            "tw_adprime": lambda: stratified_treewidth(
                formula_stratification(f, compute_ad_prime(f))
            )[0],
            "xenerp": lambda: is_xenerp(f, a)[0],
            "witness": lambda: is_xenerp(f, a)[1],
        }
        for key, compute in checks.items():
            if key in exp:
                got = compute()
                want = sorted(exp[key]) if key == "preceq" else exp[key]
                if got != want:
                    result.fail(f"{name}: {key} = {got}, expected {exp[key]}")


def _graph_parts(f):
    g = formula_graph(f)
    return g.vertices, g.edges


# ------------------------------------------------------------ width families


@_timed("width families")
def width_families(result: SuiteResult, ns=range(1, 9), cqs: int = 50, seed: int = 0) -> None:
    for n in ns:
        f = normalize_formula(star(n))
        w, _ = fotw(f)
        tw, _ = treewidth_decomposition(*_graph_parts(f))
        result.cases += 1
        if (w, tw) != (n, 1):
            result.fail(f"star {n}: fotw {w}, tw {tw}")
        f = normalize_formula(reordering_phi(n))
        w, _ = fotw(f)
        ew, _ = stratified_treewidth(formula_stratification(f, compute_ad_prime(f)))
        result.cases += 1
        if (w, ew) != (1, n):
            result.fail(f"reordering {n}: fotw {w}, width under ad' {ew}")
    rng = random.Random(seed)
    for _ in range(cqs):
        f = random_cq(rng, max_vars=8, free=rng.choice((0, 0, 1, 2)))
        w, _ = fotw(f)
        tw, _ = treewidth_decomposition(*_graph_parts(f))
        result.cases += 1
        if w != tw:
            result.fail(f"cq {f}: fotw {w}, tw {tw}")


# ------------------------------------------------------------ tw = ew oracle


@_timed("stratified tree-width oracle")
def tw_oracle(result: SuiteResult, count: int = 100, seed: int = 0, max_vertices: int = 8) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        sg = random_stratified_graph(rng, max_vertices=max_vertices)
        result.cases += 1
        w, td = stratified_treewidth(sg)
        brute = brute_force_tw(sg)
        if w != brute:
            result.fail(f"{_show(sg)}: exact {w}, brute force {brute}")
            continue
        report = check_decomposition(sg, td)
        if not report.ok:
            result.fail(f"{_show(sg)}: invalid decomposition {report.violations}")
            continue
        order = decomposition_to_ordering(sg, td)
        if ordering_width(sg, order) != w:
            result.fail(f"{_show(sg)}: ordering from decomposition has width "
                        f"{ordering_width(sg, order)} != {w}")
        back = ordering_to_decomposition(sg, order)
        if back.width != w or not check_decomposition(sg, back).ok:
            result.fail(f"{_show(sg)}: decomposition from ordering has width {back.width} != {w}")


def _show(sg: StratifiedGraph) -> str:
    edges = sorted(tuple(sorted(e)) for e in sg.graph.edges)
    return f"V={sorted(sg.vertices)} E={edges} d={dict(sorted(sg.d.items()))}"


# ------------------------------------------------------------ depth bounds


@_timed("depth bounds")
def depth_bounds(result: SuiteResult, count: int = 200, seed: int = 0, max_vars: int = 7) -> None:
    rng = random.Random(seed)
    for i in range(count):
        if i % 2:
            f = random_prenex(rng, max_vars=max_vars)
        else:
            f = random_formula(rng, max_vars=rng.randint(2, max_vars), free=rng.choice((0, 0, 1)))
        result.cases += 1
        w, _ = fotw(f)
        w_ad, _ = stratified_treewidth(formula_stratification(f, compute_ad(f)))
        if w > w_ad:
            result.fail(f"{f}: fotw {w} > tw(G, ad) {w_ad}")
        prenex = f if is_prenex(f) else to_prenex(f)
        w_p, _ = fotw(prenex)
        ew, _ = stratified_treewidth(formula_stratification(prenex, compute_ad_prime(prenex)))
        if w_p > ew:
            result.fail(f"{prenex}: fotw {w_p} > ew(G, ad') {ew}")
        if w_p != w:
            result.fail(f"{f}: fotw changes from {w} to {w_p} under prenexing")


# ------------------------------------------------------------ xenerp


@_timed("xenerp")
def xenerp_suite(result: SuiteResult, count: int = 200, seed: int = 0, max_vars: int = 5) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        f = random_formula(rng, max_vars=rng.randint(2, max_vars), free=rng.choice((0, 0, 1)))
        result.cases += 1
        g = to_xenerp(f)
        ok, witness = is_xenerp(g)
        if not ok:
            result.fail(f"{f}: output not xenerp at {witness}")
        if formula_graph(g) != formula_graph(f):
            result.fail(f"{f}: formula graph changed")
        if compute_ead(g) != compute_ead(f):
            result.fail(f"{f}: ead changed {compute_ead(f)} -> {compute_ead(g)}")
        same, witness = formulas_equivalent(f, g)
        if not same:
            result.fail(f"{f}: not equivalent to {g}")


# ------------------------------------------------------------ translation


def _translation_case(result: SuiteResult, label: str, f) -> None:
    result.cases += 1
    w, td = fotw(f)
    g = to_fokm(f, td)
    h = rename_to_k_vars(g, w + 1)
    if fokm_width(g) > w + 1:
        result.fail(f"{label}: fokm width {fokm_width(g)} > {w + 1}")
    if len(variables(h)) > w + 1:
        result.fail(f"{label}: {len(variables(h))} variable names > {w + 1}")
    same, _ = formulas_equivalent(f, h)
    if not same:
        result.fail(f"{label}: translation not equivalent")


@_timed("translation")
def translation_suite(result: SuiteResult, count: int = 200, seed: int = 0, max_vars: int = 6,
                      fixtures: bool = True) -> None:
    if fixtures:
        for name in fixture_names():
            f, _ = load_fixture(name)
            _translation_case(result, name, normalize_formula(f))
    rng = random.Random(seed)
    for _ in range(count):
        f = random_formula(rng, max_vars=rng.randint(2, max_vars), free=rng.choice((0, 0, 1, 2)))
        _translation_case(result, str(f), f)


# ------------------------------------------------------------ scaling


@_timed("disjunction-free scaling")
def qcf_scaling(result: SuiteResult, ns=range(2, 21), repeats: int = 3, fit_until: int = 10) -> None:
    """Output size bounded by c n^2 with c fitted on small n; time grows polynomially."""
    sizes, times = {}, {}
    for n in ns:
        f = normalize_formula(qcf(n))
        best = math.inf
        for _ in range(repeats):
            start = time.perf_counter()
            w, td = fotw(f)
            out = rename_to_k_vars(to_fokm(f, td), w + 1)
            best = min(best, time.perf_counter() - start)
        sizes[n], times[n] = size(out), best
        result.cases += 1
    c = max(sizes[n] / n**2 for n in ns if n <= fit_until)
    for n in ns:
        if sizes[n] > c * n**2:
            result.fail(f"n={n}: size {sizes[n]} > {c:.2f} n^2")
    big = [n for n in ns if n >= 5]
    slope = float(np.polyfit(np.log(big), np.log([times[n] for n in big]), 1)[0])
    if slope >= 4:
        result.fail(f"time log-log slope {slope:.2f} >= 4")
    result.details.update(c=round(c, 3), slope=round(slope, 3), sizes=sizes)


# ------------------------------------------------------------ evaluation


@_timed("evaluation")
def evaluation_suite(result: SuiteResult, count: int = 500, seed: int = 0, max_domain: int = 4) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        f = random_formula(rng, max_vars=rng.randint(2, 5), free=rng.choice((0, 1, 2)))
        s = random_structure(vocabulary_of(f), rng.randint(1, max_domain), rng)
        result.cases += 1
        got, want = evaluate(f, s), eval_naive(f, s)
        if got != want:
            result.fail(f"{f}: pipeline {sorted(got.tuples)} != naive {sorted(want.tuples)}")


# ------------------------------------------------------------ games


@_timed("games")
def games_suite(result: SuiteResult, count: int = 100, seed: int = 0, max_vertices: int = 7) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        sg = random_stratified_graph(rng, max_vertices=max_vertices)
        result.cases += 1
        report = verify_games_theorem(sg)
        if not report.ok:
            result.fail(f"{_show(sg)}: cw {report.cw}, moncw {report.moncw}, tw {report.tw}")


# ------------------------------------------------------------ component tree


@_timed("component tree")
def component_tree_suite(result: SuiteResult, count: int = 100, seed: int = 0,
                         max_vertices: int = 8) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        sg, _ = normalize(random_stratified_graph(rng, max_vertices=max_vertices))
        result.cases += 1
        fast = component_tree(sg)
        slow = reference_component_tree(sg)
        if fast.canonical() != slow.canonical():
            result.fail(f"{_show(sg)}: trees differ")
        elif sorted(fast.dropped) != sorted(slow.dropped):
            result.fail(f"{_show(sg)}: dropped nodes differ {fast.dropped} vs {slow.dropped}")
        else:
            for t, node in fast.nodes.items():
                other = _match(slow, node)
                if other is None or node.simple_edges() != other.simple_edges():
                    result.fail(f"{_show(sg)}: stored graph of node with D={sorted(node.D)} differs")
                    break


def _match(tree, node):
    for other in tree.nodes.values():
        if (other.level, other.D, other.D1) == (node.level, node.D, node.D1):
            return other
    return None


SUITES = {
    "fixtures": selftest,
    "families": width_families,
    "oracle": tw_oracle,
    "depth": depth_bounds,
    "xenerp": xenerp_suite,
    "translate": translation_suite,
    "scaling": qcf_scaling,
    "eval": evaluation_suite,
    "game": games_suite,
    "ctree": component_tree_suite,
}
