"""Random instances for property runs: formulas, conjunctive queries, stratified graphs."""

from __future__ import annotations

import random
from typing import Optional

from .decomposition import StratifiedGraph
from .formula import (
    EXISTS,
    FORALL,
    Atom,
    NegAtom,
    Quant,
    conj,
    disj,
    normalize_formula,
    quantify,
)
from .graph import Graph

DEFAULT_RELATIONS = {"E": 2, "P": 1, "Q": 1}


def random_formula(
    rng: random.Random,
    max_vars: int = 5,
    free: int = 0,
    relations: Optional[dict] = None,
    max_depth: int = 6,
    negation: float = 0.3,
):
    """Random straight NNF formula over at most ``max_vars`` variables.

    The first ``free`` variables stay free (at least one variable is always
    left for quantification); the others are quantified once each.
    """
    relations = relations or DEFAULT_RELATIONS
    free = min(free, max_vars - 1)
    names = [f"v{i}" for i in range(max_vars)]
    free_names = names[:free]
    fresh = iter(names[free:])

    def literal(scope):
        rel = rng.choice(sorted(relations))
        # bias towards the most recently quantified variables
        weights = [i + 1 for i in range(len(scope))]
        args = tuple(rng.choices(scope, weights=weights, k=relations[rel]))
        return NegAtom(rel, args) if rng.random() < negation else Atom(rel, args)

    def node(scope, depth):
        roll = rng.random()
        if not scope or (depth > 0 and roll < 0.45):
            v = next(fresh, None)
            if v is not None:
                kind = rng.choice((EXISTS, FORALL))
                return Quant(kind, v, node(scope + [v], max(depth - 1, 0)))
        if depth > 0 and roll < 0.8:
            comb = conj if rng.random() < 0.5 else disj
            return comb(*(node(scope, depth - 1) for _ in range(rng.choice((2, 2, 3)))))
        return literal(scope)

    return normalize_formula(node(list(free_names), max_depth))


def random_prenex(rng: random.Random, max_vars: int = 5, relations: Optional[dict] = None):
    """Random prenex sentence: a quantifier prefix over a random matrix."""
    relations = relations or DEFAULT_RELATIONS
    n = rng.randint(1, max_vars)
    names = [f"v{i}" for i in range(n)]

    def matrix(depth):
        if depth == 0 or rng.random() < 0.3:
            rel = rng.choice(sorted(relations))
            args = tuple(rng.choices(names, k=relations[rel]))
            return NegAtom(rel, args) if rng.random() < 0.3 else Atom(rel, args)
        comb = conj if rng.random() < 0.5 else disj
        return comb(*(matrix(depth - 1) for _ in range(rng.choice((2, 3)))))

    body = matrix(4)
    for v in reversed(names):
        body = Quant(rng.choice((EXISTS, FORALL)), v, body)
    return normalize_formula(body)


def random_cq(rng: random.Random, max_vars: int = 8, free: int = 0, atoms: Optional[int] = None):
    """Random conjunctive query over a binary relation E (connected or not)."""
    n = rng.randint(max(2, free), max_vars)
    names = [f"v{i}" for i in range(n)]
    m = atoms if atoms is not None else rng.randint(n - 1, 2 * n)
    body = [Atom("E", (names[i], names[rng.randrange(i)])) for i in range(1, n)]
    for _ in range(max(0, m - len(body))):
        a, b = rng.sample(names, 2)
        body.append(Atom("E", (a, b)))
    return normalize_formula(quantify(EXISTS, names[free:], conj(*body)))


def random_stratified_graph(
    rng: random.Random, max_vertices: int = 8, density: Optional[float] = None,
    max_depth: int = 3, min_vertices: int = 1,
) -> StratifiedGraph:
    n = rng.randint(min_vertices, max_vertices)
    p = density if density is not None else rng.uniform(0.15, 0.7)
    verts = list(range(1, n + 1))
    edges = [(u, w) for u in verts for w in verts if u < w and rng.random() < p]
    d = {v: rng.randint(0, max_depth) for v in verts}
    return StratifiedGraph(Graph.from_edges(verts, edges), d)
