"""Compilation of bounded first-order tree-width formulas into FO^k.

``to_fokm`` eliminates one bound variable per round. The variable x lives in
a single leaf bag B of the decomposition, so the part of its scope that
mentions x is a positive Boolean combination of literals over B. That part is
put into DNF (CNF for a universal x), and each disjunct's x-literals are
replaced by an auxiliary atom over the rest of B:

    Ex psi  ==  E V1 OR_i ( AND_{J-_i} L_j  &  A_i(y) ),   A_i(y) := Ex AND_{J+_i} L_j

Auxiliary definitions are kept in a substitution and expanded once at the
end, when no quantifier is left in the working formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .decomposition import (
    StratifiedGraph,
    TreeDecomposition,
    check_decomposition,
    formula_stratification,
)
from .errors import FotwError, InvalidDecompositionError, WidthError
from .formula import (
    EXISTS,
    And,
    Atom,
    MonotoneCombination,
    NegAtom,
    Or,
    Quant,
    children,
    conj,
    disj,
    expand_monotone,
    formula_graph,
    free_vars,
    get,
    is_nnf,
    is_straight,
    replace,
    variables,
    walk,
    with_children,
)
from .order import compute_ead
from .xenerp import to_xenerp

AUX_PREFIX = "__aux_"


def fokm_width(f) -> int:
    """Maximum number of free variables over all subformulas."""
    best = 0
    stack = [f]
    while stack:
        node = stack.pop()
        best = max(best, len(free_vars(node)))
        stack.extend(children(node))
    return best


@dataclass
class TranslationState:
    formula: object
    parent: dict
    bags: dict
    substitution: dict = field(default_factory=dict)  # aux name -> (args, definition)
    counter: int = 0

    def decomposition(self) -> TreeDecomposition:
        return TreeDecomposition(dict(self.parent), dict(self.bags))

    def kids(self, t) -> list:
        return [c for c, p in self.parent.items() if p == t]


# ------------------------------------------------------------ normal forms


def _absorb(clauses) -> list:
    clauses = sorted(set(clauses), key=lambda c: (len(c), sorted(c)))
    out = []
    for c in clauses:
        if not any(o <= c for o in out):
            out.append(c)
    return out


def _product(a, b) -> list:
    return _absorb(x | y for x, y in itertools.product(a, b))


def _normal_form(node, x: str, dual_kind: bool, literals: list):
    """Clauses (frozensets of literal indices) of the DNF of ``node``.

    With ``dual_kind`` the roles of And and Or swap, giving CNF. Literals are
    atoms mentioning x and maximal subformulas without x, indexed in order of
    first appearance. Inputs of a MonotoneCombination are visited once, so a
    shared input stays a single literal.
    """

    def combine(is_or: bool, parts):
        if is_or != dual_kind:
            return _absorb(c for p in parts for c in p)
        out = parts[0]
        for p in parts[1:]:
            out = _product(out, p)
        return out

    def go(node):
        if x not in free_vars(node) or isinstance(node, (Atom, NegAtom)):
            if node not in literals:
                literals.append(node)
            return [frozenset({literals.index(node)})]
        if isinstance(node, MonotoneCombination):
            parts = [go(c) for c in node.children]
            inner_or = node.form == "cnf"
            grouped = [combine(inner_or, [parts[i] for i in c]) for c in node.clauses]
            return combine(not inner_or, grouped)
        if isinstance(node, (And, Or)):
            return combine(isinstance(node, Or), [go(c) for c in node.children])
        raise AssertionError(f"{x} occurs below an unexpected node {type(node).__name__}")

    return go(node)


def _combine(form: str, clauses, kids):
    """Positive Boolean combination; a MonotoneCombination only when inputs are shared."""
    inner, outer = (conj, disj) if form == "dnf" else (disj, conj)
    uses = [i for c in clauses for i in c]
    if len(uses) == len(set(uses)):
        return outer(*(inner(*(kids[i] for i in c)) for c in clauses))
    return MonotoneCombination(form, tuple(tuple(c) for c in clauses), tuple(kids))


# ------------------------------------------------------------ rewriting


def _push_into_combinations(f):
    """Move a quantifier over a MonotoneCombination into the only input that uses it."""
    changed = True
    while changed:
        changed = False
        for p, node in walk(f):
            if isinstance(node, Quant) and isinstance(node.body, MonotoneCombination):
                mc = node.body
                using = [i for i, c in enumerate(mc.children) if node.var in free_vars(c)]
                if len(using) == 1:
                    kids = list(mc.children)
                    kids[using[0]] = Quant(node.kind, node.var, kids[using[0]])
                    f = replace(f, p, with_children(mc, kids))
                    changed = True
                    break
    return f


def _drop_vacuous(f):
    if isinstance(f, Quant) and f.var not in free_vars(f.body):
        return _drop_vacuous(f.body)
    kids = children(f)
    return with_children(f, [_drop_vacuous(c) for c in kids]) if kids else f


def _rexenerp(f):
    f = _push_into_combinations(_drop_vacuous(f))
    try:
        return to_xenerp(f)
    except AssertionError:
        # a misplaced quantifier sits over a combination with shared inputs
        return f


def _hoistable(scope_body, x: str, kind: str) -> Optional[list]:
    """Quantified variables of the scope that mention x, or None if one has the other kind."""
    out = []
    for _, node in walk(scope_body):
        if isinstance(node, Quant) and x in free_vars(node.body):
            if node.kind != kind:
                return None
            out.append(node.var)
    return out


def _strip(node, drop: set):
    if isinstance(node, Quant) and node.var in drop:
        return _strip(node.body, drop)
    kids = children(node)
    if not kids:
        return node
    return with_children(node, [_strip(c, drop) for c in kids])


def _candidates(state: TranslationState, ead: dict) -> list:
    f = state.formula
    qpaths = {n.var: p for p, n in walk(f) if isinstance(n, Quant)}
    where: dict = {}
    for t, bag in state.bags.items():
        for v in bag:
            where.setdefault(v, []).append(t)
    out = []
    for x, path in qpaths.items():
        nodes = where.get(x, [])
        if len(nodes) == 1 and not state.kids(nodes[0]):
            out.append((-ead.get(x, 0), x, nodes[0], path))
    return sorted(out)


def _eliminate(state: TranslationState, x: str, leaf, path, v1: list, trace) -> None:
    f = state.formula
    q = get(f, path)
    kind = q.kind
    body = _strip(q.body, set(v1))
    literals: list = []
    form = "dnf" if kind == EXISTS else "cnf"
    clauses = _normal_form(body, x, kind != EXISTS, literals)

    ys = tuple(sorted(state.bags[leaf] - {x}))
    kids: list = []
    index: dict = {}

    def slot(node):
        if node not in index:
            index[node] = len(kids)
            kids.append(node)
        return index[node]

    aux_for: dict = {}
    new_clauses = []
    for c in clauses:
        minus = [j for j in sorted(c) if x not in free_vars(literals[j])]
        plus = frozenset(j for j in c if x in free_vars(literals[j]))
        slots = [slot(literals[j]) for j in minus]
        if plus:
            if plus not in aux_for:
                inner = conj if kind == EXISTS else disj
                definition = Quant(kind, x, inner(*(literals[j] for j in sorted(plus))))
                args = tuple(v for v in ys if v in free_vars(definition))
                if not free_vars(definition) <= set(args):
                    raise AssertionError(f"literals of {x} are not covered by its leaf bag")
                name = f"{AUX_PREFIX}{x}_{state.counter}"
                state.counter += 1
                state.substitution[name] = (args, definition)
                aux_for[plus] = Atom(name, args)
            slots.append(slot(aux_for[plus]))
        new_clauses.append(tuple(slots))

    combined = _combine(form, new_clauses, kids)
    hoisted = combined
    for y in reversed(v1):
        hoisted = Quant(kind, y, hoisted)
    state.formula = replace(f, path, hoisted)
    state.bags[leaf] = state.bags[leaf] - {x}
    if trace is not None:
        trace.append(
            {
                "case": 3,
                "var": x,
                "kind": kind,
                "leaf": leaf,
                "V1": list(v1),
                "clauses": len(clauses),
                "aux": sorted(a.rel for a in aux_for.values()),
            }
        )


def _expand(f, substitution: dict):
    if isinstance(f, Atom) and f.rel in substitution:
        args, definition = substitution[f.rel]
        if args != f.args:
            raise AssertionError(f"auxiliary atom {f} used with unexpected arguments")
        return _expand(definition, substitution)
    kids = children(f)
    if not kids:
        return f
    return with_children(f, [_expand(c, substitution) for c in kids])


def _validate_input(f, td: TreeDecomposition, k: int) -> None:
    if not (is_nnf(f) and is_straight(f)):
        raise FotwError("to_fokm expects a straight formula in negation normal form")
    if td.width > k - 1:
        raise WidthError(f"decomposition has width {td.width}, more than k-1 = {k - 1}")
    g = formula_graph(f)
    flat = StratifiedGraph(g, {v: 0 for v in g.vertices})
    report = check_decomposition(flat, td)
    if not report.ok:
        raise InvalidDecompositionError("; ".join(report.violations))


def to_fokm(f, td: TreeDecomposition, k: Optional[int] = None, trace: Optional[list] = None,
            check: bool = False):
    """Equivalent formula in which every subformula has at most k free variables.

    ``td`` must be a tree decomposition of the formula graph of width <= k-1
    (by default k = width + 1). With ``check`` the intermediate decompositions
    are validated against the current working formula after every round;
    violations of ead-stratification are only recorded in ``trace``, since
    eliminating a variable can lower the ead of the variables hoisted with it.
    """
    if k is None:
        k = td.width + 1
    _validate_input(f, td, k)
    state = TranslationState(_rexenerp(f), dict(td.parent), dict(td.bags))

    while True:
        if not any(isinstance(n, Quant) for _, n in walk(state.formula)):
            out = expand_monotone(_expand(state.formula, state.substitution))
            if trace is not None:
                trace.append({"case": 1, "aux": len(state.substitution)})
            return out

        leaf = next(
            (
                t
                for t in sorted(state.parent)
                if state.parent[t] is not None
                and not state.kids(t)
                and state.bags[t] <= state.bags[state.parent[t]]
            ),
            None,
        )
        if leaf is not None:
            del state.parent[leaf], state.bags[leaf]
            if trace is not None:
                trace.append({"case": 2, "leaf": leaf})
            continue

        ead = compute_ead(state.formula)
        top = max((ead[n.var] for _, n in walk(state.formula) if isinstance(n, Quant)))
        chosen = None
        for _, x, node, path in _candidates(state, ead):
            q = get(state.formula, path)
            v1 = _hoistable(q.body, x, q.kind)
            if v1 is not None:
                chosen = (x, node, path, v1)
                break
        if chosen is None:
            raise AssertionError("no bound variable can be eliminated from a leaf bag")
        _eliminate(state, *chosen, trace)
        if trace is not None:
            trace[-1]["fallback"] = ead[chosen[0]] < top
        state.formula = _rexenerp(state.formula)
        # absorption in the normal form may drop variables altogether
        alive = variables(state.formula)
        state.bags = {t: b & alive for t, b in state.bags.items()}
        if check:
            sg = formula_stratification(state.formula)
            report = check_decomposition(sg, state.decomposition())
            layered = [v for v in report.violations if v.startswith("stratification")]
            broken = [v for v in report.violations if v not in layered]
            if trace is not None:
                trace[-1]["stratification"] = layered
            if broken:
                raise AssertionError("; ".join(broken))


def rename_to_k_vars(f, k: Optional[int] = None):
    """Reuse variable names so that at most k distinct names occur.

    Free variables keep their names; each quantifier takes the first name of
    the pool not free in its subformula.
    """
    width = fokm_width(f)
    if k is None:
        k = width
    if width > k:
        raise WidthError(f"a subformula has {width} free variables, more than {k}")
    free = sorted(free_vars(f))
    pool = list(free)
    for _, node in walk(f):
        if isinstance(node, Quant) and node.var not in pool:
            pool.append(node.var)
    pool = pool[: max(k, len(free))]

    def go(node, env):
        if isinstance(node, (Atom, NegAtom)):
            return type(node)(node.rel, tuple(env.get(t, t) for t in node.args))
        if isinstance(node, Quant):
            used = {env.get(v, v) for v in free_vars(node)}
            name = next(n for n in pool if n not in used)
            return Quant(node.kind, name, go(node.body, {**env, node.var: name}))
        kids = children(node)
        return with_children(node, [go(c, env) for c in kids]) if kids else node

    return go(f, {})


def decomposition_from_fokm(f) -> TreeDecomposition:
    """Syntax tree of ``f`` with each node's bag holding its subformula's free variables."""
    parent: dict = {}
    bags: dict = {}
    ids: dict = {}
    for path, node in walk(f):
        t = len(ids)
        ids[path] = t
        parent[t] = ids[path[:-1]] if path else None
        bags[t] = free_vars(node)
    return TreeDecomposition(parent, bags)


def count_variables(f) -> int:
    return len(variables(f))


__all__ = [
    "AUX_PREFIX",
    "TranslationState",
    "count_variables",
    "decomposition_from_fokm",
    "fokm_width",
    "rename_to_k_vars",
    "to_fokm",
]
