"""Xenerp normal form: every quantifier sits directly above the region it governs.

Three equivalence-preserving rewrites are available, each addressed by the
path of a quantifier node:

* ``PUSH``  pushes ``Q x`` into the only operand of a conjunction/disjunction
  that mentions ``x`` (the inverse of the prenexing step ``PULL``);
* ``SWAP_SAME`` swaps two adjacent quantifiers of the same kind;
* ``SWAP_SCOPE`` swaps ``Q x Q' y`` when the region of ``x`` is strictly
  inside the region of ``y`` and ``Q' y ...`` is already xenerp.

``PULL`` takes the path of an And/Or node and pulls its leftmost quantified
child to the front.
"""

from __future__ import annotations

from typing import Optional

from .errors import ReplacementError
from .formula import (
    And,
    Or,
    Quant,
    children,
    conj,
    disj,
    free_vars,
    get,
    replace,
    walk,
)
from .order import OrderAnalysis, compute_preceq

PUSH = "push-into-combination-backward"
SWAP_SAME = "swap-same-quantifier"
SWAP_SCOPE = "swap-xenerp-scope"
PULL = "pull-out-of-combination"

KINDS = (PUSH, SWAP_SAME, SWAP_SCOPE, PULL)


def preceding_quantifiers(f, path) -> list:
    """Variables of the maximal quantifier chain directly above ``path``."""
    out = []
    while path:
        parent = path[:-1]
        node = get(f, parent)
        if not isinstance(node, Quant):
            break
        out.append(node.var)
        path = parent
    return out


def _misplaced(f, a: OrderAnalysis, within=()) -> list:
    """Bound variables quantified below ``within`` that violate the xenerp condition,
    in preorder of their quantifiers."""
    bad = []
    for p, node in walk(get(f, within), within):
        if isinstance(node, Quant):
            if node.var not in preceding_quantifiers(f, a.region[node.var]):
                bad.append(node.var)
    return bad


def is_xenerp(f, a: Optional[OrderAnalysis] = None, within=()) -> tuple[bool, Optional[str]]:
    """(True, None), or (False, first violating variable in quantifier preorder).

    ``within`` restricts the test to quantifiers inside that subformula while
    regions are still taken with respect to the whole formula.
    """
    a = a or compute_preceq(f)
    bad = _misplaced(f, a, within)
    return (not bad, bad[0] if bad else None)


def _push_site(node) -> bool:
    if not isinstance(node, Quant) or not isinstance(node.body, (And, Or)):
        return False
    return sum(node.var in free_vars(c) for c in node.body.children) == 1


def apply_replacement(f, which: str, site, a: Optional[OrderAnalysis] = None):
    node = get(f, site)
    if which == PUSH:
        if not isinstance(node, Quant) or not isinstance(node.body, (And, Or)):
            raise ReplacementError("push needs a quantifier over a conjunction or disjunction")
        kids = list(node.body.children)
        inside = [i for i, c in enumerate(kids) if node.var in free_vars(c)]
        if len(inside) != 1:
            # grouping several operands would change the regions, hence ead
            raise ReplacementError(f"{node.var} must occur in exactly one operand")
        kids[inside[0]] = Quant(node.kind, node.var, kids[inside[0]])
        comb = conj if isinstance(node.body, And) else disj
        return replace(f, site, comb(*kids))
    if which in (SWAP_SAME, SWAP_SCOPE):
        if not isinstance(node, Quant) or not isinstance(node.body, Quant):
            raise ReplacementError("swap needs two adjacent quantifiers")
        inner = node.body
        if which == SWAP_SAME and node.kind != inner.kind:
            raise ReplacementError(f"{node.var} and {inner.var} use different quantifiers")
        if which == SWAP_SCOPE:
            a = a or compute_preceq(f)
            rx, ry = a.region[node.var], a.region[inner.var]
            if not (len(rx) > len(ry) and rx[: len(ry)] == ry):
                raise ReplacementError(
                    f"region of {node.var} is not strictly inside the region of {inner.var}"
                )
            ok, _ = is_xenerp(f, a, site + (0,))
            if not ok:
                raise ReplacementError(f"the scope of {node.var} is not xenerp")
        swapped = Quant(inner.kind, inner.var, Quant(node.kind, node.var, inner.body))
        return replace(f, site, swapped)
    if which == PULL:
        if not isinstance(node, (And, Or)):
            raise ReplacementError("pull needs a conjunction or disjunction")
        kids = list(node.children)
        for i, c in enumerate(kids):
            if isinstance(c, Quant):
                others = set().union(*(free_vars(k) for j, k in enumerate(kids) if j != i))
                if c.var in others:
                    raise ReplacementError(f"{c.var} occurs in a sibling operand")
                kids[i] = c.body
                comb = conj if isinstance(node, And) else disj
                return replace(f, site, Quant(c.kind, c.var, comb(*kids)))
        raise ReplacementError("no quantified operand to pull out")
    raise ReplacementError(f"unknown replacement {which!r}")


def _push_all(f):
    """Apply PUSH exhaustively, innermost site first, leftmost among equals."""
    while True:
        sites = [p for p, n in walk(f) if _push_site(n)]
        if not sites:
            return f
        site = max(sites, key=lambda p: (len(p), [-i for i in p]))
        f = apply_replacement(f, PUSH, site)


def to_xenerp(f, trace: Optional[list] = None):
    """Equivalent xenerp formula with the same formula graph and ead."""
    while True:
        f = _push_all(f)
        a = compute_preceq(f)
        bad = _misplaced(f, a)
        if not bad:
            return f
        strict = {(x, y) for x, y in a.leq if x != y}
        maximal = [x for x in bad if not any((x, y) in strict for y in bad)]
        x = min(maximal)
        site = a.qpath[x]
        inner = get(f, site).body
        if not isinstance(inner, Quant):
            raise AssertionError(f"misplaced {x} is not followed by a quantifier")
        which = SWAP_SAME if inner.kind == a.kind[x] else SWAP_SCOPE
        f = apply_replacement(f, which, site, a)
        if trace is not None:
            trace.append((which, x, inner.var))


def to_prenex(f):
    """Prenex form by pulling quantifiers out of conjunctions/disjunctions, top-down."""
    while True:
        for p, node in walk(f):
            if isinstance(node, (And, Or)) and any(isinstance(c, Quant) for c in children(node)):
                f = apply_replacement(f, PULL, p)
                break
        else:
            return f
