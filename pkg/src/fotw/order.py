"""Quantifier orders of a straight formula and the derived depth functions.

``leq`` is the scope order (y is quantified inside the scope of x),
``preceq`` the entanglement-driven order computed as a least fixed point,
``ead`` the essential alternation depth and ``ad`` the plain alternation
depth. All relations are sets of ordered pairs of variable names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import EmptyWitnessError, NotPrenexError
from .formula import (
    EXISTS,
    Quant,
    atom_vars,
    atoms,
    free_vars,
    prefix,
    quantifier_paths,
    variables,
    walk,
    is_prenex,
)


@dataclass
class OrderAnalysis:
    variables: frozenset
    free: frozenset
    kind: dict  # bound variable -> "exists" / "forall"
    qpath: dict  # bound variable -> path of its quantifier node
    leq: frozenset
    preceq: frozenset
    entangled: frozenset  # symmetric pairs of distinct bound variables
    region: dict  # variable -> path of phi_x
    ead: dict = field(default_factory=dict)
    ad: dict = field(default_factory=dict)

    @property
    def bound(self) -> frozenset:
        return frozenset(self.kind)

    def scope_of(self, x: str) -> tuple:
        return self.qpath[x] + (0,)

    def above(self, x: str) -> set:
        """{x' : x' preceq x}"""
        return {a for a, b in self.preceq if b == x}


class _Syntax:
    """Per-formula lookup tables shared by the fixed-point rounds."""

    def __init__(self, f):
        self.f = f
        self.atoms = [(p, atom_vars(a)) for p, a in atoms(f)]
        self.qpath = quantifier_paths(f)
        self.kind = {n.var: n.kind for _, n in walk(f) if isinstance(n, Quant)}
        self.variables = variables(f)
        self.free = free_vars(f)
        # variables occurring in atoms below each node
        self.below: dict = {}
        for p, vs in self.atoms:
            for k in range(len(p) + 1):
                self.below.setdefault(p[:k], set()).update(vs)

    def leq(self, x, y) -> bool:
        px, py = self.qpath[x], self.qpath[y]
        return x == y or py[: len(px) + 1] == px + (0,)

    def region(self, xs) -> tuple:
        paths = [p for p, vs in self.atoms if vs & xs]
        if not paths:
            raise EmptyWitnessError(f"no atom uses any of {sorted(xs)}")
        return _common_prefix(paths)

    def occurs(self, x, path) -> bool:
        return x in self.below.get(path, ())


def _common_prefix(paths) -> tuple:
    first = paths[0]
    n = len(first)
    for p in paths[1:]:
        n = min(n, len(p))
        for i in range(n):
            if p[i] != first[i]:
                n = i
                break
    return first[:n]


def subformula_of_varset(f, xs) -> tuple:
    """Path of the least subformula containing every atom that uses a variable of ``xs``.

    With flattened n-ary conjunctions and disjunctions the least subformula is
    the whole flattened node, i.e. the longest common prefix of the atom paths.
    """
    return _Syntax(f).region(frozenset(xs))


def _closure(rel: set, verts) -> set:
    rel = set(rel)
    for k in verts:
        pre = [a for a in verts if (a, k) in rel]
        post = [b for b in verts if (k, b) in rel]
        for a in pre:
            for b in post:
                rel.add((a, b))
    return rel


def _regions(syn: _Syntax, rel) -> dict:
    ups = {v: {v} for v in syn.variables}
    for a, b in rel:
        ups[a].add(b)
    out = {}
    for v, vs in ups.items():
        try:
            out[v] = syn.region(frozenset(vs))
        except EmptyWitnessError:
            out[v] = None
    return out


def _entangled(syn: _Syntax, region, x, y) -> bool:
    rx, ry = region[x], region[y]
    return rx is not None and ry is not None and syn.occurs(x, ry) and syn.occurs(y, rx)


def _entanglement_graph(syn, region, bound) -> dict:
    return {
        z: {w for w in bound if w != z and _entangled(syn, region, z, w)}
        for z in bound
    }


def _alternation(rel, ent, x, y, bound) -> bool:
    """Is there a chain x = z_0 .. z_n = y of entangled bound variables with
    z_i in (x preceq) or (y preceq) for i < n?"""
    allowed = {b for b in bound if (x, b) in rel or (y, b) in rel}
    seen = {x}
    stack = [x]
    while stack:
        z = stack.pop()
        for w in ent[z]:
            if w == y:
                return True
            if w not in seen and w in allowed:
                seen.add(w)
                stack.append(w)
    return False


def compute_preceq(f, pair_order: Optional[Callable[[list], list]] = None) -> OrderAnalysis:
    """Least relation closed under reflexivity, transitivity and alternation.

    ``pair_order`` permutes the candidate pairs; when given, each discovered
    pair is closed in immediately instead of once per round. The fixed point
    does not depend on either choice.
    """
    syn = _Syntax(f)
    verts = sorted(syn.variables)
    bound = sorted(syn.kind)
    leq = frozenset((x, y) for x in bound for y in bound if syn.leq(x, y))
    rel = {(v, v) for v in verts}
    candidates = [
        (x, y)
        for x in bound
        for y in bound
        if x != y and (x, y) in leq and syn.kind[x] != syn.kind[y]
    ]
    eager = pair_order is not None
    while True:
        ent = _entanglement_graph(syn, _regions(syn, rel), bound)
        order = pair_order(list(candidates)) if eager else candidates
        added = set()
        for x, y in order:
            if (x, y) in rel or (x, y) in added:
                continue
            if _alternation(rel, ent, x, y, bound):
                if eager:
                    rel = _closure(rel | {(x, y)}, verts)
                    ent = _entanglement_graph(syn, _regions(syn, rel), bound)
                added.add((x, y))
        if not added:
            break
        rel = _closure(rel | added, verts)

    region = _regions(syn, rel)
    ent = frozenset(
        (x, y)
        for x in bound
        for y in bound
        if x != y and _entangled(syn, region, x, y)
    )
    return OrderAnalysis(
        variables=syn.variables,
        free=syn.free,
        kind=dict(syn.kind),
        qpath=dict(syn.qpath),
        leq=leq,
        preceq=frozenset(rel),
        entangled=ent,
        region=region,
    )


def _depth(bound, kind, qpath, rel, free) -> dict:
    out = {v: 0 for v in free}
    for x in sorted(bound, key=lambda v: len(qpath[v])):
        best = 1 if kind[x] == EXISTS else 2
        for y in bound:
            if y != x and (y, x) in rel:
                best = max(best, out[y] + (kind[y] != kind[x]))
        out[x] = best
    return out


def compute_ead(f, a: Optional[OrderAnalysis] = None) -> dict:
    a = a or compute_preceq(f)
    return _depth(a.bound, a.kind, a.qpath, a.preceq, a.free)


def compute_ad(f, a: Optional[OrderAnalysis] = None) -> dict:
    if a is not None:
        return _depth(a.bound, a.kind, a.qpath, a.leq, a.free)
    syn = _Syntax(f)
    leq = {(x, y) for x in syn.kind for y in syn.kind if syn.leq(x, y)}
    return _depth(syn.kind, syn.kind, syn.qpath, leq, syn.free)


def compute_ad_prime(f) -> dict:
    """Alternation count along the quantifier prefix of a prenex formula, plus one."""
    if not is_prenex(f):
        raise NotPrenexError("ad' is only defined for prenex formulas")
    pre, _ = prefix(f)
    out = {v: 0 for v in free_vars(f)}
    changes = 0
    for i, (kind, var) in enumerate(pre):
        if i and kind != pre[i - 1][0]:
            changes += 1
        out[var] = changes + 1
    return out


def analyze(f) -> OrderAnalysis:
    a = compute_preceq(f)
    a.ead = compute_ead(f, a)
    a.ad = compute_ad(f, a)
    return a
