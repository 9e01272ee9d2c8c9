"""Relational first-order formulas: syntax tree, parser, printer and normal forms.

Terms are plain strings. A term starting with ``@`` is a constant, anything
else is a variable. Nodes are immutable; a subformula is addressed by its
*path*, the tuple of child indices leading to it from the root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import FormulaSyntaxError, VocabularyError
from .graph import Graph

EXISTS = "exists"
FORALL = "forall"

Path = tuple


def is_constant(term: str) -> bool:
    return term.startswith("@")


def dual(kind: str) -> str:
    return FORALL if kind == EXISTS else EXISTS


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class NegAtom:
    rel: str
    args: tuple

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class And:
    children: tuple

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Or:
    children: tuple

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Quant:
    kind: str
    var: str
    body: object

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Not:
    """General negation. Only produced by the parser; removed by ``to_nnf``."""

    body: object

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class MonotoneCombination:
    """A monotone boolean function over deduplicated children.

    ``form == "dnf"``: disjunction over ``clauses`` of the conjunction of the
    indexed children. ``form == "cnf"``: the dual. Used only while compiling
    to the bounded-variable fragment, so that a literal shared by several
    clauses is kept once.
    """

    form: str
    clauses: tuple  # tuple of sorted index tuples
    children: tuple

    def __str__(self):
        return render(self)


Formula = Atom | NegAtom | And | Or | Quant | Not | MonotoneCombination


@dataclass(frozen=True)
class Vocabulary:
    relations: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        for name, arity in self.relations.items():
            if arity < 0:
                raise VocabularyError(f"negative arity for {name}")

    def merge(self, other: "Vocabulary") -> "Vocabulary":
        rels = dict(self.relations)
        for name, arity in other.relations.items():
            if rels.setdefault(name, arity) != arity:
                raise VocabularyError(
                    f"relation {name} used with arities {rels[name]} and {arity}"
                )
        return Vocabulary(rels, self.constants | other.constants)

    def issubset(self, other: "Vocabulary") -> bool:
        return all(
            other.relations.get(r) == a for r, a in self.relations.items()
        ) and self.constants <= other.constants

    def __hash__(self):
        return hash((tuple(sorted(self.relations.items())), self.constants))

    def __len__(self):
        return len(self.relations) + len(self.constants)


# ---------------------------------------------------------------- construction


def conj(*parts) -> Formula:
    """Flattened conjunction; a single part is returned as is."""
    out = []
    for p in parts:
        out.extend(p.children if isinstance(p, And) else (p,))
    if not out:
        raise ValueError("empty conjunction")
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*parts) -> Formula:
    out = []
    for p in parts:
        out.extend(p.children if isinstance(p, Or) else (p,))
    if not out:
        raise ValueError("empty disjunction")
    return out[0] if len(out) == 1 else Or(tuple(out))


def quantify(kind: str, variables: Sequence[str], body) -> Formula:
    for v in reversed(list(variables)):
        body = Quant(kind, v, body)
    return body


def children(f) -> tuple:
    if isinstance(f, (And, Or, MonotoneCombination)):
        return f.children
    if isinstance(f, (Quant, Not)):
        return (f.body,)
    return ()


def with_children(f, kids) -> Formula:
    if isinstance(f, And):
        return conj(*kids)
    if isinstance(f, Or):
        return disj(*kids)
    if isinstance(f, Quant):
        return Quant(f.kind, f.var, kids[0])
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, MonotoneCombination):
        return MonotoneCombination(f.form, f.clauses, tuple(kids))
    return f


# --------------------------------------------------------------- introspection


def walk(f, path: Path = ()) -> Iterator[tuple[Path, Formula]]:
    """Preorder traversal yielding (path, node)."""
    stack = [(path, f)]
    while stack:
        p, node = stack.pop()
        yield p, node
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((p + (i,), kids[i]))


def get(f, path: Path) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def replace(f, path: Path, new) -> Formula:
    """Replace the node at ``path``. Flattening may renumber And/Or children."""
    if not path:
        return new
    kids = list(children(f))
    kids[path[0]] = replace(kids[path[0]], path[1:], new)
    return with_children(f, kids)


def atoms(f) -> Iterator[tuple[Path, Formula]]:
    for p, node in walk(f):
        if isinstance(node, (Atom, NegAtom)):
            yield p, node


def atom_vars(a) -> frozenset:
    return frozenset(t for t in a.args if not is_constant(t))


def free_vars(f) -> frozenset:
    if isinstance(f, (Atom, NegAtom)):
        return atom_vars(f)
    if isinstance(f, Quant):
        return free_vars(f.body) - {f.var}
    out = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def variables(f) -> frozenset:
    """var(f): every variable that occurs in an atom or is quantified."""
    out = set()
    for _, node in walk(f):
        if isinstance(node, (Atom, NegAtom)):
            out |= atom_vars(node)
        elif isinstance(node, Quant):
            out.add(node.var)
    return frozenset(out)


def quantifier_paths(f) -> dict:
    """Map each bound variable of a straight formula to the path of its quantifier."""
    return {n.var: p for p, n in walk(f) if isinstance(n, Quant)}


def bound_vars(f) -> frozenset:
    return frozenset(n.var for _, n in walk(f) if isinstance(n, Quant))


def vocabulary_of(f) -> Vocabulary:
    voc = Vocabulary()
    for _, a in atoms(f):
        consts = frozenset(t[1:] for t in a.args if is_constant(t))
        voc = voc.merge(Vocabulary({a.rel: len(a.args)}, consts))
    return voc


def size(f) -> int:
    return sum(1 for _ in walk(f))


def is_nnf(f) -> bool:
    return not any(isinstance(n, Not) for _, n in walk(f))


def is_straight(f) -> bool:
    seen = set()
    for _, n in walk(f):
        if isinstance(n, Quant):
            if n.var in seen or n.var not in free_vars(n.body):
                return False
            seen.add(n.var)
    return not (seen & free_vars(f))


def is_prenex(f) -> bool:
    while isinstance(f, Quant):
        f = f.body
    return not any(isinstance(n, Quant) for _, n in walk(f))


def prefix(f) -> tuple[list, Formula]:
    """Split a prenex formula into [(kind, var), ...] and its matrix."""
    out = []
    while isinstance(f, Quant):
        out.append((f.kind, f.var))
        f = f.body
    return out, f


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iff><->)
  | (?P<impl>->)
  | (?P<punct>[()&|~.,])
  | (?P<const>@[A-Za-z0-9_][A-Za-z0-9_']*)
  | (?P<rel>[A-Z][A-Za-z0-9_']*)
  | (?P<name>[a-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {EXISTS, FORALL}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                self.fail(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                value = m.group()
                if kind in ("iff", "impl", "punct"):
                    kind = value
                elif kind == "name" and value in _KEYWORDS:
                    kind = value
                if kind in ("name", "rel", "const") and value.lstrip("@").startswith("__"):
                    self.fail(f"reserved identifier {value!r}", pos)
                if kind == "name" and value.startswith("_"):
                    self.fail(f"unexpected identifier {value!r}", pos)
                self.tokens.append((kind, value, pos))
            pos = m.end()
        self.tokens.append(("eof", "", len(text)))
        self.i = 0
        self.arity: dict[str, int] = {}
        self.constants: set[str] = set()

    def fail(self, message, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise FormulaSyntaxError(message, line, col)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            shown = tok[1] or "end of input"
            self.fail(f"expected {kind!r} but found {shown!r}", tok[2])
        self.i += 1
        return tok

    def formula(self):
        if self.peek()[0] in _KEYWORDS:
            return self.quant()
        return self.iff()

    def quant(self):
        kind = self.take()[0]
        names = [self.take("name")[1]]
        while self.peek()[0] == "name":
            names.append(self.take()[1])
        self.take(".")
        return quantify(kind, names, self.formula())

    def iff(self):
        left = self.impl()
        while self.peek()[0] == "<->":
            self.take()
            right = self.impl()
            left = conj(disj(_negate(left), right), disj(_negate(right), left))
        return left

    def impl(self):
        left = self.or_()
        if self.peek()[0] == "->":
            self.take()
            return disj(_negate(left), self.impl())
        return left

    def or_(self):
        parts = [self.and_()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.and_())
        return disj(*parts)

    def and_(self):
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        kind, _, pos = self.peek()
        if kind == "~":
            self.take()
            inner = self.unary()
            return _negate(inner)
        if kind == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if kind in _KEYWORDS:
            return self.quant()
        if kind == "rel":
            return self.atom()
        self.fail(f"unexpected {self.peek()[1] or 'end of input'!r}", pos)

    def atom(self):
        _, rel, pos = self.take("rel")
        self.take("(")
        args = [self.term()]
        while self.peek()[0] == ",":
            self.take()
            args.append(self.term())
        self.take(")")
        if self.arity.setdefault(rel, len(args)) != len(args):
            raise VocabularyError(
                f"relation {rel} used with arities {self.arity[rel]} and {len(args)}"
            )
        return Atom(rel, tuple(args))

    def term(self):
        kind, value, pos = self.peek()
        if kind == "name":
            self.take()
            return value
        if kind == "const":
            self.take()
            self.constants.add(value[1:])
            return value
        self.fail(f"expected a term but found {value or 'end of input'!r}", pos)


def _negate(f):
    return NegAtom(f.rel, f.args) if isinstance(f, Atom) else Not(f)


def parse(text: str) -> tuple[Formula, Vocabulary]:
    """Parse surface syntax; returns the formula and its inferred vocabulary."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}", p.peek()[2])
    return f, Vocabulary(dict(p.arity), frozenset(p.constants))


def parse_formula(text: str) -> Formula:
    return parse(text)[0]


# ------------------------------------------------------------------ printing


def render(f) -> str:
    """Pretty-print so that ``parse(render(f))[0] == f`` for parser-shaped trees."""
    if isinstance(f, (Atom, NegAtom)):
        s = f"{f.rel}({','.join(f.args)})"
        return "~" + s if isinstance(f, NegAtom) else s
    if isinstance(f, Quant):
        return f"{f.kind} {f.var}. {render(f.body)}"
    if isinstance(f, Not):
        inner = render(f.body)
        return "~" + (inner if isinstance(f.body, (NegAtom, Not)) else f"({inner})")
    if isinstance(f, And):
        return " & ".join(_wrap(c, (Or, Quant, MonotoneCombination)) for c in f.children)
    if isinstance(f, Or):
        return " | ".join(_wrap(c, (Quant, MonotoneCombination)) for c in f.children)
    if isinstance(f, MonotoneCombination):
        inner, outer = (" & ", " | ") if f.form == "dnf" else (" | ", " & ")
        parts = []
        for clause in f.clauses:
            lits = [f"[{i}]" for i in clause]
            parts.append("(" + inner.join(lits) + ")")
        args = ", ".join(f"[{i}] {render(c)}" for i, c in enumerate(f.children))
        return f"{f.form.upper()}{{{outer.join(parts)} ; {args}}}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, kinds) -> str:
    s = render(f)
    return f"({s})" if isinstance(f, kinds) else s


# ------------------------------------------------------------- normal forms


def to_nnf(f, negate: bool = False) -> Formula:
    if isinstance(f, Atom):
        return NegAtom(f.rel, f.args) if negate else f
    if isinstance(f, NegAtom):
        return Atom(f.rel, f.args) if negate else f
    if isinstance(f, Not):
        return to_nnf(f.body, not negate)
    if isinstance(f, Quant):
        return Quant(dual(f.kind) if negate else f.kind, f.var, to_nnf(f.body, negate))
    if isinstance(f, (And, Or)):
        kids = [to_nnf(c, negate) for c in f.children]
        flip = isinstance(f, And) == negate
        return disj(*kids) if flip else conj(*kids)
    if isinstance(f, MonotoneCombination):
        if negate:
            return to_nnf(Not(expand_monotone(f)))
        return f
    raise TypeError(f"not a formula: {f!r}")


def expand_monotone(f) -> Formula:
    """Replace every MonotoneCombination by plain And/Or (children duplicated)."""
    if isinstance(f, MonotoneCombination):
        kids = [expand_monotone(c) for c in f.children]
        inner, outer = (conj, disj) if f.form == "dnf" else (disj, conj)
        return outer(*(inner(*(kids[i] for i in clause)) for clause in f.clauses))
    kids = children(f)
    if not kids:
        return f
    return with_children(f, [expand_monotone(c) for c in kids])


def rename_free(f, mapping: Mapping[str, str]) -> Formula:
    """Capture-unaware substitution of variable names (caller guarantees safety)."""
    if isinstance(f, (Atom, NegAtom)):
        return type(f)(f.rel, tuple(mapping.get(t, t) for t in f.args))
    if isinstance(f, Quant):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return Quant(f.kind, f.var, rename_free(f.body, inner))
    kids = children(f)
    return with_children(f, [rename_free(c, mapping) for c in kids]) if kids else f


def straighten(f) -> Formula:
    """Rename re-quantified variables (``x`` -> ``x_2`` ...) and drop vacuous quantifiers."""
    free = free_vars(f)
    taken = set(variables(f)) | set(free)
    claimed = set(free)

    def fresh(v):
        i = 2
        while f"{v}_{i}" in taken:
            i += 1
        name = f"{v}_{i}"
        taken.add(name)
        return name

    def go(node, env):
        if isinstance(node, (Atom, NegAtom)):
            return type(node)(node.rel, tuple(env.get(t, t) for t in node.args))
        if isinstance(node, Quant):
            if node.var not in free_vars(node.body):
                return go(node.body, env)
            name = node.var if node.var not in claimed else fresh(node.var)
            claimed.add(name)
            return Quant(node.kind, name, go(node.body, {**env, node.var: name}))
        kids = children(node)
        return with_children(node, [go(c, env) for c in kids])

    return go(f, {})


def formula_graph(f) -> Graph:
    """Variables as vertices; co-atomic variables and free variables are adjacent."""
    verts = variables(f)
    edges = set()
    for _, a in atoms(f):
        vs = sorted(atom_vars(a))
        edges.update(frozenset((u, w)) for i, u in enumerate(vs) for w in vs[i + 1:])
    fv = sorted(free_vars(f))
    edges.update(frozenset((u, w)) for i, u in enumerate(fv) for w in fv[i + 1:])
    return Graph(verts, frozenset(edges))


def normalize_formula(f) -> Formula:
    """Straight NNF form used by every downstream pipeline."""
    return straighten(to_nnf(f))
