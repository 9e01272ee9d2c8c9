"""Query evaluation.

* ``eval_naive``: direct recursive semantics, the reference for everything else.
* ``eval_fokm``: bottom-up relational algebra where every intermediate table
  ranges over the free variables of a subformula (at most n^k rows).
* ``evaluate``: normalise, decompose, compile to FO^k and run ``eval_fokm``.
* ``truth_tables`` / ``formulas_equivalent``: a vectorised oracle that
  evaluates a formula on thousands of small structures at once.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

import numpy as np

from .errors import WidthError
from .formula import (
    And,
    Atom,
    MonotoneCombination,
    NegAtom,
    Not,
    Or,
    Quant,
    EXISTS,
    Vocabulary,
    expand_monotone,
    free_vars,
    is_constant,
    normalize_formula,
    variables,
    vocabulary_of,
)
from .structures import Relation, Structure, random_structure, relation_bits
from .translate import fokm_width

# ----------------------------------------------------------------- naive


def _holds(f, s: Structure, env: dict) -> bool:
    if isinstance(f, (Atom, NegAtom)):
        t = tuple(s.constants[a[1:]] if is_constant(a) else env[a] for a in f.args)
        return (t in s.rel(f.rel)) != isinstance(f, NegAtom)
    if isinstance(f, And):
        return all(_holds(c, s, env) for c in f.children)
    if isinstance(f, Or):
        return any(_holds(c, s, env) for c in f.children)
    if isinstance(f, Not):
        return not _holds(f.body, s, env)
    if isinstance(f, Quant):
        test = any if f.kind == EXISTS else all
        return test(_holds(f.body, s, {**env, f.var: e}) for e in s.universe)
    if isinstance(f, MonotoneCombination):
        vals = [_holds(c, s, env) for c in f.children]
        if f.form == "dnf":
            return any(all(vals[i] for i in cl) for cl in f.clauses)
        return all(any(vals[i] for i in cl) for cl in f.clauses)
    raise TypeError(f"not a formula: {f!r}")


def _compatible(f, s: Structure) -> bool:
    return vocabulary_of(f).issubset(s.vocabulary)


def eval_naive(f, s: Structure) -> Relation:
    """Tarski semantics; schema is the sorted free variables of ``f``."""
    schema = tuple(sorted(free_vars(f)))
    if not _compatible(f, s):
        return Relation(schema, frozenset())
    rows = frozenset(
        t
        for t in itertools.product(s.universe, repeat=len(schema))
        if _holds(f, s, dict(zip(schema, t)))
    )
    return Relation(schema, rows)


# ------------------------------------------------------- relational algebra


class _Table:
    """Set of tuples over a sorted schema."""

    __slots__ = ("schema", "rows")

    def __init__(self, schema, rows):
        self.schema = tuple(schema)
        self.rows = rows

    def project(self, keep) -> "_Table":
        keep = tuple(v for v in self.schema if v in keep)
        pos = [self.schema.index(v) for v in keep]
        return _Table(keep, {tuple(r[i] for i in pos) for r in self.rows})

    def extend(self, schema, universe) -> "_Table":
        """Cylindrify to a larger sorted schema."""
        schema = tuple(schema)
        if schema == self.schema:
            return self
        missing = [v for v in schema if v not in self.schema]
        out = set()
        for r in self.rows:
            known = dict(zip(self.schema, r))
            for extra in itertools.product(universe, repeat=len(missing)):
                known.update(zip(missing, extra))
                out.add(tuple(known[v] for v in schema))
        return _Table(schema, out)

    def join(self, other: "_Table") -> "_Table":
        small, big = (self, other) if len(self.rows) <= len(other.rows) else (other, self)
        schema = tuple(sorted(set(self.schema) | set(other.schema)))
        shared = [v for v in small.schema if v in big.schema]
        index: dict = {}
        bpos = [big.schema.index(v) for v in shared]
        for r in big.rows:
            index.setdefault(tuple(r[i] for i in bpos), []).append(r)
        spos = [small.schema.index(v) for v in shared]
        out = set()
        for r in small.rows:
            for q in index.get(tuple(r[i] for i in spos), ()):
                row = dict(zip(big.schema, q))
                row.update(zip(small.schema, r))
                out.add(tuple(row[v] for v in schema))
        return _Table(schema, out)

    def complement(self, universe) -> "_Table":
        everything = set(itertools.product(universe, repeat=len(self.schema)))
        return _Table(self.schema, everything - self.rows)


def _atom_table(f, s: Structure) -> _Table:
    schema = tuple(sorted({a for a in f.args if not is_constant(a)}))
    out = set()
    for t in s.rel(f.rel):
        env = {}
        ok = True
        for a, e in zip(f.args, t):
            if is_constant(a):
                ok = s.constants[a[1:]] == e
            elif env.setdefault(a, e) != e:
                ok = False
            if not ok:
                break
        if ok:
            out.add(tuple(env[v] for v in schema))
    table = _Table(schema, out)
    return table.complement(s.universe) if isinstance(f, NegAtom) else table


def eval_fokm(f, s: Structure, k: Optional[int] = None) -> Relation:
    """Bottom-up evaluation with one table per subformula (at most n^k rows each)."""
    width = fokm_width(f)
    if k is None:
        k = width
    if width > k:
        raise WidthError(f"formula has a subformula with {width} free variables, more than {k}")
    schema = tuple(sorted(free_vars(f)))
    if not _compatible(f, s):
        return Relation(schema, frozenset())
    n = len(s.universe)
    limit = n**k

    def go(node) -> _Table:
        if isinstance(node, (Atom, NegAtom)):
            out = _atom_table(node, s)
        elif isinstance(node, And):
            parts = sorted((go(c) for c in node.children), key=lambda t: len(t.rows))
            out = parts[0]
            for p in parts[1:]:
                out = out.join(p)
        elif isinstance(node, Or):
            parts = [go(c) for c in node.children]
            sch = tuple(sorted(set().union(*(p.schema for p in parts))))
            rows = set()
            for p in parts:
                rows |= p.extend(sch, s.universe).rows
            out = _Table(sch, rows)
        elif isinstance(node, Quant):
            inner = go(node.body)
            if node.var not in inner.schema:
                out = inner
            elif node.kind == EXISTS:
                out = inner.project(set(inner.schema) - {node.var})
            else:
                rest = set(inner.schema) - {node.var}
                out = inner.complement(s.universe).project(rest).complement(s.universe)
        elif isinstance(node, Not):
            inner = go(node.body)
            out = inner.complement(s.universe)
        elif isinstance(node, MonotoneCombination):
            out = go(expand_monotone(node))
        else:
            raise TypeError(f"not a formula: {node!r}")
        assert len(out.rows) <= limit, "intermediate table exceeds n^k rows"
        return out

    table = go(f)
    return Relation(schema, frozenset(table.extend(schema, s.universe).rows))


def evaluate(f, s: Structure, trace: Optional[dict] = None) -> Relation:
    """Full pipeline: straight NNF, optimal decomposition, FO^k compilation, evaluation."""
    from .decomposition import fotw
    from .translate import rename_to_k_vars, to_fokm

    g = normalize_formula(f)
    schema = tuple(sorted(free_vars(g)))
    if not _compatible(g, s):
        return Relation(schema, frozenset())
    width, td = fotw(g)
    compiled = to_fokm(g, td)
    renamed = rename_to_k_vars(compiled, width + 1)
    if trace is not None:
        trace.update(width=width, decomposition=td, compiled=compiled, renamed=renamed)
    answer = eval_fokm(renamed, s, max(width + 1, 0))
    # translation may drop a free variable the formula does not depend on
    table = _Table(answer.schema, set(answer.tuples)).extend(schema, s.universe)
    return Relation(schema, frozenset(table.rows))


# ------------------------------------------------------- vectorised oracle


class StructureBatch:
    """B structures over one vocabulary and universe {0..n-1}, as boolean arrays."""

    def __init__(self, voc: Vocabulary, n: int, relations: dict, constants: dict):
        self.voc = voc
        self.n = n
        self.relations = relations  # name -> bool array (B, n, ..., n)
        self.constants = constants  # name -> int array (B,)
        sizes = {a.shape[0] for a in relations.values()} | {a.shape[0] for a in constants.values()}
        self.size = sizes.pop() if sizes else 1

    def structure(self, b: int) -> Structure:
        rels = {
            r: frozenset(tuple(int(i) for i in t) for t in np.argwhere(arr[b]))
            for r, arr in self.relations.items()
        }
        consts = {c: int(a[b]) for c, a in self.constants.items()}
        return Structure(self.voc, tuple(range(self.n)), rels, consts)


def _batch_from_codes(voc: Vocabulary, n: int, codes: np.ndarray, const_codes: np.ndarray):
    names = sorted(voc.relations)
    rels, shift = {}, 0
    for r in names:
        cells = n ** voc.relations[r]
        bits = (codes[:, None] >> np.arange(shift, shift + cells, dtype=np.int64)) & 1
        rels[r] = bits.astype(bool).reshape((len(codes),) + (n,) * voc.relations[r])
        shift += cells
    consts = {}
    for j, c in enumerate(sorted(voc.constants)):
        consts[c] = (const_codes // n**j) % n
    return StructureBatch(voc, n, rels, consts)


def structure_batches(voc: Vocabulary, n: int, exhaustive_bits: int = 20, samples: int = 1000,
                      seed: int = 0, chunk: int = 4096):
    """Yield batches covering all structures (if few relation bits) or a random sample."""
    bits = relation_bits(voc, n)
    nc = n ** len(voc.constants)
    if bits <= exhaustive_bits:
        total = (1 << bits) * nc
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            yield _batch_from_codes(voc, n, idx // nc, idx % nc)
    else:
        rng = np.random.default_rng(seed)
        rels = {
            r: rng.random((samples,) + (n,) * a) < 0.5 for r, a in sorted(voc.relations.items())
        }
        consts = {c: rng.integers(0, n, samples) for c in sorted(voc.constants)}
        yield StructureBatch(voc, n, rels, consts)


def truth_tables(f, batch: StructureBatch, schema=None) -> np.ndarray:
    """Boolean array (B, n^len(schema)): the value of ``f`` under every assignment.

    ``schema`` defaults to the sorted free variables; extra schema variables
    simply do not influence the value.
    """
    names = sorted(variables(f) | set(schema or ()))
    axis = {v: i + 1 for i, v in enumerate(names)}
    ndim = len(names) + 1
    n, B = batch.n, batch.size

    def index_for(term):
        shape = [1] * ndim
        if is_constant(term):
            shape[0] = B
            return batch.constants[term[1:]].reshape(shape)
        shape[axis[term]] = n
        return np.arange(n).reshape(shape)

    bidx = np.arange(B).reshape([B] + [1] * (ndim - 1))

    def go(node):
        if isinstance(node, (Atom, NegAtom)):
            arr = batch.relations[node.rel][(bidx,) + tuple(index_for(t) for t in node.args)]
            return ~arr if isinstance(node, NegAtom) else arr
        if isinstance(node, And):
            out = go(node.children[0])
            for c in node.children[1:]:
                out = out & go(c)
            return out
        if isinstance(node, Or):
            out = go(node.children[0])
            for c in node.children[1:]:
                out = out | go(c)
            return out
        if isinstance(node, Not):
            return ~go(node.body)
        if isinstance(node, Quant):
            inner = go(node.body)
            ax = axis[node.var]
            if inner.shape[ax] == 1:
                return inner
            return inner.any(axis=ax, keepdims=True) if node.kind == EXISTS else inner.all(
                axis=ax, keepdims=True
            )
        if isinstance(node, MonotoneCombination):
            return go(expand_monotone(node))
        raise TypeError(f"not a formula: {node!r}")

    out = go(f)
    schema = tuple(sorted(free_vars(f))) if schema is None else tuple(schema)
    full = [B] + [n if (v in schema) else 1 for v in names]
    out = np.broadcast_to(out, full)
    # drop the size-1 axes of bound variables, then order the rest by schema
    keep = [0] + [axis[v] for v in schema]
    drop = tuple(i for i in range(1, ndim) if i not in keep)
    out = out.reshape([s for i, s in enumerate(out.shape) if i not in drop]) if drop else out
    order = [0] + [1 + sorted(schema).index(v) for v in schema]
    out = np.transpose(out, order)
    return out.reshape(B, n ** len(schema))


def formulas_equivalent(f, g, max_domain: int = 3, exhaustive_bits: int = 20,
                        samples: int = 1000, seed: int = 0):
    """Compare two formulas on every small structure (or a random sample when too many).

    Returns (True, None) or (False, counterexample structure).
    """
    voc = vocabulary_of(f).merge(vocabulary_of(g))
    schema = tuple(sorted(free_vars(f) | free_vars(g)))
    for n in range(1, max_domain + 1):
        for batch in structure_batches(voc, n, exhaustive_bits, samples, seed + n):
            a = truth_tables(f, batch, schema)
            b = truth_tables(g, batch, schema)
            diff = np.nonzero((a != b).any(axis=1))[0]
            if len(diff):
                return False, batch.structure(int(diff[0]))
    return True, None


def random_structures(voc: Vocabulary, n: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    return [random_structure(voc, n, rng) for _ in range(count)]
