"""Stratified graphs, tree decompositions and elimination orderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..errors import InvalidDecompositionError, OrderingError, guard
from ..graph import Graph, order_key


@dataclass(frozen=True)
class StratifiedGraph:
    graph: Graph
    d: dict

    def __post_init__(self):
        missing = self.graph.vertices - set(self.d)
        if missing:
            raise ValueError(f"depth missing for {sorted(missing, key=order_key)}")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable, d: dict) -> "StratifiedGraph":
        g = Graph.from_edges(vertices, edges)
        return cls(g, {v: d[v] for v in g.vertices})

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    @property
    def d_max(self) -> int:
        return max(self.d.values(), default=0)

    def level(self, i: int) -> frozenset:
        """X_i, the vertices of depth exactly i."""
        return frozenset(v for v in self.vertices if self.d[v] == i)

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=order_key)


@dataclass
class TreeDecomposition:
    """Rooted tree given by a parent map (root maps to None) and bags per node."""

    parent: dict
    bags: dict

    @property
    def root(self):
        roots = [t for t, p in self.parent.items() if p is None]
        return roots[0] if len(roots) == 1 else None

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def nodes(self) -> list:
        return sorted(self.parent)

    def children(self) -> dict:
        out = {t: [] for t in self.parent}
        for t, p in self.parent.items():
            if p is not None:
                out[p].append(t)
        for kids in out.values():
            kids.sort()
        return out

    def depth(self) -> dict:
        kids = self.children()
        out = {}
        stack = [(self.root, 0)]
        while stack:
            t, k = stack.pop()
            out[t] = k
            stack.extend((c, k + 1) for c in kids[t])
        return out

    def first_cover(self) -> dict:
        """t_v: the node closest to the root whose bag contains v."""
        depth = self.depth()
        out = {}
        for t in sorted(self.bags, key=lambda t: (depth.get(t, 0), t)):
            for v in self.bags[t]:
                out.setdefault(v, t)
        return out

    def relabel(self, mapping: dict) -> "TreeDecomposition":
        return TreeDecomposition(
            dict(self.parent),
            {t: frozenset(mapping[v] for v in b) for t, b in self.bags.items()},
        )

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "nodes": [
                {
                    "id": t,
                    "parent": self.parent[t],
                    "bag": sorted(self.bags[t], key=order_key),
                }
                for t in self.nodes()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"width {self.width}"]
        kids = self.children()

        def show(t, indent):
            bag = ", ".join(str(v) for v in sorted(self.bags[t], key=order_key))
            lines.append(f"{'  ' * indent}[{t}] {{{bag}}}")
            for c in kids[t]:
                show(c, indent + 1)

        if self.root is not None:
            show(self.root, 0)
        return "\n".join(lines)

    def to_dot(self) -> str:
        lines = ["graph decomposition {", "  node [shape=box];"]
        for t in self.nodes():
            bag = ", ".join(str(v) for v in sorted(self.bags[t], key=order_key))
            lines.append(f'  n{t} [label="{bag}"];')
        for t in self.nodes():
            if self.parent[t] is not None:
                lines.append(f"  n{self.parent[t]} -- n{t};")
        lines.append("}")
        return "\n".join(lines)

    @classmethod
    def from_dict(cls, data: dict) -> "TreeDecomposition":
        return cls(
            {n["id"]: n["parent"] for n in data["nodes"]},
            {n["id"]: frozenset(n["bag"]) for n in data["nodes"]},
        )


@dataclass
class DecompositionReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_decomposition(sg: StratifiedGraph, td: TreeDecomposition) -> DecompositionReport:
    """Tree shape, vertex cover, edge cover, connectivity and stratification."""
    bad = []
    if set(td.parent) != set(td.bags):
        bad.append("tree: parent map and bags name different nodes")
        return DecompositionReport(False, bad)
    roots = [t for t, p in td.parent.items() if p is None]
    if len(roots) != 1:
        bad.append(f"tree: expected one root, found {len(roots)}")
        return DecompositionReport(False, bad)
    for t, p in td.parent.items():
        if p is not None and p not in td.parent:
            bad.append(f"tree: node {t} has unknown parent {p}")
            return DecompositionReport(False, bad)
    depth = td.depth()
    if len(depth) != len(td.parent):
        bad.append("tree: some nodes are unreachable from the root (cycle)")
        return DecompositionReport(False, bad)

    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in sg.sorted_vertices():
        if v not in covered:
            bad.append(f"TD1: vertex {v} is in no bag")
    for e in sorted(sg.graph.edges, key=lambda e: sorted(e, key=order_key)):
        if not any(e <= b for b in td.bags.values()):
            bad.append(f"TD2: edge {sorted(e, key=order_key)} is in no bag")
    for v in sorted(covered - sg.vertices, key=order_key):
        bad.append(f"bag vertex {v} is not a vertex of the graph")
    for v in sorted(covered, key=order_key):
        holders = {t for t, b in td.bags.items() if v in b}
        # connected iff exactly one holder has its parent outside the holder set
        tops = [t for t in holders if td.parent[t] not in holders]
        if len(tops) != 1:
            bad.append(f"TD3: nodes containing {v} are not connected")
    if bad:
        return DecompositionReport(False, bad)

    first = td.first_cover()
    anc = {}
    for t in td.nodes():
        chain, p = set(), td.parent[t]
        while p is not None:
            chain.add(p)
            p = td.parent[p]
        anc[t] = chain
    for u in sg.sorted_vertices():
        for v in sg.sorted_vertices():
            if first[u] in anc[first[v]] and sg.d[u] > sg.d[v]:
                bad.append(
                    f"stratification: t_{u} is above t_{v} but d({u})={sg.d[u]} > d({v})={sg.d[v]}"
                )
    return DecompositionReport(not bad, bad)


def _check_respects(sg: StratifiedGraph, order) -> None:
    if sorted(order, key=order_key) != sg.sorted_vertices():
        raise OrderingError("ordering is not a permutation of the vertices")
    for a, b in zip(order, order[1:]):
        if sg.d[a] > sg.d[b]:
            raise OrderingError(f"{a} precedes {b} but d({a}) > d({b})")


def eliminate(adj: dict, order) -> list:
    """Eliminate order[-1] first; return the neighbourhood of each v_i in G_i (by index)."""
    adj = {v: set(ns) for v, ns in adj.items()}
    nbrs = [None] * len(order)
    for i in range(len(order) - 1, -1, -1):
        v = order[i]
        ns = adj.pop(v)
        nbrs[i] = frozenset(ns)
        for u in ns:
            adj[u].discard(v)
            adj[u] |= ns - {u}
    return nbrs


def ordering_width(sg: StratifiedGraph, order) -> int:
    _check_respects(sg, order)
    nbrs = eliminate(sg.graph.adjacency(), order)
    return max((len(n) for n in nbrs), default=-1) if order else -1


def build_from_ordering(adj: dict, order) -> TreeDecomposition:
    """Bag {v_i} + N_{G_i}(v_i), attached below the lowest-numbered bag holding N_{G_i}(v_i)."""
    if not order:
        return TreeDecomposition({0: None}, {0: frozenset()})
    nbrs = eliminate(adj, order)
    parent, bags = {0: None}, {0: frozenset({order[0]})}
    for i in range(1, len(order)):
        host = min(t for t, b in bags.items() if nbrs[i] <= b)
        parent[i] = host
        bags[i] = nbrs[i] | {order[i]}
    return TreeDecomposition(parent, bags)


def ordering_to_decomposition(sg: StratifiedGraph, order) -> TreeDecomposition:
    _check_respects(sg, order)
    return build_from_ordering(sg.graph.adjacency(), list(order))


def _prune_leaves(parent: dict, bags: dict) -> None:
    """Delete leaves whose bag is contained in their parent's bag."""
    changed = True
    while changed:
        changed = False
        has_child = {p for p in parent.values() if p is not None}
        for t in sorted(parent):
            p = parent[t]
            if p is not None and t not in has_child and bags[t] <= bags[p]:
                del parent[t], bags[t]
                changed = True
                break


def decomposition_to_ordering(sg: StratifiedGraph, td: TreeDecomposition) -> list:
    """A d-respecting ordering whose width is at most the width of ``td``."""
    report = check_decomposition(sg, td)
    if not report:
        raise InvalidDecompositionError("; ".join(report.violations))
    parent = dict(td.parent)
    bags = {t: set(b) for t, b in td.bags.items()}
    remaining = set(sg.vertices)
    picked = []
    while remaining:
        _prune_leaves(parent, bags)
        has_child = {p for p in parent.values() if p is not None}
        top = max(sg.d[v] for v in remaining)
        choice = None
        for v in sorted(remaining, key=order_key):
            if sg.d[v] != top:
                continue
            holders = [t for t, b in bags.items() if v in b]
            if len(holders) == 1 and holders[0] not in has_child:
                choice = (v, holders[0])
                break
        if choice is None:
            raise AssertionError("no eliminable vertex; decomposition is not stratified")
        v, t = choice
        bags[t].discard(v)
        remaining.discard(v)
        picked.append(v)
    return picked[::-1]


def brute_force_tw(sg: StratifiedGraph) -> int:
    """Minimum width over all d-respecting orderings (exhaustive, |V| <= 10)."""
    n = len(sg.vertices)
    guard(n <= 10, f"brute_force_tw: {n} vertices exceeds the limit of 10")
    if n == 0:
        return -1
    verts = sg.sorted_vertices()
    idx = {v: i for i, v in enumerate(verts)}
    adj0 = [0] * n
    for e in sg.graph.edges:
        u, w = (idx[x] for x in e)
        adj0[u] |= 1 << w
        adj0[w] |= 1 << u
    depth = [sg.d[v] for v in verts]
    best = [n]
    memo: dict = {}

    def search(rem, adj, width):
        # the fill-in graph after removing a set depends only on that set
        if width >= best[0]:
            return
        if rem == 0:
            best[0] = width
            return
        if memo.get(rem, n + 1) <= width:
            return
        memo[rem] = width
        top = max(depth[i] for i in range(n) if rem >> i & 1)
        for i in range(n):
            if not (rem >> i & 1) or depth[i] != top:
                continue
            ns = adj[i] & rem
            new = list(adj)
            j = ns
            while j:
                low = j & -j
                k = low.bit_length() - 1
                new[k] |= ns & ~low
                j ^= low
            search(rem & ~(1 << i), new, max(width, bin(ns).count("1")))

    search((1 << n) - 1, adj0, 0)
    return best[0]


def _vertex_name(word: str):
    return int(word) if word.lstrip("-").isdigit() else word


def parse_stratified_graph(text: str) -> StratifiedGraph:
    """Line format: ``v NAME DEPTH`` declares a vertex, ``e A B`` an edge; ``#`` comments."""
    d: dict = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] == "v" and len(words) == 3 and words[2].lstrip("-").isdigit():
            v = _vertex_name(words[1])
            if v in d:
                raise ValueError(f"line {lineno}: vertex {v} declared twice")
            d[v] = int(words[2])
        elif words[0] == "e" and len(words) == 3:
            edges.append((_vertex_name(words[1]), _vertex_name(words[2])))
        else:
            raise ValueError(f"line {lineno}: expected 'v NAME DEPTH' or 'e A B'")
    for e in edges:
        for v in e:
            if v not in d:
                raise ValueError(f"edge {e} uses undeclared vertex {v}")
    return StratifiedGraph.build(d, [e for e in edges if e[0] != e[1]], d)


def render_stratified_graph(sg: StratifiedGraph) -> str:
    lines = [f"v {v} {sg.d[v]}" for v in sg.sorted_vertices()]
    for e in sorted(sg.graph.edges, key=lambda e: sorted(e, key=order_key)):
        a, b = sorted(e, key=order_key)
        lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"
