"""Component trees of a stratified graph.

Two constructions are provided. ``reference_component_tree`` follows the
layer-by-layer definition and materialises every C_t; it is the oracle.
``component_tree`` is the bottom-up algorithm over the graphs G^(i), which
never builds C_t and produces the modified tree directly (nodes at level
> 0 with empty D1 are skipped, their single child moves up).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from ..errors import NotNormalizedError
from ..graph import Graph, connected_components, order_key
from .core import StratifiedGraph


@dataclass
class CTNode:
    id: int
    level: int
    D: frozenset
    D1: frozenset
    D2: frozenset
    parent: Optional[int] = None
    children: list = field(default_factory=list)
    C: Optional[frozenset] = None  # only filled by the reference construction
    graph: Optional[dict] = None  # G^(level-1)[D] as vertex -> Counter(neighbour)

    def simple_edges(self) -> frozenset:
        if self.graph is None:
            return frozenset()
        return frozenset(
            frozenset((u, w)) for u, ns in self.graph.items() for w in ns if u != w
        )


@dataclass
class ComponentTree:
    nodes: dict  # id -> CTNode
    root: int
    dropped: list = field(default_factory=list)  # (level, D2) of skipped nodes

    def canonical(self):
        """Order-independent nested description used to compare two trees."""

        def go(t):
            n = self.nodes[t]
            kids = sorted((go(c) for c in n.children), key=repr)
            return (n.level, _sorted(n.D), _sorted(n.D1), _sorted(n.D2), tuple(kids))

        return go(self.root)

    def preorder(self) -> list:
        out, stack = [], [self.root]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.nodes[t].children))
        return out

    def __len__(self):
        return len(self.nodes)


def _sorted(s) -> tuple:
    return tuple(sorted(s, key=order_key))


def is_normalized(sg: StratifiedGraph) -> bool:
    n = len(sg.vertices)
    return sg.vertices == frozenset(range(1, n + 1)) and all(0 <= d <= n for d in sg.d.values())


def normalize(sg: StratifiedGraph) -> tuple[StratifiedGraph, dict]:
    """Vertices renamed to 1..n in sorted order; depths rank-compressed from 0.

    Returns the normalized graph and the map from new names back to old ones.
    """
    verts = sg.sorted_vertices()
    to_new = {v: i + 1 for i, v in enumerate(verts)}
    ranks = {d: r for r, d in enumerate(sorted(set(sg.d.values())))}
    g = Graph(
        frozenset(to_new.values()),
        frozenset(frozenset(to_new[v] for v in e) for e in sg.graph.edges),
    )
    d = {to_new[v]: ranks[sg.d[v]] for v in verts}
    return StratifiedGraph(g, d), {i: v for v, i in to_new.items()}


def level_graph(sg: StratifiedGraph, i: int) -> Graph:
    """G^(i): x ~ y iff some path joins them through vertices deeper than i, d(x), d(y)."""
    adj = sg.graph.adjacency()
    verts = sg.sorted_vertices()
    edges = frozenset(
        frozenset((x, y))
        for a, x in enumerate(verts)
        for y in verts[a + 1 :]
        if _joined(adj, sg.d, x, y, max(i, sg.d[x], sg.d[y]))
    )
    return Graph(sg.vertices, edges)


def _joined(adj, d, x, y, bound) -> bool:
    if y in adj[x]:
        return True
    seen = {x}
    stack = [x]
    while stack:
        z = stack.pop()
        for w in adj[z]:
            if w == y and z != x:
                return True
            if w not in seen and d[w] > bound:
                seen.add(w)
                stack.append(w)
    return False


def reference_component_tree(sg: StratifiedGraph, modified: bool = True) -> ComponentTree:
    """Component tree built straight from the definition (materialises C_t)."""
    adj = sg.graph.adjacency()
    nodes: dict = {}

    def up_to(i):
        return {v for v in sg.vertices if sg.d[v] <= i}

    def make(C, level, parent):
        D = frozenset(C & up_to(level))
        D1 = frozenset(v for v in D if sg.d[v] == level)
        t = len(nodes)
        node = CTNode(t, level, D, D1, D - D1, parent, C=frozenset(C))
        g = level_graph(sg, level - 1).induced(D)
        node.graph = {v: Counter() for v in D}
        for e in g.edges:
            u, w = tuple(e)
            node.graph[u][w] += 1
            node.graph[w][u] += 1
        nodes[t] = node
        rest = set(C) - D
        for comp in connected_components(rest, adj):
            nbr = {w for v in comp for w in adj[v]} - comp
            child = make(comp | nbr, level + 1, t)
            node.children.append(child)
        return t

    root = make(set(sg.vertices), 0, None)
    tree = ComponentTree(nodes, root)
    return drop_nodes(tree) if modified else tree


def drop_nodes(tree: ComponentTree) -> ComponentTree:
    """Skip every node at level > 0 with empty D1, reattaching its child."""
    nodes = {t: CTNode(**vars(n)) for t, n in tree.nodes.items()}
    for n in nodes.values():
        n.children = list(n.children)
    dropped = list(tree.dropped)
    for t in sorted(nodes, key=lambda t: nodes[t].level):
        n = nodes[t]
        if n.level == 0 or n.D1:
            continue
        p = nodes[n.parent]
        pos = p.children.index(t)
        p.children[pos : pos + 1] = n.children
        for c in n.children:
            nodes[c].parent = p.id
        dropped.append((n.level, _sorted(n.D2)))
        del nodes[t]
    return ComponentTree(nodes, tree.root, dropped)


def component_tree(sg: StratifiedGraph, modified: bool = True) -> ComponentTree:
    """Bottom-up construction over G^(d_max), ..., G^(0).

    With ``modified=False`` the (quadratic) reference construction is used.
    """
    if not modified:
        return reference_component_tree(sg, modified=False)
    if not is_normalized(sg):
        raise NotNormalizedError("component_tree expects vertices 1..n and depths <= n")
    d = sg.d
    dmax = sg.d_max
    levels = [[] for _ in range(dmax + 1)]
    for v in sorted(sg.vertices):
        levels[d[v]].append(v)
    multi = {v: Counter() for v in sg.vertices}
    for e in sg.graph.edges:
        u, w = tuple(e)
        multi[u][w] += 1
        multi[w][u] += 1

    nodes: dict = {}
    pending = [[] for _ in range(dmax + 2)]  # entry j: (subtree root, linking vertex)
    dropped = []

    for i in range(dmax, 0, -1):
        label = {}
        created = []
        for start in levels[i]:
            if start in label:
                continue
            comp, lower = {start}, set()
            stack = [start]
            while stack:
                z = stack.pop()
                for w in multi[z]:
                    if d[w] == i and w not in comp:
                        comp.add(w)
                        stack.append(w)
                    elif d[w] < i:
                        lower.add(w)
            D = frozenset(comp | lower)
            t = len(nodes)
            g = {v: Counter() for v in D}
            for u in comp:
                for w, m in multi[u].items():
                    if w in D:
                        g[u][w] += m
                        if w not in comp:
                            g[w][u] += m
            node = CTNode(t, i, D, frozenset(comp), frozenset(lower), graph=g)
            nodes[t] = node
            for v in comp:
                label[v] = t
            created.append(node)

        for node in created:
            D2 = sorted(node.D2)
            for a in D2:
                for b in D2:
                    if a < b:
                        multi[a][b] += 1
                        multi[b][a] += 1
                        node.graph[a][b] += 1
                        node.graph[b][a] += 1

        for sub, y in pending[i + 1]:
            t = label[y]
            nodes[sub].parent = t
            nodes[t].children.append(sub)
        pending[i + 1] = []

        for node in created:
            if node.D2:
                j = max(d[v] for v in node.D2)
                x = min(v for v in node.D2 if d[v] == j)
                pending[j + 1].append((node.id, x))
            else:
                j = 0
                pending[0].append((node.id, None))
            # skipped ancestors all have D = D2 of this node
            dropped.extend((level, _sorted(node.D2)) for level in range(j + 1, i))

    root = CTNode(len(nodes), 0, frozenset(levels[0]), frozenset(levels[0]), frozenset())
    root.graph = {v: Counter() for v in root.D}
    for u in root.D:
        for w, m in multi[u].items():
            if w in root.D:
                root.graph[u][w] += m
    nodes[root.id] = root
    for sub, _ in pending[0] + pending[1]:
        nodes[sub].parent = root.id
        root.children.append(sub)
    return ComponentTree(nodes, root.id, dropped)
