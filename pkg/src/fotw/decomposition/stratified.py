"""Minimum-width stratified tree decompositions, and first-order tree-width.

Phases: build the modified component tree, decompose each stored graph
G^(0)[D_t] optimally, find for every tree edge (t, u) a bag of t's piece
containing D_t & D_u, glue the pieces along those bags, and root the result
inside the piece of the root node (whose bags only hold depth-0 vertices).
"""

from __future__ import annotations

from typing import Optional

from ..formula import formula_graph, free_vars
from ..order import compute_ead
from .component_tree import component_tree, normalize
from .core import StratifiedGraph, TreeDecomposition
from .treewidth import treewidth_decomposition


def _connector(td: TreeDecomposition, need: frozenset):
    for t in td.nodes():
        if need <= td.bags[t]:
            return t
    raise AssertionError(f"no bag covers the gluing set {sorted(need)}")


def stratified_treewidth(
    sg: StratifiedGraph, root_cover: Optional[frozenset] = None
) -> tuple[int, TreeDecomposition]:
    """Exact tw(G, d) with a witnessing d-stratified decomposition.

    ``root_cover``: if some bag of the root piece contains this vertex set, that
    bag becomes the root (used to put the free variables of a formula on top).
    """
    if not sg.vertices:
        return -1, TreeDecomposition({0: None}, {0: frozenset()})
    norm, back = normalize(sg)
    tree = component_tree(norm, modified=True)

    pieces = {}
    for t, node in tree.nodes.items():
        edges = node.simple_edges()
        pieces[t] = treewidth_decomposition(node.D, edges)[1]

    parent: dict = {}
    bags: dict = {}
    offset = {}
    next_id = 0
    for t in tree.preorder():
        offset[t] = next_id
        piece = pieces[t]
        for s in piece.nodes():
            bags[next_id + s] = piece.bags[s]
            p = piece.parent[s]
            parent[next_id + s] = None if p is None else next_id + p
        next_id += len(piece.nodes())

    # link every child piece to its parent piece
    for t in tree.preorder():
        for u in tree.nodes[t].children:
            need = tree.nodes[t].D & tree.nodes[u].D
            x_tu = offset[t] + _connector(pieces[t], need)
            x_ut = offset[u] + _connector(pieces[u], need)
            _reroot(parent, x_ut)
            parent[x_ut] = x_tu

    root_piece = pieces[tree.root]
    start = offset[tree.root]
    target = start + root_piece.root
    if root_cover:
        cover = frozenset(k for k, v in back.items() if v in root_cover)
        for s in root_piece.nodes():
            if cover <= root_piece.bags[s]:
                target = start + s
                break
    _reroot(parent, target)

    td = TreeDecomposition(parent, bags)
    td = _compact(td).relabel(back)
    return td.width, td


def _reroot(parent: dict, new_root) -> None:
    """Reverse the parent pointers on the path from ``new_root`` to its current root."""
    prev, node = None, new_root
    while node is not None:
        nxt = parent[node]
        parent[node] = prev
        prev, node = node, nxt


def _compact(td: TreeDecomposition) -> TreeDecomposition:
    """Renumber nodes 0.. in preorder and splice out empty bags (keeping one if all are)."""
    parent, bags = dict(td.parent), dict(td.bags)
    if any(bags.values()):
        for t in sorted(parent):
            if bags[t]:
                continue
            kids = [c for c, p in parent.items() if p == t]
            if parent[t] is None:
                if len(kids) != 1:
                    # keep an empty root only when it joins several subtrees
                    continue
                parent[kids[0]] = None
            else:
                for c in kids:
                    parent[c] = parent[t]
            del parent[t], bags[t]
    order = []
    kids = {t: sorted(c for c, p in parent.items() if p == t) for t in parent}
    stack = [t for t, p in parent.items() if p is None]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(reversed(kids[t]))
    new = {t: i for i, t in enumerate(order)}
    return TreeDecomposition(
        {new[t]: None if parent[t] is None else new[parent[t]] for t in order},
        {new[t]: bags[t] for t in order},
    )


def formula_stratification(f, depth=None) -> StratifiedGraph:
    """(G_f, ead_f), or (G_f, depth) for a caller-supplied depth map."""
    g = formula_graph(f)
    d = depth if depth is not None else compute_ead(f)
    return StratifiedGraph(g, {v: d.get(v, 0) for v in g.vertices})


def fotw(f, depth=None) -> tuple[int, TreeDecomposition]:
    """First-order tree-width of a straight NNF formula, free variables in the root bag."""
    sg = formula_stratification(f, depth)
    free = free_vars(f)
    width, td = stratified_treewidth(sg, root_cover=frozenset(free))
    if depth is None and free and not free <= td.bags[td.root]:
        raise AssertionError("free variables are not covered by the root bag")
    return width, td
