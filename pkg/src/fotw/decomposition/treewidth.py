"""Exact (unstratified) tree-width of small graphs.

Strategy per connected component: peel simplicial vertices, compare a greedy
min-fill upper bound with the minimum-degree lower bound, and only when they
differ run a dynamic program over sets of eliminated vertices:

    TW(S + v) = max(TW(S), |Q(S, v)|)

where Q(S, v) are the vertices outside S + v reachable from v through S
(exactly v's neighbourhood at the moment it is eliminated).
"""

from __future__ import annotations

from ..graph import connected_components, order_key
from .core import TreeDecomposition, build_from_ordering


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _min_fill_order(adj: dict) -> list:
    """Greedy elimination sequence (first eliminated first)."""
    adj = {v: set(ns) for v, ns in adj.items()}
    seq = []
    while adj:
        def cost(v):
            ns = list(adj[v])
            fill = sum(1 for i, a in enumerate(ns) for b in ns[i + 1 :] if b not in adj[a])
            return (fill, len(ns), order_key(v))

        v = min(adj, key=cost)
        ns = adj.pop(v)
        for u in ns:
            adj[u].discard(v)
            adj[u] |= ns - {u}
        seq.append(v)
    return seq


def _sequence_width(adj: dict, seq) -> int:
    adj = {v: set(ns) for v, ns in adj.items()}
    width = -1
    for v in seq:
        ns = adj.pop(v)
        width = max(width, len(ns))
        for u in ns:
            adj[u].discard(v)
            adj[u] |= ns - {u}
    return width


def _degeneracy_bound(adj: dict) -> int:
    """Max over the minimum-degree deletion sequence of the minimum degree."""
    adj = {v: set(ns) for v, ns in adj.items()}
    best = 0
    while adj:
        v = min(adj, key=lambda u: (len(adj[u]), order_key(u)))
        best = max(best, len(adj[v]))
        for u in adj.pop(v):
            adj[u].discard(v)
    return best


def _peel_simplicial(adj: dict) -> tuple[list, dict, int]:
    """Eliminate simplicial vertices (neighbourhood is a clique) while any exist."""
    adj = {v: set(ns) for v, ns in adj.items()}
    seq, low = [], -1
    changed = True
    while changed and adj:
        changed = False
        for v in sorted(adj, key=order_key):
            ns = adj[v]
            if all(b in adj[a] for a in ns for b in ns if a != b):
                low = max(low, len(ns))
                for u in ns:
                    adj[u].discard(v)
                del adj[v]
                seq.append(v)
                changed = True
                break
    return seq, adj, low


def _exact_sequence(adj: dict, upper: int) -> list:
    """Optimal elimination sequence by DP over eliminated sets, pruned at ``upper``."""
    verts = sorted(adj, key=order_key)
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    nbr = [0] * n
    for v, ns in adj.items():
        for u in ns:
            nbr[idx[v]] |= 1 << idx[u]
    full = (1 << n) - 1

    def q_size(s, i):
        # vertices outside s + i reachable from i through s
        seen = 1 << i
        frontier = nbr[i]
        out = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            if seen & low:
                continue
            seen |= low
            if s & low:
                frontier |= nbr[low.bit_length() - 1] & ~seen
            else:
                out |= low
        return _popcount(out)

    best = {0: -1}
    back = {}
    layer = {0}
    for _ in range(n):
        nxt = set()
        for s in layer:
            tw = best[s]
            rest = full & ~s
            while rest:
                low = rest & -rest
                rest ^= low
                i = low.bit_length() - 1
                w = max(tw, q_size(s, i))
                if w >= upper:
                    continue
                t = s | low
                if w < best.get(t, upper):
                    best[t] = w
                    back[t] = (s, i)
                    nxt.add(t)
        layer = nxt
    if full not in best:
        return []
    seq = []
    s = full
    while s:
        s, i = back[s]
        seq.append(verts[i])
    return seq[::-1]


def optimal_sequence(adj: dict) -> tuple[int, list]:
    """(tree-width, elimination sequence with the first eliminated vertex first)."""
    if not adj:
        return -1, []
    width, seq = -1, []
    for comp in connected_components(set(adj), adj):
        sub = {v: adj[v] & comp for v in comp}
        peeled, rest, low = _peel_simplicial(sub)
        w_part = low
        tail = []
        if rest:
            greedy = _min_fill_order(rest)
            upper = _sequence_width(rest, greedy)
            lower = max(_degeneracy_bound(rest), low)
            tail = greedy
            if lower < upper:
                exact = _exact_sequence(rest, upper)
                if exact:
                    tail = exact
            w_part = max(low, _sequence_width(rest, tail))
        width = max(width, w_part)
        seq.extend(peeled + tail)
    return width, seq


def treewidth_decomposition(vertices, edges) -> tuple[int, TreeDecomposition]:
    """Minimum-width tree decomposition of a simple graph given by vertices and edges."""
    adj = {v: set() for v in vertices}
    for e in edges:
        u, w = tuple(e)
        if u != w:
            adj[u].add(w)
            adj[w].add(u)
    width, seq = optimal_sequence(adj)
    td = build_from_ordering(adj, seq[::-1])
    return width, td
