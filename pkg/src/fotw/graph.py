"""Small immutable undirected graph used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset  # of 2-element frozensets

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable) -> "Graph":
        es = frozenset(frozenset(e) for e in edges)
        for e in es:
            if len(e) != 2:
                raise ValueError(f"not a simple edge: {sorted(e)}")
        verts = frozenset(vertices).union(*es) if es else frozenset(vertices)
        return cls(verts, es)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, w = tuple(e)
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def induced(self, keep) -> "Graph":
        keep = frozenset(keep) & self.vertices
        return Graph(keep, frozenset(e for e in self.edges if e <= keep))

    def components(self) -> list:
        """Connected components as frozensets, ordered by their smallest vertex."""
        return connected_components(self.vertices, self.adjacency())

    def __len__(self):
        return len(self.vertices)


def connected_components(vertices, adj) -> list:
    seen = set()
    out = []
    for start in sorted(vertices, key=order_key):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in vertices and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def order_key(v):
    # mixed int/str vertex sets still sort deterministically
    return (isinstance(v, str), v)
