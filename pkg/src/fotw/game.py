"""The d-stratified helicopter cops-and-robbers game, solved exactly.

A position is (X, R): the cops occupy X and the robber can be anywhere in R,
a component of G - X. The cops announce Y; the robber moves inside the
component of G - (X & Y) that contains R and ends in some component R' of
G - Y (or is caught if there is none). Landing positions must satisfy
max d(Y) <= min d(R'); in the monotone game also R' <= R. A cop move that
allows a landing position violating these rules is treated as losing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .decomposition import StratifiedGraph, stratified_treewidth
from .errors import guard
from .graph import order_key


@dataclass
class GameResult:
    win: bool
    k: int
    monotone: bool
    strategy: dict = field(default_factory=dict)  # (X, R) -> Y, as frozensets of vertices

    def __bool__(self):
        return self.win

    def table(self) -> list:
        def show(s):
            return "{" + ",".join(str(v) for v in sorted(s, key=order_key)) + "}"

        rows = sorted(
            self.strategy.items(), key=lambda kv: (len(kv[0][0]), show(kv[0][0]), show(kv[0][1]))
        )
        return [f"{show(x)} {show(r)} -> {show(y)}" for (x, r), y in rows]


class _Arena:
    def __init__(self, sg: StratifiedGraph):
        self.verts = sg.sorted_vertices()
        self.n = len(self.verts)
        idx = {v: i for i, v in enumerate(self.verts)}
        self.nbr = [0] * self.n
        for v, ns in sg.graph.adjacency().items():
            for u in ns:
                self.nbr[idx[v]] |= 1 << idx[u]
        self.depth = [sg.d[v] for v in self.verts]
        self.full = (1 << self.n) - 1
        self.components = lru_cache(maxsize=None)(self._components)

    def _components(self, removed: int) -> tuple:
        left = self.full & ~removed
        out = []
        while left:
            seed = left & -left
            comp, frontier = seed, seed
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                new = self.nbr[low.bit_length() - 1] & left & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            left &= ~comp
        return tuple(out)

    def bits(self, mask: int):
        i = 0
        while mask:
            if mask & 1:
                yield i
            mask >>= 1
            i += 1

    def max_depth(self, mask: int) -> float:
        return max((self.depth[i] for i in self.bits(mask)), default=float("-inf"))

    def min_depth(self, mask: int) -> float:
        return min((self.depth[i] for i in self.bits(mask)), default=float("inf"))

    def legal(self, x: int, r: int) -> bool:
        return self.max_depth(x) <= self.min_depth(r)

    def names(self, mask: int) -> frozenset:
        return frozenset(self.verts[i] for i in self.bits(mask))


def _answers(arena: _Arena, x: int, r: int, y: int):
    """Robber landing components after the cops move from x to y."""
    region = next(c for c in arena.components(x & y) if c & r)
    return [c for c in arena.components(y) if c & region == c]


def cops_win(sg: StratifiedGraph, k: int, monotone: bool = False) -> GameResult:
    """Do k cops have a winning strategy? Least fixed point over positions."""
    guard(len(sg.vertices) <= 12, f"{len(sg.vertices)} vertices exceed the game limit of 12")
    guard(k <= 6, f"{k} cops exceed the game limit of 6")
    arena = _Arena(sg)
    n = arena.n
    if n == 0:
        return GameResult(True, k, monotone)
    moves = [
        sum(1 << i for i in c) for size in range(min(k, n) + 1)
        for c in itertools.combinations(range(n), size)
    ]
    states = [(0, c) for c in arena.components(0)]
    seen = set(states)
    for x in moves:
        for r in arena.components(x):
            if arena.legal(x, r) and (x, r) not in seen:
                seen.add((x, r))
                states.append((x, r))

    def outcome(x, r, y):
        """None if the move lets the robber reach an illegal position, else her options."""
        out = _answers(arena, x, r, y)
        for r2 in out:
            if not arena.legal(y, r2) or (monotone and r2 & ~r):
                return None
        return out

    options = {}
    for s in states:
        x, r = s
        options[s] = [(y, a) for y in moves if (a := outcome(x, r, y)) is not None]

    winning: dict = {}
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in winning:
                continue
            for y, answers in options[s]:
                if all((y, r2) in winning for r2 in answers):
                    winning[s] = y
                    changed = True
                    break

    start = [(0, c) for c in arena.components(0)]
    win = all(s in winning for s in start)
    strategy = {}
    if win:
        # keep only the positions reachable under the strategy
        stack = list(start)
        while stack:
            s = stack.pop()
            key = (arena.names(s[0]), arena.names(s[1]))
            if key in strategy:
                continue
            y = winning[s]
            strategy[key] = arena.names(y)
            stack.extend((y, r2) for r2 in _answers(arena, s[0], s[1], y))
    return GameResult(win, k, monotone, strategy)


def cop_width(sg: StratifiedGraph, monotone: bool = False, limit: int = 6) -> int:
    """Least k for which k cops win (n + 1 cops always suffice when allowed)."""
    for k in range(0, min(limit, len(sg.vertices)) + 1):
        if cops_win(sg, k, monotone).win:
            return k
    raise AssertionError("no winning number of cops within the limit")


@dataclass
class GamesReport:
    cw: int
    moncw: int
    tw: int

    @property
    def ok(self) -> bool:
        return self.cw == self.moncw == self.tw + 1


def verify_games_theorem(sg: StratifiedGraph) -> GamesReport:
    """Compare cop-width, monotone cop-width and stratified tree-width + 1."""
    tw, _ = stratified_treewidth(sg)
    return GamesReport(cop_width(sg, False), cop_width(sg, True), tw)
