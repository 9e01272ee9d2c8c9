import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fotw.checks import fixture_path
from fotw.decomposition import StratifiedGraph, parse_stratified_graph, stratified_treewidth
from fotw.errors import TooLargeError
from fotw.game import cop_width, cops_win, verify_games_theorem


def _flat(n, edges):
    return StratifiedGraph.build(range(1, n + 1), edges, {v: 0 for v in range(1, n + 1)})


@st.composite
def small_graphs(draw, max_vertices=5):
    n = draw(st.integers(1, max_vertices))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    depths = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return StratifiedGraph.build(range(1, n + 1), edges, dict(zip(range(1, n + 1), depths)))


@pytest.mark.parametrize("sg, cw", [
    (_flat(1, []), 1),
    (_flat(3, []), 1),
    (_flat(5, [(1, 2), (2, 3), (3, 4), (4, 5)]), 2),
    (_flat(4, [(1, 2), (2, 3), (3, 4), (4, 1)]), 3),
    (_flat(4, list(itertools.combinations(range(1, 5), 2))), 4),
])
def test_unstratified_cop_numbers(sg, cw):
    assert cop_width(sg) == cop_width(sg, monotone=True) == cw


def test_deep_centre_needs_more_cops():
    # the leaves must be guarded before the deeper centre may be occupied
    sg = StratifiedGraph.build(range(4), [(0, 1), (0, 2), (0, 3)], {0: 1, 1: 0, 2: 0, 3: 0})
    assert not cops_win(sg, 3)
    assert cops_win(sg, 4)
    assert verify_games_theorem(sg).ok


def test_graph_fixture():
    sg = parse_stratified_graph(fixture_path("path5.g").read_text())
    report = verify_games_theorem(sg)
    assert report.ok and report.tw == stratified_treewidth(sg)[0]


def test_empty_graph():
    sg = StratifiedGraph.build([], [], {})
    assert cops_win(sg, 0).win
    assert verify_games_theorem(sg).ok


def test_strategy_is_closed():
    sg = _flat(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    result = cops_win(sg, 2)
    assert result.win and result.strategy
    assert all(len(y) <= 2 for y in result.strategy.values())
    # every position starts from an empty cop set or a previous move
    moves = set(result.strategy.values())
    assert all(not x or x in moves for x, _ in result.strategy)
    assert result.table()[0].startswith("{} {1,2,3,4,5} -> ")


def test_losing_result_has_no_strategy():
    result = cops_win(_flat(3, [(1, 2), (2, 3), (1, 3)]), 2)
    assert not result and result.strategy == {}


def test_limits():
    with pytest.raises(TooLargeError):
        cops_win(_flat(13, []), 1)
    with pytest.raises(TooLargeError):
        cops_win(_flat(2, []), 7)


@settings(max_examples=30)
@given(small_graphs())
def test_cop_width_is_width_plus_one(sg):
    report = verify_games_theorem(sg)
    assert report.ok, report


@settings(max_examples=30)
@given(small_graphs(), st.integers(0, 4))
def test_monotone_win_implies_win_and_more_cops_help(sg, k):
    if cops_win(sg, k, monotone=True):
        assert cops_win(sg, k)
    if cops_win(sg, k):
        assert cops_win(sg, k + 1)
