import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fotw.decomposition import (
    StratifiedGraph,
    TreeDecomposition,
    brute_force_tw,
    check_decomposition,
    component_tree,
    decomposition_to_ordering,
    formula_stratification,
    fotw,
    is_normalized,
    level_graph,
    normalize,
    ordering_to_decomposition,
    ordering_width,
    parse_stratified_graph,
    reference_component_tree,
    render_stratified_graph,
    stratified_treewidth,
    treewidth_decomposition,
)
from fotw.errors import InvalidDecompositionError, OrderingError, TooLargeError
from fotw.families import star
from fotw.formula import normalize_formula, parse_formula


@st.composite
def stratified_graphs(draw, max_vertices=7):
    n = draw(st.integers(1, max_vertices))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    depths = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    return StratifiedGraph.build(range(1, n + 1), edges, dict(zip(range(1, n + 1), depths)))


def _flat(vertices, edges):
    return StratifiedGraph.build(vertices, edges, {v: 0 for v in vertices})


def _cycle(n):
    return [(i, i % n + 1) for i in range(1, n + 1)]


def _grid(k):
    idx = {(r, c): r * k + c + 1 for r in range(k) for c in range(k)}
    edges = [(idx[r, c], idx[r, c + 1]) for r in range(k) for c in range(k - 1)]
    edges += [(idx[r, c], idx[r + 1, c]) for r in range(k - 1) for c in range(k)]
    return list(idx.values()), edges


PETERSEN = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
            (6, 8), (8, 10), (10, 7), (7, 9), (9, 6)]


@pytest.mark.parametrize("vertices, edges, tw", [
    ([1], [], 0),
    ([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)], 1),
    (list(range(1, 7)), _cycle(6), 2),
    ([1, 2, 3, 4, 5], list(itertools.combinations(range(1, 6), 2)), 4),
    (*_grid(3), 3),
    (*_grid(4), 4),
    (list(range(1, 11)), PETERSEN, 4),
])
def test_known_treewidths(vertices, edges, tw):
    w, td = treewidth_decomposition(vertices, edges)
    assert w == tw == td.width
    assert check_decomposition(_flat(vertices, edges), td).ok


def test_empty_graph():
    w, td = stratified_treewidth(StratifiedGraph.build([], [], {}))
    assert w == -1 and td.width == -1


def test_depth_forces_larger_width():
    # a star whose centre is deepest: the leaves must sit together above it
    sg = StratifiedGraph.build(range(4), [(0, 1), (0, 2), (0, 3)], {0: 1, 1: 0, 2: 0, 3: 0})
    assert stratified_treewidth(sg)[0] == brute_force_tw(sg) == 3
    flat = StratifiedGraph.build(range(4), [(0, 1), (0, 2), (0, 3)], {v: 0 for v in range(4)})
    assert stratified_treewidth(flat)[0] == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_star_family(n):
    f = normalize_formula(star(n))
    w, td = fotw(f)
    assert w == n
    assert check_decomposition(formula_stratification(f), td).ok


def test_free_variables_sit_in_root_bag():
    f = normalize_formula(parse_formula("exists z. (E(x,z) & E(z,y))"))
    w, td = fotw(f)
    assert {"x", "y"} <= td.bags[td.root]
    assert w == 2


def test_check_decomposition_reports_each_condition():
    sg = StratifiedGraph.build([1, 2, 3], [(1, 2), (2, 3)], {1: 0, 2: 1, 3: 0})
    missing = TreeDecomposition({0: None}, {0: frozenset({1, 2})})
    assert any(v.startswith("TD1") for v in check_decomposition(sg, missing).violations)
    no_edge = TreeDecomposition({0: None, 1: 0}, {0: frozenset({1, 2}), 1: frozenset({3})})
    assert any(v.startswith("TD2") for v in check_decomposition(sg, no_edge).violations)
    split = TreeDecomposition(
        {0: None, 1: 0, 2: 1},
        {0: frozenset({1, 2}), 1: frozenset({3}), 2: frozenset({2, 3})},
    )
    assert any(v.startswith("TD3") for v in check_decomposition(sg, split).violations)
    # vertex 2 has depth 1 but is covered first above vertex 3 of depth 0
    upside = TreeDecomposition({0: None, 1: 0}, {0: frozenset({1, 2}), 1: frozenset({2, 3})})
    assert any(v.startswith("stratification") for v in check_decomposition(sg, upside).violations)
    good = TreeDecomposition({0: None, 1: 0}, {0: frozenset({1, 3}), 1: frozenset({1, 2, 3})})
    assert check_decomposition(sg, good).ok


def test_check_decomposition_rejects_bad_trees():
    sg = _flat([1], [])
    assert not check_decomposition(sg, TreeDecomposition({0: None, 1: None}, {0: {1}, 1: {1}}))
    assert not check_decomposition(sg, TreeDecomposition({0: 1, 1: 0}, {0: {1}, 1: {1}}))


def test_orderings_must_respect_depth():
    sg = StratifiedGraph.build([1, 2], [(1, 2)], {1: 1, 2: 0})
    with pytest.raises(OrderingError):
        ordering_width(sg, [1, 2])
    with pytest.raises(OrderingError):
        ordering_width(sg, [2])
    assert ordering_width(sg, [2, 1]) == 1


def test_invalid_decomposition_has_no_ordering():
    sg = _flat([1, 2], [(1, 2)])
    with pytest.raises(InvalidDecompositionError):
        decomposition_to_ordering(sg, TreeDecomposition({0: None}, {0: frozenset({1})}))


def test_brute_force_size_guard():
    with pytest.raises(TooLargeError):
        brute_force_tw(_flat(range(11), []))


def test_graph_file_round_trip():
    text = "# comment\nv a 0\nv 2 1\ne a 2\n"
    sg = parse_stratified_graph(text)
    assert sg.vertices == {"a", 2} and sg.d == {"a": 0, 2: 1}
    assert parse_stratified_graph(render_stratified_graph(sg)) == sg
    for bad in ("v a\n", "v a 0\nv a 1\n", "e a b\n", "x 1 2\n"):
        with pytest.raises(ValueError):
            parse_stratified_graph(bad)


def test_decomposition_serialisation():
    _, td = treewidth_decomposition([1, 2, 3], [(1, 2), (2, 3)])
    assert TreeDecomposition.from_dict(td.to_dict()) == td
    assert td.to_text().startswith("width 1")
    assert td.to_dot().startswith("graph decomposition {")


def test_normalize():
    sg = StratifiedGraph.build(["b", "a", "c"], [("a", "b")], {"a": 5, "b": 2, "c": 5})
    norm, back = normalize(sg)
    assert is_normalized(norm) and not is_normalized(sg)
    assert norm.d == {1: 1, 2: 0, 3: 1}
    assert back == {1: "a", 2: "b", 3: "c"}


def test_level_graph_joins_through_deeper_vertices():
    # 1 - 3 - 2 with the middle vertex deeper than both ends
    sg = StratifiedGraph.build([1, 2, 3], [(1, 3), (3, 2)], {1: 0, 2: 0, 3: 1})
    assert frozenset({1, 2}) in level_graph(sg, 0).edges
    assert frozenset({1, 2}) not in level_graph(sg, 1).edges


def test_component_tree_drops_nodes_without_new_vertices():
    # vertex 2 sits at depth 2 with nothing at depth 1 on its branch
    sg = StratifiedGraph.build([1, 2, 3], [(1, 2), (1, 3)], {1: 0, 2: 2, 3: 1})
    full = reference_component_tree(sg, modified=False)
    modified = component_tree(sg)
    assert len(modified) < len(full)
    assert modified.dropped
    assert modified.canonical() == reference_component_tree(sg).canonical()


@given(stratified_graphs())
def test_exact_width_matches_brute_force(sg):
    w, td = stratified_treewidth(sg)
    assert w == brute_force_tw(sg) == td.width
    assert check_decomposition(sg, td).ok


@given(stratified_graphs())
def test_conversions_preserve_optimal_width(sg):
    w, td = stratified_treewidth(sg)
    order = decomposition_to_ordering(sg, td)
    assert ordering_width(sg, order) <= w
    back = ordering_to_decomposition(sg, order)
    assert check_decomposition(sg, back).ok and back.width == w


@given(stratified_graphs())
def test_flat_depth_gives_plain_treewidth(sg):
    flat = StratifiedGraph(sg.graph, {v: 0 for v in sg.vertices})
    w, _ = treewidth_decomposition(sg.vertices, sg.graph.edges)
    assert stratified_treewidth(flat)[0] == w == brute_force_tw(flat)
    # depths only constrain, so the stratified width is never smaller
    assert stratified_treewidth(sg)[0] >= w


@given(stratified_graphs())
def test_component_tree_matches_reference(sg):
    norm, _ = normalize(sg)
    fast, slow = component_tree(norm), reference_component_tree(norm)
    assert fast.canonical() == slow.canonical()
    assert sorted(fast.dropped) == sorted(slow.dropped)


@given(stratified_graphs())
def test_component_tree_partitions_vertices(sg):
    norm, _ = normalize(sg)
    tree = reference_component_tree(norm, modified=False)
    seen = []
    for node in tree.nodes.values():
        seen.extend(node.D1)
        assert node.D1 | node.D2 == node.D and not node.D1 & node.D2
    assert sorted(seen) == sorted(norm.vertices)
