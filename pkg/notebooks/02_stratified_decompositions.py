# %% [markdown]
# # Stratified tree decompositions
#
# A formula's graph links variables that share an atom. Ordinary
# tree-width ignores quantifiers; the stratified width additionally asks
# that shallow variables are introduced above deep ones in the
# decomposition. First-order tree-width is this width under the
# essential alternation depth.

# %%
from fotw.decomposition import (
    StratifiedGraph,
    brute_force_tw,
    component_tree,
    formula_stratification,
    fotw,
    normalize,
    stratified_treewidth,
    treewidth_decomposition,
)
from fotw.families import reordering_phi, star
from fotw.formula import formula_graph, normalize_formula
from fotw.order import compute_ad_prime

# %% [markdown]
# The star family: n existential leaves around one universal centre. The
# graph is a tree, yet every leaf must sit above the centre, so one bag
# holds all of them.

# %%
for n in range(1, 6):
    f = normalize_formula(star(n))
    g = formula_graph(f)
    tw, _ = treewidth_decomposition(g.vertices, g.edges)
    print(f"n={n}: tw={tw} fotw={fotw(f)[0]}")

_, td = fotw(normalize_formula(star(3)))
print(td.to_text())

# %% [markdown]
# Measuring depth by the position in a prenex prefix overshoots. The
# reordering family has first-order tree-width 1, but its prefix puts every
# `x_i` above `y` and `z`, and the prefix-based width grows with n.

# %%
for n in range(1, 6):
    f = normalize_formula(reordering_phi(n))
    prefix_width, _ = stratified_treewidth(formula_stratification(f, compute_ad_prime(f)))
    print(f"n={n}: fotw={fotw(f)[0]} prefix-depth width={prefix_width}")

# %% [markdown]
# The exact solver splits the graph along its component tree and runs an
# exact unstratified search on each piece. Exhaustive search over
# depth-respecting elimination orderings confirms the result on a small case.

# %%
sg = StratifiedGraph.build(
    range(1, 7),
    [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6)],
    {1: 0, 2: 1, 3: 1, 4: 2, 5: 0, 6: 3},
)
w, td = stratified_treewidth(sg)
print("exact", w, "brute force", brute_force_tw(sg))
tree = component_tree(normalize(sg)[0])
for t in tree.preorder():
    node = tree.nodes[t]
    print(f"level {node.level}: D={sorted(node.D)} new={sorted(node.D1)}")
