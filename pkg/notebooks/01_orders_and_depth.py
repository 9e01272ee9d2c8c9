# %% [markdown]
# # Quantifier interaction and essential alternation depth
#
# The scope order of a formula says which quantifier sits inside which.
# Not every nesting matters, though: a quantifier only depends on the ones
# it is entangled with. `compute_preceq` keeps the nestings that matter, and
# `compute_ead` counts quantifier changes along them.

# %%
from fotw.families import NON_ENTANGLEMENT_PHI, reordering_phi, reordering_psi
from fotw.formula import normalize_formula, parse_formula, render
from fotw.order import analyze
from fotw.xenerp import is_xenerp, to_xenerp


def show(f):
    a = analyze(f)
    print(render(f))
    print("  strict order:", sorted(p for p in a.preceq if p[0] != p[1]))
    print("  ead:", dict(sorted(a.ead.items())), " ad:", dict(sorted(a.ad.items())))


# %% [markdown]
# Here `x` is universally quantified outermost, but it only ever meets `y`
# in a conjunct that `z` does not touch. Its alternation depth counts a
# forall/exists/forall chain; the essential depth sees that `x` never
# interacts and gives it the minimal universal depth 2.

# %%
phi = normalize_formula(parse_formula(NON_ENTANGLEMENT_PHI))
show(phi)

# %% [markdown]
# Rewriting into xenerp form moves each quantifier directly above the part
# of the formula it governs. The essential depth is unchanged; the plain
# alternation depth now agrees with it.

# %%
print(is_xenerp(phi))
psi = to_xenerp(phi)
show(psi)

# %% [markdown]
# Depth depends on how atoms are grouped. In the first formula `P(y)`
# stands apart from the atoms linking the `x_i` to `z`; in the second it is
# repeated next to each of them, so `y` and `z` become entangled and the
# depth of `z` climbs from 1 to 3.

# %%
for n in (2, 3):
    show(normalize_formula(reordering_phi(n)))
    show(normalize_formula(reordering_psi(n)))
