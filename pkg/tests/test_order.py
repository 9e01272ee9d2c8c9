import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import formulas
from fotw.errors import EmptyWitnessError, NotPrenexError
from fotw.families import (
    ENTANGLEMENT_EXAMPLE,
    NON_ENTANGLEMENT_PHI,
    NON_ENTANGLEMENT_PSI,
    PRECEQ_EXAMPLE,
    reordering_phi,
    reordering_psi,
)
from fotw.formula import EXISTS, normalize_formula, parse_formula
from fotw.generate import random_formula
from fotw.order import (
    analyze,
    compute_ad,
    compute_ad_prime,
    compute_ead,
    compute_preceq,
    subformula_of_varset,
)


def _f(text):
    return normalize_formula(parse_formula(text))


def _strict(rel):
    return {p for p in rel if p[0] != p[1]}


def test_ordering_example():
    a = analyze(_f(PRECEQ_EXAMPLE))
    assert a.ead == {"x": 1, "y": 2, "z": 3, "u": 4}
    assert a.ad == a.ead
    # the order is the full scope chain here
    assert _strict(a.preceq) == {(p, q) for p, q in a.leq if p != q}


def test_entanglement_example():
    a = analyze(_f(ENTANGLEMENT_EXAMPLE))
    assert a.ead == {"x": 2, "x'": 2, "y": 3}
    assert a.ad == a.ead
    assert _strict(a.preceq) == {("x", "y"), ("x'", "y")}
    assert ("x", "y") in a.entangled and ("x'", "y") in a.entangled


def test_non_entanglement_example():
    a = analyze(_f(NON_ENTANGLEMENT_PHI))
    assert a.preceq == {("y", "z"), ("x", "x"), ("y", "y"), ("z", "z")}
    assert a.ead == {"x": 2, "y": 1, "z": 2}
    assert a.ad == {"x": 2, "y": 3, "z": 4}
    assert not any("x" in p for p in a.entangled)


def test_non_entanglement_variant_has_same_depths():
    phi, psi = analyze(_f(NON_ENTANGLEMENT_PHI)), analyze(_f(NON_ENTANGLEMENT_PSI))
    assert psi.ead == phi.ead
    assert psi.ad == psi.ead


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_reordering_family(n):
    phi = analyze(normalize_formula(reordering_phi(n)))
    psi = analyze(normalize_formula(reordering_psi(n)))
    xs = [f"x{i}" for i in range(1, n + 1)]
    assert _strict(phi.preceq) == set()
    assert ("y", "z") in psi.preceq
    for x in xs:
        assert phi.ead[x] == psi.ead[x] == 1
    assert phi.ead["z"] == 1 and psi.ead["z"] == 3
    assert phi.ead["y"] == psi.ead["y"] == 2
    assert phi.ad == psi.ad == psi.ead


def test_reordering_family_at_one_is_a_single_formula():
    assert normalize_formula(reordering_phi(1)) == normalize_formula(reordering_psi(1))
    assert compute_ead(normalize_formula(reordering_psi(1)))["z"] == 1


def test_free_variables_have_depth_zero_and_reflexive_order_only():
    f = _f("exists y. (E(x,y) & forall z. E(y,z))")
    a = analyze(f)
    assert a.ead["x"] == 0 and a.ad["x"] == 0
    assert all(p[0] != "x" and p[1] != "x" for p in _strict(a.preceq))
    assert ("x", "x") in a.preceq


def test_prenex_prime_depth():
    f = _f("forall x. exists y. exists w. forall z. (E(x,y) | E(w,z))")
    assert compute_ad_prime(f) == {"x": 1, "y": 2, "w": 2, "z": 3}
    with pytest.raises(NotPrenexError):
        compute_ad_prime(_f("P(x) & exists y. E(x,y)"))


def test_subformula_of_varset():
    f = _f("exists x. (P(x) & exists y. (E(x,y) | Q(y)))")
    assert subformula_of_varset(f, {"y"}) == (0, 1, 0)
    assert subformula_of_varset(f, {"x"}) == (0,)
    with pytest.raises(EmptyWitnessError):
        subformula_of_varset(_f("P(x)"), {"q"})


@given(formulas)
def test_preceq_is_a_partial_order_inside_scope_order(f):
    a = compute_preceq(f)
    verts = a.variables
    assert all((v, v) in a.preceq for v in verts)
    for p, q in a.preceq:
        for r, s in a.preceq:
            if q == r:
                assert (p, s) in a.preceq
    strict = _strict(a.preceq)
    assert strict <= a.leq
    assert not any((q, p) in strict for p, q in strict)


@given(formulas)
def test_depth_parity_and_bound(f):
    a = analyze(f)
    for v in a.variables:
        if v in a.free:
            assert a.ead[v] == a.ad[v] == 0
        else:
            odd = a.kind[v] == EXISTS
            assert a.ead[v] % 2 == odd and a.ad[v] % 2 == odd
            assert 1 <= a.ead[v] <= a.ad[v]


@given(formulas, st.randoms(use_true_random=False))
def test_fixed_point_is_independent_of_pair_order(f, rnd):
    base = compute_preceq(f).preceq

    def shuffled(pairs):
        rnd.shuffle(pairs)
        return pairs

    assert compute_preceq(f, pair_order=shuffled).preceq == base
    assert compute_preceq(f, pair_order=lambda ps: ps[::-1]).preceq == base


def test_order_properties_on_generated_formulas():
    rng = random.Random(7)
    for _ in range(100):
        f = random_formula(rng, max_vars=6, free=rng.choice((0, 1)))
        ead, ad = compute_ead(f), compute_ad(f)
        assert all(ead[v] <= ad[v] for v in ead)
