import pytest
from hypothesis import given

from conftest import formulas
from fotw.errors import ReplacementError
from fotw.evaluation import formulas_equivalent
from fotw.families import NON_ENTANGLEMENT_PHI, NON_ENTANGLEMENT_PSI
from fotw.formula import formula_graph, is_prenex, is_straight, normalize_formula, parse_formula
from fotw.order import compute_ead
from fotw.xenerp import (
    PULL,
    PUSH,
    SWAP_SAME,
    SWAP_SCOPE,
    apply_replacement,
    is_xenerp,
    preceding_quantifiers,
    to_prenex,
    to_xenerp,
)


def _f(text):
    return normalize_formula(parse_formula(text))


def test_non_entanglement_pair():
    phi, psi = _f(NON_ENTANGLEMENT_PHI), _f(NON_ENTANGLEMENT_PSI)
    assert is_xenerp(phi) == (False, "x")
    assert is_xenerp(psi) == (True, None)
    trace = []
    assert to_xenerp(phi, trace) == psi
    assert trace == [(SWAP_SCOPE, "x", "y")]


def test_push_into_single_operand():
    f = _f("exists x. (P(x) & Q(y))")
    assert apply_replacement(f, PUSH, ()) == _f("(exists x. P(x)) & Q(y)")


def test_push_refuses_to_group_operands():
    f = _f("exists x. (P(x) & Q(x) & P(y))")
    with pytest.raises(ReplacementError):
        apply_replacement(f, PUSH, ())


def test_swap_same_requires_equal_kinds():
    f = _f("exists x. exists y. E(x,y)")
    assert apply_replacement(f, SWAP_SAME, ()) == _f("exists y. exists x. E(x,y)")
    with pytest.raises(ReplacementError):
        apply_replacement(_f("exists x. forall y. E(x,y)"), SWAP_SAME, ())


def test_swap_scope_side_conditions():
    # region of x is not inside the region of y
    f = _f("exists x. forall y. E(x,y)")
    with pytest.raises(ReplacementError):
        apply_replacement(f, SWAP_SCOPE, ())


def test_pull_rejects_capture():
    f = parse_formula("P(x) & exists x. Q(x)")
    with pytest.raises(ReplacementError):
        apply_replacement(f, PULL, ())
    with pytest.raises(ReplacementError):
        apply_replacement(_f("P(x) & Q(x)"), PULL, ())


def test_unknown_replacement():
    with pytest.raises(ReplacementError):
        apply_replacement(_f("exists x. P(x)"), "rotate", ())


def test_preceding_quantifiers():
    f = _f("forall x. exists y. (E(x,y) & P(y))")
    assert preceding_quantifiers(f, (0, 0)) == ["y", "x"]
    assert preceding_quantifiers(f, ()) == []


def test_to_prenex_is_prenex_and_equivalent():
    f = _f(NON_ENTANGLEMENT_PSI)
    g = to_prenex(f)
    assert is_prenex(g)
    assert formulas_equivalent(f, g)[0]


@given(formulas)
def test_to_xenerp_properties(f):
    g = to_xenerp(f)
    assert is_xenerp(g)[0]
    assert is_straight(g)
    assert formula_graph(g) == formula_graph(f)
    assert compute_ead(g) == compute_ead(f)
    same, witness = formulas_equivalent(f, g, max_domain=2)
    assert same, witness


@given(formulas)
def test_to_xenerp_is_idempotent(f):
    g = to_xenerp(f)
    assert to_xenerp(g) == g


@given(formulas)
def test_prenexing_preserves_meaning_and_graph(f):
    g = to_prenex(f)
    assert is_prenex(g)
    assert formula_graph(g) == formula_graph(f)
    assert formulas_equivalent(f, g, max_domain=2)[0]
