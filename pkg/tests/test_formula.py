import pytest
from hypothesis import given

from conftest import formulas, raw_formulas
from fotw.errors import FormulaSyntaxError, VocabularyError
from fotw.evaluation import formulas_equivalent
from fotw.formula import (
    EXISTS,
    FORALL,
    And,
    Atom,
    MonotoneCombination,
    NegAtom,
    Not,
    Or,
    Quant,
    Vocabulary,
    atoms,
    bound_vars,
    conj,
    disj,
    expand_monotone,
    formula_graph,
    free_vars,
    get,
    is_nnf,
    is_prenex,
    is_straight,
    normalize_formula,
    parse,
    parse_formula,
    prefix,
    render,
    replace,
    size,
    straighten,
    to_nnf,
    variables,
    vocabulary_of,
)


def test_parse_precedence_and_flattening():
    f = parse_formula("P(x) & Q(y) | R(x,y) & P(y)")
    assert isinstance(f, Or) and all(isinstance(c, And) for c in f.children)
    g = parse_formula("P(x) & (Q(y) & P(y))")
    assert isinstance(g, And) and len(g.children) == 3


def test_quantifier_scope_extends_right():
    f = parse_formula("exists x. P(x) & Q(x)")
    assert isinstance(f, Quant) and free_vars(f) == frozenset()


def test_multi_variable_quantifier():
    f = parse_formula("forall x y. E(x,y)")
    assert prefix(f)[0] == [(FORALL, "x"), (FORALL, "y")]


def test_implication_and_iff_desugar():
    f = normalize_formula(parse_formula("P(x) -> Q(x)"))
    assert f == Or((NegAtom("P", ("x",)), Atom("Q", ("x",))))
    g = normalize_formula(parse_formula("P(x) <-> Q(x)"))
    assert is_nnf(g) and len(list(atoms(g))) == 4


def test_implication_is_right_associative():
    f = parse_formula("P(x) -> Q(x) -> P(y)")
    assert f == disj(NegAtom("P", ("x",)), NegAtom("Q", ("x",)), Atom("P", ("y",)))


def test_negation_of_atom_is_literal():
    assert parse_formula("~P(x)") == NegAtom("P", ("x",))
    assert isinstance(parse_formula("~(P(x) & Q(x))"), Not)


def test_constants_and_vocabulary():
    f, voc = parse("E(x,@a) & P(@b)")
    assert voc == Vocabulary({"E": 2, "P": 1}, frozenset({"a", "b"}))
    assert variables(f) == {"x"}
    assert vocabulary_of(f) == voc


def test_arity_conflict():
    with pytest.raises(VocabularyError):
        parse("E(x,y) & E(x)")


@pytest.mark.parametrize("text, line, col", [
    ("P(x) &", 1, 7),
    ("exists . P(x)", 1, 8),
    ("P(x)\n & Q(", 2, 6),
    ("P(x) Q(y)", 1, 6),
])
def test_syntax_error_positions(text, line, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


@pytest.mark.parametrize("text", ["P(__x)", "__R(x)", "P(@__c)", "exists _v. P(_v)"])
def test_reserved_identifiers_rejected(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_vocabulary_merge_conflict():
    with pytest.raises(VocabularyError):
        Vocabulary({"E": 2}).merge(Vocabulary({"E": 3}))
    with pytest.raises(VocabularyError):
        Vocabulary({"E": -1})


def test_straighten_renames_requantified_variable():
    f = straighten(parse_formula("exists x. (P(x) & exists x. Q(x))"))
    assert is_straight(f)
    assert bound_vars(f) == {"x", "x_2"}


def test_straighten_renames_bound_copy_of_free_variable():
    f = straighten(parse_formula("P(x) & exists x. Q(x)"))
    assert free_vars(f) == {"x"} and is_straight(f)


def test_straighten_drops_vacuous_quantifier():
    f = straighten(parse_formula("exists y. P(x)"))
    assert f == Atom("P", ("x",))


def test_formula_graph_edges():
    g = formula_graph(parse_formula("exists z. (E(x,z) & P(y))"))
    assert g.vertices == {"x", "y", "z"}
    # co-atomic pair plus the clique on the free variables
    assert g.edges == {frozenset("xz"), frozenset("xy")}


def test_formula_graph_empty_for_variable_free_formula():
    g = formula_graph(parse_formula("P(@a) & Q(@a)"))
    assert not g.vertices and not g.edges


def test_paths_get_and_replace():
    f = parse_formula("exists x. (P(x) & Q(x))")
    assert get(f, (0, 1)) == Atom("Q", ("x",))
    g = replace(f, (0, 1), Atom("P", ("x",)))
    assert g == parse_formula("exists x. (P(x) & P(x))")


def test_expand_monotone():
    a, b, c = (Atom(r, ("x",)) for r in "PQR")
    m = MonotoneCombination("dnf", ((0, 1), (0, 2)), (a, b, c))
    assert expand_monotone(m) == disj(conj(a, b), conj(a, c))
    n = MonotoneCombination("cnf", ((0, 1), (0, 2)), (a, b, c))
    assert expand_monotone(n) == conj(disj(a, b), disj(a, c))


def test_prefix_and_prenex():
    f = parse_formula("forall x. exists y. E(x,y)")
    assert is_prenex(f)
    assert prefix(f)[0] == [(FORALL, "x"), (EXISTS, "y")]
    assert not is_prenex(parse_formula("P(x) & exists y. E(x,y)"))


@given(raw_formulas)
def test_render_parse_round_trip(f):
    assert parse_formula(render(f)) == f


@given(formulas)
def test_normalized_formulas_are_straight_nnf(f):
    assert is_nnf(f) and is_straight(f)
    assert normalize_formula(f) == f


@given(formulas)
def test_nnf_negation_is_an_involution(f):
    neg = to_nnf(Not(f))
    assert is_nnf(neg)
    assert to_nnf(Not(neg)) == f
    assert size(neg) == size(f)


@given(raw_formulas)
def test_normalization_preserves_meaning(f):
    same, witness = formulas_equivalent(f, normalize_formula(f), max_domain=2)
    assert same, witness
