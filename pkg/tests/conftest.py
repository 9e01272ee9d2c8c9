import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fotw.formula import EXISTS, FORALL, Atom, NegAtom, Quant, conj, disj, normalize_formula

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=25, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

VARS = ("a", "b", "c", "d")
RELATIONS = {"E": 2, "P": 1}

# acceptance lines collected for the terminal summary
ACCEPTANCE: list = []


def _literal(rel, args, negated):
    return NegAtom(rel, args) if negated else Atom(rel, args)


literals = st.sampled_from(sorted(RELATIONS)).flatmap(
    lambda r: st.builds(
        _literal,
        st.just(r),
        st.tuples(*[st.sampled_from(VARS)] * RELATIONS[r]),
        st.booleans(),
    )
)


def _extend(children):
    return st.one_of(
        st.builds(lambda xs: conj(*xs), st.lists(children, min_size=2, max_size=3)),
        st.builds(lambda xs: disj(*xs), st.lists(children, min_size=2, max_size=3)),
        st.builds(Quant, st.sampled_from((EXISTS, FORALL)), st.sampled_from(VARS), children),
    )


raw_formulas = st.recursive(literals, _extend, max_leaves=6)
# straight NNF; repeated quantification is renamed and vacuous quantifiers dropped
formulas = raw_formulas.map(normalize_formula)


@st.composite
def sentences(draw):
    f = draw(raw_formulas)
    for v in sorted({v for v in VARS}):
        f = Quant(draw(st.sampled_from((EXISTS, FORALL))), v, f)
    return normalize_formula(f)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
