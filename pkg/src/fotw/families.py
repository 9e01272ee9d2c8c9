"""Named formulas and scalable formula families with known widths."""

from __future__ import annotations

from .formula import parse_formula

PRECEQ_EXAMPLE = "exists x. forall y. exists z. (P(x,y) & forall u. (R(y,u) | P(z,u)))"
ENTANGLEMENT_EXAMPLE = (
    "forall x. forall x'. exists y. (((P(y) & P(x)) | P(x)) & ((P(y) & P(x')) | P(x')))"
)
NON_ENTANGLEMENT_PHI = "forall x. exists y. forall z. (R(z,y) | (P(x) & P(y)))"
NON_ENTANGLEMENT_PSI = "exists y. ((forall z. R(z,y)) | (forall x. P(x)) & P(y))"


def _prefix(n: int) -> str:
    return " ".join(f"exists x{i}." for i in range(1, n + 1))


def star_text(n: int) -> str:
    """E x1..xn A y AND_i E(xi, y): a star graph whose stratified width is n."""
    body = " & ".join(f"E(x{i},y)" for i in range(1, n + 1))
    return f"{_prefix(n)} forall y. ({body})"


def reordering_phi_text(n: int) -> str:
    """E x1..xn A y E z (AND_i R(xi, z) & P(y)): first-order tree-width 1."""
    body = " & ".join(f"R(x{i},z)" for i in range(1, n + 1))
    return f"{_prefix(n)} forall y. exists z. ({body} & P(y))"


def reordering_psi_text(n: int) -> str:
    """Like ``reordering_phi_text`` with P(y) repeated next to every R atom."""
    body = " & ".join(f"(R(x{i},z) & P(y))" for i in range(1, n + 1))
    return f"{_prefix(n)} forall y. exists z. ({body})"


def star(n: int):
    return parse_formula(star_text(n))


def reordering_phi(n: int):
    return parse_formula(reordering_phi_text(n))


def reordering_psi(n: int):
    return parse_formula(reordering_psi_text(n))


# the disjunction-free family used for scaling measurements
qcf = reordering_phi


def named_examples() -> dict:
    return {
        "preceq": parse_formula(PRECEQ_EXAMPLE),
        "entanglement": parse_formula(ENTANGLEMENT_EXAMPLE),
        "non_entanglement_phi": parse_formula(NON_ENTANGLEMENT_PHI),
        "non_entanglement_psi": parse_formula(NON_ENTANGLEMENT_PSI),
    }
