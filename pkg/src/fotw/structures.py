"""Finite relational structures and query answers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import StructureError, guard
from .formula import Vocabulary


@dataclass(frozen=True)
class Relation:
    """A query answer: tuples over ``schema`` (sorted variable names).

    A sentence's answer has the empty schema; it is TRUE iff it holds the
    empty tuple.
    """

    schema: tuple
    tuples: frozenset

    def __post_init__(self):
        if len(set(self.schema)) != len(self.schema):
            raise StructureError(f"repeated variable in schema {self.schema}")
        for t in self.tuples:
            if len(t) != len(self.schema):
                raise StructureError(f"tuple {t} does not match schema {self.schema}")

    @classmethod
    def boolean(cls, value: bool) -> "Relation":
        return cls((), frozenset({()}) if value else frozenset())

    @property
    def is_sentence(self) -> bool:
        return not self.schema

    @property
    def truth(self) -> bool:
        return bool(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def render(self) -> str:
        if self.is_sentence:
            return "TRUE" if self.truth else "FALSE"
        rows = [" ".join(self.schema)]
        rows += [" ".join(str(e) for e in t) for t in sorted(self.tuples, key=_key)]
        return "\n".join(rows)


def _key(t):
    return tuple((isinstance(e, str), e) for e in t)


@dataclass(frozen=True)
class Structure:
    vocabulary: Vocabulary
    universe: tuple
    relations: dict = field(default_factory=dict)  # name -> frozenset of tuples
    constants: dict = field(default_factory=dict)  # name -> element

    def __post_init__(self):
        if not self.universe:
            raise StructureError("the universe must be nonempty")
        if len(set(self.universe)) != len(self.universe):
            raise StructureError("repeated element in the universe")
        elems = set(self.universe)
        for name, arity in self.vocabulary.relations.items():
            for t in self.relations.get(name, ()):
                if len(t) != arity:
                    raise StructureError(f"tuple {t} of {name} does not have arity {arity}")
                for e in t:
                    if e not in elems:
                        raise StructureError(f"unknown element {e!r} in relation {name}")
        extra = set(self.relations) - set(self.vocabulary.relations)
        if extra:
            raise StructureError(f"relations {sorted(extra)} are not in the vocabulary")
        for c in self.vocabulary.constants:
            if c not in self.constants:
                raise StructureError(f"constant {c} is not interpreted")
            if self.constants[c] not in elems:
                raise StructureError(f"constant {c} names unknown element {self.constants[c]!r}")

    def rel(self, name: str) -> frozenset:
        return self.relations.get(name, frozenset())

    def size(self) -> int:
        """||A|| = |sigma| + |A| + sum of |R^A| * ar(R)."""
        voc = self.vocabulary
        total = sum(len(self.rel(r)) * a for r, a in voc.relations.items())
        return len(voc) + len(self.universe) + total

    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.universe)}

    def extend(self, vocabulary: Vocabulary, relations=None) -> "Structure":
        """Same structure over a larger vocabulary (new relations default to empty)."""
        rels = dict(self.relations)
        rels.update(relations or {})
        return Structure(self.vocabulary.merge(vocabulary), self.universe, rels, dict(self.constants))

    def render(self) -> str:
        lines = ["domain " + " ".join(str(e) for e in self.universe)]
        for name in sorted(self.vocabulary.relations):
            lines.append(f"relation {name} {self.vocabulary.relations[name]}")
            for t in sorted(self.rel(name), key=_key):
                lines.append("  " + " ".join(str(e) for e in t))
            lines.append("end")
        for c in sorted(self.constants):
            lines.append(f"constant {c} {self.constants[c]}")
        return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Structure:
    universe = None
    rels: dict = {}
    arity: dict = {}
    consts: dict = {}
    block = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        where = f"line {lineno}"
        if block is not None:
            if words == ["end"]:
                block = None
                continue
            if len(words) != arity[block]:
                raise StructureError(
                    f"{where}: tuple of length {len(words)} in {block}/{arity[block]}"
                )
            for e in words:
                if universe is None or e not in universe:
                    raise StructureError(f"{where}: unknown element {e!r}")
            rels[block].add(tuple(words))
            continue
        head = words[0]
        if head == "domain":
            if universe is not None:
                raise StructureError(f"{where}: duplicate domain declaration")
            universe = tuple(words[1:])
        elif head == "relation":
            if len(words) != 3 or not words[2].isdigit():
                raise StructureError(f"{where}: expected 'relation NAME ARITY'")
            name, a = words[1], int(words[2])
            if name in rels:
                raise StructureError(f"{where}: duplicate relation block {name}")
            if a < 1:
                raise StructureError(f"{where}: arity must be positive")
            rels[name], arity[name], block = set(), a, name
        elif head == "constant":
            if len(words) != 3:
                raise StructureError(f"{where}: expected 'constant NAME ELEMENT'")
            if universe is None or words[2] not in universe:
                raise StructureError(f"{where}: unknown element {words[2]!r}")
            consts[words[1]] = words[2]
        else:
            raise StructureError(f"{where}: unknown directive {head!r}")
    if block is not None:
        raise StructureError(f"relation block {block} is not closed with 'end'")
    if universe is None:
        raise StructureError("missing domain declaration")
    voc = Vocabulary(dict(arity), frozenset(consts))
    return Structure(voc, universe, {r: frozenset(ts) for r, ts in rels.items()}, consts)


def relation_bits(voc: Vocabulary, n: int) -> int:
    return sum(n**a for a in voc.relations.values())


def count_structures(voc: Vocabulary, n: int) -> int:
    return 2 ** relation_bits(voc, n) * n ** len(voc.constants)


def enumerate_structures(voc: Vocabulary, n: int) -> Iterator[Structure]:
    """Every structure with universe 0..n-1 over ``voc``."""
    bits = relation_bits(voc, n)
    guard(bits <= 24, f"{bits} relation bits exceed the enumeration limit of 24")
    names = sorted(voc.relations)
    cells = {r: list(itertools.product(range(n), repeat=voc.relations[r])) for r in names}
    consts = sorted(voc.constants)
    universe = tuple(range(n))
    for mask in range(2**bits):
        rels, shift = {}, 0
        for r in names:
            rels[r] = frozenset(t for j, t in enumerate(cells[r]) if mask >> (shift + j) & 1)
            shift += len(cells[r])
        for values in itertools.product(range(n), repeat=len(consts)):
            yield Structure(voc, universe, rels, dict(zip(consts, values)))


def random_structure(voc: Vocabulary, n: int, rng, density: float = 0.5) -> Structure:
    rels = {
        r: frozenset(
            t for t in itertools.product(range(n), repeat=a) if rng.random() < density
        )
        for r, a in voc.relations.items()
    }
    consts = {c: rng.randrange(n) for c in sorted(voc.constants)}
    return Structure(voc, tuple(range(n)), rels, consts)

