"""Canonical worked instances and the two reference table semirings.

These small programs and databases are the shared regression fixtures: the
doubled-edge reachability instance, the two-relation tree-count instance,
the alternative/joint-derivation pairs, the mutual recursion loop, the
self-loop, and the four-rule depth ladder.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Database, Fact, Program, make_fact
from .engine import AnnotatedDatabase
from .parser import parse_program
from .semirings import (
    Semiring,
    load_table_semiring,
    )


@dataclass(frozen=True)
class Instance:
    name: str
    program: Program
    database: Database
    annotations: dict  # semiring-independent literals, fact -> str

    def annotate_with(self, semiring: Semiring,
                      literals: dict | None = None) -> AnnotatedDatabase:
        literals = literals if literals is not None else self.annotations
        lam = {f: semiring.parse(literals[f]) for f in self.database.facts}
        return AnnotatedDatabase(self.database, semiring, lam)

    def annotate_injectively(self, semiring) -> AnnotatedDatabase:
        """One fresh variable per fact (for polynomial semirings)."""
        lam = {}
        for i, fact in enumerate(sorted(self.database.facts)):
            lam[fact] = semiring.variable(f"x{i}")
        return AnnotatedDatabase(self.database, semiring, lam)


def _db(*facts: Fact) -> Database:
    return Database(frozenset(facts))


# -- doubled-edge reachability ------------------------------------------------

REACH = Instance(
    name="reach",
    program=parse_program("""
        A(X) :- B(X).
        B(X) :- R(X,Y), A(Y).
        R(Y,X) :- R(X,Y).
    """),
    database=_db(
        make_fact("B", "a"), make_fact("B", "b"),
        make_fact("R", "a", "b"), make_fact("R", "b", "a")),
    annotations={
        make_fact("B", "a"): "3",
        make_fact("B", "b"): "1",
        make_fact("R", "a", "b"): "2",
        make_fact("R", "b", "a"): "1",
    },
)

REACH_COSTS = {
    make_fact("B", "a"): "10",
    make_fact("B", "b"): "1",
    make_fact("R", "a", "b"): "5",
    make_fact("R", "b", "a"): "2",
}

REACH_QUERY = parse_program("goal :- R(X,Y), B(Y).").rules[0].body


# -- two-relation head with four derivations ---------------------------------

FOUR_TREES = Instance(
    name="four-trees",
    program=parse_program("""
        H(X,X) :- R(X,Y).
        H(X,Y) :- R(X,Y).
        H(X,X) :- S(X,Y,Z), S(X,Z,Y).
    """),
    database=_db(
        make_fact("R", "a", "a"),
        make_fact("S", "a", "b", "c"), make_fact("S", "a", "c", "b")),
    annotations={
        make_fact("R", "a", "a"): "1",
        make_fact("S", "a", "b", "c"): "1",
        make_fact("S", "a", "c", "b"): "1",
    },
)


# -- alternative derivations (join of 3 vs sum of 5) --------------------------

TWO_RULES = Instance(
    name="two-rules",
    program=parse_program("""
        goal :- A(X).
        goal :- B(X).
    """),
    database=_db(make_fact("A", "a"), make_fact("B", "a")),
    annotations={make_fact("A", "a"): "2", make_fact("B", "a"): "3"},
)

# -- one rule, two matches (join of 4 vs sum of 2) -----------------------------

ONE_RULE_TWO_HOMS = Instance(
    name="one-rule-two-homs",
    program=parse_program("goal :- R(X,Y)."),
    database=_db(make_fact("R", "a", "b"), make_fact("R", "a", "c")),
    annotations={make_fact("R", "a", "b"): "2", make_fact("R", "a", "c"): "2"},
)

# -- mutual recursion ----------------------------------------------------------

MUTUAL = Instance(
    name="mutual",
    program=parse_program("""
        B(X) :- A(X).
        A(X) :- B(X).
    """),
    database=_db(make_fact("A", "a")),
    annotations={make_fact("A", "a"): "x"},
)

# -- self loop ------------------------------------------------------------------

SELF_LOOP = Instance(
    name="self-loop",
    program=parse_program("A(X) :- A(X), B(X)."),
    database=_db(make_fact("A", "a"), make_fact("B", "a")),
    annotations={make_fact("A", "a"): "x", make_fact("B", "a"): "y"},
)

# -- four-rule depth ladder ------------------------------------------------------

LADDER = Instance(
    name="ladder",
    program=parse_program("""
        A(X) :- B(X), C(X).
        B(X) :- D(X).
        C(X) :- E(X).
        E(X) :- F(X).
    """),
    database=_db(make_fact("C", "a"), make_fact("D", "a"),
                 make_fact("E", "a"), make_fact("F", "a")),
    annotations={
        make_fact("C", "a"): "c",
        make_fact("D", "a"): "d",
        make_fact("E", "a"): "e",
        make_fact("F", "a"): "f",
    },
)

# -- shallow shortcut (depth-sensitive counterexamples) ---------------------------

SHORTCUT = Instance(
    name="shortcut",
    program=parse_program("""
        goal :- A(X).
        goal :- B(X).
        B(X) :- C(X).
    """),
    database=_db(make_fact("A", "a"), make_fact("C", "a")),
    annotations={make_fact("A", "a"): "a", make_fact("C", "a"): "c"},
)

# -- pair of independent derivations (joint-use counterexample) --------------------

PAIR = Instance(
    name="pair",
    program=parse_program("""
        B(X) :- C(X).
        A(X) :- D(X).
    """),
    database=_db(make_fact("B", "a"), make_fact("C", "a"), make_fact("D", "a")),
    annotations={
        make_fact("B", "a"): "b",
        make_fact("C", "a"): "c",
        make_fact("D", "a"): "d",
    },
)

# -- two goals fed by the same facts (value-set joint-use counterexample) ----------

TWO_GOALS = Instance(
    name="two-goals",
    program=parse_program("""
        g1 :- A(X).
        g2 :- A(X).
        g1 :- B(X).
        g2 :- B(X).
    """),
    database=_db(make_fact("A", "a"), make_fact("B", "a")),
    annotations={make_fact("A", "a"): "x", make_fact("B", "a"): "y"},
)

# -- two joint rules sharing one necessary fact ------------------------------------

SHARED_FACT = Instance(
    name="shared-fact",
    program=parse_program("""
        goal :- A(X), B(X).
        goal :- A(X), C(X).
    """),
    database=_db(make_fact("A", "a"), make_fact("B", "a"), make_fact("C", "a")),
    annotations={
        make_fact("A", "a"): "d",
        make_fact("B", "a"): "e",
        make_fact("C", "a"): "f",
    },
)


GOAL = make_fact("goal")
A_A = make_fact("A", "a")
H_AA = make_fact("H", "a", "a")


# ---------------------------------------------------------------------------
# The two reference finite semirings
# ---------------------------------------------------------------------------

# Nine elements; joins and glbs all exist, yet the least-model value of the
# shared-fact instance is not a multiple of the necessary fact's annotation.
NINE_ELEMENT_TABLE = {
    "carrier": ["0", "1", "inf", "a", "b", "c", "d", "e", "f"],
    "zero": "0",
    "one": "1",
    "add": {"b,1": "a", "c,1": "a"},
    "mul": {"d,e": "b", "d,f": "c"},
    "default": {"add": "inf", "mul": "inf"},
}

# Eight elements; the pair (a, b) has the incomparable lower bounds c and e,
# so pairwise glbs do not always exist.
EIGHT_ELEMENT_TABLE = {
    "carrier": ["0", "1", "inf", "a", "b", "c", "d", "e"],
    "zero": "0",
    "one": "1",
    "add": {"c,d": "a", "d,e": "a", "c,e": "b"},
    "mul": {},
    "default": {"add": "inf", "mul": "inf"},
}


def nine_element_semiring():
    return load_table_semiring(NINE_ELEMENT_TABLE, name="table:nine")


def eight_element_semiring():
    return load_table_semiring(EIGHT_ELEMENT_TABLE, name="table:eight")


ALL_INSTANCES = [REACH, FOUR_TREES, TWO_RULES, ONE_RULE_TWO_HOMS, MUTUAL,
                 SELF_LOOP, LADDER, SHORTCUT, PAIR, TWO_GOALS, SHARED_FACT]
