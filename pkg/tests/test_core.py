import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from provlog.core import (
    Atom,
    Database,
    Program,
    Rule,
    brute_force_homomorphisms,
    const,
    entails,
    ground,
    homomorphisms,
    make_fact,
    minimal_depth,
    saturate,
    var,
)
from provlog.errors import ArityError, HeadVariableError, SizeLimitError
from provlog.instances import REACH
from provlog.parser import parse_program


def db(*facts):
    return Database(frozenset(facts))


def test_term_namespaces_disjoint():
    assert const("a") != var("a")
    with pytest.raises(ValueError):
        const("")


def test_parser_dedups_body_atoms():
    rule = parse_program("B(X) :- A(X), A(X).").rules[0]
    assert rule.body == (Atom("A", (var("X"),)),)


def test_head_variable_must_occur_in_body():
    with pytest.raises(HeadVariableError):
        Rule(Atom("A", (var("Y"),)), (Atom("B", (var("X"),)),))


def test_arity_clash_is_load_time_error():
    with pytest.raises(ArityError):
        Database(frozenset([make_fact("P", "a"), make_fact("P", "a", "b")]))


def test_homomorphisms_unique_match():
    body = parse_program("goal :- R(X,Y), A(Y).").rules[0].body
    homs = homomorphisms(body, {make_fact("R", "a", "b"), make_fact("A", "b")})
    assert len(homs) == 1
    assert homs[0].as_dict() == {"X": "a", "Y": "b"}


def test_homomorphisms_symmetric_edge():
    body = parse_program("goal :- R(X,Y).").rules[0].body
    homs = homomorphisms(body, {make_fact("R", "a", "b"), make_fact("R", "b", "a")})
    assert len(homs) == 2


def test_homomorphisms_two_bindings_for_symmetric_triples():
    body = parse_program("goal :- S(X,Y,Z), S(X,Z,Y).").rules[0].body
    facts = {make_fact("S", "a", "b", "c"), make_fact("S", "a", "c", "b")}
    homs = homomorphisms(body, facts)
    assert {tuple(sorted(h.as_dict().items())) for h in homs} == {
        (("X", "a"), ("Y", "b"), ("Z", "c")),
        (("X", "a"), ("Y", "c"), ("Z", "b")),
    }


names = st.sampled_from(["a", "b", "c"])
predicates = st.sampled_from(["P", "Q", "R"])


@st.composite
def random_matching_setup(draw):
    arity_of = {p: draw(st.integers(1, 2)) for p in ["P", "Q", "R"]}
    facts = set()
    for _ in range(draw(st.integers(1, 6))):
        p = draw(predicates)
        facts.add(make_fact(p, *[draw(names) for _ in range(arity_of[p])]))
    body = []
    for _ in range(draw(st.integers(1, 3))):
        p = draw(predicates)
        args = tuple(
            var(draw(st.sampled_from(["X", "Y", "Z"])))
            if draw(st.booleans()) else const(draw(names))
            for _ in range(arity_of[p])
        )
        body.append(Atom(p, args))
    return tuple(body), frozenset(facts)


@settings(max_examples=120, deadline=None)
@given(random_matching_setup())
def test_homomorphisms_complete_and_sound(setup):
    body, facts = setup
    fast = homomorphisms(body, facts)
    brute = brute_force_homomorphisms(body, facts)
    # Soundness: every returned substitution really embeds the body.
    for h in fast:
        assert all(h.apply(a) in facts for a in body)
    # Completeness: brute-force enumeration finds exactly the same set,
    # modulo variables the brute-forcer binds spuriously.
    wanted = {
        tuple((v, c) for v, c in h.mapping if any(v in a.variables() for a in body))
        for h in brute
    }
    assert {h.mapping for h in fast} == wanted


def test_ground_unary_rule_over_two_constants():
    program = parse_program("A(X) :- B(X).")
    grounded = ground(program, db(make_fact("B", "a"), make_fact("C", "b")))
    assert {str(r) for r in grounded.rules} == {"A(a) :- B(a).", "A(b) :- B(b)."}


def test_ground_empty_program():
    assert ground(Program(()), db(make_fact("B", "a"))).rules == ()


def test_ground_symmetric_rule_counts_all_assignments():
    # Oracle: all 2**2 variable assignments of the two-variable rule.
    program = parse_program("R(Y,X) :- R(X,Y).")
    grounded = ground(program, db(make_fact("R", "a", "b"), make_fact("R", "b", "a")))
    assert len(grounded.rules) == 4


def test_ground_cap():
    program = parse_program("G(X,Y,Z) :- P(X), P(Y), P(Z).")
    facts = db(*[make_fact("P", f"c{i}") for i in range(30)])
    with pytest.raises(SizeLimitError):
        ground(program, facts, cap=1000)


def test_entails_running_example():
    assert entails(REACH.program, REACH.database, make_fact("A", "a"))
    assert entails(REACH.program, REACH.database, make_fact("A", "b"))


def test_entails_database_fact():
    assert entails(Program(()), REACH.database, make_fact("B", "a"))


def test_entails_false_fact_full_fixpoint():
    # Oracle: the least fixpoint of {B(x) -> A(x)} over {B(a)} is
    # {B(a), A(a)}, so A(b) is not entailed.
    program = parse_program("A(X) :- B(X).")
    database = db(make_fact("B", "a"))
    assert saturate(program, database) == frozenset(
        {make_fact("B", "a"), make_fact("A", "a")})
    assert not entails(program, database, make_fact("A", "b"))


def test_grounding_preserves_entailment():
    grounded = ground(REACH.program, REACH.database)
    for fact in saturate(REACH.program, REACH.database):
        assert entails(grounded, REACH.database, fact)
    assert saturate(grounded, REACH.database) == saturate(REACH.program, REACH.database)


def test_minimal_depth():
    assert minimal_depth(REACH.program, REACH.database, make_fact("B", "a")) == 0
    assert minimal_depth(REACH.program, REACH.database, make_fact("A", "a")) == 1
    assert minimal_depth(REACH.program, REACH.database, make_fact("A", "c")) is None
