import pytest

from provlog.errors import (
    DatalogSyntaxError,
    DuplicateFactError,
    HeadVariableError,
    ZeroAnnotationError,
)
from provlog.core import make_fact
from provlog.parser import parse_database, parse_program, print_database, print_program
from provlog.semirings import BOOL, NAT, POLY_NAT, TROPICAL


def test_single_rule():
    program = parse_program("A(X) :- B(X).")
    assert len(program.rules) == 1
    rule = program.rules[0]
    assert str(rule.head) == "A(X)"
    assert [str(a) for a in rule.body] == ["B(X)"]


def test_nullary_head():
    program = parse_program("goal :- A(X), B(X).")
    rule = program.rules[0]
    assert rule.head.arity == 0
    assert len(rule.body) == 2


def test_head_variable_error():
    with pytest.raises(HeadVariableError):
        parse_program("A(Y) :- B(X).")


def test_syntax_error_carries_position():
    with pytest.raises(DatalogSyntaxError) as err:
        parse_program("A(X) :- B(X)")
    assert err.value.line >= 1


def test_comments_and_quoted_constants():
    program = parse_program("""
        % a comment
        A(X) :- R(X, 'Big Constant').   % trailing comment
    """)
    body_atom = program.rules[0].body[0]
    assert body_atom.args[1].name == "Big Constant"
    assert not body_atom.args[1].is_var


def test_question_mark_variables():
    program = parse_program("A(?x) :- B(?x).")
    assert program.rules[0].head.args[0].is_var


def test_parse_database_counting():
    adb = parse_database("B(a) @ 3. R(a,b) @ 2.", NAT)
    assert adb.lam[make_fact("B", "a")] == 3
    assert adb.lam[make_fact("R", "a", "b")] == 2


def test_parse_database_default_annotation():
    adb = parse_database("B(a).", BOOL)
    assert adb.lam[make_fact("B", "a")] is True


def test_zero_annotation_rejected():
    with pytest.raises(ZeroAnnotationError):
        parse_database("B(a) @ 0.", NAT)


def test_duplicate_fact_rejected():
    with pytest.raises(DuplicateFactError):
        parse_database("B(a) @ 1. B(a) @ 2.", NAT)


def test_decimal_cost_annotation():
    adb = parse_database("B(a) @ 3.5.", TROPICAL)
    value = adb.lam[make_fact("B", "a")]
    assert value == TROPICAL.parse("7/2")


def test_polynomial_annotation():
    adb = parse_database("B(a) @ 2*x*y^2 + y.", POLY_NAT)
    assert POLY_NAT.fmt(adb.lam[make_fact("B", "a")]) == "y + 2*x*y^2"


def test_round_trip_program():
    text = "A(X) :- B(X).\ngoal :- R(X,Y), A(Y).\n"
    program = parse_program(text)
    assert parse_program(print_program(program)) == program


def test_round_trip_database():
    adb = parse_database("B(a) @ 3. R(a,b) @ 2. goal @ 5.", NAT)
    reparsed = parse_database(print_database(adb), NAT)
    assert reparsed.database == adb.database
    assert reparsed.lam == adb.lam


def test_round_trip_generated_programs():
    from provlog.properties import InstanceGenerator

    for seed in range(40):
        gen = InstanceGenerator(seed)
        instance = gen.generate()
        assert parse_program(print_program(instance.program)) == instance.program
        from provlog.parser import print_database
        from provlog.semirings import POLY_NAT

        adb = gen.annotate_injectively(instance, POLY_NAT)
        reparsed = parse_database(print_database(adb), POLY_NAT)
        assert reparsed.database == adb.database and reparsed.lam == adb.lam
