import warnings

import pytest

from provlog.core import Database, make_fact, saturate
from provlog.errors import NotEntailed
from provlog.instances import GOAL, LADDER, SHARED_FACT, SHORTCUT, A_A
from provlog.parser import parse_program
from provlog.properties import (
    COUNTEREXAMPLES,
    EXPECTED_MATRIX,
    InstanceGenerator,
    PROPERTIES,
    SEMANTICS,
    check_definition3,
    check_domain,
    check_property,
    necessary_facts,
    run_table1,
    usable_facts,
    usable_facts_oracle,
)
from provlog.semirings import NAT, POSBOOL, TROPICAL
from provlog.trees import TreeQuery, enumerate_trees

warnings.simplefilter("ignore")


def test_necessary_facts_shared_instance():
    nec = necessary_facts(SHARED_FACT.program, SHARED_FACT.database, GOAL)
    assert nec == {make_fact("A", "a")}


def test_necessary_facts_single_chain():
    program = parse_program("A(X) :- B(X).")
    database = Database(frozenset({make_fact("B", "a")}))
    assert necessary_facts(program, database, make_fact("A", "a")) == {
        make_fact("B", "a")}


def test_necessary_facts_two_routes_empty():
    # Oracle: removing either fact leaves the other derivation intact.
    program = parse_program("goal :- A(X).\ngoal :- B(X).")
    database = Database(frozenset({make_fact("A", "a"), make_fact("B", "a")}))
    assert necessary_facts(program, database, GOAL) == set()


def test_necessary_facts_requires_entailment():
    with pytest.raises(NotEntailed):
        necessary_facts(LADDER.program, LADDER.database, make_fact("A", "z"))


def test_usable_facts_ladder():
    usable = usable_facts(LADDER.program, LADDER.database, A_A)
    assert usable == {make_fact("C", "a"), make_fact("D", "a"),
                      make_fact("E", "a"), make_fact("F", "a")}


def test_usable_facts_disconnected_fact():
    program = parse_program("A(X) :- B(X).")
    database = Database(frozenset({make_fact("B", "a"), make_fact("Z", "q")}))
    usable = usable_facts(program, database, make_fact("A", "a"))
    assert make_fact("Z", "q") not in usable
    assert make_fact("B", "a") in usable


def test_usable_fact_reachable_only_through_a_repeat():
    # The marked fact occurs only in derivations that revisit a fact on a
    # branch, so leaf unions over repeat-free derivations undercount it;
    # the marking construction still finds it.
    program = parse_program("""
        A :- s.
        Ap :- A, b.
        A :- Ap.
        goal :- A.
    """)
    database = Database(frozenset({make_fact("s"), make_fact("b")}))
    usable = usable_facts(program, database, GOAL)
    assert usable == {make_fact("s"), make_fact("b")}
    adb_facts = database
    nr_query = TreeQuery(program, adb_facts, GOAL, kind="non_recursive")
    nr_leaves = {leaf for tree in enumerate_trees(nr_query)
                 for leaf in tree.leaves()}
    assert make_fact("b") not in nr_leaves  # strictly finer than usability


@pytest.mark.parametrize("seed", range(30))
def test_usable_facts_against_tag_oracle(seed):
    gen = InstanceGenerator(seed, max_facts=5, max_rules=4)
    instance = gen.generate()
    derivable = sorted(saturate(instance.program, instance.database))
    if not derivable:
        return
    target = derivable[seed % len(derivable)]
    assert usable_facts(instance.program, instance.database, target) == \
        usable_facts_oracle(instance.program, instance.database, target)


@pytest.mark.parametrize("seed", range(12))
def test_usable_facts_against_depth_bounded_leaf_union(seed):
    # Database facts usable for a target appear as leaves of derivations of
    # depth at most twice the derivable-fact count.
    from provlog.errors import SizeLimitError

    gen = InstanceGenerator(seed, max_facts=4, max_rules=3)
    instance = gen.generate()
    derivable = sorted(saturate(instance.program, instance.database))
    if not derivable:
        return
    target = derivable[seed % len(derivable)]
    try:
        trees = list(enumerate_trees(TreeQuery(
            instance.program, instance.database, target, kind="all",
            depth_cap=2 * len(derivable), node_budget=40_000)))
    except SizeLimitError:
        return
    leaf_union = {leaf for t in trees for leaf in t.leaves()}
    assert usable_facts(instance.program, instance.database, target) == leaf_union


@pytest.mark.parametrize("semantics", SEMANTICS)
def test_definition3_on_fixed_instances(semantics):
    gen = InstanceGenerator(11)
    for pool in (NAT, TROPICAL, POSBOOL):
        adb = gen.annotate(SHORTCUT, pool)
        check = check_definition3(semantics, SHORTCUT.program, adb)
        assert check.verdict in ("satisfied", "inapplicable")


def test_definition3_tropical_entailed_value():
    adb = SHORTCUT.annotate_with(TROPICAL, {
        make_fact("A", "a"): "3", make_fact("C", "a"): "7"})
    from provlog.properties import evaluate_semantics

    value = evaluate_semantics("at", SHORTCUT.program, adb, GOAL)
    assert not TROPICAL.eq(value, TROPICAL.zero)
    assert TROPICAL.eq(value, TROPICAL.parse("3"))


@pytest.mark.parametrize("cell", sorted(COUNTEREXAMPLES), ids=lambda c: f"{c[0]}/{c[1]}")
def test_every_counterexample_reproduces(cell):
    check = COUNTEREXAMPLES[cell]()
    assert check.verdict == "violated", (cell, check.detail)
    assert check.witness is not None
    assert check.witness.replay() is True  # violations replay


@pytest.mark.parametrize("semantics", SEMANTICS)
def test_domain_declarations(semantics):
    for prop in ("any-semiring", "any-omega-semiring"):
        check = check_domain(prop, semantics)
        expected = EXPECTED_MATRIX[prop][semantics]
        assert (check.verdict == "satisfied") == expected


@pytest.mark.parametrize("prop", [p for p in PROPERTIES
                                  if p not in ("any-semiring", "any-omega-semiring")])
def test_checkmarked_cells_hold_on_a_short_corpus(prop):
    for semantics in SEMANTICS:
        if not EXPECTED_MATRIX[prop][semantics]:
            continue
        for seed in range(25):
            check = check_property(prop, semantics, seed=seed)
            assert check.verdict != "violated", (
                prop, semantics, seed,
                check.witness.description if check.witness else "")


def test_matrix_smoke_run_single_process():
    report = run_table1(trials=6, seed=3, workers=1)
    assert report.ok, [str(c) for c in report.mismatches()]
    text = report.format_text()
    assert "deletion" in text and "yes" in text and "no" in text
    doc = report.to_document()
    assert doc["ok"] is True


def test_property_constructions_never_mutate_inputs():
    # Insertion/deletion checks build fresh databases; the shared fixtures
    # must come out untouched.
    before = SHORTCUT.database.facts
    for cell in (("insertion", "mdt"), ("deletion", "mdt")):
        COUNTEREXAMPLES[cell]()
    assert SHORTCUT.database.facts == before


def test_meta_implication_feeding_algebra_consistency():
    # For semantics that are grounding-invariant, joint-and-alternative use
    # together with parsimony force algebra consistency; the expected matrix
    # must respect that implication, and the corpus bears out each premise
    # for the two semantics concerned (at, nrt).
    for semantics in ("at", "nrt"):
        premises = (EXPECTED_MATRIX["joint-alt-use"][semantics]
                    and EXPECTED_MATRIX["parsimony"][semantics])
        if premises:
            assert EXPECTED_MATRIX["algebra-consistency"][semantics]
    for semantics in ("at", "nrt"):
        for seed in range(10):
            for prop in ("joint-alt-use", "parsimony", "algebra-consistency"):
                check = check_property(prop, semantics, seed=seed)
                assert check.verdict != "violated"
