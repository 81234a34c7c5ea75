import warnings

import pytest

from provlog.core import make_fact, saturate
from provlog.engine import at_depth_value, at_provenance
from provlog.errors import DivergenceError, UnsupportedSemiring
from provlog.instances import (
    A_A,
    GOAL,
    MUTUAL,
    ONE_RULE_TWO_HOMS,
    SELF_LOOP,
    SHARED_FACT,
    TWO_RULES,
    eight_element_semiring,
    nine_element_semiring,
)
from provlog.models import (
    am_provenance,
    sam_monomial_oracle,
    sam_provenance,
    set_annotated_fixpoint,
)
from provlog.properties import InstanceGenerator
from provlog.semirings import NAT, POLY_NAT, POSBOOL, series_trunc
from provlog.trees import TreeQuery, enumerate_trees, tree_annotation
from provlog.values import clamp_poly


def test_am_joins_the_rule_bounds():
    adb = TWO_RULES.annotate_with(NAT)
    assert am_provenance(TWO_RULES.program, adb, GOAL) == 3


def test_am_sums_homomorphisms_within_a_rule():
    adb = ONE_RULE_TWO_HOMS.annotate_with(NAT)
    assert am_provenance(ONE_RULE_TWO_HOMS.program, adb, GOAL) == 4


def test_sam_collects_distinct_values():
    adb = TWO_RULES.annotate_with(NAT)
    assert sam_provenance(TWO_RULES.program, adb, GOAL) == 5
    adb2 = ONE_RULE_TWO_HOMS.annotate_with(NAT)
    assert sam_provenance(ONE_RULE_TWO_HOMS.program, adb2, GOAL) == 2


def test_model_semantics_on_mutual_recursion_series():
    series = series_trunc(5)
    adb = MUTUAL.annotate_with(series)
    x = series.variable("x")
    assert am_provenance(MUTUAL.program, adb, A_A) == x
    assert sam_provenance(MUTUAL.program, adb, A_A) == x


def test_am_requires_join_structure():
    eight = eight_element_semiring()
    adb = TWO_RULES.annotate_with(eight, {
        make_fact("A", "a"): "c", make_fact("B", "a"): "e"})
    with pytest.raises(UnsupportedSemiring):
        am_provenance(TWO_RULES.program, adb, GOAL)


def test_am_delegates_on_idempotent_semirings():
    adb = TWO_RULES.annotate_injectively(POSBOOL)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert POSBOOL.eq(am_provenance(TWO_RULES.program, adb, GOAL),
                          at_provenance(TWO_RULES.program, adb, GOAL))


def test_am_nine_element_regression():
    nine = nine_element_semiring()
    adb = SHARED_FACT.annotate_with(nine)
    assert am_provenance(SHARED_FACT.program, adb, GOAL) == "a"
    # The value is not a carrier multiple of the necessary fact's annotation.
    assert nine.divide("a", "d") is None


def test_sam_divergence_on_growing_sets():
    adb = SELF_LOOP.annotate_injectively(POLY_NAT)
    with pytest.raises(DivergenceError):
        sam_provenance(SELF_LOOP.program, adb, A_A, cap=32)


def test_sam_not_entailed_is_zero():
    adb = TWO_RULES.annotate_with(NAT)
    assert sam_provenance(TWO_RULES.program, adb, make_fact("Z")) == 0
    assert am_provenance(TWO_RULES.program, adb, make_fact("Z")) == 0


def test_sam_monomial_oracle_clamps():
    series = series_trunc(5)
    adb = MUTUAL.annotate_with(series)
    clamped = sam_monomial_oracle(MUTUAL.program, adb, A_A, depth_cap=8)
    assert clamped == series.variable("x")
    poly = series.parse("2*x*y + y")
    assert clamp_poly(poly) == series.parse("x*y + y")
    assert clamp_poly(series.zero) == series.zero


@pytest.mark.parametrize("seed", range(25))
def test_am_sam_at_coincide_on_posbool(seed):
    gen = InstanceGenerator(seed, max_facts=5, max_rules=4)
    instance = gen.generate()
    adb = gen.annotate_injectively(instance, POSBOOL)
    derivable = sorted(saturate(instance.program, adb.database))
    for fact in derivable[:3]:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            at = at_provenance(instance.program, adb, fact)
        assert POSBOOL.eq(am_provenance(instance.program, adb, fact), at)
        assert POSBOOL.eq(sam_provenance(instance.program, adb, fact), at)


@pytest.mark.parametrize("seed", range(20))
def test_monomial_support_and_clamp_relations(seed):
    # On injectively annotated series: the least-model value has the same
    # monomial support as the all-derivation value, and the value-set sum
    # equals the coefficient-clamped all-derivation value.
    gen = InstanceGenerator(seed, max_facts=4, max_rules=3)
    instance = gen.generate()
    series = series_trunc(8)
    adb = gen.annotate_injectively(instance, series)
    derivable = sorted(saturate(instance.program, adb.database))
    for fact in derivable[:2]:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                at = at_provenance(instance.program, adb, fact, cap=64)
            am = am_provenance(instance.program, adb, fact)
            sam = sam_provenance(instance.program, adb, fact)
        except (DivergenceError, UnsupportedSemiring):
            continue
        assert set(am.monomials()) == set(at.monomials())
        assert sam == clamp_poly(at)
        assert series.leq(am, at)
        assert series.leq(sam, at)


@pytest.mark.parametrize("seed", range(20))
def test_sam_values_match_tree_annotations(seed):
    # Every accumulated value is the annotation of some derivation, and
    # every repeat-free derivation's annotation is accumulated.
    gen = InstanceGenerator(seed, max_facts=4, max_rules=3)
    instance = gen.generate()
    adb = gen.annotate_injectively(instance, series_trunc(8))
    semiring = adb.semiring
    try:
        interp = set_annotated_fixpoint(instance.program, adb, cap=512)
    except DivergenceError:
        return
    from provlog.errors import SizeLimitError

    for fact, values in sorted(interp.mu_set.items(), key=lambda kv: str(kv[0]))[:3]:
        try:
            trees = list(enumerate_trees(TreeQuery(
                instance.program, adb, fact, kind="non_recursive",
                node_budget=20_000)))
        except SizeLimitError:
            continue
        tree_values = {tree_annotation(t, semiring, adb.lam) for t in trees}
        assert tree_values <= values
        # Annotations of deeper derivations are accumulated as well.
        try:
            capped = list(enumerate_trees(TreeQuery(
                instance.program, adb, fact, kind="all",
                depth_cap=len(interp.mu_set) + 1, node_budget=20_000)))
        except SizeLimitError:
            continue
        deep = {tree_annotation(t, semiring, adb.lam) for t in capped}
        assert deep <= values
