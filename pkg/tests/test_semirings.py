import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from provlog.errors import (
    AxiomViolation,
    InfiniteCoefficientInNonContinuousTarget,
    UnboundVariable,
)
from provlog.instances import (
    NINE_ELEMENT_TABLE,
    eight_element_semiring,
    nine_element_semiring,
)
from provlog.semirings import (
    BOOL,
    NAT,
    NAT_INF,
    POLY_BOOL,
    POLY_NAT,
    POSBOOL,
    TROPICAL,
    eval_valuation,
    load_table_semiring,
    natural_order_leq,
    parse_poly,
    series_trunc,
    validate_semiring,
)
from provlog.values import INF

ALL_BUILTINS = [BOOL, NAT, NAT_INF, TROPICAL, POSBOOL, POLY_NAT, POLY_BOOL,
                series_trunc(5)]


@pytest.mark.parametrize("handle", ALL_BUILTINS, ids=lambda h: h.id)
def test_builtin_laws_hold(handle):
    report = validate_semiring(handle, sample_budget=200)
    assert report.ok, report.violations


def test_builtin_flags_match_expectations():
    assert NAT.flags.positive and not NAT.flags.plus_idempotent
    assert not NAT.flags.omega_continuous
    assert TROPICAL.flags.plus_idempotent and TROPICAL.flags.absorptive
    assert POSBOOL.flags.plus_idempotent and POSBOOL.flags.times_idempotent
    assert POSBOOL.flags.absorptive and POSBOOL.flags.positive
    assert POLY_NAT.flags.positive and not POLY_NAT.flags.plus_idempotent
    assert not POLY_NAT.flags.times_idempotent


def test_observed_flags_report_witnesses():
    report = validate_semiring(NAT, sample_budget=100)
    ok, witness = report.observed_flags["absorptive"]
    assert not ok and witness is not None
    a, b = witness
    assert a * b + a != a


def test_natural_order_counting():
    assert natural_order_leq(NAT, 3, 5) is True
    assert natural_order_leq(NAT, 5, 3) is False


def test_natural_order_tropical_is_reversed():
    t = TROPICAL
    assert t.leq(t.parse("5"), t.parse("3"))
    assert not t.leq(t.parse("3"), t.parse("5"))
    assert t.leq(t.zero, t.parse("3"))  # zero (infinite cost) is the bottom


def test_natural_order_posbool():
    x, y = POSBOOL.variable("x"), POSBOOL.variable("y")
    assert POSBOOL.leq(POSBOOL.mul(x, y), x)
    assert not POSBOOL.leq(x, POSBOOL.mul(x, y))


def test_natural_order_polynomials():
    x = parse_poly("x")
    x_plus_y = parse_poly("x + y")
    assert POLY_NAT.leq(x, x_plus_y) is True
    assert POLY_NAT.leq(x_plus_y, x) is False


def test_posbool_absorption():
    x, y = POSBOOL.variable("x"), POSBOOL.variable("y")
    assert POSBOOL.add(x, POSBOOL.mul(x, y)) == x


def test_eval_valuation_expands_by_hand():
    # Oracle: 2xy + y at x=3, y=1 is 3*1 + 3*1 + 1 = 7.
    poly = parse_poly("2*x*y + y")
    assert eval_valuation(poly, NAT, {"x": 3, "y": 1}) == 7


def test_eval_valuation_identity():
    poly = parse_poly("2*x*y + y")
    image = eval_valuation(poly, POLY_NAT,
                           {"x": POLY_NAT.variable("x"), "y": POLY_NAT.variable("y")})
    assert image == poly


def test_eval_valuation_tropical_bag_query():
    # The two-match query polynomial under the cost valuation: min(5+1, 2+10).
    poly = parse_poly("r1*b2 + r2*b1")
    nu = {"r1": TROPICAL.parse("5"), "b2": TROPICAL.parse("1"),
          "r2": TROPICAL.parse("2"), "b1": TROPICAL.parse("10")}
    assert eval_valuation(poly, TROPICAL, nu) == TROPICAL.parse("6")


def test_eval_valuation_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_valuation(parse_poly("x"), NAT, {})


def test_infinite_coefficient_needs_continuity():
    series = series_trunc(4)
    poly = series.parse("inf*x")
    assert eval_valuation(poly, NAT_INF, {"x": 2}) is INF
    assert eval_valuation(poly, TROPICAL, {"x": TROPICAL.parse("3")}) == TROPICAL.parse("3")
    with pytest.raises(InfiniteCoefficientInNonContinuousTarget):
        eval_valuation(poly, NAT, {"x": 2})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 1_000_000), st.data())
def test_eval_valuation_is_a_homomorphism(seed, data):
    rng = random.Random(seed)
    target = data.draw(st.sampled_from([NAT, NAT_INF, TROPICAL, POSBOOL]))
    p = POLY_NAT.sample(rng)
    q = POLY_NAT.sample(rng)
    nu = {name: target.sample(rng) for name in ("u", "v", "w")}
    left = eval_valuation(POLY_NAT.add(p, q), target, nu)
    right = target.add(eval_valuation(p, target, nu), eval_valuation(q, target, nu))
    assert target.eq(left, right)
    left = eval_valuation(POLY_NAT.mul(p, q), target, nu)
    right = target.mul(eval_valuation(p, target, nu), eval_valuation(q, target, nu))
    assert target.eq(left, right)


def test_series_truncation_drops_high_degrees():
    series = series_trunc(2)
    x, y = series.variable("x"), series.variable("y")
    cube = series.mul(series.mul(x, y), y)
    assert cube == series.zero


def test_nine_element_table_loads_and_validates():
    handle = nine_element_semiring()
    report = validate_semiring(handle)
    assert report.ok and report.exhaustive
    assert handle.flags.omega_continuous
    assert handle.flags.has_glb
    # The documented order: b and c sit below a, everything below inf.
    assert handle.leq("c", "a") and handle.leq("b", "a")
    assert all(handle.glb2(a, b) is not None
               for a in handle.carrier for b in handle.carrier)


def test_eight_element_table_lacks_glbs():
    handle = eight_element_semiring()
    assert validate_semiring(handle).ok
    assert not handle.flags.has_glb
    assert handle.glb2("a", "b") is None
    # c and e are both lower bounds of {a, b} but are incomparable.
    assert handle.leq("c", "a") and handle.leq("c", "b")
    assert handle.leq("e", "a") and handle.leq("e", "b")
    assert not handle.leq("c", "e") and not handle.leq("e", "c")


def test_corrupted_table_is_rejected_with_witness():
    broken = {
        "carrier": ["0", "1", "p", "q"],
        "zero": "0",
        "one": "1",
        # p+q = p but q+p = q: not commutative, hence not associative either.
        "add": {"p,q": "p", "q,p": "q", "p,p": "p", "q,q": "q", "1,1": "1",
                "p,1": "p", "q,1": "q"},
        "mul": {"p,q": "p", "p,p": "p", "q,q": "q"},
    }
    with pytest.raises(AxiomViolation) as err:
        load_table_semiring(broken)
    assert err.value.witness


def test_table_format_defaults():
    handle = load_table_semiring(NINE_ELEMENT_TABLE)
    assert handle.add("d", "e") == "inf"  # default cell
    assert handle.add("0", "d") == "d"  # identity autofilled
    assert handle.mul("d", "e") == "b"  # explicit cell (symmetrized)
    assert handle.mul("e", "d") == "b"


def test_join_fold_on_tables():
    handle = nine_element_semiring()
    assert handle.join(["b", "c"]) == "a"
    assert handle.join(["b"]) == "b"
    eight = eight_element_semiring()
    assert eight.join2("a", "b") == "inf"


def test_malformed_table_documents():
    from provlog.errors import MalformedSpec

    with pytest.raises(MalformedSpec):
        load_table_semiring({"carrier": ["0", "1"], "zero": "0"})  # no one
    with pytest.raises(MalformedSpec):
        load_table_semiring({"carrier": ["0", "1"], "zero": "0", "one": "1",
                             "add": {"1,1": "2"}, "mul": {}})  # leaves carrier
    with pytest.raises(MalformedSpec):
        load_table_semiring({"carrier": ["0", "1", "p"], "zero": "0",
                             "one": "1", "add": {}, "mul": {}})  # missing cells


def test_print_parse_identity_on_sampled_values():
    import random

    rng = random.Random(4)
    for handle in ALL_BUILTINS:
        for _ in range(30):
            value = handle.sample(rng)
            assert handle.eq(handle.parse(handle.fmt(value)), value), handle.id
