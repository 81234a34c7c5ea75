"""Executable property checks for the six provenance semantics.

Each semantics is checked against fifteen behavioural properties; the
expected verdict matrix is reproduced on demand: checkmarked cells must
survive a random corpus with zero violations, while every blank cell must
reproduce its dedicated hand-built counterexample.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .core import (
    Atom,
    Database,
    Fact,
    Program,
    Rule,
    const,
    entails,
    ground,
    homomorphisms,
    make_fact,
    saturate,
)
from .engine import (
    AnnotatedDatabase,
    at_provenance,
    optimized_eval,
    sne_provenance,
    ucq_provenance,
)
from .errors import (
    DivergenceError,
    MatrixMismatch,
    NotEntailed,
    SizeLimitError,
    UnsupportedSemiring,
)
from .instances import Instance
from .models import am_provenance, sam_provenance
from .semirings import (
    NAT,
    NAT_INF,
    NAT_INF_PRIME,
    POLY_NAT,
    POSBOOL,
    Semiring,
    TROPICAL,
    eval_valuation,
    embed_nat_inf_into_prime,
    series_trunc,
)
from .values import poly_partial_eval_zero

SEMANTICS = ("at", "nrt", "mdt", "hmdt", "am", "sam")

NRT_NODE_BUDGET = 20_000
HARNESS_ROUND_CAP = 48


def evaluate_semantics(semantics: str, program: Program, adb: AnnotatedDatabase,
                       fact: Fact, cap: Optional[int] = None):
    """Uniform entry point; propagates divergence and support errors."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if semantics == "at":
            return at_provenance(program, adb, fact,
                                 cap=cap if cap is not None else HARNESS_ROUND_CAP)
        if semantics == "nrt":
            from .trees import TreeQuery, enumerate_trees, tree_annotation

            if adb.semiring.flags.absorptive and adb.semiring.flags.omega_continuous:
                return at_provenance(program, adb, fact,
                                     cap=cap if cap is not None else HARNESS_ROUND_CAP)
            query = TreeQuery(program, adb, fact, kind="non_recursive",
                              node_budget=NRT_NODE_BUDGET)
            return adb.semiring.sum(
                tree_annotation(t, adb.semiring, adb.lam)
                for t in enumerate_trees(query))
        if semantics == "mdt":
            return optimized_eval(program, adb, fact)
        if semantics == "hmdt":
            return sne_provenance(program, adb, fact)
        if semantics == "am":
            return am_provenance(program, adb, fact,
                                 cap=cap if cap is not None else HARNESS_ROUND_CAP)
        if semantics == "sam":
            return sam_provenance(program, adb, fact)
    raise ValueError(f"unknown semantics {semantics!r}")


# ---------------------------------------------------------------------------
# Fact-role helpers
# ---------------------------------------------------------------------------

def necessary_facts(program: Program, database: Database, fact: Fact) -> set:
    """Database facts whose removal breaks entailment of `fact`."""
    if not entails(program, database, fact):
        raise NotEntailed(str(fact))
    out = set()
    for beta in database.facts:
        rest = Database(database.facts - {beta})
        if not entails(program, rest, fact):
            out.add(beta)
    return out


_MARK = "__u"


def _adorn(predicate: str) -> str:
    return predicate + _MARK


def adornment_usable(program: Program, database: Database,
                     alpha: Fact, target: Fact) -> bool:
    """Does `alpha` occur in some derivation of `target`?

    Decided without enumerating trees: a marked copy of `alpha` is added,
    every rule gets variants with one marked body atom (and optionally a
    marked head), and the question becomes entailment of the marked target.
    """
    marked_alpha = Atom(_adorn(alpha.predicate), alpha.args)
    facts = Database(database.facts | {marked_alpha})
    extra: list[Rule] = []
    for rule in program.rules:
        for i, atom in enumerate(rule.body):
            body = list(rule.body)
            body[i] = Atom(_adorn(atom.predicate), atom.args)
            extra.append(Rule(rule.head, tuple(body)))
            extra.append(Rule(Atom(_adorn(rule.head.predicate), rule.head.args),
                              tuple(body)))
    augmented = Program(tuple(program.rules) + tuple(extra))
    return entails(augmented, facts, Atom(_adorn(target.predicate), target.args))


def usable_facts(program: Program, database: Database, target: Fact) -> set:
    return {alpha for alpha in database.facts
            if adornment_usable(program, database, alpha, target)}


def usable_facts_oracle(program: Program, database: Database, target: Fact) -> set:
    """Independent check: ground forward chaining with a used-the-fact tag."""
    out = set()
    for beta in database.facts:
        used = {f: f == beta for f in database.facts}
        known = set(database.facts)
        changed = True
        while changed:
            changed = False
            for rule in program.rules:
                for hom in homomorphisms(rule.body, known):
                    head = hom.apply(rule.head)
                    touches = any(used.get(hom.apply(a), False) for a in rule.body)
                    if head not in known:
                        known.add(head)
                        used[head] = touches
                        changed = True
                    elif touches and not used.get(head, False):
                        used[head] = True
                        changed = True
        if used.get(target, False):
            out.add(beta)
    return out


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

@dataclass
class InstanceGenerator:
    """Deterministic small-instance sampler for the property corpus."""

    seed: int
    max_predicates: int = 4
    max_constants: int = 4
    max_rules: int = 6
    max_facts: int = 6
    max_body: int = 3

    def __post_init__(self):
        self.rng = random.Random(self.seed)

    def _schema(self):
        n_preds = self.rng.randint(2, self.max_predicates)
        arities = {f"P{i}": self.rng.randint(0 if i else 1, 2)
                   for i in range(n_preds)}
        constants = [f"c{i}" for i in range(self.rng.randint(1, self.max_constants))]
        return arities, constants

    def _random_facts(self, arities, constants) -> set:
        facts = set()
        for _ in range(self.rng.randint(1, self.max_facts)):
            p = self.rng.choice(sorted(arities))
            facts.add(make_fact(p, *(self.rng.choice(constants)
                                     for _ in range(arities[p]))))
        return facts

    def _random_rule(self, arities, constants) -> Optional[Rule]:
        from .core import var

        body = []
        for _ in range(self.rng.randint(1, self.max_body)):
            p = self.rng.choice(sorted(arities))
            atom = Atom(p, tuple(self._term(["X", "Y", "Z"], constants)
                                 for _ in range(arities[p])))
            if atom not in body:  # conjunctions are atom sets
                body.append(atom)
        body_vars = sorted({v for a in body for v in a.variables()})
        head_pred = self.rng.choice(sorted(arities))
        head_args = []
        for _ in range(arities[head_pred]):
            if body_vars and self.rng.random() < 0.8:
                head_args.append(var(self.rng.choice(body_vars)))
            else:
                head_args.append(const(self.rng.choice(constants)))
        return Rule(Atom(head_pred, tuple(head_args)), tuple(body))

    def _term(self, variables, constants):
        from .core import var

        if self.rng.random() < 0.7:
            return var(self.rng.choice(variables))
        return const(self.rng.choice(constants))

    def _var(self, body_vars):
        from .core import var

        return var(self.rng.choice(body_vars))

    def generate(self) -> Instance:
        arities, constants = self._schema()
        facts = self._random_facts(arities, constants)
        rules = []
        for _ in range(self.rng.randint(1, self.max_rules)):
            rule = self._random_rule(arities, constants)
            if rule is not None:
                rules.append(rule)
        return Instance(
            name=f"random-{self.seed}",
            program=Program(tuple(rules)),
            database=Database(frozenset(facts)),
            annotations={},
        )

    def generate_ucq_defined(self) -> tuple:
        """A program whose rules all share a fresh head, plus its database."""
        arities, constants = self._schema()
        facts = self._random_facts(arities, constants)
        head_arity = self.rng.randint(0, 1)
        rules = []
        for _ in range(self.rng.randint(1, self.max_rules)):
            body = []
            for _ in range(self.rng.randint(1, self.max_body)):
                p = self.rng.choice(sorted(arities))
                atom = Atom(p, tuple(self._term(["X", "Y", "Z"], constants)
                                     for _ in range(arities[p])))
                if atom not in body:
                    body.append(atom)
            body_vars = sorted({v for a in body for v in a.variables()})
            if head_arity and not body_vars:
                continue
            head_args = ()
            if head_arity:
                head_args = (self._var(body_vars),)
            try:
                rules.append(Rule(Atom("Q", head_args), tuple(body)))
            except Exception:
                continue
        instance = Instance(
            name=f"ucq-{self.seed}",
            program=Program(tuple(rules)),
            database=Database(frozenset(facts)),
            annotations={})
        return instance, head_arity, constants

    def annotate(self, instance: Instance, semiring: Semiring) -> AnnotatedDatabase:
        lam = {f: semiring.sample_nonzero(self.rng)
               for f in instance.database.facts}
        return AnnotatedDatabase(instance.database, semiring, lam)

    def annotate_injectively(self, instance: Instance, semiring) -> AnnotatedDatabase:
        lam = {}
        for i, fact in enumerate(sorted(instance.database.facts)):
            lam[fact] = semiring.variable(f"x{i}")
        return AnnotatedDatabase(instance.database, semiring, lam)

# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    """A replayable violation: both sides plus a closure recomputing them."""

    description: str
    lhs: str
    rhs: str
    replay: Callable[[], bool] = field(repr=False, default=lambda: True)


@dataclass
class PropertyCheck:
    property_id: str
    semantics_id: str
    instance: str
    verdict: str  # "satisfied" | "violated" | "inapplicable"
    witness: Optional[Witness] = None
    detail: str = ""


def _check(property_id, semantics, instance_name, ok: Optional[bool],
           witness: Optional[Witness] = None, detail: str = "") -> PropertyCheck:
    if ok is None:
        return PropertyCheck(property_id, semantics, instance_name,
                             "inapplicable", None, detail)
    if ok:
        return PropertyCheck(property_id, semantics, instance_name, "satisfied")
    return PropertyCheck(property_id, semantics, instance_name, "violated",
                         witness, detail)


_INAPPLICABLE = (DivergenceError, UnsupportedSemiring, SizeLimitError)

FRESH_GOAL = make_fact("prop_goal")


def _fresh_goal_program(program: Program, bodies: Iterable[tuple]) -> Program:
    """Extend a program with ground rules `body -> prop_goal`."""
    extra = tuple(Rule(FRESH_GOAL, tuple(body)) for body in bodies)
    return Program(tuple(program.rules) + extra)


def check_definition3(semantics: str, program: Program, adb: AnnotatedDatabase,
                      sample_cap: int = 48) -> PropertyCheck:
    """Non-entailed facts map to zero; on positive semirings, only they do."""
    semiring = adb.semiring
    derivable = saturate(program, adb.database)
    domain = sorted(adb.database.domain()) or ["c0"]
    arities = {}
    for fact in adb.database.facts:
        arities[fact.predicate] = fact.arity
    for rule in program.rules:
        arities[rule.head.predicate] = rule.head.arity
        for a in rule.body:
            arities.setdefault(a.predicate, a.arity)
    candidates = []
    for predicate, arity in sorted(arities.items()):
        for combo in itertools.product(domain, repeat=arity):
            candidates.append(make_fact(predicate, *combo))
            if len(candidates) >= sample_cap:
                break
    try:
        for fact in candidates:
            value = evaluate_semantics(semantics, program, adb, fact)
            entailed = fact in derivable
            if not entailed and not semiring.eq(value, semiring.zero):
                return _check("definition-3", semantics, "corpus", False, Witness(
                    f"non-entailed {fact} has non-zero value",
                    semiring.fmt(value), semiring.fmt(semiring.zero),
                    lambda s=semantics, p=program, d=adb, f=fact: not d.semiring.eq(
                        evaluate_semantics(s, p, d, f), d.semiring.zero)))
            if entailed and semiring.flags.positive and semiring.eq(value, semiring.zero):
                return _check("definition-3", semantics, "corpus", False, Witness(
                    f"entailed {fact} has zero value on a positive semiring",
                    semiring.fmt(value), "non-zero",
                    lambda s=semantics, p=program, d=adb, f=fact: d.semiring.eq(
                        evaluate_semantics(s, p, d, f), d.semiring.zero)))
    except _INAPPLICABLE as exc:
        return _check("definition-3", semantics, "corpus", None, detail=str(exc))
    return _check("definition-3", semantics, "corpus", True)


def _values_equal(semiring, a, b) -> bool:
    return semiring.eq(a, b)


def _compare(property_id, semantics, name, semiring, lhs, rhs, replay,
             mode: str = "eq") -> PropertyCheck:
    if mode == "eq":
        ok = semiring.eq(lhs, rhs)
    else:  # "leq": lhs must sit below rhs in the natural order
        ok = semiring.leq(lhs, rhs)
        if ok is None:
            return _check(property_id, semantics, name, None,
                          detail="natural order undecided")
    witness = None
    if not ok:
        witness = Witness(f"{property_id} fails on {name}",
                          semiring.fmt(lhs), semiring.fmt(rhs), replay)
    return _check(property_id, semantics, name, bool(ok), witness)


# -- individual checkers (each builds its construction, then compares) -------

def check_algebra_consistency(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance, head_arity, constants = gen.generate_ucq_defined()
    if not instance.program.rules:
        return _check("algebra-consistency", semantics, instance.name, None,
                      detail="empty program")
    semiring = gen.rng.choice([NAT, TROPICAL, POSBOOL, POLY_NAT])
    adb = gen.annotate(instance, semiring)
    answer = (gen.rng.choice(constants),) if head_arity else ()
    target = make_fact("Q", *answer)
    binding = {}
    bodies = []
    for rule in instance.program.rules:
        sub = {t.name: answer[i] for i, t in enumerate(rule.head.args) if t.is_var}
        bodies.append(tuple(a.substitute(sub) for a in rule.body))
    try:
        lhs = evaluate_semantics(semantics, instance.program, adb, target)
        rhs = ucq_provenance(bodies, adb)
    except _INAPPLICABLE as exc:
        return _check("algebra-consistency", semantics, instance.name, None,
                      detail=str(exc))
    return _compare("algebra-consistency", semantics, instance.name, semiring,
                    lhs, rhs,
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, instance.program, adb, target),
                        ucq_provenance(bodies, adb)))


def boolean_provenance_by_subsets(program: Program, adb: AnnotatedDatabase,
                                  target: Fact):
    """Disjunction over entailing database subsets (exponential oracle)."""
    semiring = adb.semiring
    total = semiring.zero
    facts = sorted(adb.database.facts)
    for r in range(len(facts) + 1):
        for subset in itertools.combinations(facts, r):
            if entails(program, Database(frozenset(subset)), target):
                clause = semiring.prod(adb.lam[f] for f in subset)
                total = semiring.add(total, clause)
    return total


def check_boolean_compat(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    adb = gen.annotate_injectively(instance, POSBOOL)
    derivable = sorted(saturate(instance.program, adb.database))
    if not derivable:
        return _check("boolean-compat", semantics, instance.name, None,
                      detail="nothing derivable")
    target = gen.rng.choice(derivable)
    try:
        lhs = evaluate_semantics(semantics, instance.program, adb, target)
    except _INAPPLICABLE as exc:
        return _check("boolean-compat", semantics, instance.name, None,
                      detail=str(exc))
    rhs = boolean_provenance_by_subsets(instance.program, adb, target)
    return _compare("boolean-compat", semantics, instance.name, POSBOOL,
                    lhs, rhs,
                    lambda: not POSBOOL.eq(
                        evaluate_semantics(semantics, instance.program, adb, target),
                        boolean_provenance_by_subsets(instance.program, adb, target)))


def _commutation_case(property_id, semantics, gen, source, targets) -> PropertyCheck:
    instance = gen.generate()
    if property_id == "omega-hom-commutation" and semantics == "at":
        from .trees import program_is_recursive

        if program_is_recursive(instance.program):
            return _check(property_id, semantics, instance.name, None,
                          detail="recursive program: capped value is not the semantics")
    adb = gen.annotate_injectively(instance, source)
    derivable = sorted(saturate(instance.program, adb.database))
    if not derivable:
        return _check(property_id, semantics, instance.name, None,
                      detail="nothing derivable")
    target_fact = gen.rng.choice(derivable)
    target_semiring = gen.rng.choice(targets)
    nu = {}
    mapped_lam = {}
    for fact, value in adb.lam.items():
        image = target_semiring.sample_nonzero(gen.rng)
        name = value.monomials()[0][0][0]
        nu[name] = image
        mapped_lam[fact] = image
    mapped = AnnotatedDatabase(adb.database, target_semiring, mapped_lam)
    try:
        source_value = evaluate_semantics(semantics, instance.program, adb, target_fact)
        lhs = eval_valuation(source_value, target_semiring, nu)
        rhs = evaluate_semantics(semantics, instance.program, mapped, target_fact)
    except _INAPPLICABLE as exc:
        return _check(property_id, semantics, instance.name, None, detail=str(exc))
    return _compare(property_id, semantics, instance.name, target_semiring,
                    lhs, rhs,
                    lambda: not target_semiring.eq(
                        eval_valuation(
                            evaluate_semantics(semantics, instance.program, adb, target_fact),
                            target_semiring, nu),
                        evaluate_semantics(semantics, instance.program, mapped, target_fact)))


def check_hom_commutation(semantics, gen: InstanceGenerator) -> PropertyCheck:
    return _commutation_case("hom-commutation", semantics, gen,
                             POLY_NAT, [NAT, TROPICAL])


def check_omega_hom_commutation(semantics, gen: InstanceGenerator) -> PropertyCheck:
    if semantics == "at":
        # Truncation must be a no-op for the comparison to be meaningful:
        # size the degree cap from the non-recursive tree enumeration.
        instance = gen.generate()
        from .trees import TreeQuery, enumerate_trees, program_is_recursive

        if program_is_recursive(instance.program):
            return _check("omega-hom-commutation", semantics, instance.name, None,
                          detail="recursive program")
        probe = gen.annotate_injectively(instance, POLY_NAT)
        derivable = sorted(saturate(instance.program, probe.database))
        if not derivable:
            return _check("omega-hom-commutation", semantics, instance.name, None,
                          detail="nothing derivable")
        target_fact = gen.rng.choice(derivable)
        try:
            trees = list(enumerate_trees(TreeQuery(
                instance.program, probe, target_fact, kind="all",
                node_budget=NRT_NODE_BUDGET)))
        except _INAPPLICABLE as exc:
            return _check("omega-hom-commutation", semantics, instance.name, None,
                          detail=str(exc))
        max_leaves = max((sum(1 for _ in t.leaves()) for t in trees), default=1)
        source = series_trunc(max(2, max_leaves))
        adb = gen.annotate_injectively(instance, source)
        target_semiring = gen.rng.choice([NAT_INF, TROPICAL])
        nu, mapped_lam = {}, {}
        for fact, value in adb.lam.items():
            image = target_semiring.sample_nonzero(gen.rng)
            nu[value.monomials()[0][0][0]] = image
            mapped_lam[fact] = image
        mapped = AnnotatedDatabase(adb.database, target_semiring, mapped_lam)
        try:
            lhs = eval_valuation(
                evaluate_semantics("at", instance.program, adb, target_fact),
                target_semiring, nu)
            rhs = evaluate_semantics("at", instance.program, mapped, target_fact)
        except _INAPPLICABLE as exc:
            return _check("omega-hom-commutation", semantics, instance.name, None,
                          detail=str(exc))
        return _compare(
            "omega-hom-commutation", semantics, instance.name,
            target_semiring, lhs, rhs,
            lambda: not target_semiring.eq(
                eval_valuation(
                    evaluate_semantics("at", instance.program, adb, target_fact),
                    target_semiring, nu),
                evaluate_semantics("at", instance.program, mapped, target_fact)))
    return _commutation_case("omega-hom-commutation", semantics, gen,
                             POLY_NAT, [NAT, TROPICAL])


def _semiring_pool_for(semantics):
    if semantics == "am":
        return [NAT, NAT_INF, TROPICAL, POSBOOL]
    if semantics == "sam":
        return [NAT, NAT_INF, TROPICAL, POSBOOL]
    return [NAT, TROPICAL, POSBOOL, POLY_NAT]


def _pick_fact_tuples(gen, program, database, how_many, tuple_len):
    """Distinct facts per tuple and distinct tuples overall: conjunctions
    are atom sets and programs are rule sets, so repetitions would collapse
    on the program side while still multiplying on the value side."""
    derivable = sorted(saturate(program, database))
    if not derivable:
        return None
    tuples = set()
    for _ in range(how_many):
        size = gen.rng.randint(1, min(tuple_len, len(derivable)))
        tuples.add(tuple(sorted(gen.rng.sample(derivable, size))))
    return sorted(tuples)


def check_joint_alt_use(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    tuples = _pick_fact_tuples(gen, instance.program, adb.database,
                               gen.rng.randint(1, 3), 2)
    if tuples is None:
        return _check("joint-alt-use", semantics, instance.name, None,
                      detail="nothing derivable")
    extended = _fresh_goal_program(instance.program, tuples)
    try:
        lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
        rhs = semiring.sum(
            semiring.prod(
                evaluate_semantics(semantics, instance.program, adb, f)
                for f in tup)
            for tup in tuples)
    except _INAPPLICABLE as exc:
        return _check("joint-alt-use", semantics, instance.name, None, detail=str(exc))
    return _compare("joint-alt-use", semantics, instance.name, semiring, lhs, rhs,
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def check_joint_use(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    tuples = _pick_fact_tuples(gen, instance.program, adb.database, 1, 3)
    if tuples is None:
        return _check("joint-use", semantics, instance.name, None,
                      detail="nothing derivable")
    extended = _fresh_goal_program(instance.program, tuples)
    try:
        lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
        rhs = semiring.prod(
            evaluate_semantics(semantics, instance.program, adb, f)
            for f in tuples[0])
    except _INAPPLICABLE as exc:
        return _check("joint-use", semantics, instance.name, None, detail=str(exc))
    return _compare("joint-use", semantics, instance.name, semiring, lhs, rhs,
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def check_alternative_use(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    tuples = _pick_fact_tuples(gen, instance.program, adb.database,
                               gen.rng.randint(1, 3), 1)
    if tuples is None:
        return _check("alternative-use", semantics, instance.name, None,
                      detail="nothing derivable")
    extended = _fresh_goal_program(instance.program, tuples)
    try:
        lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
        rhs = semiring.sum(
            evaluate_semantics(semantics, instance.program, adb, tup[0])
            for tup in tuples)
    except _INAPPLICABLE as exc:
        return _check("alternative-use", semantics, instance.name, None,
                      detail=str(exc))
    return _compare("alternative-use", semantics, instance.name, semiring, lhs, rhs,
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def check_self(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    alpha = gen.rng.choice(sorted(adb.database.facts))
    try:
        value = evaluate_semantics(semantics, instance.program, adb, alpha)
    except _INAPPLICABLE as exc:
        return _check("self", semantics, instance.name, None, detail=str(exc))
    return _compare("self", semantics, instance.name, semiring,
                    adb.lam[alpha], value,
                    lambda: semiring.leq(
                        adb.lam[alpha],
                        evaluate_semantics(semantics, instance.program, adb, alpha))
                    is False,
                    mode="leq")


def check_parsimony(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    try:
        grounded = ground(instance.program, adb.database, cap=200_000)
    except SizeLimitError:
        return _check("parsimony", semantics, instance.name, None,
                      detail="grounding too large")
    ground_heads = {rule.head for rule in grounded.rules}
    loose = [f for f in sorted(adb.database.facts) if f not in ground_heads]
    if not loose:
        return _check("parsimony", semantics, instance.name, None,
                      detail="every database fact occurs in a ground head")
    alpha = gen.rng.choice(loose)
    try:
        value = evaluate_semantics(semantics, instance.program, adb, alpha)
    except _INAPPLICABLE as exc:
        return _check("parsimony", semantics, instance.name, None, detail=str(exc))
    return _compare("parsimony", semantics, instance.name, semiring,
                    value, adb.lam[alpha],
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, instance.program, adb, alpha),
                        adb.lam[alpha]))


def check_necessary_facts(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    pool = [s for s in _semiring_pool_for(semantics) if getattr(s, "divide", None)]
    semiring = gen.rng.choice(pool)
    adb = gen.annotate(instance, semiring)
    derivable = sorted(saturate(instance.program, adb.database))
    if not derivable:
        return _check("necessary-facts", semantics, instance.name, None,
                      detail="nothing derivable")
    target = gen.rng.choice(derivable)
    nec = necessary_facts(instance.program, adb.database, target)
    try:
        value = evaluate_semantics(semantics, instance.program, adb, target)
    except _INAPPLICABLE as exc:
        return _check("necessary-facts", semantics, instance.name, None,
                      detail=str(exc))
    product = semiring.prod(adb.lam[f] for f in sorted(nec))
    quotient = semiring.divide(value, product)
    if quotient is None and not getattr(semiring, "divide_decidable", True):
        return _check("necessary-facts", semantics, instance.name, None,
                      detail="divisibility undecidable on this semiring")
    ok = quotient is not None
    witness = None if ok else Witness(
        f"no factor e with value = (necessary product) * e on {instance.name}",
        semiring.fmt(value), semiring.fmt(product),
        lambda: semiring.divide(
            evaluate_semantics(semantics, instance.program, adb, target),
            product) is None)
    return _check("necessary-facts", semantics, instance.name, ok, witness)


def check_non_usable_facts(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    derivable = sorted(saturate(instance.program, adb.database))
    if not derivable:
        return _check("non-usable-facts", semantics, instance.name, None,
                      detail="nothing derivable")
    target = gen.rng.choice(derivable)
    usable = usable_facts(instance.program, adb.database, target)
    dead = sorted(adb.database.facts - usable)
    if not dead:
        return _check("non-usable-facts", semantics, instance.name, None,
                      detail="every fact usable")
    mutated = dict(adb.lam)
    for fact in dead:
        mutated[fact] = semiring.sample_nonzero(gen.rng)
    changed = adb.with_annotations(mutated)
    try:
        lhs = evaluate_semantics(semantics, instance.program, adb, target)
        rhs = evaluate_semantics(semantics, instance.program, changed, target)
    except _INAPPLICABLE as exc:
        return _check("non-usable-facts", semantics, instance.name, None,
                      detail=str(exc))
    return _compare("non-usable-facts", semantics, instance.name, semiring,
                    lhs, rhs,
                    lambda: not semiring.eq(
                        evaluate_semantics(semantics, instance.program, adb, target),
                        evaluate_semantics(semantics, instance.program, changed, target)))


def check_insertion(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    semiring = gen.rng.choice(_semiring_pool_for(semantics))
    adb = gen.annotate(instance, semiring)
    fresh_constant = "z9"
    arities = {f.predicate: f.arity for f in adb.database.facts}
    extra_facts = set()
    for predicate, arity in sorted(arities.items()):
        candidate = make_fact(predicate, *([fresh_constant] * arity))
        if candidate not in adb.database.facts:
            extra_facts.add(candidate)
        if len(extra_facts) >= 2:
            break
    if not extra_facts:
        return _check("insertion", semantics, instance.name, None,
                      detail="no disjoint facts available")
    lam_extra = {f: semiring.sample_nonzero(gen.rng) for f in extra_facts}
    other = AnnotatedDatabase(Database(frozenset(extra_facts)), semiring, lam_extra)
    union = AnnotatedDatabase(
        Database(adb.database.facts | other.database.facts), semiring,
        {**adb.lam, **lam_extra})
    derivable = sorted(saturate(instance.program, union.database))
    if not derivable:
        return _check("insertion", semantics, instance.name, None,
                      detail="nothing derivable")
    target = gen.rng.choice(derivable)
    try:
        separate = semiring.add(
            evaluate_semantics(semantics, instance.program, adb, target),
            evaluate_semantics(semantics, instance.program, other, target))
        combined = evaluate_semantics(semantics, instance.program, union, target)
    except _INAPPLICABLE as exc:
        return _check("insertion", semantics, instance.name, None, detail=str(exc))
    def replay():
        sep = semiring.add(
            evaluate_semantics(semantics, instance.program, adb, target),
            evaluate_semantics(semantics, instance.program, other, target))
        com = evaluate_semantics(semantics, instance.program, union, target)
        return semiring.leq(sep, com) is False

    return _compare("insertion", semantics, instance.name, semiring,
                    separate, combined, replay, mode="leq")


def check_deletion(semantics, gen: InstanceGenerator) -> PropertyCheck:
    instance = gen.generate()
    source = series_trunc(10) if semantics in ("am", "sam", "at") else POLY_NAT
    adb = gen.annotate_injectively(instance, source)
    facts = sorted(adb.database.facts)
    keep = [f for f in facts if gen.rng.random() < 0.6]
    removed = [f for f in facts if f not in keep]
    if not removed:
        return _check("deletion", semantics, instance.name, None,
                      detail="nothing deleted")
    restricted = adb.restrict(keep)
    derivable = sorted(saturate(instance.program, adb.database))
    if not derivable:
        return _check("deletion", semantics, instance.name, None,
                      detail="nothing derivable")
    target = gen.rng.choice(derivable)
    dead_variables = {adb.lam[f].monomials()[0][0][0] for f in removed}
    try:
        full = evaluate_semantics(semantics, instance.program, adb, target)
        partial = poly_partial_eval_zero(full, dead_variables)
        direct = evaluate_semantics(semantics, instance.program, restricted, target)
    except _INAPPLICABLE as exc:
        return _check("deletion", semantics, instance.name, None, detail=str(exc))
    return _compare("deletion", semantics, instance.name, source,
                    direct, partial,
                    lambda: not source.eq(
                        evaluate_semantics(semantics, instance.program, restricted, target),
                        poly_partial_eval_zero(
                            evaluate_semantics(semantics, instance.program, adb, target),
                            dead_variables)))


# ---------------------------------------------------------------------------
# Semiring-domain declarations (capability rows)
# ---------------------------------------------------------------------------

# Per semantics: (defined on every commutative semiring,
#                 defined on every omega-continuous commutative semiring).
# These are statements about the semantics' domain of definition, so they
# are declared rather than sampled; the blank cells carry a witness replay.
DOMAIN_DECLARATIONS = {
    "at": (False, True),
    "nrt": (True, True),
    "mdt": (True, True),
    "hmdt": (True, True),
    "am": (False, False),
    "sam": (False, True),
}


def _witness_at_needs_continuity() -> PropertyCheck:
    from .instances import A_A, MUTUAL

    adb = MUTUAL.annotate_with(NAT, {make_fact("A", "a"): "1"})

    def replay() -> bool:
        try:
            evaluate_semantics("at", MUTUAL.program, adb, A_A, cap=40)
        except DivergenceError:
            return True
        return False

    return _check("any-semiring", "at", "mutual", not replay(),
                  Witness("naive rounds never stabilize on the plain counting "
                          "semiring", "diverges", "a value", replay))


def _witness_am_needs_glbs(property_id) -> PropertyCheck:
    from .instances import GOAL, TWO_RULES, eight_element_semiring

    eight = eight_element_semiring()
    adb = TWO_RULES.annotate_with(eight, {
        make_fact("A", "a"): "c", make_fact("B", "a"): "e"})

    def replay() -> bool:
        try:
            am_provenance(TWO_RULES.program, adb, GOAL)
        except UnsupportedSemiring:
            return True
        return False

    return _check(property_id, "am", "eight-element", not replay(),
                  Witness("pairwise glbs are missing, the least annotated "
                          "model is undefined", "unsupported", "a value", replay))


def _witness_sam_needs_continuity() -> PropertyCheck:
    from .instances import A_A, SELF_LOOP

    adb = SELF_LOOP.annotate_injectively(POLY_NAT)

    def replay() -> bool:
        try:
            sam_provenance(SELF_LOOP.program, adb, A_A, cap=64)
        except DivergenceError:
            return True
        return False

    return _check("any-semiring", "sam", "self-loop", not replay(),
                  Witness("the value set grows without bound on plain "
                          "polynomials", "diverges", "a value", replay))


def check_domain(property_id, semantics) -> PropertyCheck:
    every, omega = DOMAIN_DECLARATIONS[semantics]
    claimed = every if property_id == "any-semiring" else omega
    if claimed:
        return _check(property_id, semantics, "declaration", True)
    if semantics == "am":
        return _witness_am_needs_glbs(property_id)
    if semantics == "at":
        return _witness_at_needs_continuity()
    if semantics == "sam":
        return _witness_sam_needs_continuity()
    return _check(property_id, semantics, "declaration", False,
                  Witness("declared out of domain", "-", "-", lambda: True))


# ---------------------------------------------------------------------------
# Hand-built counterexamples for every blank matrix cell
# ---------------------------------------------------------------------------

def _cx_algebra_consistency_model_based(semantics) -> PropertyCheck:
    from .instances import GOAL, TWO_RULES

    adb = TWO_RULES.annotate_with(NAT_INF, {
        make_fact("A", "a"): "2", make_fact("B", "a"): "2"})
    bodies = [tuple(r.body) for r in TWO_RULES.program.rules]
    lhs = evaluate_semantics(semantics, TWO_RULES.program, adb, GOAL)
    rhs = ucq_provenance(bodies, adb)
    return _compare("algebra-consistency", semantics, "two-rules", NAT_INF,
                    lhs, rhs,
                    lambda: not NAT_INF.eq(
                        evaluate_semantics(semantics, TWO_RULES.program, adb, GOAL),
                        ucq_provenance(bodies, adb)))


def _cx_boolean_compat_depth_sensitive(semantics) -> PropertyCheck:
    from .instances import GOAL, SHORTCUT

    adb = SHORTCUT.annotate_with(POSBOOL)
    lhs = evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL)
    rhs = boolean_provenance_by_subsets(SHORTCUT.program, adb, GOAL)
    return _compare("boolean-compat", semantics, "shortcut", POSBOOL, lhs, rhs,
                    lambda: not POSBOOL.eq(
                        evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL),
                        boolean_provenance_by_subsets(SHORTCUT.program, adb, GOAL)))


def _cx_hom_commutation_at(semantics) -> PropertyCheck:
    from .instances import A_A, MUTUAL

    adb = MUTUAL.annotate_with(NAT_INF, {make_fact("A", "a"): "1"})
    mapped = MUTUAL.annotate_with(NAT_INF_PRIME, {make_fact("A", "a"): "1"})
    lhs = embed_nat_inf_into_prime(
        evaluate_semantics("at", MUTUAL.program, adb, A_A))
    rhs = evaluate_semantics("at", MUTUAL.program, mapped, A_A)
    return _compare("hom-commutation", "at", "mutual", NAT_INF_PRIME, lhs, rhs,
                    lambda: not NAT_INF_PRIME.eq(
                        embed_nat_inf_into_prime(
                            evaluate_semantics("at", MUTUAL.program, adb, A_A)),
                        evaluate_semantics("at", MUTUAL.program, mapped, A_A)))


def _cx_commutation_model_based(property_id, semantics) -> PropertyCheck:
    from .instances import GOAL, TWO_RULES

    series = series_trunc(4)
    adb = TWO_RULES.annotate_with(series, {
        make_fact("A", "a"): "x", make_fact("B", "a"): "y"})
    mapped = TWO_RULES.annotate_with(NAT_INF, {
        make_fact("A", "a"): "2", make_fact("B", "a"): "2"})
    nu = {"x": 2, "y": 2}
    lhs = eval_valuation(
        evaluate_semantics(semantics, TWO_RULES.program, adb, GOAL), NAT_INF, nu)
    rhs = evaluate_semantics(semantics, TWO_RULES.program, mapped, GOAL)
    return _compare(property_id, semantics, "two-rules", NAT_INF, lhs, rhs,
                    lambda: not NAT_INF.eq(
                        eval_valuation(
                            evaluate_semantics(semantics, TWO_RULES.program, adb, GOAL),
                            NAT_INF, nu),
                        evaluate_semantics(semantics, TWO_RULES.program, mapped, GOAL)))


def _shortcut_alternative_setup():
    from .parser import parse_program

    base = parse_program("B(X) :- C(X).")
    database = Database(frozenset({make_fact("A", "a"), make_fact("C", "a")}))
    adb = AnnotatedDatabase(database, POLY_NAT, {
        make_fact("A", "a"): POLY_NAT.variable("a"),
        make_fact("C", "a"): POLY_NAT.variable("c")})
    alternatives = [(make_fact("A", "a"),), (make_fact("B", "a"),)]
    return base, adb, alternatives


def _cx_alternative_use_depth_sensitive(property_id, semantics) -> PropertyCheck:
    base, adb, alternatives = _shortcut_alternative_setup()
    extended = _fresh_goal_program(base, alternatives)
    lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
    rhs = POLY_NAT.sum(
        evaluate_semantics(semantics, base, adb, tup[0]) for tup in alternatives)
    return _compare(property_id, semantics, "shortcut-alternative", POLY_NAT,
                    lhs, rhs,
                    lambda: not POLY_NAT.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def _cx_alternative_use_model_based(property_id, semantics) -> PropertyCheck:
    facts = {make_fact("A", "a"), make_fact("B", "a")}
    adb = AnnotatedDatabase(Database(frozenset(facts)), NAT_INF,
                            {f: 2 for f in facts})
    base = Program(())
    alternatives = [(make_fact("A", "a"),), (make_fact("B", "a"),)]
    extended = _fresh_goal_program(base, alternatives)
    lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
    rhs = NAT_INF.sum(
        evaluate_semantics(semantics, base, adb, tup[0]) for tup in alternatives)
    return _compare(property_id, semantics, "two-facts", NAT_INF, lhs, rhs,
                    lambda: not NAT_INF.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def _cx_joint_use_mdt(semantics) -> PropertyCheck:
    from .instances import PAIR

    adb = PAIR.annotate_with(POLY_NAT)
    joint = [(make_fact("A", "a"), make_fact("B", "a"))]
    extended = _fresh_goal_program(PAIR.program, joint)
    lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
    rhs = POLY_NAT.prod(
        evaluate_semantics(semantics, PAIR.program, adb, f) for f in joint[0])
    return _compare("joint-use", semantics, "pair", POLY_NAT, lhs, rhs,
                    lambda: not POLY_NAT.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def _cx_joint_use_sam(semantics) -> PropertyCheck:
    from .instances import TWO_GOALS

    series = series_trunc(4)
    adb = TWO_GOALS.annotate_with(series)
    joint = [(make_fact("g1"), make_fact("g2"))]
    extended = _fresh_goal_program(TWO_GOALS.program, joint)
    lhs = evaluate_semantics(semantics, extended, adb, FRESH_GOAL)
    rhs = series.prod(
        evaluate_semantics(semantics, TWO_GOALS.program, adb, f) for f in joint[0])
    return _compare("joint-use", semantics, "two-goals", series, lhs, rhs,
                    lambda: not series.eq(
                        evaluate_semantics(semantics, extended, adb, FRESH_GOAL), rhs))


def _cx_necessary_facts_am(semantics) -> PropertyCheck:
    from .instances import GOAL, SHARED_FACT, nine_element_semiring

    nine = nine_element_semiring()
    adb = SHARED_FACT.annotate_with(nine)
    nec = necessary_facts(SHARED_FACT.program, adb.database, GOAL)
    value = evaluate_semantics(semantics, SHARED_FACT.program, adb, GOAL)
    product = nine.prod(adb.lam[f] for f in sorted(nec))
    quotient = nine.divide(value, product)
    ok = quotient is not None
    witness = None if ok else Witness(
        "the least-model value is no multiple of the necessary annotation",
        nine.fmt(value), nine.fmt(product),
        lambda: nine.divide(
            evaluate_semantics(semantics, SHARED_FACT.program, adb, GOAL),
            product) is None)
    return _check("necessary-facts", semantics, "shared-fact", ok, witness)


def _cx_insertion_depth_sensitive(semantics) -> PropertyCheck:
    from .instances import GOAL, SHORTCUT

    adb = SHORTCUT.annotate_with(POLY_NAT)
    extra = AnnotatedDatabase(Database(frozenset({GOAL})), POLY_NAT,
                              {GOAL: POLY_NAT.variable("g")})
    union = AnnotatedDatabase(
        Database(adb.database.facts | {GOAL}), POLY_NAT,
        {**adb.lam, GOAL: POLY_NAT.variable("g")})
    separate = POLY_NAT.add(
        evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL),
        evaluate_semantics(semantics, SHORTCUT.program, extra, GOAL))
    combined = evaluate_semantics(semantics, SHORTCUT.program, union, GOAL)
    def replay():
        sep = POLY_NAT.add(
            evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL),
            evaluate_semantics(semantics, SHORTCUT.program, extra, GOAL))
        com = evaluate_semantics(semantics, SHORTCUT.program, union, GOAL)
        return POLY_NAT.leq(sep, com) is False

    return _compare("insertion", semantics, "shortcut+goal", POLY_NAT,
                    separate, combined, replay, mode="leq")


def _cx_insertion_model_based(semantics) -> PropertyCheck:
    from .instances import GOAL, TWO_RULES

    a, b = make_fact("A", "a"), make_fact("B", "a")
    left = AnnotatedDatabase(Database(frozenset({a})), NAT_INF, {a: 2})
    right = AnnotatedDatabase(Database(frozenset({b})), NAT_INF, {b: 2})
    union = AnnotatedDatabase(Database(frozenset({a, b})), NAT_INF, {a: 2, b: 2})
    separate = NAT_INF.add(
        evaluate_semantics(semantics, TWO_RULES.program, left, GOAL),
        evaluate_semantics(semantics, TWO_RULES.program, right, GOAL))
    combined = evaluate_semantics(semantics, TWO_RULES.program, union, GOAL)
    def replay():
        sep = NAT_INF.add(
            evaluate_semantics(semantics, TWO_RULES.program, left, GOAL),
            evaluate_semantics(semantics, TWO_RULES.program, right, GOAL))
        com = evaluate_semantics(semantics, TWO_RULES.program, union, GOAL)
        return NAT_INF.leq(sep, com) is False

    return _compare("insertion", semantics, "two-rules-split", NAT_INF,
                    separate, combined, replay, mode="leq")


def _cx_deletion_depth_sensitive(semantics) -> PropertyCheck:
    from .instances import GOAL, SHORTCUT

    adb = SHORTCUT.annotate_with(POLY_NAT)
    restricted = adb.restrict([make_fact("C", "a")])
    full = evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL)
    partial = poly_partial_eval_zero(full, {"a"})
    direct = evaluate_semantics(semantics, SHORTCUT.program, restricted, GOAL)
    return _compare("deletion", semantics, "shortcut-del", POLY_NAT,
                    direct, partial,
                    lambda: not POLY_NAT.eq(
                        evaluate_semantics(
                            semantics, SHORTCUT.program, restricted, GOAL),
                        poly_partial_eval_zero(
                            evaluate_semantics(semantics, SHORTCUT.program, adb, GOAL),
                            {"a"})))


COUNTEREXAMPLES = {
    ("algebra-consistency", "am"): lambda: _cx_algebra_consistency_model_based("am"),
    ("algebra-consistency", "sam"): lambda: _cx_algebra_consistency_model_based("sam"),
    ("boolean-compat", "mdt"): lambda: _cx_boolean_compat_depth_sensitive("mdt"),
    ("boolean-compat", "hmdt"): lambda: _cx_boolean_compat_depth_sensitive("hmdt"),
    ("hom-commutation", "at"): lambda: _cx_hom_commutation_at("at"),
    ("hom-commutation", "am"): lambda: _cx_commutation_model_based("hom-commutation", "am"),
    ("hom-commutation", "sam"): lambda: _cx_commutation_model_based("hom-commutation", "sam"),
    ("omega-hom-commutation", "am"): lambda: _cx_commutation_model_based("omega-hom-commutation", "am"),
    ("omega-hom-commutation", "sam"): lambda: _cx_commutation_model_based("omega-hom-commutation", "sam"),
    ("joint-alt-use", "mdt"): lambda: _cx_alternative_use_depth_sensitive("joint-alt-use", "mdt"),
    ("joint-alt-use", "hmdt"): lambda: _cx_alternative_use_depth_sensitive("joint-alt-use", "hmdt"),
    ("joint-alt-use", "am"): lambda: _cx_alternative_use_model_based("joint-alt-use", "am"),
    ("joint-alt-use", "sam"): lambda: _cx_alternative_use_model_based("joint-alt-use", "sam"),
    ("joint-use", "mdt"): lambda: _cx_joint_use_mdt("mdt"),
    ("joint-use", "sam"): lambda: _cx_joint_use_sam("sam"),
    ("alternative-use", "mdt"): lambda: _cx_alternative_use_depth_sensitive("alternative-use", "mdt"),
    ("alternative-use", "hmdt"): lambda: _cx_alternative_use_depth_sensitive("alternative-use", "hmdt"),
    ("alternative-use", "am"): lambda: _cx_alternative_use_model_based("alternative-use", "am"),
    ("alternative-use", "sam"): lambda: _cx_alternative_use_model_based("alternative-use", "sam"),
    ("necessary-facts", "am"): lambda: _cx_necessary_facts_am("am"),
    ("insertion", "mdt"): lambda: _cx_insertion_depth_sensitive("mdt"),
    ("insertion", "hmdt"): lambda: _cx_insertion_depth_sensitive("hmdt"),
    ("insertion", "am"): lambda: _cx_insertion_model_based("am"),
    ("insertion", "sam"): lambda: _cx_insertion_model_based("sam"),
    ("deletion", "mdt"): lambda: _cx_deletion_depth_sensitive("mdt"),
    ("deletion", "hmdt"): lambda: _cx_deletion_depth_sensitive("hmdt"),
}


# ---------------------------------------------------------------------------
# The expected matrix and its runner
# ---------------------------------------------------------------------------

CHECKERS = {
    "algebra-consistency": check_algebra_consistency,
    "boolean-compat": check_boolean_compat,
    "hom-commutation": check_hom_commutation,
    "omega-hom-commutation": check_omega_hom_commutation,
    "joint-alt-use": check_joint_alt_use,
    "joint-use": check_joint_use,
    "alternative-use": check_alternative_use,
    "self": check_self,
    "parsimony": check_parsimony,
    "necessary-facts": check_necessary_facts,
    "non-usable-facts": check_non_usable_facts,
    "insertion": check_insertion,
    "deletion": check_deletion,
}

PROPERTIES = (
    "algebra-consistency", "boolean-compat",
    "hom-commutation", "omega-hom-commutation",
    "any-semiring", "any-omega-semiring",
    "joint-alt-use", "joint-use", "alternative-use",
    "self", "parsimony", "necessary-facts", "non-usable-facts",
    "insertion", "deletion",
)

# True = the semantics satisfies the property (checked on the corpus);
# False = it does not (the registered counterexample must reproduce).
EXPECTED_MATRIX = {
    "algebra-consistency":   {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": False},
    "boolean-compat":        {"at": True, "nrt": True, "mdt": False, "hmdt": False, "am": True, "sam": True},
    "hom-commutation":       {"at": False, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": False},
    "omega-hom-commutation": {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": False},
    "any-semiring":          {"at": False, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": False},
    "any-omega-semiring":    {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": True},
    "joint-alt-use":         {"at": True, "nrt": True, "mdt": False, "hmdt": False, "am": False, "sam": False},
    "joint-use":             {"at": True, "nrt": True, "mdt": False, "hmdt": True, "am": True, "sam": False},
    "alternative-use":       {"at": True, "nrt": True, "mdt": False, "hmdt": False, "am": False, "sam": False},
    "self":                  {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": True, "sam": True},
    "parsimony":             {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": True, "sam": True},
    "necessary-facts":       {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": False, "sam": True},
    "non-usable-facts":      {"at": True, "nrt": True, "mdt": True, "hmdt": True, "am": True, "sam": True},
    "insertion":             {"at": True, "nrt": True, "mdt": False, "hmdt": False, "am": False, "sam": False},
    "deletion":              {"at": True, "nrt": True, "mdt": False, "hmdt": False, "am": True, "sam": True},
}


def check_property(property_id: str, semantics: str, seed: int = 0) -> PropertyCheck:
    """One corpus check of one cell (declaration rows ignore the seed)."""
    if property_id in ("any-semiring", "any-omega-semiring"):
        return check_domain(property_id, semantics)
    return CHECKERS[property_id](semantics, InstanceGenerator(seed))


@dataclass
class CellResult:
    property_id: str
    semantics_id: str
    expected: bool
    passed: bool
    satisfied: int = 0
    violated: int = 0
    inapplicable: int = 0
    witness: Optional[Witness] = None

    def __str__(self):
        mark = "ok" if self.passed else "MISMATCH"
        return (f"{self.property_id}/{self.semantics_id}: {mark} "
                f"(+{self.satisfied} -{self.violated} ~{self.inapplicable})")


@dataclass
class MatrixReport:
    cells: dict  # (property, semantics) -> CellResult
    trials: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(cell.passed for cell in self.cells.values())

    def mismatches(self) -> list:
        return [cell for cell in self.cells.values() if not cell.passed]

    def to_document(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "ok": self.ok,
            "cells": {
                f"{p}/{s}": {
                    "expected": cell.expected,
                    "passed": cell.passed,
                    "satisfied": cell.satisfied,
                    "violated": cell.violated,
                    "inapplicable": cell.inapplicable,
                }
                for (p, s), cell in sorted(self.cells.items())
            },
        }

    def format_text(self) -> str:
        present_props = [p for p in PROPERTIES
                         if any((p, s) in self.cells for s in SEMANTICS)]
        present_sems = [s for s in SEMANTICS
                        if any((p, s) in self.cells for p in PROPERTIES)]
        width = max(len(p) for p in present_props) + 2
        head = "".rjust(width) + "".join(s.rjust(6) for s in present_sems)
        lines = [head]
        for prop in present_props:
            row = prop.ljust(width)
            for sem in present_sems:
                cell = self.cells.get((prop, sem))
                if cell is None:
                    row += "-".rjust(6)
                    continue
                mark = "yes" if cell.expected else "no"
                if not cell.passed:
                    mark = "!!"
                row += mark.rjust(6)
            lines.append(row)
        lines.append("")
        lines.append("legend: yes = satisfied on corpus, no = counterexample "
                     "reproduced, !! = mismatch")
        return "\n".join(lines)


def _run_cell(prop: str, sem: str, trials: int, seed: int) -> CellResult:
    """All checks of one matrix cell (pure, safe to run in a worker)."""
    expected = EXPECTED_MATRIX[prop][sem]
    cell = CellResult(prop, sem, expected, passed=True)
    if prop in ("any-semiring", "any-omega-semiring"):
        check = check_domain(prop, sem)
        cell.passed = (check.verdict == "satisfied") == expected
        cell.satisfied = int(check.verdict == "satisfied")
        cell.violated = int(check.verdict == "violated")
        cell.witness = check.witness
    elif expected:
        for trial in range(trials):
            check = check_property(prop, sem, seed=seed * 100_003 + trial)
            if check.verdict == "satisfied":
                cell.satisfied += 1
            elif check.verdict == "inapplicable":
                cell.inapplicable += 1
            else:
                cell.violated += 1
                cell.witness = check.witness
                cell.passed = False
                break
    else:
        builder = COUNTEREXAMPLES.get((prop, sem))
        if builder is None:
            cell.passed = False
        else:
            check = builder()
            cell.violated = int(check.verdict == "violated")
            cell.satisfied = int(check.verdict == "satisfied")
            cell.witness = check.witness
            cell.passed = check.verdict == "violated"
    return cell


def _run_cell_packed(args) -> tuple:
    prop, sem, trials, seed = args
    cell = _run_cell(prop, sem, trials, seed)
    # Witness closures do not cross process boundaries; keep the text.
    witness = None
    if cell.witness is not None:
        witness = (cell.witness.description, cell.witness.lhs, cell.witness.rhs)
    return (prop, sem, cell.expected, cell.passed, cell.satisfied,
            cell.violated, cell.inapplicable, witness)


def run_table1(trials: int = 200, seed: int = 0,
               properties: Optional[Iterable[str]] = None,
               semantics: Optional[Iterable[str]] = None,
               raise_on_mismatch: bool = False,
               workers: Optional[int] = None) -> MatrixReport:
    """Reproduce the expected verdict matrix.

    Checkmarked cells run `trials` random instances and tolerate zero
    violations; blank cells run their registered counterexample and must
    report it as violated.  Cells are independent and run across worker
    processes when `workers` exceeds one (`None` picks the CPU count).
    """
    properties = tuple(properties or PROPERTIES)
    semantics = tuple(semantics or SEMANTICS)
    jobs = [(prop, sem, trials, seed) for prop in properties for sem in semantics]
    cells = {}
    if workers is None:
        import os

        workers = min(len(jobs), os.cpu_count() or 1)
    if workers > 1 and len(jobs) > 1:
        import concurrent.futures
        import warnings as _warnings

        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                for packed in pool.map(_run_cell_packed, jobs):
                    prop, sem, expected, passed, sat, vio, inap, wit = packed
                    cell = CellResult(prop, sem, expected, passed, sat, vio, inap)
                    if wit is not None:
                        cell.witness = Witness(wit[0], wit[1], wit[2])
                    cells[(prop, sem)] = cell
    else:
        for prop, sem, t, s in jobs:
            cells[(prop, sem)] = _run_cell(prop, sem, t, s)
    report = MatrixReport(cells, trials, seed)
    if raise_on_mismatch and not report.ok:
        raise MatrixMismatch([str(c) for c in report.mismatches()])
    return report
