"""Model-based provenance: the pointwise-least annotated model computed as
a join fixpoint, and the value-set fixpoint whose final sum ranges over the
distinct derivation annotations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import Fact, Program, homomorphisms
from .engine import AnnotatedDatabase, at_depth_value, at_provenance
from .errors import DivergenceError, UnsupportedSemiring
from .semirings import Semiring
from .values import clamp_poly

DEFAULT_MODEL_ROUND_CAP = 256
DEFAULT_VALUE_SET_CAP = 4096


@dataclass
class SetAnnotatedInterpretation:
    """A fact set carrying a finite set of values per fact."""

    semiring: Semiring
    mu_set: dict = field(default_factory=dict)  # Fact -> frozenset of values
    cap: int = DEFAULT_VALUE_SET_CAP

    def copy(self) -> "SetAnnotatedInterpretation":
        return SetAnnotatedInterpretation(self.semiring, dict(self.mu_set), self.cap)


def require_join_oracle(semiring: Semiring) -> None:
    """The least-annotated-model semantics needs pairwise glbs (so the
    pointwise minimum is well-defined) and computable joins (to accumulate
    the per-rule lower bounds)."""
    if not (semiring.flags.has_glb and semiring.flags.has_finite_joins):
        raise UnsupportedSemiring(
            f"semiring {semiring.id} lacks the glb/join structure required "
            "by the annotated-model semantics")


def _constraint_groups(program: Program, facts, mu: dict, semiring: Semiring):
    """Per (rule, head instantiation): the sum over homomorphisms sharing
    that head instantiation of the per-atom body products."""
    from .core import build_fact_index

    fact_index = build_fact_index(facts)
    groups: dict = {}
    for rule in program.rules:
        per_head: dict = {}
        for hom in homomorphisms(rule.body, index=fact_index):
            head = hom.apply(rule.head)
            product = semiring.one
            for atom in rule.body:
                product = semiring.mul(product, mu[hom.apply(atom)])
            per_head[head] = (semiring.add(per_head[head], product)
                              if head in per_head else product)
        for head, value in per_head.items():
            groups.setdefault(head, []).append(value)
    return groups


def am_provenance(program: Program, adb: AnnotatedDatabase, target: Fact,
                  cap: int = DEFAULT_MODEL_ROUND_CAP):
    """Value of the target in the pointwise-least annotated model.

    Each round joins, per fact, the database annotation with every
    per-rule lower bound computed from the previous round; the fixpoint is
    the least interpretation meeting all of them.  On additively
    idempotent omega-continuous semirings this coincides with the naive
    fixpoint value, which is used directly.
    """
    semiring = adb.semiring
    require_join_oracle(semiring)
    if semiring.flags.plus_idempotent and semiring.flags.omega_continuous:
        return at_provenance(program, adb, target)

    mu: dict = dict(adb.lam)
    for _ in range(cap):
        groups = _constraint_groups(program, set(mu), mu, semiring)
        new_mu: dict = {}
        for fact in set(mu) | set(groups):
            bounds = list(groups.get(fact, ()))
            if fact in adb.lam:
                bounds.append(adb.lam[fact])
            joined = semiring.join(bounds)
            if joined is None:
                raise UnsupportedSemiring(
                    f"no least upper bound exists in {semiring.id} for {fact}")
            new_mu[fact] = joined
        from .engine import _guard_value_sizes

        _guard_value_sizes(semiring, new_mu)
        if set(new_mu) == set(mu) and all(
                semiring.eq(new_mu[f], mu[f]) for f in mu):
            return new_mu.get(target, semiring.zero)
        mu = new_mu
    raise DivergenceError(
        f"annotated-model fixpoint still changing after {cap} rounds on {semiring.id}")


def sam_provenance(program: Program, adb: AnnotatedDatabase, target: Fact,
                   cap: int = DEFAULT_VALUE_SET_CAP):
    """Sum over the distinct derivation annotations of the target.

    The value-set fixpoint seeds each database fact with its annotation
    and closes the sets under rule application (all member combinations,
    one factor per body atom).  A set growing past `cap` members aborts.
    """
    semiring = adb.semiring
    interp = set_annotated_fixpoint(program, adb, cap)
    if target not in interp.mu_set:
        return semiring.zero
    return semiring.sum(sorted(interp.mu_set[target], key=repr))


def set_annotated_fixpoint(program: Program, adb: AnnotatedDatabase,
                           cap: int = DEFAULT_VALUE_SET_CAP,
                           work_budget: int = 80_000) -> SetAnnotatedInterpretation:
    """The full value-set fixpoint (exposed for tests and inspection).

    Besides the per-fact member cap, a work budget bounds the number of
    member combinations multiplied out across the whole run; blowing it is
    reported as divergence, since combination counts explode exactly when
    the sets keep growing.
    """
    from .core import build_fact_index

    semiring = adb.semiring
    interp = SetAnnotatedInterpretation(
        semiring, {f: frozenset([v]) for f, v in adb.lam.items()}, cap)
    work = 0
    while True:
        changed = False
        index = build_fact_index(interp.mu_set)
        for rule in program.rules:
            for hom in homomorphisms(rule.body, index=index):
                head = hom.apply(rule.head)
                member_choices = [sorted(interp.mu_set[hom.apply(atom)], key=repr)
                                  for atom in rule.body]
                combinations = 1
                for choices in member_choices:
                    combinations *= len(choices)
                work += combinations
                if work > work_budget:
                    raise DivergenceError(
                        f"value-set fixpoint exceeded its work budget at {head}")
                new_values = {semiring.prod(c)
                              for c in itertools.product(*member_choices)}
                for value in new_values:
                    if semiring.value_size(value) > 512:
                        raise DivergenceError(
                            f"a value of {head} exceeded the size guard")
                merged = interp.mu_set.get(head, frozenset()) | new_values
                if len(merged) > cap:
                    raise DivergenceError(
                        f"value set of {head} exceeded {cap} members")
                if merged != interp.mu_set.get(head, frozenset()):
                    interp.mu_set[head] = merged
                    changed = True
        if not changed:
            return interp


def sam_monomial_oracle(program: Program, adb: AnnotatedDatabase, target: Fact,
                        depth_cap: int):
    """Cross-check for the value-set semantics on injectively annotated
    polynomial databases: clamp every non-zero coefficient of the
    depth-capped all-derivation value to one."""
    value = at_depth_value(program, adb, target, depth_cap)
    return clamp_poly(value)
