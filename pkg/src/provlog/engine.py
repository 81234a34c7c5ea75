"""Annotation-aware fixpoint evaluation.

Four routes to a provenance value:
  * naive rounds (converges to the all-derivation sum),
  * the target-frozen variant (sum over shallowest derivations),
  * delta rounds that annotate each fact once (hereditary-shallowest sum),
  * direct enumeration of repeat-free derivations.
plus the relational provenance of unions of conjunctive queries.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import Atom, Database, Fact, Program, Rule, homomorphisms, saturate
from .errors import DivergenceError, NotOmegaContinuousWarning, SemiringMismatch
from .semirings import Semiring

VALUE_SIZE_CAP = 512


def _guard_value_sizes(semiring: Semiring, mu: dict, cap: int = VALUE_SIZE_CAP) -> None:
    """Abort fixpoints whose annotations balloon (symbolic blowup guard)."""
    for fact, value in mu.items():
        if semiring.value_size(value) > cap:
            raise DivergenceError(
                f"annotation of {fact} exceeded the size guard ({cap})")


@dataclass(frozen=True)
class AnnotatedDatabase:
    """A database whose facts carry non-zero semiring annotations."""

    database: Database
    semiring: Semiring
    lam: dict  # Fact -> value

    def __post_init__(self):
        missing = self.database.facts - set(self.lam)
        if missing:
            raise ValueError(f"unannotated facts: {sorted(missing)}")

    def with_annotations(self, lam: dict) -> "AnnotatedDatabase":
        return AnnotatedDatabase(self.database, self.semiring, dict(lam))

    def restrict(self, facts: Iterable[Fact]) -> "AnnotatedDatabase":
        facts = frozenset(facts)
        return AnnotatedDatabase(
            Database(facts), self.semiring,
            {f: v for f, v in self.lam.items() if f in facts})


def annotate(database: Database, semiring: Semiring, lam: dict) -> AnnotatedDatabase:
    return AnnotatedDatabase(database, semiring, dict(lam))


@dataclass
class AnnotatedInterpretation:
    """A fact set with one annotation per fact; zero is encoded by absence."""

    semiring: Semiring
    mu: dict = field(default_factory=dict)  # Fact -> value

    @property
    def facts(self) -> set:
        return set(self.mu)

    def value(self, fact: Fact):
        return self.mu.get(fact, self.semiring.zero)

    def copy(self) -> "AnnotatedInterpretation":
        return AnnotatedInterpretation(self.semiring, dict(self.mu))

    def same_as(self, other: "AnnotatedInterpretation") -> bool:
        if set(self.mu) != set(other.mu):
            return False
        return all(self.semiring.eq(v, other.mu[f]) for f, v in self.mu.items())


def _body_product(semiring: Semiring, rule: Rule, hom, mu: dict):
    """Product over body-atom occurrences of the annotations of their images.

    A fact matched by two distinct body atoms contributes once per atom,
    mirroring one derivation-tree child per body atom.
    """
    value = semiring.one
    for atom in rule.body:
        value = semiring.mul(value, mu[hom.apply(atom)])
    return value


def immediate_consequence(program: Program, interp: AnnotatedInterpretation) -> AnnotatedInterpretation:
    """One parallel application of every rule to the interpretation."""
    from .core import build_fact_index

    semiring = interp.semiring
    index = build_fact_index(interp.mu)
    out: dict = {}
    for rule in program.rules:
        for hom in homomorphisms(rule.body, index=index):
            head = hom.apply(rule.head)
            contribution = _body_product(semiring, rule, hom, interp.mu)
            out[head] = semiring.add(out[head], contribution) if head in out else contribution
    return AnnotatedInterpretation(semiring, out)


def annotated_union(a: AnnotatedInterpretation, b: AnnotatedInterpretation) -> AnnotatedInterpretation:
    """Union of supports; annotations of shared facts are added."""
    if a.semiring is not b.semiring and a.semiring.id != b.semiring.id:
        raise SemiringMismatch(f"{a.semiring.id} vs {b.semiring.id}")
    semiring = a.semiring
    out = dict(a.mu)
    for fact, value in b.mu.items():
        out[fact] = semiring.add(out[fact], value) if fact in out else value
    return AnnotatedInterpretation(semiring, out)


def _base_interpretation(adb: AnnotatedDatabase) -> AnnotatedInterpretation:
    return AnnotatedInterpretation(adb.semiring, dict(adb.lam))


# ---------------------------------------------------------------------------
# Naive rounds
# ---------------------------------------------------------------------------

@dataclass
class FixpointTrace:
    """Per-round snapshots of a naive run plus its convergence status."""

    semiring: Semiring
    snapshots: list  # list[AnnotatedInterpretation], snapshot i = round i
    status: str  # "converged" | "capped" | "diverged"
    rounds: int  # round index at which the status was decided
    cap: int

    @property
    def final(self) -> AnnotatedInterpretation:
        return self.snapshots[-1]

    def converged(self) -> bool:
        return self.status == "converged"

    def at_round(self, i: int) -> AnnotatedInterpretation:
        """Snapshot after i rule applications (clamped to the last round)."""
        return self.snapshots[min(i, len(self.snapshots) - 1)]

    def deltas(self) -> list:
        """Per-round new-or-changed annotations, for trace export."""
        out = []
        prev = AnnotatedInterpretation(self.semiring, {})
        for snap in self.snapshots:
            changed = {
                str(f): self.semiring.fmt(v)
                for f, v in sorted(snap.mu.items(), key=lambda kv: str(kv[0]))
                if f not in prev.mu or not self.semiring.eq(prev.mu[f], v)
            }
            out.append(changed)
            prev = snap
        return out


def default_iteration_cap(program: Program, adb: AnnotatedDatabase) -> int:
    derivable = len(saturate(program, adb.database))
    cap = 2 * derivable + 64
    semiring = adb.semiring
    degree_cap = getattr(semiring, "degree_cap", None)
    if semiring.promotable:
        # Saturation detection needs the post-threshold window, see below.
        cap = max(cap, derivable * ((degree_cap or 0) + 1) + derivable + 4)
    return cap


def naive_eval(program: Program, adb: AnnotatedDatabase,
               cap: Optional[int] = None, strict: bool = True) -> FixpointTrace:
    """Run naive rounds to a stable interpretation.

    Rounds are monotone; the run ends as `converged` after one fully
    quiescent round.  On semirings with saturating sums, an entry that is
    still growing after round `n * (degree + 1)` (n = derivable facts) can
    only be fed by ever-deeper derivations pumping a repeated fact, so its
    coefficient is promoted to the chain supremum; without that saturation
    a still-changing run ends `capped` and, when strict, raises.
    """
    semiring = adb.semiring
    if not semiring.flags.omega_continuous:
        warnings.warn(
            f"semiring {semiring.id} is not flagged omega-continuous; "
            "naive evaluation may not converge",
            NotOmegaContinuousWarning, stacklevel=2)
    if cap is None:
        cap = default_iteration_cap(program, adb)
    derivable_count = len(saturate(program, adb.database))

    base = _base_interpretation(adb)
    current = base.copy()
    snapshots = [current.copy()]
    status, decided_at = "capped", cap
    reason = f"annotations still changing after {cap} naive rounds on {semiring.id}"
    saturated: dict = {}  # fact -> set of promoted keys (sticky)
    for round_index in range(1, cap + 1):
        stepped = annotated_union(immediate_consequence(program, current), base)
        if semiring.promotable:
            promoted = {}
            for fact, value in stepped.mu.items():
                old = current.mu.get(fact, semiring.zero)
                fresh = [
                    k for k in semiring.increased_keys(old, value)
                    if round_index > derivable_count * (semiring.key_degree(k) + 1)
                ]
                if fresh:
                    saturated.setdefault(fact, set()).update(fresh)
                keys = saturated.get(fact)
                promoted[fact] = semiring.promote(value, keys) if keys else value
            stepped = AnnotatedInterpretation(semiring, promoted)
        try:
            _guard_value_sizes(semiring, stepped.mu)
        except DivergenceError as exc:
            # Certain blowup: the representation outgrew the size guard.
            status, decided_at, reason = "diverged", round_index, str(exc)
            current = stepped
            snapshots.append(current.copy())
            break
        quiescent = stepped.same_as(current)
        current = stepped
        snapshots.append(current.copy())
        if quiescent:
            status, decided_at = "converged", round_index - 1
            break
    if status != "converged" and strict:
        raise DivergenceError(reason)
    return FixpointTrace(semiring, snapshots, status, decided_at, cap)


def at_provenance(program: Program, adb: AnnotatedDatabase, fact: Fact,
                  cap: Optional[int] = None):
    """All-derivation provenance of one fact via the naive fixpoint."""
    trace = naive_eval(program, adb, cap=cap)
    return trace.final.value(fact)


def at_depth_value(program: Program, adb: AnnotatedDatabase, fact: Fact, depth: int):
    """The round-`depth` annotation: the sum over derivations of depth <= depth."""
    semiring = adb.semiring
    base = _base_interpretation(adb)
    current = base.copy()
    for _ in range(depth):
        stepped = annotated_union(immediate_consequence(program, current), base)
        _guard_value_sizes(semiring, stepped.mu)
        if stepped.same_as(current):
            break
        current = stepped
    return current.value(fact)


# ---------------------------------------------------------------------------
# Target-frozen rounds (shallowest derivations)
# ---------------------------------------------------------------------------

def optimized_eval(program: Program, adb: AnnotatedDatabase, target: Fact,
                   cap: Optional[int] = None):
    """Naive rounds that freeze as soon as the target is derived.

    The returned value sums exactly the minimal-depth derivations of the
    target; it is zero when the target is not entailed.  Always terminates:
    the fact set saturates within one round per derivable fact.
    """
    semiring = adb.semiring
    base = _base_interpretation(adb)
    current = base.copy()
    rounds = cap if cap is not None else len(saturate(program, adb.database)) + 1
    for _ in range(rounds + 1):
        if target in current.mu:
            return current.mu[target]
        stepped = annotated_union(immediate_consequence(program, current), base)
        _guard_value_sizes(semiring, stepped.mu)
        if set(stepped.mu) == set(current.mu) and target not in stepped.mu:
            return semiring.zero
        current = stepped
    return current.value(target)


def mdt_provenance(program: Program, adb: AnnotatedDatabase, target: Fact):
    return optimized_eval(program, adb, target)


# ---------------------------------------------------------------------------
# Delta rounds (each fact annotated once)
# ---------------------------------------------------------------------------

def delta_consequence(program: Program, interp: AnnotatedInterpretation) -> AnnotatedInterpretation:
    """Immediate consequence restricted to facts not yet present."""
    stepped = immediate_consequence(program, interp)
    fresh = {f: v for f, v in stepped.mu.items() if f not in interp.mu}
    return AnnotatedInterpretation(interp.semiring, fresh)


def seminaive_eval(program: Program, adb: AnnotatedDatabase) -> AnnotatedInterpretation:
    """Delta rounds: every fact keeps the annotation of its first round.

    Terminates within (number of derivable facts) + 1 rounds on any
    semiring, and the result sums the hereditary-minimal-depth derivations
    of each fact.
    """
    current = _base_interpretation(adb)
    while True:
        fresh = delta_consequence(program, current)
        if not fresh.mu:
            return current
        _guard_value_sizes(current.semiring, fresh.mu)
        current = annotated_union(current, fresh)


def sne_provenance(program: Program, adb: AnnotatedDatabase, target: Fact):
    return seminaive_eval(program, adb).value(target)


# ---------------------------------------------------------------------------
# Repeat-free enumeration
# ---------------------------------------------------------------------------

def nrt_eval(program: Program, adb: AnnotatedDatabase, target: Fact,
             use_fast_path: bool = True):
    """Sum over derivations with no fact repeated along any branch.

    On absorptive omega-continuous semirings this equals the naive-round
    value, so the fixpoint is used as a fast path unless disabled.
    """
    semiring = adb.semiring
    if use_fast_path and semiring.flags.absorptive and semiring.flags.omega_continuous:
        return at_provenance(program, adb, target)
    from .trees import TreeQuery, enumerate_trees, tree_annotation

    query = TreeQuery(program, adb, target, kind="non_recursive")
    return semiring.sum(
        tree_annotation(t, semiring, adb.lam) for t in enumerate_trees(query))


# ---------------------------------------------------------------------------
# Relational provenance of unions of conjunctive queries
# ---------------------------------------------------------------------------

def ucq_provenance(disjuncts: Sequence[Sequence[Atom]], adb: AnnotatedDatabase):
    """Sum over disjuncts and homomorphisms of per-atom body products.

    Duplicate disjuncts contribute separately (the union is syntactic);
    homomorphisms are deduplicated per disjunct.
    """
    semiring = adb.semiring
    total = semiring.zero
    for body in disjuncts:
        for hom in homomorphisms(tuple(body), adb.database.facts):
            product = semiring.one
            for atom in body:
                product = semiring.mul(product, adb.lam[hom.apply(atom)])
            total = semiring.add(total, product)
    return total
