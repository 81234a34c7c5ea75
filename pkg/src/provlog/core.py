"""Datalog syntax objects, homomorphism matching, grounding and entailment.

All objects are immutable and hashable, so they can be shared freely and
used as dictionary keys by the evaluation modules.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import ArityError, SizeLimitError

DEFAULT_GROUNDING_CAP = 10**6


@dataclass(frozen=True, order=True)
class Term:
    """A constant or a variable; the kind tag keeps the namespaces disjoint."""

    kind: str  # "const" | "var"
    name: str

    def __post_init__(self):
        if self.kind not in ("const", "var"):
            raise ValueError(f"bad term kind {self.kind!r}")
        if not self.name:
            raise ValueError("term names must be non-empty")

    @property
    def is_var(self) -> bool:
        return self.kind == "var"

    def __str__(self) -> str:
        return self.name


def const(name: str) -> Term:
    return Term("const", name)


def var(name: str) -> Term:
    return Term("var", name)


@dataclass(frozen=True, order=True)
class Atom:
    """A predicate applied to an ordered tuple of terms."""

    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(not t.is_var for t in self.args)

    def variables(self) -> set[str]:
        return {t.name for t in self.args if t.is_var}

    def substitute(self, binding: Mapping[str, str]) -> "Atom":
        """Replace variables by constants according to `binding`."""
        new_args = tuple(
            const(binding[t.name]) if t.is_var and t.name in binding else t
            for t in self.args
        )
        return Atom(self.predicate, new_args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.args)})"


# A fact is simply a ground atom; make_fact validates groundness.
Fact = Atom


def make_fact(predicate: str, *constants: str) -> Fact:
    return Atom(predicate, tuple(const(c) for c in constants))


def as_fact(atom: Atom) -> Fact:
    if not atom.is_ground:
        raise ValueError(f"{atom} contains variables and is not a fact")
    return atom


@dataclass(frozen=True, order=True)
class Rule:
    """A normalized rule: single-atom head, non-empty body.

    The body is kept positionally as given: derivation trees carry one
    child per body entry, and grounding instantiates entries one-for-one,
    which keeps annotation values invariant under grounding.  Syntactic
    duplicate atoms (conjunctions are atom sets) are removed by the parser
    at load time, not here.
    """

    head: Atom
    body: tuple[Atom, ...]

    def __post_init__(self):
        if not self.body:
            raise ValueError("rule bodies must be non-empty")
        missing = self.head.variables() - self.variables_of_body()
        if missing:
            from .errors import HeadVariableError

            raise HeadVariableError(
                f"head variables {sorted(missing)} do not occur in the body of {self}"
            )

    def variables_of_body(self) -> set[str]:
        out: set[str] = set()
        for a in self.body:
            out |= a.variables()
        return out

    def variables(self) -> set[str]:
        return self.variables_of_body() | self.head.variables()

    def __str__(self) -> str:
        return f"{self.head} :- {', '.join(str(a) for a in self.body)}."


@dataclass(frozen=True)
class Program:
    """An ordered list of rules.  Order matters: rules are identified
    positionally so that grounding preserves tree multiplicities."""

    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        check_arities(itertools.chain(
            (r.head for r in self.rules),
            (a for r in self.rules for a in r.body),
        ))

    def predicates(self) -> set[str]:
        out = set()
        for r in self.rules:
            out.add(r.head.predicate)
            out.update(a.predicate for a in r.body)
        return out

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)

    def __len__(self) -> int:
        return len(self.rules)


@dataclass(frozen=True)
class Database:
    """A finite set of facts (set semantics, no duplicates)."""

    facts: frozenset[Fact] = frozenset()

    def __post_init__(self):
        check_arities(self.facts)

    def domain(self) -> set[str]:
        return {t.name for f in self.facts for t in f.args}

    def predicates(self) -> set[str]:
        return {f.predicate for f in self.facts}

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def __len__(self) -> int:
        return len(self.facts)

    def __str__(self) -> str:
        return "\n".join(f"{f}." for f in self)


def check_arities(atoms: Iterable[Atom], known: Optional[dict[str, int]] = None) -> dict[str, int]:
    """Verify that every predicate keeps a single arity; returns the map."""
    arities: dict[str, int] = dict(known or {})
    for a in atoms:
        prev = arities.setdefault(a.predicate, a.arity)
        if prev != a.arity:
            raise ArityError(
                f"predicate {a.predicate} used with arities {prev} and {a.arity}"
            )
    return arities


def check_arity_consistency(program: Program, database: Database) -> None:
    """Arity clash across a program/database pair is a load-time error."""
    arities = check_arities(
        itertools.chain((r.head for r in program.rules),
                        (a for r in program.rules for a in r.body)))
    check_arities(database.facts, arities)


# ---------------------------------------------------------------------------
# Homomorphism matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    """A total assignment of body variables to constants."""

    mapping: tuple[tuple[str, str], ...]  # sorted (variable, constant) pairs

    @staticmethod
    def of(binding: Mapping[str, str]) -> "Homomorphism":
        return Homomorphism(tuple(sorted(binding.items())))

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)

    def apply(self, atom: Atom) -> Atom:
        return atom.substitute(self.as_dict())

    def __str__(self) -> str:
        inner = ", ".join(f"{v}->{c}" for v, c in self.mapping)
        return "{" + inner + "}"


def build_fact_index(facts: Iterable[Fact]) -> dict[tuple[str, int], list[Fact]]:
    """Per-(predicate, arity) buckets; reusable across rules in one round."""
    index: dict[tuple[str, int], list[Fact]] = {}
    for f in facts:
        index.setdefault((f.predicate, f.arity), []).append(f)
    for bucket in index.values():
        bucket.sort()
    return index


def _match_atom(atom: Atom, fact: Fact, binding: dict[str, str]) -> Optional[dict[str, str]]:
    """Extend `binding` so that binding(atom) == fact, or return None."""
    out = binding
    copied = False
    for term, fterm in zip(atom.args, fact.args):
        value = fterm.name
        if term.is_var:
            bound = out.get(term.name)
            if bound is None:
                if not copied:
                    out = dict(out)
                    copied = True
                out[term.name] = value
            elif bound != value:
                return None
        elif term.name != value:
            return None
    return out


def homomorphisms(
    body: Sequence[Atom],
    facts: Iterable[Fact] = (),
    seed: Optional[Mapping[str, str]] = None,
    index: Optional[dict] = None,
) -> list[Homomorphism]:
    """All substitutions h with h(body) inside `facts`, in canonical order.

    `seed` pre-binds some variables (used when unifying a rule head with a
    target fact).  A prebuilt `index` avoids re-bucketing the same fact set
    for every rule of a fixpoint round.  The result is sorted by the
    (variable, constant) pairs, which fixes a deterministic order for logs
    and tests.
    """
    if index is None:
        index = build_fact_index(facts)
    results: list[Homomorphism] = []

    def extend(i: int, binding: dict[str, str]) -> None:
        if i == len(body):
            results.append(Homomorphism.of(binding))
            return
        atom = body[i]
        for fact in index.get((atom.predicate, atom.arity), ()):
            nb = _match_atom(atom, fact, binding)
            if nb is not None:
                extend(i + 1, nb)

    extend(0, dict(seed or {}))
    results = sorted(set(results), key=lambda h: h.mapping)
    return results


def brute_force_homomorphisms(body: Sequence[Atom], facts: Iterable[Fact]) -> list[Homomorphism]:
    """Oracle: try every assignment of body variables to fact constants."""
    facts = set(facts)
    domain = sorted({t.name for f in facts for t in f.args})
    variables = sorted({v for a in body for v in a.variables()})
    out = []
    for combo in itertools.product(domain, repeat=len(variables)):
        binding = dict(zip(variables, combo))
        if all(a.substitute(binding) in facts for a in body):
            out.append(Homomorphism.of(binding))
    return sorted(set(out), key=lambda h: h.mapping)


# ---------------------------------------------------------------------------
# Grounding and classical entailment
# ---------------------------------------------------------------------------

def ground(program: Program, database: Database, cap: int = DEFAULT_GROUNDING_CAP) -> Program:
    """All rule instantiations over the database domain.

    One ground rule is emitted per (rule, assignment) pair, so a program
    whose distinct assignments collapse to syntactically equal ground rules
    keeps one copy of each: positional rule identity preserves derivation-
    tree multiplicities under grounding.
    """
    domain = sorted(database.domain())
    total = 0
    for rule in program.rules:
        total += max(1, len(domain)) ** len(rule.variables())
        if total > cap:
            raise SizeLimitError(f"grounding would exceed {cap} instantiations")
    out: list[Rule] = []
    for rule in program.rules:
        variables = sorted(rule.variables())
        if not domain and variables:
            continue
        for combo in itertools.product(domain, repeat=len(variables)):
            binding = dict(zip(variables, combo))
            out.append(Rule(rule.head.substitute(binding),
                            tuple(a.substitute(binding) for a in rule.body)))
    return Program(tuple(out))


@functools.lru_cache(maxsize=16384)
def saturate(program: Program, database: Database) -> frozenset[Fact]:
    """Least fixpoint of the immediate-consequence operator (fact level).

    Standard seminaive round structure: each round only joins rule bodies
    that touch at least one fact derived in the previous round.
    """
    known: set[Fact] = set(database.facts)
    delta: set[Fact] = set(database.facts)
    while delta:
        new: set[Fact] = set()
        index = build_fact_index(known)
        delta_keys = {(f.predicate, f.arity) for f in delta}
        for rule in program.rules:
            if not any((a.predicate, a.arity) in delta_keys for a in rule.body):
                continue
            for h in homomorphisms(rule.body, index=index):
                derived = h.apply(rule.head)
                if derived not in known:
                    new.add(derived)
        known |= new
        delta = new
    return frozenset(known)


def entails(program: Program, database: Database, fact: Fact) -> bool:
    """True iff `fact` belongs to every model of the program and database."""
    return fact in saturate(program, database)


@functools.lru_cache(maxsize=16384)
def _derivation_depths_cached(program: Program, database: Database) -> dict[Fact, int]:
    depths: dict[Fact, int] = {f: 0 for f in database.facts}
    frontier = True
    level = 0
    while frontier:
        frontier = False
        level += 1
        index = build_fact_index(depths)
        for rule in program.rules:
            for h in homomorphisms(rule.body, index=index):
                derived = h.apply(rule.head)
                if derived not in depths:
                    depths[derived] = level
                    frontier = True
    return depths


def derivation_depths(program: Program, database: Database) -> dict[Fact, int]:
    """Minimal derivation depth of each derivable fact (0 for database facts).

    Breadth-first saturation: depth i holds the facts first derivable by i
    rule applications along the deepest branch.
    """
    return dict(_derivation_depths_cached(program, database))


def minimal_depth(program: Program, database: Database, fact: Fact) -> Optional[int]:
    """Depth of the shallowest derivation of `fact`, or None if not entailed."""
    return derivation_depths(program, database).get(fact)
