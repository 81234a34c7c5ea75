"""Derivation trees: structure, validation, annotation, and enumeration of
the four tree classes (all-up-to-depth, non-recursive, minimal-depth,
hereditary-minimal-depth)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .core import (
    Database,
    Fact,
    Homomorphism,
    Program,
    derivation_depths,
    homomorphisms,
)
from .errors import DepthCapRequired, UnannotatedLeaf
from .semirings import Semiring


@dataclass(frozen=True)
class Leaf:
    fact: Fact

    @property
    def depth(self) -> int:
        return 0

    def leaves(self) -> Iterator[Fact]:
        yield self.fact

    def facts(self) -> Iterator[Fact]:
        yield self.fact


@dataclass(frozen=True)
class Node:
    """A rule application: the rule is identified by its program position,
    so syntactically equal rules at different positions yield distinct
    trees."""

    fact: Fact
    rule_index: int
    hom: Homomorphism
    children: tuple

    @property
    def depth(self) -> int:
        return 1 + max(c.depth for c in self.children)

    def leaves(self) -> Iterator[Fact]:
        for child in self.children:
            yield from child.leaves()

    def facts(self) -> Iterator[Fact]:
        yield self.fact
        for child in self.children:
            yield from child.facts()


DerivationTree = Union[Leaf, Node]


def tree_key(tree: DerivationTree):
    """Structural sort key: leaves before nodes, then lexicographic."""
    if isinstance(tree, Leaf):
        return (0, str(tree.fact))
    return (1, str(tree.fact), tree.rule_index, tree.hom.mapping,
            tuple(tree_key(c) for c in tree.children))


def canonical_order(trees) -> list:
    return sorted(trees, key=lambda t: (t.depth, tree_key(t)))


def validate_tree(tree: DerivationTree, program: Program, database: Database,
                  expected_fact: Optional[Fact] = None) -> bool:
    """Independent structural check of the tree-shape conditions."""
    if expected_fact is not None and tree.fact != expected_fact:
        return False
    if isinstance(tree, Leaf):
        return tree.fact in database.facts
    if not (0 <= tree.rule_index < len(program.rules)):
        return False
    rule = program.rules[tree.rule_index]
    binding = tree.hom.as_dict()
    if set(binding) != rule.variables():
        return False
    if tree.hom.apply(rule.head) != tree.fact:
        return False
    # One child per body atom, in body order: this realizes the required
    # bijection between children and body atoms.
    if len(tree.children) != len(rule.body):
        return False
    for atom, child in zip(rule.body, tree.children):
        if tree.hom.apply(atom) != child.fact:
            return False
        if not validate_tree(child, program, database):
            return False
    return True


def tree_annotation(tree: DerivationTree, semiring: Semiring, lam: dict):
    """Product of the leaf annotations."""
    value = semiring.one
    for leaf in tree.leaves():
        if leaf not in lam:
            raise UnannotatedLeaf(str(leaf))
        value = semiring.mul(value, lam[leaf])
    return value


def serialize_tree(tree: DerivationTree, indent: str = "") -> str:
    """Indented text form, one node per line."""
    if isinstance(tree, Leaf):
        return f"{indent}{tree.fact}"
    header = f"{indent}{tree.fact}  [rule {tree.rule_index}, {tree.hom}]"
    return "\n".join([header] + [serialize_tree(c, indent + "  ") for c in tree.children])


def tree_to_document(tree: DerivationTree):
    """Structured (JSON-ready) form."""
    if isinstance(tree, Leaf):
        return {"fact": str(tree.fact), "leaf": True}
    return {
        "fact": str(tree.fact),
        "rule": tree.rule_index,
        "hom": dict(tree.hom.mapping),
        "children": [tree_to_document(c) for c in tree.children],
    }


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@dataclass
class TreeQuery:
    program: Program
    adb: object  # AnnotatedDatabase or Database
    target: Fact
    kind: str = "all"  # all | non_recursive | min_depth | hereditary_min_depth
    depth_cap: Optional[int] = None
    node_budget: Optional[int] = None

    @property
    def database(self) -> Database:
        return getattr(self.adb, "database", self.adb)


class _Enumerator:
    def __init__(self, program: Program, database: Database,
                 node_budget: Optional[int] = None):
        self.program = program
        self.database = database
        self.depths = derivation_depths(program, database)
        self.derivable = frozenset(self.depths)
        self.budget = node_budget
        self.spent = 0

    def _charge(self, count: int = 1) -> None:
        if self.budget is not None:
            self.spent += count
            if self.spent > self.budget:
                from .errors import SizeLimitError

                raise SizeLimitError("tree enumeration exceeded its node budget")

    def _rule_matches(self, fact: Fact):
        """(rule index, homomorphism) pairs whose head instantiates to fact,
        with every body image derivable."""
        out = []
        for index, rule in enumerate(self.program.rules):
            if rule.head.predicate != fact.predicate or rule.head.arity != fact.arity:
                continue
            seed = {}
            feasible = True
            for term, value in zip(rule.head.args, fact.args):
                if term.is_var:
                    if seed.get(term.name, value.name) != value.name:
                        feasible = False
                        break
                    seed[term.name] = value.name
                elif term.name != value.name:
                    feasible = False
                    break
            if not feasible:
                continue
            for hom in homomorphisms(rule.body, self.derivable, seed=seed):
                out.append((index, hom, [hom.apply(a) for a in rule.body]))
        return out

    def all_trees(self, fact: Fact, depth_budget: int) -> list:
        if fact not in self.derivable or self.depths[fact] > depth_budget:
            return []
        out: list = []
        if fact in self.database.facts:
            self._charge()
            out.append(Leaf(fact))
        if depth_budget >= 1:
            for index, hom, bodies in self._rule_matches(fact):
                child_options = [self.all_trees(b, depth_budget - 1) for b in bodies]
                if any(not options for options in child_options):
                    continue
                for combo in itertools.product(*child_options):
                    self._charge()
                    out.append(Node(fact, index, hom, tuple(combo)))
        return out

    def min_depth_trees(self, fact: Fact) -> list:
        if fact not in self.derivable:
            return []
        # No derivation is shallower than the saturation depth, so every
        # tree within that budget is minimal-depth.
        return self.all_trees(fact, self.depths[fact])

    def hereditary_trees(self, fact: Fact) -> list:
        if fact not in self.derivable:
            return []
        if fact in self.database.facts:
            self._charge()
            return [Leaf(fact)]
        depth = self.depths[fact]
        out = []
        for index, hom, bodies in self._rule_matches(fact):
            if 1 + max(self.depths[b] for b in bodies) != depth:
                continue
            child_options = [self.hereditary_trees(b) for b in bodies]
            if any(not options for options in child_options):
                continue
            for combo in itertools.product(*child_options):
                self._charge()
                out.append(Node(fact, index, hom, tuple(combo)))
        return out

    def non_recursive_trees(self, fact: Fact, forbidden: frozenset = frozenset()) -> list:
        if fact not in self.derivable or fact in forbidden:
            return []
        out: list = []
        if fact in self.database.facts:
            self._charge()
            out.append(Leaf(fact))
        blocked = forbidden | {fact}
        for index, hom, bodies in self._rule_matches(fact):
            if any(b in blocked for b in bodies):
                continue
            child_options = [self.non_recursive_trees(b, blocked) for b in bodies]
            if any(not options for options in child_options):
                continue
            for combo in itertools.product(*child_options):
                self._charge()
                out.append(Node(fact, index, hom, tuple(combo)))
        return out


def program_is_recursive(program: Program) -> bool:
    """Cycle search in the predicate dependency graph (head -> body)."""
    edges: dict[str, set[str]] = {}
    for rule in program.rules:
        edges.setdefault(rule.head.predicate, set()).update(
            a.predicate for a in rule.body)
    seen: dict[str, int] = {}  # 0 in progress, 1 done

    def walk(p: str) -> bool:
        state = seen.get(p)
        if state == 0:
            return True
        if state == 1:
            return False
        seen[p] = 0
        for q in edges.get(p, ()):
            if walk(q):
                return True
        seen[p] = 1
        return False

    return any(walk(p) for p in edges)


def enumerate_trees(query: TreeQuery) -> Iterator[DerivationTree]:
    """Yield each qualifying tree exactly once, shallowest first, then in
    structural lexicographic order."""
    enum = _Enumerator(query.program, query.database, query.node_budget)
    if query.target not in enum.derivable:
        return iter(())
    kind = query.kind
    if kind == "all":
        cap = query.depth_cap
        if cap is None:
            if program_is_recursive(query.program):
                raise DepthCapRequired(
                    "recursive program: enumerating all trees needs a depth cap")
            cap = len(query.program.predicates() | enum.database.predicates()) + 1
        trees = enum.all_trees(query.target, cap)
    elif kind == "min_depth":
        trees = enum.min_depth_trees(query.target)
    elif kind == "hereditary_min_depth":
        trees = enum.hereditary_trees(query.target)
    elif kind == "non_recursive":
        trees = enum.non_recursive_trees(query.target)
    else:
        raise ValueError(f"unknown tree kind {kind!r}")
    return iter(canonical_order(trees))


def minimal_depth(program: Program, adb, fact: Fact) -> Optional[int]:
    """Depth of the shallowest derivation, or None when not entailed."""
    database = getattr(adb, "database", adb)
    return derivation_depths(program, database).get(fact)
