"""Arithmetic circuits: shared-DAG construction alongside the fixpoint
rounds, bottom-up evaluation, and expansion to polynomials.

Sub-circuits from earlier rounds are referenced, never copied; that
sharing is what keeps the node count polynomial in the database size."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .core import Fact, Program, homomorphisms, saturate
from .engine import AnnotatedDatabase
from .errors import TermExplosion, UnboundVariable
from .semirings import Semiring
from .values import Poly, mono_degree, mono_mul


@dataclass
class ArithmeticCircuit:
    """An indexed DAG of sum/product gates over variable and constant leaves.

    Node encodings: ("sum", child indices), ("prod", child indices),
    ("var", name), ("const", 0 or 1).  Children always point at smaller
    indices, so the list order is already topological.
    """

    nodes: list = field(default_factory=list)
    root: int = -1

    def gate(self, op: str, payload) -> int:
        self.nodes.append((op, payload))
        return len(self.nodes) - 1

    def const(self, bit: int) -> int:
        return self.gate("const", bit)

    def variable(self, name: str) -> int:
        return self.gate("var", name)

    def sum(self, children: list) -> int:
        return self.gate("sum", tuple(children))

    def prod(self, children: list) -> int:
        return self.gate("prod", tuple(children))

    def with_root(self, root: int) -> "ArithmeticCircuit":
        return ArithmeticCircuit(self.nodes, root)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class CircuitBundle:
    """One circuit root per derived fact, over a shared node arena."""

    circuit: ArithmeticCircuit
    roots: dict  # Fact -> node index
    bindings: dict  # variable name -> Fact (injective)
    roots_per_round: list = field(default_factory=list)  # for at_depth runs

    def for_fact(self, fact: Fact) -> Optional[ArithmeticCircuit]:
        if fact not in self.roots:
            return None
        return self.circuit.with_root(self.roots[fact])

    def to_document(self) -> dict:
        return {
            "circuits": {
                str(fact): {"nodes": _encode_nodes(self.circuit.nodes), "root": root}
                for fact, root in sorted(self.roots.items(), key=lambda kv: str(kv[0]))
            },
            "bindings": {name: str(fact) for name, fact in sorted(self.bindings.items())},
        }

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_document(), fh, indent=1, sort_keys=True)


def _encode_nodes(nodes: list) -> list:
    out = []
    for op, payload in nodes:
        if op in ("sum", "prod"):
            out.append({"op": op, "children": list(payload)})
        elif op == "var":
            out.append({"op": "leaf", "var": payload})
        else:
            out.append({"op": "leaf", "const": payload})
    return out


def _decode_nodes(doc: list) -> list:
    nodes = []
    for entry in doc:
        if entry["op"] in ("sum", "prod"):
            nodes.append((entry["op"], tuple(entry["children"])))
        elif "var" in entry:
            nodes.append(("var", entry["var"]))
        else:
            nodes.append(("const", entry["const"]))
    return nodes


def circuit_from_document(doc: dict) -> ArithmeticCircuit:
    return ArithmeticCircuit(_decode_nodes(doc["nodes"]), doc["root"])


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _variable_bindings(adb: AnnotatedDatabase) -> dict:
    """Fact variable names from an injectively annotated database."""
    bindings = {}
    for fact, value in adb.lam.items():
        if not isinstance(value, Poly) or len(value.terms) != 1:
            raise ValueError(f"{fact} is not annotated with a single variable")
        mono, coeff = value.terms[0]
        if coeff != 1 or len(mono) != 1 or mono[0][1] != 1:
            raise ValueError(f"{fact} is not annotated with a single variable")
        name = mono[0][0]
        if name in bindings:
            raise ValueError(f"variable {name} annotates two facts")
        bindings[name] = fact
    return bindings


def build_circuits(program: Program, adb: AnnotatedDatabase,
                   semantics: str = "hmdt",
                   depth: Optional[int] = None) -> CircuitBundle:
    """Build circuits for every derived fact under the chosen semantics.

    semantics: "at_depth" (requires `depth`), "mdt" (each fact frozen at
    its first derivation round), or "hmdt" (delta rounds, each fact wired
    once).  The database must carry one distinct variable per fact.
    """
    bindings = _variable_bindings(adb)
    circuit = ArithmeticCircuit()
    leaf_of = {fact: circuit.variable(name)
               for name, fact in sorted(bindings.items())}
    if semantics == "at_depth":
        if depth is None:
            raise ValueError("at_depth circuits need a depth")
        return _build_at_depth(program, adb, circuit, leaf_of, bindings, depth)
    if semantics == "mdt":
        return _build_mdt(program, adb, circuit, leaf_of, bindings)
    if semantics == "hmdt":
        return _build_delta(program, adb, circuit, leaf_of, bindings)
    raise ValueError(f"unknown circuit semantics {semantics!r}")


def _round_matches(program: Program, nodes: dict):
    """Per derived head: the factor-node lists of every rule match."""
    contributions: dict = {}
    facts = set(nodes)
    for rule in program.rules:
        for hom in homomorphisms(rule.body, facts):
            head = hom.apply(rule.head)
            factors = [nodes[hom.apply(atom)] for atom in rule.body]
            contributions.setdefault(head, []).append(factors)
    return contributions


def _wire(circuit: ArithmeticCircuit, factor_lists: list, extra=None) -> int:
    """One sum-of-products gate group (degenerate cases stay gate-free)."""
    gates = [factors[0] if len(factors) == 1 else circuit.prod(factors)
             for factors in factor_lists]
    if extra is not None:
        gates.append(extra)
    return gates[0] if len(gates) == 1 else circuit.sum(gates)


def _build_at_depth(program, adb, circuit, leaf_of, bindings, depth) -> CircuitBundle:
    current = dict(leaf_of)
    per_round = [dict(current)]
    for _ in range(depth):
        matches = _round_matches(program, current)
        stepped = {}
        for fact, factor_lists in matches.items():
            stepped[fact] = _wire(circuit, factor_lists, extra=leaf_of.get(fact))
        for fact, leaf in leaf_of.items():
            stepped.setdefault(fact, leaf)
        current = stepped
        per_round.append(dict(current))
    return CircuitBundle(circuit, current, bindings, per_round)


def _build_mdt(program, adb, circuit, leaf_of, bindings) -> CircuitBundle:
    """Each fact's root is its node at its first derivation round of the
    full round sequence; body values keep growing up to that round, exactly
    as in the target-frozen evaluation."""
    from .core import derivation_depths

    depths = derivation_depths(program, adb.database)
    max_depth = max(depths.values(), default=0)
    staged = _build_at_depth(program, adb, circuit, leaf_of, bindings, max_depth)
    roots = {fact: staged.roots_per_round[d][fact] for fact, d in depths.items()}
    return CircuitBundle(circuit, roots, bindings, staged.roots_per_round)


def _build_delta(program, adb, circuit, leaf_of, bindings) -> CircuitBundle:
    """Delta wiring: a fact is wired once, from the frozen roots of the
    facts already present, matching the one-annotation-per-fact rounds.
    Gates are only created for fresh heads, so re-derivations cost nothing."""
    roots = dict(leaf_of)
    while True:
        matches = _round_matches(program, roots)
        fresh = {fact: factor_lists for fact, factor_lists in matches.items()
                 if fact not in roots}
        if not fresh:
            return CircuitBundle(circuit, roots, bindings)
        for fact, factor_lists in sorted(fresh.items(), key=lambda kv: str(kv[0])):
            roots[fact] = _wire(circuit, factor_lists)


# ---------------------------------------------------------------------------
# Evaluation and expansion
# ---------------------------------------------------------------------------

def evaluate_circuit(circuit: ArithmeticCircuit, semiring: Semiring, nu: dict):
    """Bottom-up evaluation; nodes are visited once in index order."""
    memo: list = [None] * len(circuit.nodes)
    for index in range(circuit.root + 1):
        op, payload = circuit.nodes[index]
        if op == "var":
            if payload not in nu:
                raise UnboundVariable(payload)
            memo[index] = nu[payload]
        elif op == "const":
            memo[index] = semiring.one if payload == 1 else semiring.zero
        elif op == "sum":
            memo[index] = semiring.sum(memo[c] for c in payload)
        else:
            memo[index] = semiring.prod(memo[c] for c in payload)
    return memo[circuit.root]


def expand_circuit(circuit: ArithmeticCircuit, degree_cap: Optional[int] = None,
                   term_cap: int = 100_000) -> Poly:
    """Distribute products over sums into a canonical polynomial."""
    memo: list = [None] * len(circuit.nodes)
    for index in range(circuit.root + 1):
        op, payload = circuit.nodes[index]
        if op == "var":
            memo[index] = {((payload, 1),): 1}
        elif op == "const":
            memo[index] = {(): 1} if payload == 1 else {}
        elif op == "sum":
            terms: dict = {}
            for child in payload:
                for mono, coeff in memo[child].items():
                    terms[mono] = terms.get(mono, 0) + coeff
            memo[index] = terms
        else:
            terms = {(): 1}
            for child in payload:
                nxt: dict = {}
                for m1, c1 in terms.items():
                    for m2, c2 in memo[child].items():
                        m = mono_mul(m1, m2)
                        if degree_cap is not None and mono_degree(m) > degree_cap:
                            raise TermExplosion(
                                f"degree {mono_degree(m)} exceeds cap {degree_cap}")
                        nxt[m] = nxt.get(m, 0) + c1 * c2
                        if len(nxt) > term_cap:
                            raise TermExplosion(f"more than {term_cap} terms")
                terms = nxt
            memo[index] = terms
        if len(memo[index]) > term_cap:
            raise TermExplosion(f"more than {term_cap} terms")
    return Poly(memo[circuit.root])


def ground_instantiation_count(program: Program, adb: AnnotatedDatabase) -> int:
    """(rule, homomorphism) pairs over the derivable facts; the unit in
    which circuit growth per round is measured."""
    facts = saturate(program, adb.database)
    return sum(len(homomorphisms(rule.body, facts)) for rule in program.rules)
