"""Derivation trees and the shared-gate circuits behind the fixpoints."""

import json

from provlog import (
    build_circuits,
    evaluate_circuit,
    expand_circuit,
    load_database,
    load_program,
    make_fact,
)
from provlog.semirings import NAT, POLY_NAT
from provlog.trees import TreeQuery, enumerate_trees, serialize_tree

HERE = __file__.rsplit("/", 1)[0] + "/instances"

program = load_program(f"{HERE}/ladder.dl")
adb = load_database(f"{HERE}/ladder_db.dl", POLY_NAT)
target = make_fact("A", "a")

print("all repeat-free derivations of A(a):")
for i, tree in enumerate(enumerate_trees(
        TreeQuery(program, adb, target, kind="non_recursive"))):
    print(f"-- tree {i}, depth {tree.depth}")
    print(serialize_tree(tree, "   "))

bundle = build_circuits(program, adb, semantics="mdt")
circuit = bundle.for_fact(target)
print()
print(f"minimal-depth circuit: {len(circuit)} shared nodes")
print("expanded polynomial:", POLY_NAT.fmt(expand_circuit(circuit)))
ones = {name: 1 for name in bundle.bindings}
print("number of minimal-depth derivations (all leaves = 1):",
      evaluate_circuit(circuit, NAT, ones))
print()
print("document form:")
print(json.dumps(bundle.to_document()["circuits"]["A(a)"], indent=1)[:400], "...")
