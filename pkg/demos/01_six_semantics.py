"""Walk through the six provenance semantics on two small instances.

The four-rule ladder separates the three tree-based semantics; the pair of
alternative rules separates the two model-based ones from the rest.
"""

import warnings

warnings.simplefilter("ignore")

from provlog import (
    am_provenance,
    at_provenance,
    load_database,
    load_program,
    make_fact,
    nrt_eval,
    optimized_eval,
    sam_provenance,
    sne_provenance,
)
from provlog.semirings import NAT, POLY_NAT

HERE = __file__.rsplit("/", 1)[0] + "/instances"

program = load_program(f"{HERE}/ladder.dl")
adb = load_database(f"{HERE}/ladder_db.dl", POLY_NAT)
target = make_fact("A", "a")

print("ladder program:")
print(program)
print()
print("every repeat-free derivation:", POLY_NAT.fmt(
    nrt_eval(program, adb, target, use_fast_path=False)))
print("shallowest derivations only:", POLY_NAT.fmt(
    optimized_eval(program, adb, target)))
print("hereditarily shallowest:    ", POLY_NAT.fmt(
    sne_provenance(program, adb, target)))
print()

program = load_program(f"{HERE}/two_rules.dl")
adb = load_database(f"{HERE}/two_rules_db.dl", NAT)
goal = make_fact("goal")
print("two independent derivations of goal, annotated 2 and 3:")
print("  all derivations summed:   ", at_provenance(program, adb, goal))
print("  least annotated model:    ", am_provenance(program, adb, goal))
print("  distinct derivation values:", sam_provenance(program, adb, goal))
