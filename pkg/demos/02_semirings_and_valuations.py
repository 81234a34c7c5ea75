"""Semiring choices and homomorphic specialization.

One symbolic evaluation over provenance polynomials specializes to any
concrete semiring by a valuation, instead of re-running the engine.
"""

from provlog import (
    eval_valuation,
    load_database,
    load_program,
    ucq_provenance,
    validate_semiring,
)
from provlog.semirings import NAT, POLY_NAT, TROPICAL

HERE = __file__.rsplit("/", 1)[0] + "/instances"

program = load_program(f"{HERE}/reach.dl")
counts = load_database(f"{HERE}/reach_counts.dl", NAT)
costs = load_database(f"{HERE}/reach_costs.dl", TROPICAL)

from provlog.parser import parse_program

query = parse_program("q :- R(X,Y), B(Y).").rules[0].body
print("bag multiplicity of the query:", ucq_provenance([query], counts))
print("minimal cost of the query:    ",
      TROPICAL.fmt(ucq_provenance([query], costs)))

# The symbolic route: annotate each fact with its own variable, evaluate
# once, then specialize.
symbolic = load_database(f"{HERE}/reach_counts.dl", POLY_NAT)
lam = {fact: POLY_NAT.variable(f"v{i}")
       for i, fact in enumerate(sorted(symbolic.database.facts))}
symbolic = symbolic.with_annotations(lam)
value = ucq_provenance([query], symbolic)
print("provenance polynomial:        ", POLY_NAT.fmt(value))

names = {fact: lam[fact].monomials()[0][0][0] for fact in lam}
to_counts = {names[f]: counts.lam[f] for f in names}
to_costs = {names[f]: costs.lam[f] for f in names}
print("specialized to counts:        ", eval_valuation(value, NAT, to_counts))
print("specialized to costs:         ",
      TROPICAL.fmt(eval_valuation(value, TROPICAL, to_costs)))

report = validate_semiring(TROPICAL)
print("tropical law check:", "all laws hold" if report.ok else report.violations)
