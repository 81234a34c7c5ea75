"""Semiring-parametric Datalog evaluation with six provenance semantics."""

from .core import (
    Atom,
    Database,
    Fact,
    Homomorphism,
    Program,
    Rule,
    Term,
    const,
    entails,
    ground,
    homomorphisms,
    make_fact,
    minimal_depth,
    saturate,
    var,
)
from .engine import (
    AnnotatedDatabase,
    AnnotatedInterpretation,
    FixpointTrace,
    annotate,
    annotated_union,
    at_provenance,
    immediate_consequence,
    naive_eval,
    nrt_eval,
    optimized_eval,
    seminaive_eval,
    sne_provenance,
    ucq_provenance,
)
from .circuits import build_circuits, evaluate_circuit, expand_circuit
from .models import am_provenance, sam_monomial_oracle, sam_provenance
from .properties import (
    InstanceGenerator,
    check_definition3,
    check_property,
    necessary_facts,
    run_table1,
    usable_facts,
)
from .parser import (
    load_database,
    load_program,
    parse_database,
    parse_program,
    print_database,
    print_program,
)
from .semirings import (
    BOOL,
    NAT,
    NAT_INF,
    POLY_BOOL,
    POLY_NAT,
    POSBOOL,
    TROPICAL,
    Semiring,
    eval_valuation,
    get_semiring,
    load_table_semiring,
    natural_order_leq,
    series_trunc,
    validate_semiring,
)
from .trees import TreeQuery, enumerate_trees, tree_annotation

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
