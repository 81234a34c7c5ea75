"""Command-line interface: eval / trees / check subcommands.

Exit codes: 0 success, 1 parse error, 2 semantics/semiring incompatibility,
3 divergence or missing depth cap, 4 property-matrix mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from .circuits import build_circuits
from .core import as_fact
from .engine import at_provenance, naive_eval, nrt_eval, optimized_eval, sne_provenance
from .errors import (
    ArityError,
    DatalogSyntaxError,
    DepthCapRequired,
    DivergenceError,
    DuplicateFactError,
    HeadVariableError,
    SizeLimitError,
    UnsupportedSemiring,
    ZeroAnnotationError,
)
from .models import am_provenance, sam_provenance
from .parser import check_consistency, load_database, load_program
from .properties import PROPERTIES, SEMANTICS, run_table1
from .semirings import get_semiring
from .trees import TreeQuery, enumerate_trees, serialize_tree, tree_to_document

_PARSE_ERRORS = (DatalogSyntaxError, ArityError, HeadVariableError,
                 ZeroAnnotationError, DuplicateFactError, ValueError, OSError)
_DIVERGENCE_ERRORS = (DivergenceError, DepthCapRequired, SizeLimitError)

TREE_KINDS = {
    "all": "all",
    "nonrecursive": "non_recursive",
    "md": "min_depth",
    "hmd": "hereditary_min_depth",
}


def _caps_from_env() -> dict:
    """PROVLOG_CAPS="iter=128,depth=8,samset=2048" style overrides."""
    raw = os.environ.get("PROVLOG_CAPS", "")
    caps = {}
    for chunk in raw.split(","):
        if "=" in chunk:
            key, _, value = chunk.partition("=")
            caps[key.strip()] = int(value)
    return caps


def _parse_fact(text: str):
    from .parser import _Parser

    parser = _Parser(text.strip())
    return as_fact(parser.atom())


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="provlog",
        description="Datalog evaluation with semiring provenance")
    sub = top.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate provenance of facts")
    ev.add_argument("--program", required=True)
    ev.add_argument("--database", required=True)
    ev.add_argument("--semiring", default="poly-nat",
                    help="bool|nat|nat-inf|tropical|posbool-free|poly-nat|"
                         "poly-bool|series-trunc:<deg>|table:<path>")
    ev.add_argument("--semantics", default="at",
                    choices=["at", "nrt", "mdt", "hmdt", "am", "sam"])
    ev.add_argument("--fact", action="append", default=[],
                    help="target fact (repeatable); all derived if omitted")
    ev.add_argument("--iteration-cap", type=int, default=None)
    ev.add_argument("--trace", action="store_true",
                    help="include per-round deltas of the fixpoint")
    ev.add_argument("--emit-circuit", metavar="PATH",
                    help="write the circuit bundle (mdt/hmdt/at semantics)")
    ev.add_argument("--circuit-depth", type=int, default=None,
                    help="round count for at-semantics circuits")
    ev.add_argument("--format", choices=["text", "json"], default="text")

    tr = sub.add_parser("trees", help="enumerate derivation trees")
    tr.add_argument("--program", required=True)
    tr.add_argument("--database", required=True)
    tr.add_argument("--semiring", default="poly-nat")
    tr.add_argument("--fact", required=True)
    tr.add_argument("--kind", default="all", choices=sorted(TREE_KINDS))
    tr.add_argument("--max-depth", type=int, default=None)
    tr.add_argument("--count-only", action="store_true")
    tr.add_argument("--format", choices=["text", "json"], default="text")

    ck = sub.add_parser("check", help="run the property matrix")
    ck.add_argument("--all", action="store_true")
    ck.add_argument("--property", action="append", default=[],
                    choices=sorted(PROPERTIES))
    ck.add_argument("--semantics", action="append", default=[],
                    choices=list(SEMANTICS))
    ck.add_argument("--trials", type=int, default=200)
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--workers", type=int, default=None)
    ck.add_argument("--format", choices=["text", "json"], default="text")
    return top


def _evaluate(semantics, program, adb, fact, cap, samset=None):
    if semantics == "at":
        return at_provenance(program, adb, fact, cap=cap)
    if semantics == "nrt":
        return nrt_eval(program, adb, fact)
    if semantics == "mdt":
        return optimized_eval(program, adb, fact, cap=cap)
    if semantics == "hmdt":
        return sne_provenance(program, adb, fact)
    if semantics == "am":
        return am_provenance(program, adb, fact, **({"cap": cap} if cap else {}))
    return sam_provenance(program, adb, fact,
                          **({"cap": samset} if samset else {}))


def cmd_eval(args) -> int:
    caps = _caps_from_env()
    cap = args.iteration_cap or caps.get("iter")
    try:
        semiring = get_semiring(args.semiring)
        program = load_program(args.program)
        adb = load_database(args.database, semiring)
        check_consistency(program, adb)
        targets = [_parse_fact(f) for f in args.fact]
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if not targets:
                from .core import saturate

                targets = sorted(saturate(program, adb.database))
            samset = caps.get("samset")
            rows = [(fact, _evaluate(args.semantics, program, adb, fact, cap,
                                     samset=samset))
                    for fact in targets]
            trace = None
            if args.trace:
                trace = naive_eval(program, adb, cap=cap, strict=False)
            bundle = None
            if args.emit_circuit:
                semantics = {"at": "at_depth"}.get(args.semantics, args.semantics)
                if semantics not in ("mdt", "hmdt", "at_depth"):
                    print("error: circuits exist for mdt/hmdt/at only",
                          file=sys.stderr)
                    return 2
                depth = args.circuit_depth or caps.get("depth", 8)
                bundle = build_circuits(program, adb, semantics=semantics,
                                        depth=depth)
                bundle.dump(args.emit_circuit)
    except UnsupportedSemiring as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DIVERGENCE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.format == "json":
        payload = {"values": {str(f): semiring.fmt(v) for f, v in rows}}
        if trace is not None:
            payload["trace"] = {"status": trace.status, "rounds": trace.rounds,
                                "deltas": trace.deltas()}
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        for fact, value in rows:
            print(f"{fact}\t{semiring.fmt(value)}")
        if trace is not None:
            print(f"# naive rounds: {trace.status} after {trace.rounds}")
            for i, delta in enumerate(trace.deltas()):
                for fact, value in delta.items():
                    print(f"# round {i}: {fact} -> {value}")
    return 0


def cmd_trees(args) -> int:
    caps = _caps_from_env()
    try:
        semiring = get_semiring(args.semiring)
        program = load_program(args.program)
        adb = load_database(args.database, semiring)
        check_consistency(program, adb)
        target = _parse_fact(args.fact)
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    query = TreeQuery(program, adb, target, kind=TREE_KINDS[args.kind],
                      depth_cap=args.max_depth or caps.get("depth"))
    try:
        trees = list(enumerate_trees(query))
    except _DIVERGENCE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.count_only:
        print(len(trees))
    elif args.format == "json":
        print(json.dumps([tree_to_document(t) for t in trees], indent=1))
    else:
        for i, tree in enumerate(trees):
            print(f"tree {i} (depth {tree.depth})")
            print(serialize_tree(tree, indent="  "))
    return 0


def cmd_check(args) -> int:
    properties = args.property or None
    semantics = args.semantics or None
    if args.all:
        properties = semantics = None
    report = run_table1(trials=args.trials, seed=args.seed,
                        properties=properties, semantics=semantics,
                        workers=args.workers)
    if args.format == "json":
        print(json.dumps(report.to_document(), indent=1, sort_keys=True))
    else:
        print(report.format_text())
    if not report.ok:
        for cell in report.mismatches():
            print(f"mismatch: {cell}", file=sys.stderr)
            if cell.witness is not None:
                print(f"  {cell.witness.description}: "
                      f"{cell.witness.lhs} vs {cell.witness.rhs}",
                      file=sys.stderr)
        return 4
    return 0


def main(argv=None) -> int:
    args = _build_argparser().parse_args(argv)
    if args.command == "eval":
        return cmd_eval(args)
    if args.command == "trees":
        return cmd_trees(args)
    return cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
