"""Command-line interface.

Subcommands: check, oracle, cuts, verify, separate, solve,
reduce-partition.  All output is deterministic for fixed inputs; rationals
print in canonical lowest-terms form.  Instances are normalized after
parsing, so reported slot indices always refer to the canonical
weight-descending order within each group.

Exit codes: 0 success, 1 parse/usage error, 2 violated precondition,
3 enumeration/node limit exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import cuts as cuts_mod
from . import fileio, oracle, separation, solver
from .errors import (CkpError, FormatError, PreconditionError,
                     ResourceLimitError, ValidationError)
from .model import (Instance, Point, VarRef, evaluate, normalize,
                    validate_assumptions)
from .numeric import format_rational


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


def _load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        parsed = fileio.parse_instance(handle.read())
    normalized, _ = normalize(parsed)
    return normalized


def _print_point(point: Point, out) -> None:
    for ref, value in point.entries:
        print("val %d %d %s" % (ref.group, ref.slot, format_rational(value)),
              file=out)


def _print_cut(cut, out, facet_text: str) -> None:
    print("# %s" % cut.describe(), file=out)
    print("# facet: %s" % facet_text, file=out)
    out.write(fileio.serialize_inequality(cut.inequality))


def _facet_text(instance, cut, verify: bool, limit) -> str:
    if not verify:
        return "yes" if cut.facet_guaranteed else "unknown"
    dim = oracle.face_dimension(instance, cut.inequality, limit)
    return "yes" if dim == instance.dimension - 1 else "no"


def _cmd_check(args, out) -> int:
    with open(args.instance, "r", encoding="utf-8") as handle:
        parsed = fileio.parse_instance(handle.read())
    instance, perms = normalize(parsed)
    already = all(perm == tuple(range(1, len(perm) + 1)) for perm in perms)
    report = validate_assumptions(instance)
    print("groups: %d" % instance.m, file=out)
    print("variables: %d" % instance.dimension, file=out)
    print("normalized-input: %s" % ("yes" if already else "no"), file=out)
    m0 = " ".join(str(i) for i in sorted(report.m0)) if report.m0 else "(empty)"
    print("m0: %s" % m0, file=out)
    print("assumption1: %s" % ("holds" if report.assumption1 else "fails"), file=out)
    print("assumption2: %s" % ("holds" if report.assumption2 else "fails"), file=out)
    if not report.assumption2:
        print("trivial-value: %s" % format_rational(report.trivial_value), file=out)
        print("trivial-point:", file=out)
        _print_point(report.trivial_point, out)
    return 0


def _cmd_oracle(args, out) -> int:
    instance = _load_instance(args.instance)
    vertices = oracle.enumerate_candidate_vertices(instance, args.enumerate_limit)
    objective = {ref: instance.profit(ref) for ref in instance.refs()}
    value, point = oracle.maximize_over_S(instance, objective,
                                          args.enumerate_limit)
    print("candidates: %d" % len(vertices.points), file=out)
    print("value: %s" % format_rational(value), file=out)
    print("point:", file=out)
    _print_point(point, out)
    return 0


def _cmd_verify(args, out) -> int:
    instance = _load_instance(args.instance)
    with open(args.inequality, "r", encoding="utf-8") as handle:
        inequality = fileio.parse_inequality(handle.read())
    result = oracle.check_validity(instance, inequality, args.enumerate_limit)
    if not result.valid:
        print("valid: no", file=out)
        print("witness:", file=out)
        _print_point(result.witness, out)
        return 0
    print("valid: yes", file=out)
    dim = oracle.face_dimension(instance, inequality, args.enumerate_limit)
    print("face-dim: %d" % dim, file=out)
    print("facet: %s" % ("yes" if dim == instance.dimension - 1 else "no"),
          file=out)
    return 0


def _iter_family_cuts(instance, family, limit):
    """All theorem-backed cuts of one family, deterministic order."""
    m0 = instance.singleton_groups()
    if family.startswith("pack"):
        packs = cuts_mod.enumerate_maximal_switching_packs(instance, limit)
        for pack in packs:
            if family == "pack1":
                yield cuts_mod.pack_inequality_1(instance, pack)
                continue
            free = [ref for ref in pack if ref.group not in m0]
            if len(free) < 2:
                continue
            for pivot in free:
                if family == "pack2":
                    yield cuts_mod.pack_inequality_2(instance, pack, pivot)
                else:
                    for tilt in sorted(set(pack.groups()) & m0):
                        yield cuts_mod.pack_inequality_3(instance, pack, pivot, tilt)
    else:
        oracle.check_enum_limit(instance, limit)
        b = instance.capacity
        for pattern in oracle.iter_patterns(instance):
            refs = [VarRef(i, j) for i, j in enumerate(pattern, start=1) if j]
            if not refs:
                continue
            itemset = cuts_mod.ItemSet(tuple(refs))
            if itemset.weight(instance) <= b:
                continue
            if family == "lcover1":
                try:
                    yield cuts_mod.lifted_cover_inequality_1(instance, itemset)
                except PreconditionError:
                    continue
            else:
                for special in itemset:
                    if special.slot >= instance.slots(special.group):
                        continue
                    try:
                        yield cuts_mod.lifted_cover_inequality_2(
                            instance, itemset, special)
                    except PreconditionError:
                        continue


def _cmd_cuts(args, out) -> int:
    instance = _load_instance(args.instance)
    families = cuts_mod.FAMILIES if args.family == "all" else (args.family,)
    first = True
    for family in families:
        for cut in _iter_family_cuts(instance, family, args.enumerate_limit):
            if not first:
                print(file=out)
            first = False
            _print_cut(cut, out,
                       _facet_text(instance, cut, args.verify,
                                   args.enumerate_limit))
    if first:
        print("# no cuts", file=out)
    return 0


def _cmd_separate(args, out) -> int:
    instance = _load_instance(args.instance)
    with open(args.point, "r", encoding="utf-8") as handle:
        point = fileio.parse_point(handle.read())
    if args.greedy:
        result = separation.separate_greedy(instance, point, args.family)
    else:
        result = separation.separate_exact(instance, point, args.family,
                                           args.enumerate_limit)
    if not result.found:
        print("outcome: none", file=out)
        print("examined: %d" % result.stats.examined, file=out)
        return 0
    print("outcome: found", file=out)
    print("violation: %s" % format_rational(result.violation), file=out)
    print("examined: %d" % result.stats.examined, file=out)
    _print_cut(result.cut, out,
               "yes" if result.cut.facet_guaranteed else "unknown")
    return 0


def _cmd_solve(args, out) -> int:
    instance = _load_instance(args.instance)
    if args.cuts == "none":
        families = ()
    else:
        families = tuple(name.strip() for name in args.cuts.split(",") if name.strip())
    config = solver.SolveConfig(families=families,
                                max_cuts_per_node=args.max_cuts_per_node,
                                node_limit=args.node_limit,
                                exact_fallback=args.exact_sep,
                                enum_limit=args.enumerate_limit)
    report = solver.branch_and_cut(instance, config)
    print("status: %s" % ("optimal" if report.proven_optimal else "node-limit"),
          file=out)
    print("value: %s" % format_rational(report.value), file=out)
    print("best-bound: %s" % format_rational(report.best_bound), file=out)
    print("nodes: %d" % report.nodes, file=out)
    print("lp-pivots: %d" % report.lp_pivots, file=out)
    print("cuts-added: %s" % " ".join(
        "%s=%d" % (name, report.cuts_per_family[name])
        for name in cuts_mod.FAMILIES), file=out)
    print("point:", file=out)
    _print_point(report.point, out)
    return 0 if report.proven_optimal else 3


def _cmd_reduce(args, out) -> int:
    try:
        alphas = tuple(int(tok) for tok in args.alphas.split(","))
    except ValueError:
        raise ValidationError("alphas must be a comma-separated integer list")
    instance, point = separation.build_partition_reduction(alphas, args.beta)
    instance_path = args.out + ".ckp"
    point_path = args.out + ".point"
    with open(instance_path, "w", encoding="utf-8") as handle:
        handle.write(fileio.serialize_instance(instance))
    with open(point_path, "w", encoding="utf-8") as handle:
        handle.write(fileio.serialize_point(point))
    print("wrote %s" % instance_path, file=out)
    print("wrote %s" % point_path, file=out)
    return 0


def _add_limit(parser) -> None:
    parser.add_argument("--enumerate-limit", type=int, default=None,
                        metavar="N",
                        help="pattern-count guard (default: CKP_ENUM_LIMIT "
                             "env var or 10^6)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ckp",
                     description="Exact cuts, oracles, separation, and "
                                 "branch-and-cut for the complementarity "
                                 "knapsack problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[], help="report standing assumptions")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="enumerate candidate vertices and "
                                      "maximize the profits over S")
    p.add_argument("instance")
    _add_limit(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="check an inequality's validity, face "
                                      "dimension, and facet status")
    p.add_argument("instance")
    p.add_argument("inequality")
    _add_limit(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cuts", help="generate cuts of a family")
    p.add_argument("instance")
    p.add_argument("--family", required=True,
                   choices=cuts_mod.FAMILIES + ("all",))
    p.add_argument("--verify", action="store_true",
                   help="decide facet status with the oracle instead of "
                        "printing 'unknown'")
    _add_limit(p)
    p.set_defaults(func=_cmd_cuts)

    p = sub.add_parser("separate", help="find a violated cut at a point")
    p.add_argument("instance")
    p.add_argument("point")
    p.add_argument("--family", required=True,
                   choices=cuts_mod.FAMILIES + ("all",))
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    _add_limit(p)
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("solve", help="exact branch-and-cut")
    p.add_argument("instance")
    p.add_argument("--cuts", default=",".join(cuts_mod.FAMILIES),
                   metavar="LIST|none",
                   help="comma-separated families (default: all) or 'none'")
    p.add_argument("--exact-sep", action="store_true",
                   help="fall back to exact separation when greedy finds "
                        "nothing")
    p.add_argument("--max-cuts-per-node", type=int, default=10, metavar="N")
    p.add_argument("--node-limit", type=int, default=10 ** 5, metavar="N")
    _add_limit(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reduce-partition",
                       help="build the partition-problem reduction instance")
    p.add_argument("--alphas", required=True,
                   help="comma-separated positive integers")
    p.add_argument("--beta", required=True, type=int)
    p.add_argument("--out", required=True, metavar="PREFIX")
    p.set_defaults(func=_cmd_reduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse signals usage problems (and --help) by exiting; keep the
        # documented return-code contract instead of letting it propagate.
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args, sys.stdout)
    except FormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except (ValidationError, PreconditionError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except CkpError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
