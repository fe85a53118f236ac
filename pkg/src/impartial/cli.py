"""Command-line interface.

Every subcommand prints JSON to standard output (or a small table with
--pretty).  Exit codes: 0 on success, 1 when a verification or guarantee
check fails, 2 when parameters fall outside the covered range or a search
budget runs out, 3 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .assignment import assign_general, assignment_guarantee
from .errors import (
    ApplicabilityError,
    BudgetExceededError,
    InstanceFormatError,
    ParameterError,
)
from .grid import GRID_MODES, alpha_grid
from .instances import (
    GENERATOR_KINDS,
    generate,
    instance_to_json_dict,
    load_instance,
    serialize_csv,
)
from .matrices import InstanceTuple, WeightMatrix
from .oracle import (
    check_impartial,
    default_space,
    opt_assignment,
    opt_selection,
    ratio_report,
    tightness_instance,
    top_score_selection,
)
from .partitions import build_partition_system, load_partition_file
from .selection import select, select_general, selection_guarantee

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_OUT_OF_RANGE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise UsageError(message)


def _print(doc: dict, pretty: bool) -> None:
    if pretty:
        for line in _pretty_lines(doc):
            print(line)
    else:
        print(json.dumps(doc))


def _pretty_lines(doc, indent: int = 0):
    pad = "  " * indent
    if isinstance(doc, dict):
        for key, value in doc.items():
            if isinstance(value, (dict, list)) and value:
                yield f"{pad}{key}:"
                yield from _pretty_lines(value, indent + 1)
            else:
                yield f"{pad}{key}: {value}"
    elif isinstance(doc, list):
        for value in doc:
            if isinstance(value, (dict, list)):
                yield from _pretty_lines(value, indent)
                yield ""
            else:
                yield f"{pad}- {value}"
    else:
        yield f"{pad}{doc}"


def _resolve_k(flag_k, file_k) -> int:
    if flag_k is not None:
        return flag_k
    if file_k is not None:
        return file_k
    raise UsageError("no k given and the instance file does not carry one")


def _require_matrix(instance) -> WeightMatrix:
    if not isinstance(instance, WeightMatrix):
        raise UsageError("this command needs a single-profile instance, got a tuple")
    return instance


def _require_tuple(instance) -> InstanceTuple:
    if isinstance(instance, WeightMatrix):
        return InstanceTuple((instance,))
    return instance


def _cmd_select(args) -> int:
    instance, file_k = load_instance(args.instance)
    A = _require_matrix(instance)
    k = _resolve_k(args.k, file_k)
    if args.partition_file:
        system = load_partition_file(args.partition_file)
        result = select(A, k, system)
    else:
        result = select_general(A, k)
    doc = result.to_json_dict()
    code = EXIT_OK
    if args.oracle:
        _, opt_score = opt_selection(A, k)
        report = ratio_report("select", result.score, opt_score, result.alpha)
        doc["opt_score"] = opt_score
        doc["ratio"] = None if report.ratio is None else str(report.ratio)
        doc["bound_met"] = report.passed
        if not report.passed:
            code = EXIT_CHECK_FAILED
    _print(doc, args.pretty)
    return code


def _cmd_assign(args) -> int:
    instance, file_k = load_instance(args.instance)
    T = _require_tuple(instance)
    k = _resolve_k(args.k, file_k)
    result = assign_general(T, k)
    doc = result.to_json_dict()
    code = EXIT_OK
    if args.oracle:
        _, opt_score = opt_assignment(T, k)
        report = ratio_report("assign", result.score, opt_score, result.alpha)
        doc["opt_score"] = opt_score
        doc["ratio"] = None if report.ratio is None else str(report.ratio)
        doc["bound_met"] = report.passed
        if not report.passed:
            code = EXIT_CHECK_FAILED
    _print(doc, args.pretty)
    return code


def _cmd_opt(args) -> int:
    instance, file_k = load_instance(args.instance)
    k = _resolve_k(args.k, file_k)
    if args.assignment or isinstance(instance, InstanceTuple):
        T = _require_tuple(instance)
        jobs, score = opt_assignment(T, k)
        doc = {"jobs": [list(job) for job in jobs], "score": score}
    else:
        chosen, score = opt_selection(instance, k)
        doc = {"selected": list(chosen), "score": score}
    _print(doc, args.pretty)
    return EXIT_OK


def _cmd_verify(args) -> int:
    space = default_space(
        args.n,
        m=args.m if args.mechanism == "assign" else 1,
        seed=args.seed,
        support_cells=args.support_cells,
        pair_target=args.pairs,
        max_weight=args.max_weight,
    )
    if args.mechanism == "select":
        mechanism = lambda A: select_general(A, args.k)
    elif args.mechanism == "assign":
        mechanism = lambda T: assign_general(T, args.k)
    else:
        mechanism = lambda A: top_score_selection(A, args.k)
    report = check_impartial(mechanism, space, name=args.mechanism, budget=args.budget)
    _print(report.to_json_dict(), args.pretty)
    if report.exhausted:
        return EXIT_OUT_OF_RANGE
    return EXIT_CHECK_FAILED if report.violations else EXIT_OK


def _cmd_tightness(args) -> int:
    system = build_partition_system(args.n, args.k)
    A = tightness_instance(args.n, args.k, system)
    result = select(A, args.k, system)
    _, opt_score = opt_selection(A, args.k)
    target = Fraction(1, system.b)
    ratio = Fraction(result.score, opt_score)
    doc = {
        "n": args.n,
        "k": args.k,
        "b": system.b,
        "votes": [list(v) for v in A.nonzero_votes()],
        "select_score": result.score,
        "opt_score": opt_score,
        "ratio": str(ratio),
        "alpha": str(target),
        "tight": ratio == target,
    }
    _print(doc, args.pretty)
    return EXIT_OK if ratio == target else EXIT_CHECK_FAILED


def _cmd_partitions(args) -> int:
    system = build_partition_system(args.n, args.k)
    _print(system.to_json_dict(), args.pretty)
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    parts = text.split(":")
    try:
        numbers = [int(part) for part in parts]
    except ValueError:
        raise UsageError(f"range {text!r} must be START:STOP[:STEP] or a single integer")
    if len(numbers) == 1:
        return numbers
    if len(numbers) == 2:
        start, stop = numbers
        step = 1
    elif len(numbers) == 3:
        start, stop, step = numbers
    else:
        raise UsageError(f"range {text!r} must be START:STOP[:STEP] or a single integer")
    if step < 1 or stop < start:
        raise UsageError(f"range {text!r} must run forward")
    return list(range(start, stop + 1, step))


def _cmd_alpha_grid(args) -> int:
    grid = alpha_grid(
        _parse_range(args.n_range), _parse_range(args.k_range), mode=args.mode, m=args.m
    )
    if args.format == "tsv":
        sys.stdout.write(grid.to_tsv())
    else:
        _print(grid.to_json_dict(), args.pretty)
    return EXIT_OK


def _cmd_generate(args) -> int:
    instance = generate(
        args.kind,
        n=args.n,
        seed=args.seed,
        m=args.m,
        k=args.k,
        max_weight=args.max_weight,
        p=args.p,
    )
    if args.format == "csv":
        A = _require_matrix(instance)
        sys.stdout.write(serialize_csv(A))
    else:
        _print(instance_to_json_dict(instance, k=args.k), args.pretty)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="impartial",
        description="Impartial selection and assignment mechanisms with exact guarantees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--pretty", action="store_true", help="print a table, not JSON")

    p = sub.add_parser("select", help="run the selection mechanism on an instance file")
    p.add_argument("instance")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--partition-file", default=None, help="JSON partition system to use verbatim")
    p.add_argument("--oracle", action="store_true", help="also compute the exact optimum and ratio")
    common(p)
    p.set_defaults(handler=_cmd_select)

    p = sub.add_parser("assign", help="run the assignment mechanism on a tuple instance")
    p.add_argument("instance")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--oracle", action="store_true")
    common(p)
    p.set_defaults(handler=_cmd_assign)

    p = sub.add_parser("opt", help="exact optimum for an instance")
    p.add_argument("instance")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--assignment", action="store_true", help="force the assignment oracle")
    common(p)
    p.set_defaults(handler=_cmd_opt)

    p = sub.add_parser("verify", help="probe a mechanism for impartiality violations")
    p.add_argument("--mechanism", choices=("select", "assign", "top-sums"), required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=10_000, help="(instance, agent) pairs for large n")
    p.add_argument("--support-cells", type=int, default=6, help="support size for the exhaustive grid")
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--budget", type=int, default=None, help="cap on mechanism evaluations")
    common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("tightness", help="profile on which the guarantee is attained exactly")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_tightness)

    p = sub.add_parser("partitions", help="emit the canonical partition system as JSON")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_partitions)

    p = sub.add_parser("alpha-grid", help="guarantee table over parameter ranges")
    p.add_argument("--n-range", required=True, help="START:STOP[:STEP] or a single value")
    p.add_argument("--k-range", required=True, help="START:STOP[:STEP] or a single value")
    p.add_argument("--mode", choices=GRID_MODES, default="select")
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common(p)
    p.set_defaults(handler=_cmd_alpha_grid)

    p = sub.add_parser("generate", help="deterministically generate an instance")
    p.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, default=None)
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(handler=_cmd_generate)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ApplicabilityError, ParameterError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_RANGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
