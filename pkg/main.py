"""
Coupling toolkit - command line
===============================

One subcommand per operation. Reports go to standard output as JSON (default)
or CSV; log messages go to standard error.

Exit status: 0 on success (a NO answer is a success), 2 on usage or input
errors, 3 when a vertex cap or search budget is exceeded.

Examples:
    python main.py mec --p 1/6,1/3,1/2 --q 1/2,1/2 --alpha 1
    python main.py tv --p 1/2,1/2 --q 1/4,3/4
    python main.py reduce subset-sum --weights 1,2,3 --target 3
    python main.py counterexample --alpha 0.4 --beta 3 --r 1.5 --N 10000 --stages 10,100,1000,10000
"""
import argparse
import json
import logging
import math
import os
import sys
from fractions import Fraction

from config import (
    DEFAULT_LOG_BASE, DEFAULT_VERTEX_CAP, DEFAULT_THREADS, DEFAULT_CHANNEL_BUDGET,
    EXACT_STRATEGY, DEFAULT_FORMAT, VERBOSE_OUTPUT
)
from counterexamples import UnboundedFamilyParams, divergence_trace
from dist_core import (
    Dist, Joint, make_dist, make_joint, marginals, parse_rational, dist_from_json, joint_from_json,
    joint_to_json, joint_to_csv
)
from errors import CouplingError, LimitExceeded, ParseError
from info_measures import (
    shannon_entropy, joint_entropy, conditional_entropy, mutual_information, kl_divergence,
    renyi_entropy, total_variation, parse_alpha, ROWS, COLUMNS
)
from metrics import delta_p, delta_lower, bound_report, parse_p
from polytope import CouplingSpec, enumerate_vertices
from reductions import (
    SubsetSumInstance, ThreePartitionInstance, decide_subset_sum, decide_partition, decide_3partition
)
from solvers import (
    min_entropy_coupling_exact, min_entropy_coupling_greedy, maximal_coupling, optimal_channel,
    max_dependence
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LIMIT = 3


# === Input ===

def _is_inline(source: str) -> bool:
    """True when every ','/';'-separated item parses as a rational"""
    items = [item for row in source.split(";") for item in row.split(",") if item.strip()]
    if not items:
        return False
    try:
        for item in items:
            parse_rational(item)
    except ParseError:
        return False
    return True


def _read_source(source: str):
    """
    Returns (text, is_file). "@path" is always a file; a value that parses
    as rationals is inline even if a file of that name exists.
    """
    path = source[1:] if source.startswith("@") else source
    if source.startswith("@") or (not _is_inline(source) and os.path.isfile(path)):
        try:
            with open(path, "r", encoding="utf-8") as f:
                return f.read(), True
        except OSError as e:
            raise ParseError(f"cannot read file ({e.strerror})", path) from None
    return source, False


def load_dist(source: str, flag: str = "--p") -> Dist:
    """Inline comma-separated rationals ("1/2,1/2", "0.5,0.5") or a {"masses": [...]} JSON file"""
    try:
        text, is_file = _read_source(source)
        if is_file:
            return dist_from_json(text, source)
        items = [item for item in text.split(",") if item.strip()]
        if not items:
            raise ParseError("no masses given", flag)
        return make_dist(items)
    except CouplingError as e:
        raise type(e)(f"{flag}: {e}") from None


def load_joint(source: str, flag: str = "--joint") -> Joint:
    """Rows separated by ';' ("1/4,1/4;1/2,0") or a {"rows": [[...]]} JSON file"""
    try:
        text, is_file = _read_source(source)
        if is_file:
            return joint_from_json(text, source)
        rows = [[item for item in row.split(",") if item.strip()] for row in text.split(";") if row.strip()]
        return make_joint(rows)
    except CouplingError as e:
        raise type(e)(f"{flag}: {e}") from None


def _int_list(text: str, flag: str):
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}", flag) from None


# === Output ===

def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (Dist, Joint)):
        return str(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _finite(value: float):
    return value if math.isfinite(value) else ("inf" if value > 0 else "-inf")


def emit(report: dict, fmt: str, csv_lines=None):
    """JSON report, or CSV lines (a matrix or a table) falling back to key,value pairs"""
    if fmt == "csv":
        if csv_lines is None:
            csv_lines = [f"{key},{value}" for key, value in report.items()
                         if not isinstance(value, (dict, list))]
        print("\n".join(csv_lines))
    else:
        print(json.dumps(report, default=_jsonable, indent=2))


def _solution_report(solution) -> dict:
    return {
        "coupling": joint_to_json(solution.coupling)["rows"],
        "objective": solution.objective_value,
        "certificate": solution.certificate,
        "vertex": solution.vertex,
        "details": solution.details,
    }


def _solver_options(args) -> dict:
    return {"strategy": args.strategy, "vertex_cap": args.vertex_cap, "threads": args.threads}


# === Subcommands ===

def cmd_entropy(args):
    if args.joint:
        S = load_joint(args.joint)
        P, Q = marginals(S)
        return {
            "joint_entropy": joint_entropy(S, args.base),
            "H_X": shannon_entropy(P, args.base),
            "H_Y": shannon_entropy(Q, args.base),
            "H_X_given_Y": conditional_entropy(S, COLUMNS, args.base),
            "H_Y_given_X": conditional_entropy(S, ROWS, args.base),
            "mutual_information": mutual_information(S, args.base),
        }, None
    return {"entropy": shannon_entropy(_need_p(args), args.base)}, None


def cmd_renyi(args):
    alpha = parse_alpha(args.alpha)
    target = load_joint(args.joint) if args.joint else _need_p(args)
    return {"alpha": _finite(alpha), "renyi_entropy": renyi_entropy(target, alpha, args.base)}, None


def cmd_tv(args):
    return {"tv": str(total_variation(_need_p(args), _need_q(args)))}, None


def cmd_kl(args):
    return {"kl": _finite(kl_divergence(_need_p(args), _need_q(args), args.base))}, None


def cmd_mec(args):
    alpha = parse_alpha(args.alpha)
    solution = min_entropy_coupling_exact(_need_p(args), _need_q(args), alpha, args.base,
                                          **_solver_options(args))
    report = _solution_report(solution)
    report["alpha"] = _finite(alpha)
    return report, joint_to_csv(solution.coupling).splitlines()


def cmd_greedy(args):
    solution = min_entropy_coupling_greedy(_need_p(args), _need_q(args), args.base)
    return _solution_report(solution), joint_to_csv(solution.coupling).splitlines()


def cmd_maximal(args):
    solution = maximal_coupling(_need_p(args), _need_q(args))
    report = _solution_report(solution)
    report["mismatch"] = str(solution.details["mismatch"])
    return report, joint_to_csv(solution.coupling).splitlines()


def cmd_delta(args):
    p = parse_p(args.pnorm)
    if args.joint:
        value = delta_p(load_joint(args.joint), p, args.base)
    else:
        value = delta_lower(_need_p(args), _need_q(args), p, args.base, **_solver_options(args))
    return {"p": _finite(p), "delta": value}, None


def cmd_bounds(args):
    report = bound_report(_need_p(args), _need_q(args), args.base, **_solver_options(args))
    lines = ["name,left,right,slack"] + [
        f"{e.name},{e.left},{e.right},{e.slack}" for e in report.entries
    ]
    return report.as_dict(), lines


def cmd_channel(args):
    if args.m is None:
        raise ParseError("channel needs --m", "--m")
    solution = optimal_channel(_need_p(args), args.m, args.base, args.budget)
    return _solution_report(solution), joint_to_csv(solution.coupling).splitlines()


def cmd_dependence(args):
    return {"dependence": max_dependence(_need_p(args), _need_q(args), args.base,
                                         **_solver_options(args))}, None


def cmd_vertices(args):
    vertices = enumerate_vertices(CouplingSpec.both(_need_p(args), _need_q(args)),
                                  args.vertex_cap, args.threads)
    report = {"count": len(vertices), "vertices": [joint_to_json(v.joint)["rows"] for v in vertices]}
    lines = []
    for index, vertex in enumerate(vertices):
        if index:
            lines.append("")
        lines.extend(joint_to_csv(vertex.joint).splitlines())
    return report, lines


def _decision_report(decision) -> dict:
    return {"answer": decision.answer, "certificate": decision.certificate}


def cmd_reduce(args):
    if args.weights is None:
        raise ParseError("reduce needs --weights", "--weights")
    weights = tuple(_int_list(args.weights, "--weights"))
    if args.problem == "subset-sum":
        if args.target is None:
            raise ParseError("subset-sum needs --target", "--target")
        decision = decide_subset_sum(SubsetSumInstance(weights, args.target), **_solver_options(args))
    elif args.problem == "partition":
        decision = decide_partition(weights, args.budget)
    else:
        if args.k is None:
            raise ParseError("3partition needs --k", "--k")
        m = args.m if args.m is not None else len(weights) // 3
        decision = decide_3partition(ThreePartitionInstance(weights, args.k, m), args.budget)
    return _decision_report(decision), None


def cmd_counterexample(args):
    alpha = float(parse_alpha(args.alpha))
    stages = _int_list(args.stages, "--stages")
    if not stages:
        raise ParseError("no stages given", "--stages")
    params = UnboundedFamilyParams(alpha, args.beta, args.r, stages[0], args.N)
    rows = divergence_trace(params, stages, args.base, args.threads)
    lines = ["n,H_alpha,lower_bound,H_alpha_P"] + [
        f"{row.n},{row.H_alpha},{row.lower_bound},{row.H_alpha_P}" for row in rows
    ]
    return {"alpha": alpha, "beta": args.beta, "r": args.r, "N": args.N,
            "trace": [row.as_dict() for row in rows]}, lines


def _need_p(args) -> Dist:
    if not args.p:
        raise ParseError(f"{args.command} needs --p", "--p")
    return load_dist(args.p, "--p")


def _need_q(args) -> Dist:
    if not args.q:
        raise ParseError(f"{args.command} needs --q", "--q")
    return load_dist(args.q, "--q")


COMMANDS = {
    "entropy": (cmd_entropy, "Shannon entropy of --p, or the measures of a --joint"),
    "renyi": (cmd_renyi, "Renyi entropy of order --alpha"),
    "tv": (cmd_tv, "total variation distance (exact)"),
    "kl": (cmd_kl, "relative entropy D(P||Q)"),
    "mec": (cmd_mec, "exact minimum (alpha-)entropy coupling"),
    "greedy": (cmd_greedy, "greedy minimum entropy coupling (heuristic)"),
    "maximal": (cmd_maximal, "maximal coupling, mismatch = total variation"),
    "delta": (cmd_delta, "entropy distance of --p/--q, or Delta_p of a --joint"),
    "bounds": (cmd_bounds, "entropy-difference and Fano-type bounds"),
    "channel": (cmd_channel, "optimal channel over C(P,m)"),
    "dependence": (cmd_dependence, "maximal normalized-information dependence"),
    "vertices": (cmd_vertices, "all vertices of C(P,Q)"),
    "reduce": (cmd_reduce, "subset-sum / partition / 3partition through coupling solvers"),
    "counterexample": (cmd_counterexample, "unbounded Renyi entropy family trace"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", help="first marginal: inline '1/2,1/2' or a JSON file")
    common.add_argument("--q", help="second marginal")
    common.add_argument("--joint", help="joint matrix: inline '1/4,1/4;1/2,0' or a JSON file")
    common.add_argument("--m", type=int, help="number of columns for C(P,m)")
    common.add_argument("--alpha", default="1", help="Renyi order (0, decimals, inf)")
    common.add_argument("--base", type=float, default=DEFAULT_LOG_BASE, help="logarithm base")
    common.add_argument("--pnorm", default="1", help="p >= 1 or inf for Delta_p")
    common.add_argument("--format", choices=["json", "csv"], default=DEFAULT_FORMAT)
    common.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    common.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    common.add_argument("--budget", type=int, default=DEFAULT_CHANNEL_BUDGET)
    common.add_argument("--strategy", choices=["auto", "exhaustive", "branch_and_bound"],
                        default=EXACT_STRATEGY)
    common.add_argument("--verbose", action="store_true", help="log solver progress to stderr")

    parser = argparse.ArgumentParser(description="Couplings of finite distributions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        if name == "reduce":
            cmd.add_argument("problem", choices=["subset-sum", "partition", "3partition"])
            cmd.add_argument("--weights", help="comma-separated positive integers")
            cmd.add_argument("--target", type=int, help="subset-sum target s")
            cmd.add_argument("--k", type=int, help="3partition bin size")
        elif name == "counterexample":
            cmd.add_argument("--beta", type=float, default=3.0)
            cmd.add_argument("--r", type=float, default=1.5)
            cmd.add_argument("--N", type=int, default=10**4, help="source truncation length")
            cmd.add_argument("--stages", default="10,100,1000", help="increasing stage indices n")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if (args.verbose or VERBOSE_OUTPUT) else logging.WARNING,
        format="%(levelname)s %(message)s",
        force=True,
    )

    handler = COMMANDS[args.command][0]
    try:
        report, csv_lines = handler(args)
    except LimitExceeded as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_LIMIT
    except CouplingError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(report, args.format, csv_lines)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
