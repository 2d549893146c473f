"""Command-line entry point.

Exit codes: 0 success, 1 unreadable or malformed input, 2 failed precondition,
3 resource cap hit, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import formats
from .adversary import BadParameter, InvariantBreach, PreconditionError, builtin_solver, run_adversary
from .classify import SubsetLimitExceeded, decide_fullness, decide_greediness
from .core import GraphError, verify_coloring
from .homproblems import HomError, build_h_delta, hom_solve_h_delta, lcl_from_graph
from .solve import CertificateInvalid, CompletionFailure, greedy_color, toast_color
from .toast import build_toast

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _order(spec: str | None) -> list[int] | None:
    if spec is None:
        return None
    try:
        return [int(t) for t in spec.split(",") if t.strip()]
    except ValueError:
        raise _Fail(EXIT_PARSE, f"bad --order {spec!r}; expected comma-separated vertex ids") from None


def _trace_sink(args):
    if not getattr(args, "trace", None):
        return None
    fh = open(args.trace, "w", encoding="utf-8")
    args._trace_fh = fh
    return lambda rec: fh.write(json.dumps(rec, sort_keys=True) + "\n")


def cmd_classify(args):
    lcl = formats.parse_lcl(_read(args.lcl))
    report: dict = {"classes": {}}
    if args.mode in ("full", "both"):
        full = decide_fullness(lcl, args.max_subsets)
        report["full"] = formats.certificate_to_doc(full, lcl)
        report["classes"]["HCOMP"] = report["classes"]["BAIRE"] = full is not None
    if args.mode in ("greedy", "both"):
        greedy = decide_greediness(lcl)
        report["greedy"] = formats.certificate_to_doc(greedy, lcl)
        report["classes"]["COMPUTABLE"] = greedy is not None
    _emit(args, formats.dumps(report))


def cmd_solve(args):
    lcl = formats.parse_lcl(_read(args.lcl))
    graph = formats.parse_graph(_read(args.graph))
    order = _order(args.order)
    trace = _trace_sink(args)
    if args.strategy == "greedy":
        cert = decide_greediness(lcl)
        if cert is None:
            raise _Fail(EXIT_PRECONDITION, "problem is not greedy; greedy strategy unavailable")
        coloring = greedy_color(graph, lcl, cert, order, trace=trace)
    else:
        cert = decide_fullness(lcl, args.max_subsets)
        if cert is None:
            raise _Fail(EXIT_PRECONDITION, "problem is not full; toast strategy unavailable")
        coloring = toast_color(graph, lcl, cert, order, trace=trace)
    _emit(args, formats.serialize_coloring(coloring, lcl))


def cmd_verify(args):
    lcl = formats.parse_lcl(_read(args.lcl))
    graph = formats.parse_graph(_read(args.graph))
    coloring = formats.parse_coloring(_read(args.coloring), lcl)
    try:
        verdict = verify_coloring(graph, lcl, coloring)
    except ValueError as exc:
        raise _Fail(EXIT_VERIFY, str(exc)) from None
    _emit(args, formats.dumps(formats.verdict_to_doc(verdict, lcl)))
    return EXIT_OK if verdict.ok else EXIT_VERIFY


def cmd_toast(args):
    graph = formats.parse_graph(_read(args.graph))
    _emit(args, formats.serialize_toast(build_toast(graph, args.l, _order(args.order))))


def cmd_adversary(args):
    lcl = formats.parse_lcl(_read(args.lcl))
    solver = builtin_solver(args.solver, lcl)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        transcript = run_adversary(args.mode, lcl, solver, args.max_stages, args.n0)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.emit_graph:
        Path(args.emit_graph).write_text(formats.serialize_graph(transcript.final_graph), encoding="utf-8")
    _emit(args, formats.serialize_transcript(transcript))


def cmd_hom(args):
    h = formats.parse_simple_graph(_read(args.graph))
    _emit(args, formats.serialize_lcl(lcl_from_graph(h, args.delta)))


def cmd_hdelta(args):
    _emit(args, formats.serialize_simple_graph(build_h_delta(args.delta)))


def cmd_homsolve(args):
    forest = formats.parse_simple_graph(_read(args.forest))
    _emit(args, formats.serialize_hom(hom_solve_h_delta(forest, args.delta)))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcltrees", description="Classify and solve LCL problems on trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("-o", "--output", help="write result here instead of stdout")
        return sp

    sp = add("classify", cmd_classify, "decide fullness and greediness")
    sp.add_argument("--lcl", required=True)
    sp.add_argument("--mode", choices=("full", "greedy", "both"), default="both")
    sp.add_argument("--max-subsets", type=int, default=None)

    sp = add("solve", cmd_solve, "color a graph with the greedy or toast strategy")
    sp.add_argument("--lcl", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--strategy", choices=("greedy", "toast"), required=True)
    sp.add_argument("--order", help="comma-separated vertex processing order")
    sp.add_argument("--max-subsets", type=int, default=None)
    sp.add_argument("--trace", help="write per-stage commitments as JSON lines to this file")

    sp = add("verify", cmd_verify, "check a coloring")
    sp.add_argument("--lcl", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--coloring", required=True)

    sp = add("toast", cmd_toast, "build an l-toast")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--order", help="comma-separated stream order")

    sp = add("adversary", cmd_adversary, "run an adversarial construction")
    sp.add_argument("--lcl", required=True)
    sp.add_argument("--mode", choices=("hc", "comp"), required=True)
    sp.add_argument("--solver", required=True,
                    help="builtin:lookahead:R | builtin:oblivious:LABEL | builtin:replay | builtin:never")
    sp.add_argument("--max-stages", type=int, required=True)
    sp.add_argument("--n0", type=int, default=None)
    sp.add_argument("--emit-graph", help="write the final graph to this file")

    sp = add("hom", cmd_hom, "homomorphism LCL of a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--delta", type=int, required=True)

    sp = add("hdelta", cmd_hdelta, "the target graph H_delta")
    sp.add_argument("--delta", type=int, required=True)

    sp = add("homsolve", cmd_homsolve, "homomorphism of a forest into H_delta")
    sp.add_argument("--forest", required=True)
    sp.add_argument("--delta", type=int, required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args) or EXIT_OK
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = exc.code
    except formats.FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        code = EXIT_PARSE
    except SubsetLimitExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        code = EXIT_CAP
    except (PreconditionError, BadParameter, CertificateInvalid, CompletionFailure, GraphError, HomError,
            InvariantBreach, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        code = EXIT_PRECONDITION
    finally:
        fh = getattr(args, "_trace_fh", None)
        if fh is not None:
            fh.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
