"""Command-line front end.

Exit codes: 0 when the requested claim verified, 2 when it was falsified,
1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

from . import concise, family, flow, io, nisan, tangent
from .abp import evaluate
from .deborder import deborder_with_trace
from .errors import AbpLabError
from .formats import guard_format_size, parse_format
from .tensor import LayeredTensor

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _format_arg(text: str) -> tuple[int, ...]:
    try:
        return parse_format(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj, out: str | None) -> None:
    text = io.dumps(obj)
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def _read(path: str | None, kind: str):
    if not path:
        raise UsageError("--in is required")
    obj = io.load_json(path)
    found = io.detect_kind(obj)
    if found != kind:
        raise UsageError(f"{path} holds a {found}, expected a {kind}")
    return io.abp_from_json(obj) if kind == "abp" else io.tensor_from_json(obj)


def _need_format(args) -> tuple[int, ...]:
    if args.format is None:
        raise UsageError("--format is required (comma-separated widths, e.g. 2,2,2)")
    guard_format_size(args.format)
    return args.format


def cmd_eval(args) -> int:
    _emit(evaluate(_read(args.input, "abp")), args.out)
    return EXIT_OK


def cmd_minimize(args) -> int:
    t = nisan.minimize_transcript(_read(args.input, "tensor"))
    _emit(t, args.out)
    return EXIT_OK if t["verified"] else EXIT_FALSIFIED


def cmd_deborder(args) -> int:
    abp = _read(args.input, "abp")
    result, trace = deborder_with_trace(abp)
    if args.out:
        io.write_text(args.out, io.dumps(result))
        trace_path = args.trace or str(Path(args.out).with_suffix("")) + ".trace.json"
        io.write_text(trace_path, io.dumps(trace.to_json()))
    else:
        _emit({"abp": result, "trace": trace.to_json()}, None)
    return EXIT_OK


def cmd_gen_family(args) -> int:
    fmt = _need_format(args)
    obj = family.generate(args.object, fmt)
    _emit(obj, args.out)
    if args.dot:
        if isinstance(obj, LayeredTensor):
            raise UsageError("--dot needs an ABP object (gamma-com, f-eps or gamma-prime)")
        io.write_text(args.dot, io.abp_to_dot(obj, bold_parity_preserving=args.object != "gamma-prime"))
    return EXIT_OK


def _tensor_from_args(args):
    if args.input:
        return _read(args.input, "tensor")
    fmt = _need_format(args)
    return family.f_com(fmt) if args.family == "f-com" else family.f0(fmt)


def cmd_concise_check(args) -> int:
    f = _tensor_from_args(args)
    ok, ranks = concise.is_concise(f)
    _emit({"concise": ok, "mode_ranks": ranks, "mode_sizes": list(f.alphabet_sizes)}, args.out)
    return EXIT_OK if ok == (args.expect == "concise") else EXIT_FALSIFIED


def cmd_tangent_dims(args) -> int:
    fmt = _need_format(args)
    out = {
        "format": list(fmt),
        "formulas": {
            "g2": tangent.g2_formula(fmt),
            "g1": tangent.g1_formula(fmt),
            "g0_fcom": tangent.g0_fcom_formula(fmt),
        },
    }
    ok = True
    names = ["f-com", "f0"] if args.family == "both" else [args.family]
    for name in names:
        f = family.f_com(fmt) if name == "f-com" else family.f0(fmt)
        dims = tangent.tangent_dims(f, fmt)
        out[name] = dims.to_json()
        ok &= dims.stacked == dims.total
        ok &= dims.g2 == out["formulas"]["g2"] and dims.g1 == out["formulas"]["g1"]
        if name == "f-com":
            ok &= dims.g0 == out["formulas"]["g0_fcom"]
    out["verified"] = bool(ok)
    _emit(out, args.out)
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_flow_verify(args) -> int:
    fmt = _need_format(args)
    report = flow.verify_dim_theorems(fmt)
    G = flow.IdentifiedGraph(fmt)
    tree = flow.spanning_tree_tau(fmt)
    basis = flow.fundamental_cycle_basis(G, tree)
    structure = {
        "tree_edges": len(tree),
        "tree_is_spanning": flow.is_spanning_tree(G, tree),
        "tree_is_out_arborescence": flow.is_out_arborescence(G, tree),
        "fundamental_cycles": len(basis),
        "fundamental_cycles_match_formula": len(basis) == report["flow_dim"],
    }
    if len(fmt) >= 3:
        structure["cycle_decompositions_ok"] = all(flow.decomposition_flow(fmt, e) == c for e, c in basis.items())
        cycles = flow.random_cycles(fmt, args.cycles, args.seed)
        structure["telescoping_cycles"] = [list(c) for c in cycles]
        structure["telescoping_ok"] = all(flow.telescoping_flow(fmt, c) == flow.cycle_flow(fmt, c) for c in cycles)
    report["structure"] = structure
    verified = report["verified"] and all(v for v in structure.values() if isinstance(v, bool))
    report["verified"] = verified
    _emit(report, args.out)
    if args.dot:
        io.write_text(args.dot, io.identified_graph_to_dot(fmt, G.edges, tree))
    return EXIT_OK if verified else EXIT_FALSIFIED


def cmd_certify_separation(args) -> int:
    fmt = _need_format(args)
    cert = tangent.certify_separation(fmt)
    _emit(cert, args.out)
    return EXIT_OK if cert["verified"] else EXIT_FALSIFIED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized choices")
    common.add_argument("--format", type=_format_arg, default=None, help="comma-separated widths, e.g. 2,2,2")
    common.add_argument("--out", default=None, help="output JSON path (stdout if omitted)")

    p = _Parser(prog="abplab", description="Exact computations on algebraic branching programs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="evaluate an ABP to a tensor")
    s.add_argument("--in", dest="input")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("minimize", parents=[common], help="minimal single-(source,sink) ABP for a tensor")
    s.add_argument("--in", dest="input")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("deborder", parents=[common], help="monotone ABP for the eps -> 0 limit")
    s.add_argument("--in", dest="input")
    s.add_argument("--trace", default=None, help="trace JSON path (default: <out>.trace.json)")
    s.set_defaults(func=cmd_deborder)

    s = sub.add_parser("gen-family", parents=[common], help="generate a family object")
    s.add_argument("object", choices=family.OBJECTS)
    s.add_argument("--dot", default=None, help="also write a DOT drawing of the ABP")
    s.set_defaults(func=cmd_gen_family)

    s = sub.add_parser("concise-check", parents=[common], help="mode ranks and conciseness")
    s.add_argument("--in", dest="input")
    s.add_argument("--family", choices=("f-com", "f0"), default="f0")
    s.add_argument("--expect", choices=("concise", "not-concise"), default="concise")
    s.set_defaults(func=cmd_concise_check)

    s = sub.add_parser("tangent-dims", parents=[common], help="tangent space piece dimensions")
    s.add_argument("--family", choices=("f-com", "f0", "both"), default="both")
    s.set_defaults(func=cmd_tangent_dims)

    s = sub.add_parser("flow-verify", parents=[common], help="flow-space checks of the dimension results")
    s.add_argument("--cycles", type=int, default=5, help="random cycles for the telescoping check")
    s.add_argument("--dot", default=None, help="write the identified graph with the spanning tree")
    s.set_defaults(func=cmd_flow_verify)

    s = sub.add_parser("certify-separation", parents=[common], help="certificate that f0 has no ABP of the format")
    s.set_defaults(func=cmd_certify_separation)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help and on usage errors; report as a code instead
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    random.seed(args.seed)
    try:
        return args.func(args)
    except (UsageError, AbpLabError, ValueError, KeyError, OSError) as exc:
        print(f"abplab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
