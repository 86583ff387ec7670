"""Command-line front end over ``.endo`` files.

Exit codes::

    0  success / no contradictions
    1  contradictions found (check)
    2  usage error: bad flags, unknown node, out-of-range assignment
    3  parse or validation failure
    4  relaxation did not converge
    5  file could not be read
    6  evaluation failure
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from typing import Optional, Sequence

from .contradiction import DEFAULT_TAU, ContradictionReport, find_contradictions
from .errors import EndorseError, RangeViolation, UnknownNode
from .explanation import explain
from .model import Intuition, Network
from .netfmt import ParseError, load
from .propagation import EvaluationReport, RelaxationConfig, evaluate, evaluate_incremental

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_CONTRADICTIONS = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NONCONVERGENCE = 4
EXIT_IO = 5
EXIT_EVALUATION = 6


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit(doc: dict) -> None:
    _out(json.dumps({"format_version": FORMAT_VERSION, **doc}, indent=2))


def _load(path: str) -> Network:
    try:
        return load(path)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}")
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, exc.render())


def _config(args: argparse.Namespace) -> RelaxationConfig:
    try:
        return RelaxationConfig(args.alpha, args.epsilon, args.max_iters)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, str(exc))


def _evaluate(net: Network, args: argparse.Namespace) -> EvaluationReport:
    try:
        return evaluate(net, _config(args))
    except EndorseError as exc:
        raise _Exit(EXIT_EVALUATION, f"evaluation failed: {exc}")


def _unknown(node: str, net: Network) -> _Exit:
    near = difflib.get_close_matches(node, sorted(net.nodes), n=3)
    hint = f"; did you mean: {', '.join(near)}" if near else ""
    return _Exit(EXIT_USAGE, f"unknown node {node!r}{hint}")


def _pair(r) -> dict:
    return {"belief": r.belief, "certainty": r.certainty}


def _contradictions_doc(report: ContradictionReport) -> dict:
    return {
        "rational": [
            {"node": c.node, "pro": list(c.pro), "con": list(c.con), "max_pro": c.max_pro, "min_con": c.min_con}
            for c in report.rational
        ],
        "intuitive": [
            {"node": c.node, "intuition": c.intuition, "rational": c.rational, "threshold": c.threshold}
            for c in report.intuitive
        ],
    }


def _render_contradictions(report: ContradictionReport) -> list[str]:
    lines = []
    for c in report.rational:
        lines.append(
            f"rational   {c.node}: for {', '.join(c.pro)} (max {c.max_pro:+.4f}) "
            f"against {', '.join(c.con)} (min {c.min_con:+.4f})"
        )
    for c in report.intuitive:
        lines.append(
            f"intuitive  {c.node}: intuition {c.intuition:+.4f} vs rational {c.rational:+.4f} "
            f"(|diff| {abs(c.intuition - c.rational):.4f} > threshold {c.threshold:.4f})"
        )
    return lines


def _convergence_line(report: EvaluationReport) -> str:
    if not report.cycles:
        return "acyclic, evaluated in one pass"
    if report.converged:
        return f"converged ({report.iterations} relaxation sweeps)"
    return f"NOT converged after {report.iterations} sweeps (residual {report.residual:.3g})"


def cmd_eval(args: argparse.Namespace) -> int:
    net = _load(args.file)
    report = _evaluate(net, args)
    state = report.state
    if args.format == "machine":
        _emit(
            {
                "command": "eval",
                "converged": report.converged,
                "iterations": report.iterations,
                "residual": report.residual,
                "nodes": [
                    {
                        "id": n,
                        **_pair(state.rationale[n]),
                        "source": "computed" if net.incoming(n) else "intuition",
                    }
                    for n in sorted(net.nodes)
                ],
                "supports": [
                    {
                        "src": e.src,
                        "dst": e.dst,
                        "base": e.base_strength,
                        "effective": state.effective_support[e.key],
                    }
                    for e in sorted(net.edges, key=lambda e: e.key)
                ],
                "cycles": report.cycles,
            }
        )
    else:
        width = max([len(n) for n in net.nodes] + [4])
        lines = [f"{'node':<{width}}  {'belief':>8}  {'certainty':>9}  source"]
        for n in sorted(net.nodes):
            r = state.rationale[n]
            source = "computed" if net.incoming(n) else "intuition"
            lines.append(f"{n:<{width}}  {r.belief:>+8.4f}  {r.certainty:>9.4f}  {source}")
        for cyc in report.cycles:
            lines.append(f"cycle: {', '.join(cyc)}")
        lines.append(_convergence_line(report))
        _out("\n".join(lines))
    return EXIT_OK if report.converged else EXIT_NONCONVERGENCE


def cmd_explain(args: argparse.Namespace) -> int:
    net = _load(args.file)
    if args.node not in net.nodes:
        raise _unknown(args.node, net)
    report = _evaluate(net, args)
    exp = explain(args.node, report.state, net, args.tau)
    if args.format == "machine":
        _emit({"command": "explain", "converged": report.converged, **exp.to_dict()})
    else:
        _out(exp.render())
    return EXIT_OK if report.converged else EXIT_NONCONVERGENCE


def cmd_check(args: argparse.Namespace) -> int:
    net = _load(args.file)
    report = _evaluate(net, args)
    try:
        found = find_contradictions(report.state, net, args.tau)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, str(exc))
    if args.format == "machine":
        _emit(
            {
                "command": "check",
                "tau": args.tau,
                "converged": report.converged,
                "clean": found.clean,
                **_contradictions_doc(found),
            }
        )
    else:
        lines = _render_contradictions(found) or ["clean"]
        if not report.converged:
            lines.append(_convergence_line(report))
        _out("\n".join(lines))
    if not report.converged:
        return EXIT_NONCONVERGENCE
    return EXIT_OK if found.clean else EXIT_CONTRADICTIONS


def parse_assignment(text: str, net: Network) -> tuple[str, Intuition]:
    node, sep, values = text.partition("=")
    if not sep:
        raise _Exit(EXIT_USAGE, f"bad assignment {text!r}; expected <node>=<belief>,<certainty>")
    if node not in net.nodes:
        raise _unknown(node, net)
    try:
        b, c = (float(v) for v in values.split(","))
    except ValueError:
        raise _Exit(EXIT_USAGE, f"bad assignment {text!r}; expected <node>=<belief>,<certainty>")
    try:
        return node, Intuition(b, c)
    except RangeViolation as exc:
        raise _Exit(EXIT_USAGE, f"{node}: {exc}")


def cmd_whatif(args: argparse.Namespace) -> int:
    net = _load(args.file)
    assignments = dict(parse_assignment(a, net) for a in args.assignments)
    before = _evaluate(net, args)
    updated = net.with_intuitions(assignments)
    changed = {n for n, v in assignments.items() if net.nodes[n].intuition != v}
    try:
        after = evaluate_incremental(updated, before.state, changed, _config(args))
    except UnknownNode as exc:
        raise _unknown(exc.node_id, net)
    except EndorseError as exc:
        raise _Exit(EXIT_EVALUATION, f"evaluation failed: {exc}")

    old, new = before.state, after.state
    diff = [n for n in sorted(net.nodes) if old.rationale[n] != new.rationale[n]]
    supports = [
        (e.key, old.effective_support[e.key], new.effective_support[e.key])
        for e in sorted(net.edges, key=lambda e: e.key)
        if old.effective_support[e.key] != new.effective_support[e.key]
    ]
    old_flags = find_contradictions(old, net, args.tau)
    new_flags = find_contradictions(new, updated, args.tau)
    fresh = ContradictionReport(
        [c for c in new_flags.rational if c.node not in {o.node for o in old_flags.rational}],
        [c for c in new_flags.intuitive if c.node not in {o.node for o in old_flags.intuitive}],
    )
    if args.format == "machine":
        _emit(
            {
                "command": "whatif",
                "assignments": {n: _pair(v) for n, v in sorted(assignments.items())},
                "converged": after.converged,
                "changed": [
                    {"id": n, "before": _pair(old.rationale[n]), "after": _pair(new.rationale[n])} for n in diff
                ],
                "supports_changed": [
                    {"src": k[0], "dst": k[1], "before": a, "after": b} for k, a, b in supports
                ],
                "recomputed": after.recomputed,
                "gated": after.gated,
                "new_contradictions": _contradictions_doc(fresh),
            }
        )
    else:
        lines = []
        for n in diff:
            a, b = old.rationale[n], new.rationale[n]
            lines.append(
                f"{n}: ({a.belief:+.4f}, {a.certainty:.4f}) -> ({b.belief:+.4f}, {b.certainty:.4f})"
            )
        for (src, dst), a, b in supports:
            lines.append(f"support {src} -> {dst}: {a:+.4f} -> {b:+.4f}")
        for g in after.gated:
            lines.append(f"gated (retained previous value, gate not exceeded): {', '.join(g)}")
        lines += [f"new {line}" for line in _render_contradictions(fresh)]
        if not lines:
            lines.append("no changes")
        if not after.converged:
            lines.append(_convergence_line(after))
        _out("\n".join(lines))
    return EXIT_OK if after.converged else EXIT_NONCONVERGENCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="endorsenet", description="Evaluate endorsement networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.5, help="relaxation damping in (0, 1]")
    common.add_argument("--epsilon", type=float, default=1e-6, help="convergence tolerance")
    common.add_argument("--max-iters", type=int, default=1000, help="relaxation sweep limit")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    tau = argparse.ArgumentParser(add_help=False)
    tau.add_argument("--tau", type=float, default=DEFAULT_TAU, help="rational contradiction threshold in (0, 1]")

    p = sub.add_parser("eval", parents=[common], help="evaluate every node")
    p.add_argument("file")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("explain", parents=[common, tau], help="reasons for and against one node")
    p.add_argument("file")
    p.add_argument("node")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("check", parents=[common, tau], help="report contradictions")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("whatif", parents=[common, tau], help="re-evaluate with overridden intuitions")
    p.add_argument("file")
    p.add_argument("assignments", nargs="+", metavar="NODE=B,C")
    p.set_defaults(func=cmd_whatif)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            sys.stderr.write(exc.message.rstrip("\n") + "\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
