"""Command-line front end.

Every subcommand prints deterministic, line-oriented output.  Exit status is
0 on success (all queries true, terms bisimilar), 1 on a negative answer and
2 on any error, including an engine disagreement under ``--via both``.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from delwca import dot, generate, process, reduction, semantics
from delwca.actionmodel import product_size
from delwca.kripke import PointedModel, eval_static
from delwca.syntax import ParseError, ScenarioError, load_scenario, render_formula, render_label, render_process
from delwca.syntax.ast import Formula, Parallel, ProcessTerm

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


@dataclass
class Verdict:
    query: str
    value: Optional[bool]
    witness: Optional[str] = None
    millis: float = 0.0
    note: str = ""

    def line(self, timing: bool = False) -> str:
        if self.value is None:
            cols = [self.query, "DISAGREE", self.note]
        else:
            cols = [self.query, "true" if self.value else "false"]
            if self.witness is not None:
                cols.append(f"witness={self.witness}")
        if timing:
            cols.append(f"{self.millis:.1f}ms")
        return "\t".join(cols)


def _render_trace(trace) -> str:
    return "[" + ", ".join(render_label(lab) for lab in trace) + "]"


def _scenario(args):
    if getattr(args, "students", None):
        sc = generate.students_scenario(args.students)
    elif args.scenario:
        path = Path(args.scenario)
        if not path.is_file():
            raise CliError(f"cannot read scenario file {args.scenario!r}")
        sc = load_scenario(path)
    else:
        raise CliError("a scenario file or --students N is required")
    if getattr(args, "tau_reflexive", False):
        sc.tau_reflexive = True
    return sc


def _program(sc, text: Optional[str]) -> ProcessTerm:
    if text is None:
        return sc.parallel
    return sc.process(text, internal=True)


def check_query(sc, text: str, f: Formula, via: str) -> Verdict:
    start = time.perf_counter()
    pm = sc.pointed
    witness = None
    values = {}
    if via in ("semantics", "both"):
        res = semantics.eval(pm, f, sc)
        values["semantics"] = res.value
        if res.witness is not None:
            witness = _render_trace(res.witness)
    if via in ("reduction", "both"):
        translated, _ = reduction.translate(f, sc)
        values["reduction"] = eval_static(pm, translated)
    millis = (time.perf_counter() - start) * 1000
    distinct = set(values.values())
    if len(distinct) > 1:
        note = " ".join(f"{k}={str(v).lower()}" for k, v in values.items())
        return Verdict(text, None, None, millis, note)
    return Verdict(text, distinct.pop(), witness, millis)


def cmd_check(args) -> int:
    if args.random:
        return _random_check(args)
    sc = _scenario(args)
    if not sc.queries:
        raise CliError("scenario has no queries")
    status = EXIT_OK
    for text, f in zip(sc.query_texts, sc.queries):
        v = check_query(sc, text, f, args.via)
        print(v.line(args.timing))
        if v.value is None:
            status = EXIT_ERROR
        elif not v.value and status == EXIT_OK:
            status = EXIT_FALSE
    return status


def _random_check(args) -> int:
    rng = random.Random(args.seed)
    failures = 0
    for i in range(args.random):
        pm, f, ctx = generate.random_case(rng)
        report = reduction.certify(f, [pm], ctx)
        if semantics.eval_via_expansion(pm, f, ctx) != semantics.eval(pm, f, ctx).value:
            report.disagreements.append((pm, None, None))
        if not report.ok:
            failures += 1
            print(f"case {i}\tFAIL\t{render_formula(f)}")
    print(f"random\t{args.random}\tfailures\t{failures}\tseed\t{args.seed}")
    return EXIT_OK if failures == 0 else EXIT_FALSE


def cmd_expand(args) -> int:
    sc = _scenario(args)
    prog = _program(sc, args.program)
    if not isinstance(prog, Parallel):
        print(render_process(prog))
        return EXIT_OK
    print(render_process(process.expand(prog)))
    return EXIT_OK


def cmd_traces(args) -> int:
    sc = _scenario(args)
    prog = _program(sc, args.program)
    runs = process.traces(prog)
    for run in runs:
        print(_render_trace(run))
    for run, end in process.maximal_runs(prog):
        if isinstance(end, Parallel):
            print(f"stuck\t{_render_trace(run)}\t{render_process(end)}", file=sys.stderr)
    print(f"# {len(runs)} traces")
    return EXIT_OK


def cmd_bisim(args) -> int:
    sc = _scenario(args)
    left = _program(sc, args.left)
    if args.right is None:
        if not isinstance(left, Parallel):
            raise CliError("without --right the left program must be a parallel composition")
        right = process.expand(left)
    else:
        right = _program(sc, args.right)
    same = process.bisimilar(left, right)
    print(f"{render_process(left)}\t{render_process(right)}\t{'bisimilar' if same else 'not bisimilar'}")
    return EXIT_OK if same else EXIT_FALSE


def cmd_reduce(args) -> int:
    sc = _scenario(args)
    if args.formula is not None:
        items = [(args.formula, sc.formula(args.formula))]
    else:
        items = list(zip(sc.query_texts, sc.queries))
    for text, f in items:
        out, steps = reduction.translate(f, sc)
        print(f"# {text}")
        if steps:
            print(reduction.render_derivation(steps))
        print(f"steps\t{len(steps)}")
        print(f"result\t{render_formula(out)}")
    return EXIT_OK


def _product(sc, args):
    prog = sc.process(args.program, internal=True)
    outcome = semantics.run(sc.pointed, prog, sc)
    return prog, outcome


def cmd_product(args) -> int:
    sc = _scenario(args)
    if args.program in sc.action_models:
        pam = sc.action_models[args.program]
        total, kept = product_size(sc.model, pam.model)
        print(f"candidates\t{total}")
        print(f"kept\t{kept}")
    _, outcome = _product(sc, args)
    for run, pm in outcome.reached:
        print(f"run\t{_render_trace(run)}\tpoint\t{pm.point}\tstates\t{len(pm.model.states)}")
        for s in pm.model.states:
            props = [p for p in sorted(pm.model.valuation) if s in pm.model.valuation[p]]
            print(f"  {s}\t{' '.join(props)}")
        for text in args.eval or ():
            f = sc.formula(text)
            print(f"  {text}\t{str(semantics.eval(pm, f, sc).value).lower()}")
    for run, step in outcome.blocked:
        print(f"blocked\t{_render_trace(run)}\tstep\t{step}")
    return EXIT_OK if outcome.reached else EXIT_FALSE


def cmd_export_dot(args) -> int:
    sc = _scenario(args)
    if args.kind == "model":
        text = dot.model_to_dot(sc.model, sc.point, sc.name)
    elif args.kind == "action":
        if args.name not in sc.action_models:
            raise CliError(f"unknown action model {args.name!r}")
        pam = sc.action_models[args.name]
        text = dot.action_model_to_dot(pam.model, pam.point)
    elif args.kind == "runs":
        text = dot.run_tree_to_dot(_program(sc, args.name), f"{sc.name}-runs")
    else:
        if args.name is None:
            raise CliError("export-dot product needs --name PROGRAM")
        _, outcome = _product(sc, argparse.Namespace(program=args.name))
        if not outcome.reached:
            raise CliError("the program has no executable run")
        pm: PointedModel = outcome.reached[0][1]
        text = dot.model_to_dot(pm.model, pm.point, f"{sc.name}-{args.name}")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="delwca", description="Epistemic model checker with communication actions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def scenario_args(p, optional=False):
        p.add_argument("scenario", nargs="?" if optional else None, help="scenario file (.delwca)")
        p.add_argument("--students", type=int, metavar="N", help="use the generated teacher/N-students scenario")
        p.add_argument("--tau-reflexive", action="store_true", help="outsiders keep the real event of a communication")

    p = sub.add_parser("check", help="evaluate every query of a scenario")
    scenario_args(p, optional=True)
    p.add_argument("--via", choices=("semantics", "reduction", "both"), default="semantics")
    p.add_argument("--timing", action="store_true", help="append per-query wall time")
    p.add_argument("--random", type=int, metavar="K", help="run K random dual-engine cross-checks instead")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("expand", help="print the expansion of the agents' parallel composition")
    scenario_args(p, optional=True)
    p.add_argument("--program", help="program to expand instead of the scenario's agents")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("traces", help="list the maximal runs of a program")
    scenario_args(p, optional=True)
    p.add_argument("--program")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("bisim", help="decide strong bisimilarity of two programs")
    scenario_args(p, optional=True)
    p.add_argument("--left", help="default: the agents' parallel composition")
    p.add_argument("--right", help="default: the expansion of the left program")
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("reduce", help="translate queries to program-free formulas")
    scenario_args(p, optional=True)
    p.add_argument("--formula", help="formula to reduce instead of the scenario's queries")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("product", help="execute a program on the designated model")
    scenario_args(p)
    p.add_argument("program", help="action model name or program text")
    p.add_argument("--eval", action="append", metavar="FORMULA", help="formula to evaluate at each result")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("export-dot", help="write a Graphviz graph")
    scenario_args(p, optional=True)
    p.add_argument("kind", choices=("model", "action", "runs", "product"))
    p.add_argument("--name", help="action model (action), program (runs, product)")
    p.add_argument("-o", "--output", help="output file; default stdout")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, ScenarioError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"delwca: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
