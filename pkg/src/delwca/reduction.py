"""Translation of formulas with program modalities into plain multi-agent S5.

The rewrite is innermost-first: the argument of a program modality is
reduced before the modality itself, so the action-model rules only ever see
program-free arguments.  Every emitted step records the complexity of its
redex before and after; the measure strictly decreases on each step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from delwca.actionmodel import Context, PointedActionModel, resolve
from delwca.kripke import PointedModel, eval_static
from delwca.process import expand
from delwca.syntax.ast import (
    TOP,
    Act,
    And,
    Atom,
    Box,
    Choice,
    Done,
    Formula,
    Inline,
    Knows,
    Nil,
    Not,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Top,
    conjoin,
    implies,
    is_channel,
    is_program_free,
)


@dataclass(frozen=True)
class RewriteStep:
    before: Formula
    after: Formula
    rule: str
    c_before: int
    c_after: int


class Measure:
    """Complexity of formulas, programs and pointed action models.

    Program weights used inside ``(4 + w) * c(arg)``: an action model weighs
    the largest precondition complexity, and at least ``1 + ceil(log2 d)``
    where ``d`` is the largest number of events one agent confuses with a
    single event (the depth of the conjunction the K-rule produces),
    sequencing and prefixing multiply, choice adds two to the max, a
    parallel composition weighs one more than its expansion, ``Nil`` weighs
    one and ``Done`` zero.  ``[0]phi`` costs ``1 + c(phi)``.
    """

    def __init__(self, ctx: Optional[Context] = None):
        self.ctx = ctx
        self._f: dict = {}
        self._w: dict = {}
        self._am: dict = {}

    def action(self, pam: PointedActionModel) -> int:
        key = pam.model
        if key not in self._am:
            am = pam.model
            pres = max(self.formula(f) for _, f in am.pre)
            fan = max([len(am.related(a, e)) for a, _ in am.relations for e in am.points] + [1])
            self._am[key] = max(pres, 1 + math.ceil(math.log2(fan)))
        return self._am[key]

    def label(self, label) -> int:
        if is_channel(label):
            raise ValueError("bare channel action outside a parallel composition")
        return self.action(resolve(label, self.ctx))

    def program(self, t: ProcessTerm) -> int:
        hit = self._w.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Done):
            w = 0
        elif isinstance(t, Nil):
            w = 1
        elif isinstance(t, Act):
            w = self.label(t.label)
        elif isinstance(t, Prefix):
            w = (4 + self.label(t.label)) * (4 + self.program(t.cont)) - 3
        elif isinstance(t, Seq):
            w = (4 + self.program(t.left)) * (4 + self.program(t.right)) - 3
        elif isinstance(t, Choice):
            w = 2 + max(self.program(t.left), self.program(t.right))
        elif isinstance(t, Parallel):
            w = 1 + self.program(expand(t))
        else:
            raise TypeError(f"not a process term: {t!r}")
        self._w[t] = w
        return w

    def formula(self, f: Formula) -> int:
        key = id(f)
        hit = self._f.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(f, (Top, Atom)):
            c = 1
        elif isinstance(f, (Not, Knows)):
            c = 1 + self.formula(f.arg)
        elif isinstance(f, And):
            c = 1 + max(self.formula(f.left), self.formula(f.right))
        elif isinstance(f, Box):
            if isinstance(f.program, Nil):
                c = 1 + self.formula(f.arg)
            else:
                c = (4 + self.program(f.program)) * self.formula(f.arg)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._f[key] = (f, c)
        return c


def complexity_formula(f: Formula, ctx: Optional[Context] = None) -> int:
    return Measure(ctx).formula(f)


class Translator:
    def __init__(self, ctx: Optional[Context] = None):
        self.ctx = ctx
        self.measure = Measure(ctx)
        self.steps: list[RewriteStep] = []
        self._t: dict = {}
        self._aml: dict = {}

    def emit(self, rule: str, before: Formula, after: Formula) -> None:
        c = self.measure.formula
        self.steps.append(RewriteStep(before, after, rule, c(before), c(after)))

    def translate(self, f: Formula) -> Formula:
        key = id(f)
        hit = self._t.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(f, (Top, Atom)):
            out = f
        elif isinstance(f, Not):
            out = Not(self.translate(f.arg))
        elif isinstance(f, And):
            out = And(self.translate(f.left), self.translate(f.right))
        elif isinstance(f, Knows):
            out = Knows(f.agent, self.translate(f.arg))
        elif isinstance(f, Box):
            out = self.box(f.program, self.translate(f.arg))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._t[key] = (f, out)
        return out

    def box(self, prog: ProcessTerm, chi: Formula) -> Formula:
        """Program-free equivalent of ``[prog]chi`` for program-free ``chi``."""
        here = Box(prog, chi)
        if isinstance(prog, Nil):
            self.emit("nil", here, chi)
            return chi
        if isinstance(prog, Done):
            self.emit("done", here, chi)
            return chi
        if isinstance(prog, Choice):
            self.emit("choice", here, And(Box(prog.left, chi), Box(prog.right, chi)))
            return And(self.box(prog.left, chi), self.box(prog.right, chi))
        if isinstance(prog, Seq):
            self.emit("sequence", here, Box(prog.left, Box(prog.right, chi)))
            return self.box(prog.left, self.box(prog.right, chi))
        if isinstance(prog, Prefix):
            head = Act(prog.label)
            self.emit("prefix", here, Box(head, Box(prog.cont, chi)))
            return self.box(head, self.box(prog.cont, chi))
        if isinstance(prog, Parallel):
            exp = expand(prog)
            self.emit("expansion", here, Box(exp, chi))
            return self.box(exp, chi)
        if isinstance(prog, Act):
            if is_channel(prog.label):
                raise ValueError("bare channel action outside a parallel composition")
            return self.aml(resolve(prog.label, self.ctx), chi)
        raise TypeError(f"not a process term: {prog!r}")

    def aml(self, pam: PointedActionModel, chi: Formula) -> Formula:
        key = (pam, id(chi))
        hit = self._aml.get(key)
        if hit is not None:
            return hit[1]
        here = Box(Act(_inline(pam)), chi)
        pre = pam.pre
        if isinstance(chi, Top):
            self.emit("aml-top", here, TOP)
            out = TOP
        elif isinstance(chi, Atom):
            self.emit("aml-atom", here, implies(pre, chi))
            out = implies(self.translate(pre), chi)
        elif isinstance(chi, Not):
            self.emit("aml-not", here, implies(pre, Not(Box(Act(_inline(pam)), chi.arg))))
            out = implies(self.translate(pre), Not(self.aml(pam, chi.arg)))
        elif isinstance(chi, And):
            self.emit(
                "aml-and",
                here,
                And(Box(Act(_inline(pam)), chi.left), Box(Act(_inline(pam)), chi.right)),
            )
            out = And(self.aml(pam, chi.left), self.aml(pam, chi.right))
        elif isinstance(chi, Knows):
            events = pam.model.related(chi.agent, pam.point)
            self.emit(
                "aml-knows",
                here,
                implies(pre, conjoin(Knows(chi.agent, Box(Act(_inline(pam.at(e))), chi.arg)) for e in events)),
            )
            out = implies(
                self.translate(pre),
                conjoin(Knows(chi.agent, self.aml(pam.at(e), chi.arg)) for e in events),
            )
        else:
            raise ValueError(f"argument must be program-free, got {chi!r}")
        self._aml[key] = (chi, out)
        return out


def _inline(pam: PointedActionModel) -> Inline:
    return Inline(pam)


def translate(f: Formula, ctx: Optional[Context] = None) -> tuple[Formula, list[RewriteStep]]:
    tr = Translator(ctx)
    out = tr.translate(f)
    return out, tr.steps


@dataclass
class CertifyReport:
    formula: Formula
    translated: Formula
    steps: list[RewriteStep]
    program_free: bool
    non_decreasing: list[RewriteStep] = field(default_factory=list)
    disagreements: list[tuple[PointedModel, bool, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.program_free and not self.non_decreasing and not self.disagreements


def certify(f: Formula, models: list[PointedModel], ctx: Context) -> CertifyReport:
    from delwca import semantics

    out, steps = translate(f, ctx)
    report = CertifyReport(f, out, steps, is_program_free(out))
    report.non_decreasing = [s for s in steps if not s.c_after < s.c_before]
    for pm in models:
        semantic = semantics.eval(pm, f, ctx).value
        static = eval_static(pm, out) if report.program_free else None
        if semantic != static:
            report.disagreements.append((pm, semantic, static))
    return report


def render_derivation(steps: list[RewriteStep]) -> str:
    from delwca.syntax.render import render_formula

    lines = []
    for n, s in enumerate(steps, 1):
        lines.append(
            f"{n:>3}. {s.rule:<10} c={s.c_before} -> {s.c_after}  "
            f"{render_formula(s.before)}  ==>  {render_formula(s.after)}"
        )
    return "\n".join(lines)
