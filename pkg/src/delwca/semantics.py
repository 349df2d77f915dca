"""Full satisfaction for formulas with program modalities.

``[pi]psi`` holds at a pointed model when every run of ``pi`` either blocks
(some step's designated precondition fails) or ends in a pointed model
satisfying ``psi``.  ``<pi>psi`` therefore needs one fully executable run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from delwca.actionmodel import BLOCKED, SEP, ActionModel, Blocked, Context, product_model, resolve
from delwca.kripke import EpistemicModel, PointedModel
from delwca.process import Trace, expand, maximal_runs, traces
from delwca.syntax.ast import (
    Act,
    And,
    Atom,
    Box,
    Choice,
    Done,
    Formula,
    Knows,
    Nil,
    Not,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Top,
    is_channel,
)


@dataclass
class EvalResult:
    value: bool
    witness: Optional[Trace] = None
    models_visited: int = 0


@dataclass
class Outcome:
    """Pointed models reached by a program, with the runs that did not get there."""

    reached: list[tuple[Trace, PointedModel]] = field(default_factory=list)
    blocked: list[tuple[Trace, int]] = field(default_factory=list)  # (run, failing step)
    deadlocks: list[tuple[Trace, ProcessTerm]] = field(default_factory=list)

    @property
    def models(self) -> list[PointedModel]:
        return [pm for _, pm in self.reached]


class Evaluator:
    """Satisfaction checker over one scenario context.

    ``mode="traces"`` evaluates boxes run by run; ``mode="expansion"``
    recurses on program structure and rewrites parallel compositions with
    their expansion instead.  Both must agree.
    """

    def __init__(self, ctx: Context, mode: str = "traces"):
        if mode not in ("traces", "expansion"):
            raise ValueError(f"unknown mode {mode!r}")
        self.ctx = ctx
        self.mode = mode
        self.models_visited = 0
        self._ext: dict = {}
        self._traces: dict = {}
        self._products: dict = {}

    # extensions
    def extension(self, m: EpistemicModel, f: Formula) -> frozenset[str]:
        key = (id(m), id(f))
        hit = self._ext.get(key)
        if hit is not None:
            return hit[2]
        if isinstance(f, Top):
            out = frozenset(m.states)
        elif isinstance(f, Atom):
            out = m.valuation.get(f.prop, frozenset())
        elif isinstance(f, Not):
            out = frozenset(m.states) - self.extension(m, f.arg)
        elif isinstance(f, And):
            out = self.extension(m, f.left) & self.extension(m, f.right)
        elif isinstance(f, Knows):
            inner = self.extension(m, f.arg)
            out = frozenset(s for s in m.states if all(t in inner for t in m.successors(f.agent, s)))
        elif isinstance(f, Box):
            out = frozenset(s for s in m.states if self.box(PointedModel(m, s), f.program, f.arg)[0])
        else:
            raise TypeError(f"not a formula: {f!r}")
        # hold m and f so their ids stay unique while cached
        self._ext[key] = (m, f, out)
        return out

    def holds(self, pm: PointedModel, f: Formula) -> bool:
        return pm.point in self.extension(pm.model, f)

    def update(self, pm: PointedModel, label, step: Optional[int] = None) -> PointedModel | Blocked:
        self.models_visited += 1
        pam = resolve(label, self.ctx, step)
        if not self.holds(pm, pam.pre):
            return BLOCKED
        return PointedModel(self.product(pm.model, pam.model), f"{pm.point}{SEP}{pam.point}")

    def product(self, m: EpistemicModel, am: ActionModel) -> EpistemicModel:
        # shared by every state of m, so boxes evaluated state by state reuse it
        key = (id(m), am)
        hit = self._products.get(key)
        if hit is None:
            hit = (m, product_model(m, am, self.extension))
            self._products[key] = hit
        return hit[1]

    # boxes
    def box(self, pm: PointedModel, prog: ProcessTerm, psi: Formula) -> tuple[bool, Optional[Trace]]:
        """Truth of ``[prog]psi`` and, when false, a run refuting it."""
        if self.mode == "traces":
            return self._box_traces(pm, prog, psi)
        return self._box_struct(pm, prog, psi, ())

    def _runs(self, prog: ProcessTerm) -> tuple[Trace, ...]:
        return traces(prog, self._traces)

    def _box_traces(self, pm, prog, psi):
        reached: dict[Trace, PointedModel | Blocked] = {(): pm}
        for run in self._runs(prog):
            cur = pm
            for k, label in enumerate(run, 1):
                nxt = reached.get(run[:k])
                if nxt is None:
                    nxt = self.update(cur, label, k)
                    reached[run[:k]] = nxt
                cur = nxt
                if cur is BLOCKED:
                    break
            if cur is not BLOCKED and not self.holds(cur, psi):
                return False, run
        return True, None

    def _box_struct(self, pm, prog, psi, path):
        if isinstance(prog, (Done, Nil)):
            return (True, None) if self.holds(pm, psi) else (False, path)
        if isinstance(prog, (Act, Prefix)):
            if is_channel(prog.label):
                return (True, None) if self.holds(pm, psi) else (False, path)
            nxt = self.update(pm, prog.label, len(path) + 1)
            if nxt is BLOCKED:
                return True, None
            path = path + (prog.label,)
            if isinstance(prog, Act):
                return (True, None) if self.holds(nxt, psi) else (False, path)
            return self._box_struct(nxt, prog.cont, psi, path)
        if isinstance(prog, Seq):
            return self._seq_struct(pm, prog.left, prog.right, psi, path)
        if isinstance(prog, Choice):
            ok, w = self._box_struct(pm, prog.left, psi, path)
            if not ok:
                return ok, w
            return self._box_struct(pm, prog.right, psi, path)
        if isinstance(prog, Parallel):
            return self._box_struct(pm, expand(prog), psi, path)
        raise TypeError(f"not a process term: {prog!r}")

    def _seq_struct(self, pm, left, right, psi, path):
        # [left; right]psi as [left][right]psi, keeping the witness path
        if isinstance(left, (Done, Nil)):
            return self._box_struct(pm, right, psi, path)
        if isinstance(left, (Act, Prefix)):
            rest = right if isinstance(left, Act) else Seq(left.cont, right)
            if is_channel(left.label):
                return self._box_struct(pm, right, psi, path)
            nxt = self.update(pm, left.label, len(path) + 1)
            if nxt is BLOCKED:
                return True, None
            return self._box_struct(nxt, rest, psi, path + (left.label,))
        if isinstance(left, Seq):
            return self._seq_struct(pm, left.left, Seq(left.right, right), psi, path)
        if isinstance(left, Choice):
            ok, w = self._seq_struct(pm, left.left, right, psi, path)
            if not ok:
                return ok, w
            return self._seq_struct(pm, left.right, right, psi, path)
        if isinstance(left, Parallel):
            return self._seq_struct(pm, expand(left), right, psi, path)
        raise TypeError(f"not a process term: {left!r}")

    def run(self, pm: PointedModel, prog: ProcessTerm) -> Outcome:
        out = Outcome()
        for run in self._runs(prog):
            cur = pm
            for k, label in enumerate(run, 1):
                cur = self.update(cur, label, k)
                if cur is BLOCKED:
                    out.blocked.append((run, k))
                    break
            else:
                out.reached.append((run, cur))
        if isinstance(prog, Parallel):
            out.deadlocks = [(r, end) for r, end in maximal_runs(prog) if not isinstance(end, Done)]
        return out


def _evaluate(pm: PointedModel, f: Formula, ctx: Context, mode: str) -> EvalResult:
    ev = Evaluator(ctx, mode)
    witness = None
    if isinstance(f, Box):
        value, witness = ev.box(pm, f.program, f.arg)
    elif isinstance(f, Not) and isinstance(f.arg, Box):
        failed, witness = ev.box(pm, f.arg.program, f.arg.arg)
        value = not failed
    else:
        value = ev.holds(pm, f)
    return EvalResult(value, witness, ev.models_visited)


def eval(pm: PointedModel, f: Formula, ctx: Context) -> EvalResult:  # noqa: A001
    return _evaluate(pm, f, ctx, "traces")


def eval_via_expansion(pm: PointedModel, f: Formula, ctx: Context) -> bool:
    return _evaluate(pm, f, ctx, "expansion").value


def run(pm: PointedModel, prog: ProcessTerm, ctx: Context) -> Outcome:
    return Evaluator(ctx).run(pm, prog)
