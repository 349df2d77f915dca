"""Pretty-printer inverse to the parser: ``parse(render(x)) == x``."""

from __future__ import annotations

from delwca.syntax.ast import (
    Act,
    ActionRef,
    And,
    Atom,
    Box,
    Choice,
    Done,
    Formula,
    Inline,
    Input,
    Knows,
    ModelRef,
    Nil,
    Not,
    Output,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Tau,
    Top,
)

# formula levels: 1 implies, 2 or, 3 and, 4 unary
# program levels: 1 choice, 2 seq, 3 prefix/atom


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s


def render_formula(f: Formula, level: int = 1) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Atom):
        return f.prop
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Top):
            return "false"
        if isinstance(a, Box) and isinstance(a.arg, Not):
            return f"<{render_process(a.program)}>{render_formula(a.arg.arg, 4)}"
        if isinstance(a, And) and isinstance(a.left, Not) and isinstance(a.right, Not):
            s = f"{render_formula(a.left.arg, 2)} | {render_formula(a.right.arg, 3)}"
            return _paren(s, level > 2)
        if isinstance(a, And) and isinstance(a.right, Not):
            s = f"{render_formula(a.left, 2)} -> {render_formula(a.right.arg, 1)}"
            return _paren(s, level > 1)
        return "~" + render_formula(a, 4)
    if isinstance(f, And):
        s = f"{render_formula(f.left, 3)} & {render_formula(f.right, 4)}"
        return _paren(s, level > 3)
    if isinstance(f, Knows):
        return f"K{f.agent} {render_formula(f.arg, 4)}"
    if isinstance(f, Box):
        return f"[{render_process(f.program)}]{render_formula(f.arg, 4)}"
    raise TypeError(f"not a formula: {f!r}")


def render_label(lab: ActionRef) -> str:
    if isinstance(lab, ModelRef):
        return lab.name if lab.point is None else f"{lab.name}@{lab.point}"
    if isinstance(lab, Input):
        return f"{lab.channel}?"
    if isinstance(lab, Output):
        return f"{lab.channel}!({render_formula(lab.payload)})"
    if isinstance(lab, Tau):
        tail = "" if lab.point == "s" else f", {lab.point}"
        return f"tau({lab.sender}, {lab.receiver}, {render_formula(lab.payload)}{tail})"
    if isinstance(lab, Inline):
        return f"inline({lab.model.model.name}@{lab.model.point})"
    raise TypeError(f"not an action label: {lab!r}")


def render_process(t: ProcessTerm, level: int = 1) -> str:
    if isinstance(t, Done):
        return "done"
    if isinstance(t, Nil):
        return "0"
    if isinstance(t, Act):
        return render_label(t.label)
    if isinstance(t, Prefix):
        return f"{render_label(t.label)}.{render_process(t.cont, 3)}"
    if isinstance(t, Seq):
        s = f"{render_process(t.left, 2)}; {render_process(t.right, 3)}"
        return _paren(s, level > 2)
    if isinstance(t, Choice):
        s = f"{render_process(t.left, 1)} + {render_process(t.right, 2)}"
        return _paren(s, level > 1)
    if isinstance(t, Parallel):
        inner = " || ".join(f"{a}: {render_process(b)}" for a, b in t.branches)
        return "{" + inner + "}"
    raise TypeError(f"not a process term: {t!r}")


def render(x) -> str:
    if isinstance(x, Formula):
        return render_formula(x)
    if isinstance(x, ProcessTerm):
        return render_process(x)
    if isinstance(x, ActionRef):
        return render_label(x)
    raise TypeError(f"cannot render {x!r}")
