"""Recursive-descent parser for formulas and process terms.

Formula precedence, loosest first: ``->`` (right associative), ``|``,
``&``, then the prefix operators ``~``, ``K<agent>``, ``[prog]``, ``<prog>``.
Program precedence, loosest first: ``+``, ``;``, then prefix ``.``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from delwca.syntax.ast import (
    BOTTOM,
    DONE,
    NIL,
    TOP,
    Act,
    ActionRef,
    And,
    Atom,
    Box,
    Choice,
    Diamond,
    Formula,
    Implies,
    Input,
    Knows,
    ModelRef,
    Not,
    Or,
    Output,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Tau,
    contains_parallel,
    is_program_free,
    labels_of,
)

RESERVED = {"true", "false", "done", "procs", "tau", "0"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


@dataclass
class ParseContext:
    """Names a parser may resolve.

    ``actions`` maps action-model names to their event ids; ``channels``
    maps channel names to ``(sender, receiver)``.
    """

    agents: tuple[str, ...] = ()
    props: tuple[str, ...] = ()
    actions: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    channels: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    programs: Mapping[str, ProcessTerm] = field(default_factory=dict)
    internal: bool = False


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z0-9_]+)"
    r"|(?P<sym>->|\|\||[~&|\[\]<>(){}.;+!?:,@])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line0: int = 1, col0: int = 1) -> list[Token]:
    out = []
    pos, line, col = 0, line0, col0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("ident", "sym"):
            out.append(Token(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str, ctx: ParseContext, line0: int = 1, col0: int = 1):
        self.toks = tokenize(text, line0, col0)
        self.i = 0
        self.ctx = ctx

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text: Optional[str] = None) -> Token:
        t = self.tok
        if text is not None and t.text != text:
            found = t.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        self.i += 1
        return t

    def fail(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def ident(self, what: str) -> Token:
        if self.tok.kind != "ident":
            self.fail(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def end(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")

    # formulas
    def formula(self) -> Formula:
        left = self.disj()
        if self.peek("->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def agent_of_k(self, name: str) -> Optional[str]:
        if not name.startswith("K"):
            return None
        rest = name[1:]
        if rest.startswith("_") and rest[1:] in self.ctx.agents:
            return rest[1:]
        if rest in self.ctx.agents:
            return rest
        return None

    def unary(self) -> Formula:
        t = self.tok
        if self.peek("~"):
            self.take()
            return Not(self.unary())
        if self.peek("("):
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if self.peek("["):
            self.take()
            prog = self.program_in_formula()
            self.take("]")
            return Box(prog, self.unary())
        if self.peek("<"):
            self.take()
            prog = self.program_in_formula()
            self.take(">")
            return Diamond(prog, self.unary())
        if t.kind == "ident":
            self.take()
            if t.text == "true":
                return TOP
            if t.text == "false":
                return BOTTOM
            if t.text in self.ctx.props:
                return Atom(t.text)
            agent = self.agent_of_k(t.text)
            if agent is not None:
                return Knows(agent, self.unary())
            self.fail(f"unknown identifier {t.text!r}", t)
        self.fail(f"expected a formula, found {t.text or 'end of input'!r}")

    # programs
    def program_in_formula(self) -> ProcessTerm:
        start = self.tok
        prog = self.program()
        self.check_top(prog, start)
        if not isinstance(prog, Parallel) and not self.ctx.internal:
            for lab in labels_of(prog):
                if isinstance(lab, (Input, Output)):
                    self.fail("channel action outside a parallel composition", start)
        return prog

    def check_top(self, prog: ProcessTerm, start: Token):
        if self.ctx.internal:
            return
        if isinstance(prog, Parallel):
            return
        if contains_parallel(prog):
            self.fail("parallel nested inside sequential term", start)

    def program(self) -> ProcessTerm:
        p = self.seq()
        while self.peek("+"):
            self.take()
            p = Choice(p, self.seq())
        return p

    def seq(self) -> ProcessTerm:
        p = self.pref()
        while self.peek(";"):
            self.take()
            p = Seq(p, self.pref())
        return p

    def pref(self) -> ProcessTerm:
        t = self.tok
        if self.peek("("):
            self.take()
            p = self.program()
            self.take(")")
            return p
        if self.peek("{"):
            return self.par()
        if t.kind == "ident" and t.text == "0":
            self.take()
            return NIL
        if t.kind == "ident" and t.text == "done":
            self.take()
            return DONE
        if t.kind == "ident" and t.text == "procs":
            self.take()
            if not self.ctx.programs:
                self.fail("'procs' used but no agent programs are declared", t)
            return Parallel(tuple((a, self.ctx.programs.get(a, DONE)) for a in self.ctx.agents))
        label = self.action()
        if self.peek("."):
            self.take()
            return Prefix(label, self.pref())
        return Act(label)

    def action(self) -> ActionRef:
        t = self.ident("an action")
        if t.text == "tau":
            if not self.ctx.internal:
                self.fail("communication actions cannot be written directly", t)
            self.take("(")
            i = self.agent()
            self.take(",")
            j = self.agent()
            self.take(",")
            payload = self.formula()
            point = "s"
            if self.peek(","):
                self.take()
                point = self.ident("event").text
                if point not in ("s", "t"):
                    self.fail("communication event must be 's' or 't'")
            self.take(")")
            return Tau(i, j, payload, point)
        if self.peek("!") or self.peek("?"):
            if t.text not in self.ctx.channels:
                self.fail(f"unknown channel {t.text!r}", t)
            if self.take().text == "?":
                return Input(t.text)
            self.take("(")
            payload = self.formula()
            pt = self.tok
            self.take(")")
            if not is_program_free(payload):
                self.fail("message payload must be program-free", pt)
            return Output(t.text, payload)
        if t.text in RESERVED:
            self.fail(f"unexpected {t.text!r}", t)
        if t.text not in self.ctx.actions:
            self.fail(f"unknown action model {t.text!r}", t)
        point = None
        if self.peek("@"):
            self.take()
            pt = self.ident("event")
            if pt.text not in self.ctx.actions[t.text]:
                self.fail(f"action model {t.text!r} has no event {pt.text!r}", pt)
            point = pt.text
        return ModelRef(t.text, point)

    def agent(self) -> str:
        t = self.ident("an agent")
        if t.text not in self.ctx.agents:
            self.fail(f"unknown agent {t.text!r}", t)
        return t.text

    def par(self) -> ProcessTerm:
        self.take("{")
        got: dict[str, ProcessTerm] = {}
        while True:
            at = self.tok
            agent = self.agent()
            if agent in got:
                self.fail(f"agent {agent!r} has two programs", at)
            self.take(":")
            start = self.tok
            body = self.program()
            if contains_parallel(body) and not self.ctx.internal:
                self.fail("parallel nested inside sequential term", start)
            check_endpoints(agent, body, self.ctx, lambda m: self.fail(m, start))
            got[agent] = body
            if self.peek("||"):
                self.take()
                continue
            break
        self.take("}")
        return Parallel(tuple((a, got.get(a, DONE)) for a in self.ctx.agents))


def check_endpoints(agent: str, body: ProcessTerm, ctx: ParseContext, fail) -> None:
    for lab in labels_of(body):
        if isinstance(lab, Output) and ctx.channels[lab.channel][0] != agent:
            fail(f"agent {agent!r} cannot send on channel {lab.channel!r}")
        if isinstance(lab, Input) and ctx.channels[lab.channel][1] != agent:
            fail(f"agent {agent!r} cannot receive on channel {lab.channel!r}")


def parse_formula(text: str, ctx: ParseContext, line0: int = 1, col0: int = 1) -> Formula:
    p = _Parser(text, ctx, line0, col0)
    f = p.formula()
    p.end()
    return f


def parse_process(text: str, ctx: ParseContext, line0: int = 1, col0: int = 1) -> ProcessTerm:
    """Parse a program; a parallel composition is allowed only as the whole term."""
    p = _Parser(text, ctx, line0, col0)
    start = p.tok
    prog = p.program()
    p.end()
    p.check_top(prog, start)
    return prog
