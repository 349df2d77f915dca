"""Scenario files: a model, action models, channels, agent programs and queries.

Line-oriented format with ``#`` comments::

    agents: 1 2 3
    props: p
    states: u v
    s5: yes
    val p: u
    rel 2: u-v
    rel 3: u-v
    point: u
    channel c12: 1 -> 2
    actionmodel ack:
      events: e
      pre e: true
      rel 1 2 3: e-e
      point: e
    proc 1: c12!(p)
    proc 2: c12?
    query: <procs>(K1 p & K2 p)

Relation entries are ``x-y`` (both directions), ``x>y`` (one direction) or
``*`` (all pairs).  ``rel`` accepts several agents sharing one relation.
Indented lines continue the previous top-level entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from delwca.actionmodel import ActionModel, PointedActionModel
from delwca.kripke import EpistemicModel, PointedModel, make_model
from delwca.syntax.ast import DONE, Formula, Parallel, ProcessTerm, contains_parallel, is_program_free
from delwca.syntax.parser import RESERVED, ParseContext, ParseError, check_endpoints, parse_formula, parse_process

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class ScenarioError(ValueError):
    def __init__(self, section: str, message: str, line: int = 0):
        self.section = section
        self.line = line
        where = f"line {line}, " if line else ""
        super().__init__(f"{where}section '{section}': {message}")


@dataclass
class Scenario:
    agents: tuple[str, ...]
    props: tuple[str, ...]
    model: EpistemicModel
    point: str
    action_models: dict[str, PointedActionModel] = field(default_factory=dict)
    channels: dict[str, tuple[str, str]] = field(default_factory=dict)
    programs: dict[str, ProcessTerm] = field(default_factory=dict)
    queries: list[Formula] = field(default_factory=list)
    query_texts: list[str] = field(default_factory=list)
    s5: bool = False
    tau_reflexive: bool = False
    name: str = "scenario"

    @property
    def pointed(self) -> PointedModel:
        return PointedModel(self.model, self.point)

    @property
    def parallel(self) -> Parallel:
        return Parallel(tuple((a, self.programs.get(a, DONE)) for a in self.agents))

    def parse_context(self, internal: bool = False) -> ParseContext:
        return ParseContext(
            agents=self.agents,
            props=self.props,
            actions={n: pam.model.points for n, pam in self.action_models.items()},
            channels=self.channels,
            programs=self.programs,
            internal=internal,
        )

    def formula(self, text: str) -> Formula:
        return parse_formula(text, self.parse_context())

    def process(self, text: str, internal: bool = False) -> ProcessTerm:
        return parse_process(text, self.parse_context(internal))


def _names(section: str, text: str, line: int) -> list[str]:
    out = text.split()
    for n in out:
        if not _NAME.match(n):
            raise ScenarioError(section, f"bad identifier {n!r}", line)
    return out


def _pairs(section: str, text: str, universe: list[str], line: int) -> set[tuple[str, str]]:
    pairs = set()
    for item in text.split():
        if item == "*":
            pairs |= {(x, y) for x in universe for y in universe}
            continue
        m = re.fullmatch(r"([A-Za-z0-9_]+)([->])([A-Za-z0-9_]+)", item)
        if m is None:
            raise ScenarioError(section, f"bad relation entry {item!r}", line)
        x, kind, y = m.groups()
        for z in (x, y):
            if z not in universe:
                raise ScenarioError(section, f"unknown element {z!r}", line)
        pairs.add((x, y))
        if kind == "-":
            pairs.add((y, x))
    return pairs


def _flag(section: str, text: str, line: int) -> bool:
    v = text.strip().lower()
    if v in ("yes", "true", "on", "1"):
        return True
    if v in ("no", "false", "off", "0"):
        return False
    raise ScenarioError(section, f"expected yes/no, found {text.strip()!r}", line)


@dataclass
class _Entry:
    key: str
    arg: str
    text: str
    line: int
    body: list[tuple[int, str]] = field(default_factory=list)


def _split(text: str) -> list[_Entry]:
    entries: list[_Entry] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if not entries:
                raise ScenarioError("?", "indented line before any section", n)
            entries[-1].body.append((n, line.strip()))
            continue
        if ":" not in line:
            raise ScenarioError(line.split()[0], "missing ':'", n)
        head, rest = line.split(":", 1)
        words = head.split()
        entries.append(_Entry(words[0], " ".join(words[1:]), rest.strip(), n))
    return entries


def _wrap(section: str, line: int, fn, *args):
    try:
        return fn(*args)
    except ParseError as e:
        raise ScenarioError(section, str(e), line) from None


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    entries = _split(text)
    single = {}
    for e in entries:
        if e.key in ("agents", "props", "states", "point", "s5", "tau-reflexive"):
            if e.key in single:
                raise ScenarioError(e.key, "declared twice", e.line)
            single[e.key] = e
        elif e.key not in ("val", "rel", "channel", "actionmodel", "proc", "query"):
            raise ScenarioError(e.key, "unknown section", e.line)

    def need(key):
        if key not in single:
            raise ScenarioError(key, "missing section")
        return single[key]

    e = need("agents")
    agents = _names("agents", e.text, e.line)
    if not agents:
        raise ScenarioError("agents", "at least one agent is required", e.line)
    if len(set(agents)) != len(agents):
        raise ScenarioError("agents", "duplicate agent", e.line)
    props = _names("props", single["props"].text, single["props"].line) if "props" in single else []
    for p in props:
        if p in RESERVED or (p.startswith("K") and (p[1:] in agents or p[2:] in agents)):
            raise ScenarioError("props", f"proposition name {p!r} is reserved or ambiguous")
    e = need("states")
    states = _names("states", e.text, e.line)
    if not states:
        raise ScenarioError("states", "at least one state is required", e.line)
    s5 = _flag("s5", single["s5"].text, single["s5"].line) if "s5" in single else False
    tau_reflexive = (
        _flag("tau-reflexive", single["tau-reflexive"].text, single["tau-reflexive"].line)
        if "tau-reflexive" in single
        else False
    )

    val: dict[str, set[str]] = {p: set() for p in props}
    rels: dict[str, set[tuple[str, str]]] = {a: set() for a in agents}
    for e in entries:
        if e.key == "val":
            if e.arg not in val:
                raise ScenarioError("val", f"unknown proposition {e.arg!r}", e.line)
            for s in _names("val", e.text, e.line):
                if s not in states:
                    raise ScenarioError("val", f"unknown state {s!r}", e.line)
                val[e.arg].add(s)
        elif e.key == "rel":
            who = e.arg.split()
            if not who:
                raise ScenarioError("rel", "missing agent", e.line)
            pairs = _pairs("rel", e.text, states, e.line)
            for a in who:
                if a not in rels:
                    raise ScenarioError("rel", f"unknown agent {a!r}", e.line)
                rels[a] |= pairs
    model = make_model(states, rels, val, s5=s5)
    e = need("point")
    point = e.text.strip()
    if point not in states:
        raise ScenarioError("point", f"unknown state {point!r}", e.line)

    channels = {}
    for e in entries:
        if e.key != "channel":
            continue
        m = re.fullmatch(r"([A-Za-z0-9_]+)\s*->\s*([A-Za-z0-9_]+)", e.text)
        if not e.arg or m is None:
            raise ScenarioError("channel", "expected 'channel <name>: <sender> -> <receiver>'", e.line)
        snd, rcv = m.groups()
        if snd not in agents or rcv not in agents:
            raise ScenarioError("channel", "unknown endpoint agent", e.line)
        if snd == rcv:
            raise ScenarioError("channel", "a channel needs two distinct agents", e.line)
        if e.arg in channels:
            raise ScenarioError("channel", f"channel {e.arg!r} declared twice", e.line)
        channels[e.arg] = (snd, rcv)

    scen = Scenario(tuple(agents), tuple(props), model, point, {}, channels, {}, [], [], s5, tau_reflexive, name)

    for e in entries:
        if e.key == "actionmodel":
            if not e.arg or e.arg in RESERVED or e.arg in scen.action_models or e.arg in channels:
                raise ScenarioError("actionmodel", f"bad or duplicate name {e.arg!r}", e.line)
            scen.action_models[e.arg] = _action_model(e, scen)

    for e in entries:
        if e.key != "proc":
            continue
        if e.arg not in agents:
            raise ScenarioError("proc", f"unknown agent {e.arg!r}", e.line)
        if e.arg in scen.programs:
            raise ScenarioError("proc", f"agent {e.arg!r} has two programs", e.line)
        body = " ".join([e.text] + [t for _, t in e.body])
        prog = _wrap(f"proc {e.arg}", e.line, parse_process, body, scen.parse_context())
        if contains_parallel(prog):
            raise ScenarioError(f"proc {e.arg}", "parallel nested inside sequential term", e.line)

        def fail(msg, _e=e):
            raise ScenarioError(f"proc {_e.arg}", msg, _e.line)

        check_endpoints(e.arg, prog, scen.parse_context(), fail)
        scen.programs[e.arg] = prog

    for e in entries:
        if e.key == "query":
            body = " ".join([e.text] + [t for _, t in e.body])
            scen.queries.append(_wrap("query", e.line, parse_formula, body, scen.parse_context()))
            scen.query_texts.append(body)
    return scen


def _action_model(e: _Entry, scen: Scenario) -> PointedActionModel:
    sec = f"actionmodel {e.arg}"
    fields: dict[str, tuple[int, str]] = {}
    pre: dict[str, Formula] = {}
    rels: dict[str, set[tuple[str, str]]] = {a: set() for a in scen.agents}
    events: list[str] = []
    rel_lines = []
    for n, line in e.body:
        if ":" not in line:
            raise ScenarioError(sec, "missing ':'", n)
        head, rest = line.split(":", 1)
        words = head.split()
        key, rest = words[0], rest.strip()
        if key in ("events", "point", "s5"):
            fields[key] = (n, rest)
        elif key == "pre":
            if len(words) != 2:
                raise ScenarioError(sec, "expected 'pre <event>: <formula>'", n)
            f = _wrap(sec, n, parse_formula, rest, scen.parse_context())
            if not is_program_free(f):
                raise ScenarioError(sec, "preconditions must be program-free", n)
            pre[words[1]] = f
        elif key == "rel":
            rel_lines.append((n, words[1:], rest))
        else:
            raise ScenarioError(sec, f"unknown field {key!r}", n)
    if "events" not in fields:
        raise ScenarioError(sec, "missing 'events'", e.line)
    events = _names(sec, fields["events"][1], fields["events"][0])
    if not events:
        raise ScenarioError(sec, "at least one event is required", e.line)
    for ev in pre:
        if ev not in events:
            raise ScenarioError(sec, f"precondition for unknown event {ev!r}", e.line)
    for n, who, rest in rel_lines:
        pairs = _pairs(sec, rest, events, n)
        for a in who:
            if a not in rels:
                raise ScenarioError(sec, f"unknown agent {a!r}", n)
            rels[a] |= pairs
    if "s5" in fields and _flag(sec, fields["s5"][1], fields["s5"][0]):
        for a in rels:
            rels[a] |= {(x, x) for x in events}
    missing = [ev for ev in events if ev not in pre]
    if missing:
        raise ScenarioError(sec, f"no precondition for {missing[0]!r}", e.line)
    point = fields.get("point", (e.line, events[0]))[1]
    if point not in events:
        raise ScenarioError(sec, f"unknown designated event {point!r}", e.line)
    am = ActionModel.build(e.arg, events, rels, pre)
    return PointedActionModel(am, point)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), name=path.stem)
