"""Action models, the communication action model, product update and composition."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Protocol

from delwca.kripke import EpistemicModel, PointedModel, extension
from delwca.syntax.ast import (
    TOP,
    Act,
    ActionRef,
    Diamond,
    Formula,
    Inline,
    ModelRef,
    Tau,
    is_channel,
    is_program_free,
)

SEP = "·"


@dataclass(frozen=True)
class ActionModel:
    name: str
    points: tuple[str, ...]
    relations: tuple[tuple[str, frozenset[tuple[str, str]]], ...]
    pre: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        known = set(self.points)
        if len(known) != len(self.points):
            raise ValueError(f"action model {self.name}: duplicate events")
        if {e for e, _ in self.pre} != known:
            raise ValueError(f"action model {self.name}: precondition must be given for every event")
        for agent, pairs in self.relations:
            for s, t in pairs:
                if s not in known or t not in known:
                    raise ValueError(f"action model {self.name}: relation of {agent} mentions unknown event")

    @classmethod
    def build(
        cls,
        name: str,
        points: Iterable[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        pre: Mapping[str, Formula],
    ) -> "ActionModel":
        points = tuple(points)
        rels = tuple((a, frozenset(p)) for a, p in relations.items())
        return cls(name, points, rels, tuple((e, pre[e]) for e in points))

    @cached_property
    def rel(self) -> dict[str, frozenset[tuple[str, str]]]:
        return dict(self.relations)

    @cached_property
    def precondition(self) -> dict[str, Formula]:
        return dict(self.pre)

    def related(self, agent: str, event: str) -> tuple[str, ...]:
        pairs = self.rel.get(agent, frozenset())
        return tuple(t for t in self.points if (event, t) in pairs)

    def as_frame(self) -> EpistemicModel:
        return EpistemicModel(self.points, dict(self.relations), {})


@dataclass(frozen=True)
class PointedActionModel:
    model: ActionModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.points:
            raise ValueError(f"designated event {self.point!r} not in {self.model.name}")

    @property
    def pre(self) -> Formula:
        return self.model.precondition[self.point]

    def at(self, event: str) -> "PointedActionModel":
        return PointedActionModel(self.model, event)


class Blocked:
    """Result of executing an action whose designated precondition fails."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BLOCKED"


BLOCKED = Blocked()


class Context(Protocol):
    agents: tuple[str, ...]
    action_models: Mapping[str, PointedActionModel]
    tau_reflexive: bool


def product_model(m: EpistemicModel, am: ActionModel, ext_fn=None) -> EpistemicModel:
    """Restricted product; states are ordered by source state, then event.

    ``ext_fn(model, formula)`` computes precondition extensions; the default
    only accepts program-free preconditions.
    """
    ext_fn = ext_fn or extension
    ext = {e: ext_fn(m, am.precondition[e]) for e in am.points}
    pairs = [(s, e) for s in m.states for e in am.points if s in ext[e]]
    ids = {p: f"{p[0]}{SEP}{p[1]}" for p in pairs}
    by_source: dict[str, list[tuple[str, str]]] = {}
    for p in pairs:
        by_source.setdefault(p[0], []).append(p)
    relations = {}
    for agent in m.agents:
        epairs = am.rel.get(agent, frozenset())
        out = set()
        for s, e in pairs:
            for t in m.successors(agent, s):
                for t2, f in by_source.get(t, ()):
                    if (e, f) in epairs:
                        out.add((ids[(s, e)], ids[(t2, f)]))
        relations[agent] = frozenset(out)
    valuation = {
        prop: frozenset(ids[(s, e)] for s, e in pairs if s in where)
        for prop, where in m.valuation.items()
    }
    return EpistemicModel(tuple(ids[p] for p in pairs), relations, valuation)


def product_size(m: EpistemicModel, am: ActionModel, ext_fn=None) -> tuple[int, int]:
    """Candidate ``(state, event)`` pairs and how many survive their preconditions."""
    kept = sum(len((ext_fn or extension)(m, am.precondition[e])) for e in am.points)
    return len(m.states) * len(am.points), kept


def product_update(pm: PointedModel, pam: PointedActionModel, ext_fn=None) -> PointedModel | Blocked:
    if pm.point not in (ext_fn or extension)(pm.model, pam.pre):
        return BLOCKED
    m = product_model(pm.model, pam.model, ext_fn)
    return PointedModel(m, f"{pm.point}{SEP}{pam.point}")


def tau_model(
    sender: str,
    receiver: str,
    payload: Formula,
    agents: Iterable[str],
    reflexive: bool = False,
    real: str = "s",
    skip: str = "t",
) -> PointedActionModel:
    """Private communication from ``sender`` to ``receiver``.

    Insiders see which event happened; every other agent only considers the
    skip event possible.  With ``reflexive`` the outsiders also keep the real
    event possible at the real event.
    """
    if sender == receiver:
        raise ValueError("sender and receiver must differ")
    if not is_program_free(payload):
        raise ValueError("communicated payload must be program-free")
    insider = frozenset({(real, real), (skip, skip)})
    outsider = {(real, skip), (skip, skip)}
    if reflexive:
        outsider.add((real, real))
    outsider = frozenset(outsider)
    rels = {a: insider if a in (sender, receiver) else outsider for a in agents}
    rels.setdefault(sender, insider)
    rels.setdefault(receiver, insider)
    am = ActionModel.build(
        f"tau[{sender},{receiver}]",
        (real, skip),
        rels,
        {real: payload, skip: TOP},
    )
    return PointedActionModel(am, real)


def resolve(label: ActionRef, ctx: Context, step: Optional[int] = None) -> PointedActionModel:
    """Pointed action model denoted by an action label.

    ``step`` (1-based position in a run) names the real event of a
    communication ``s<step>`` so product states read like ``u·s1·s2``.
    """
    if isinstance(label, ModelRef):
        try:
            pam = ctx.action_models[label.name]
        except KeyError:
            raise KeyError(f"unknown action model {label.name!r}") from None
        return pam if label.point is None else pam.at(label.point)
    if isinstance(label, Tau):
        real = "s" if step is None else f"s{step}"
        pam = tau_model(label.sender, label.receiver, label.payload, ctx.agents, ctx.tau_reflexive, real=real)
        return pam if label.point == "s" else pam.at("t")
    if isinstance(label, Inline):
        return label.model
    if is_channel(label):
        raise ValueError(f"bare channel action {label!r} has no action model")
    raise TypeError(f"not an action label: {label!r}")


def compose(a: PointedActionModel, b: PointedActionModel) -> PointedActionModel:
    """Sequential composition of two pointed action models.

    The precondition of ``(x, y)`` is ``<a at x> pre_b(y)``, kept unreduced.
    """
    ma, mb = a.model, b.model
    points = tuple(f"{x}{SEP}{y}" for x in ma.points for y in mb.points)
    agents = list(dict.fromkeys([ag for ag, _ in ma.relations] + [ag for ag, _ in mb.relations]))
    rels = {}
    for agent in agents:
        ra = ma.rel.get(agent, frozenset())
        rb = mb.rel.get(agent, frozenset())
        rels[agent] = {
            (f"{x}{SEP}{y}", f"{x2}{SEP}{y2}")
            for x, x2 in ra
            for y, y2 in rb
        }
    pre = {
        f"{x}{SEP}{y}": Diamond(Act(Inline(a.at(x))), mb.precondition[y])
        for x in ma.points
        for y in mb.points
    }
    am = ActionModel.build(f"{ma.name};{mb.name}", points, rels, pre)
    return PointedActionModel(am, f"{a.point}{SEP}{b.point}")
