"""Epistemic (Kripke) models and static satisfaction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from delwca.syntax.ast import And, Atom, Box, Formula, Knows, Not, Top


@dataclass(frozen=True)
class EpistemicModel:
    """Finite Kripke model.

    ``relations`` maps each agent to a set of ``(source, target)`` pairs and
    ``valuation`` maps each proposition to the states where it holds.  State
    order is significant: every derived collection follows it.
    """

    states: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state ids")
        for agent, pairs in self.relations.items():
            for s, t in pairs:
                if s not in known or t not in known:
                    raise ValueError(f"relation for {agent} mentions unknown state in {(s, t)}")
        for prop, where in self.valuation.items():
            if not where <= known:
                raise ValueError(f"valuation of {prop} mentions unknown states")

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(self.relations)

    @cached_property
    def _succ(self) -> dict[str, dict[str, tuple[str, ...]]]:
        order = {s: i for i, s in enumerate(self.states)}
        out: dict[str, dict[str, tuple[str, ...]]] = {}
        for agent, pairs in self.relations.items():
            table: dict[str, list[str]] = {s: [] for s in self.states}
            for s, t in pairs:
                table[s].append(t)
            out[agent] = {s: tuple(sorted(ts, key=order.__getitem__)) for s, ts in table.items()}
        return out

    def successors(self, agent: str, state: str) -> tuple[str, ...]:
        try:
            return self._succ[agent][state]
        except KeyError:
            if agent not in self.relations:
                raise KeyError(f"unknown agent {agent!r}") from None
            raise KeyError(f"unknown state {state!r}") from None

    def holds_atom(self, prop: str, state: str) -> bool:
        return state in self.valuation.get(prop, frozenset())


@dataclass(frozen=True)
class PointedModel:
    model: EpistemicModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.states:
            raise ValueError(f"designated state {self.point!r} not in model")


def make_model(
    states: Iterable[str],
    relations: Mapping[str, Iterable[tuple[str, str]]],
    valuation: Mapping[str, Iterable[str]] | None = None,
    s5: bool = False,
) -> EpistemicModel:
    """Build a model; with ``s5`` the omitted reflexive loops are added."""
    states = tuple(states)
    rels = {}
    for agent, pairs in relations.items():
        pairs = set(pairs)
        if s5:
            pairs |= {(s, s) for s in states}
        rels[agent] = frozenset(pairs)
    val = {p: frozenset(ss) for p, ss in (valuation or {}).items()}
    return EpistemicModel(states, rels, val)


def is_equivalence(states: Iterable[str], pairs: frozenset[tuple[str, str]]) -> bool:
    states = list(states)
    if any((s, s) not in pairs for s in states):
        return False
    if any((t, s) not in pairs for s, t in pairs):
        return False
    for s, t in pairs:
        for t2, u in pairs:
            if t == t2 and (s, u) not in pairs:
                return False
    return True


def is_s5(m: EpistemicModel) -> bool:
    return all(is_equivalence(m.states, pairs) for pairs in m.relations.values())


def extension(m: EpistemicModel, f: Formula, _memo: dict | None = None) -> frozenset[str]:
    """States of ``m`` satisfying the program-free formula ``f``."""
    memo = {} if _memo is None else _memo
    key = id(f)
    hit = memo.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    if isinstance(f, Top):
        out = frozenset(m.states)
    elif isinstance(f, Atom):
        out = m.valuation.get(f.prop, frozenset())
    elif isinstance(f, Not):
        out = frozenset(m.states) - extension(m, f.arg, memo)
    elif isinstance(f, And):
        out = extension(m, f.left, memo) & extension(m, f.right, memo)
    elif isinstance(f, Knows):
        inner = extension(m, f.arg, memo)
        out = frozenset(s for s in m.states if all(t in inner for t in m.successors(f.agent, s)))
    elif isinstance(f, Box):
        raise ValueError("program modality in static evaluation; reduce the formula first")
    else:
        raise TypeError(f"not a formula: {f!r}")
    # keep f alive so its id cannot be recycled while memoised
    memo[key] = (f, out)
    return out


def eval_static(pm: PointedModel, f: Formula) -> bool:
    return pm.point in extension(pm.model, f)
