"""Random models, action models, formulas and process terms, plus the
teacher/students scenario family used as a scale probe."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from delwca.actionmodel import ActionModel, PointedActionModel
from delwca.kripke import EpistemicModel, PointedModel, make_model
from delwca.syntax.ast import (
    DONE,
    NIL,
    TOP,
    Act,
    And,
    Atom,
    Box,
    Choice,
    Formula,
    Input,
    Knows,
    ModelRef,
    Not,
    Output,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Tau,
)


@dataclass(frozen=True)
class GenConfig:
    agents: tuple[str, ...] = ("1", "2", "3")
    props: tuple[str, ...] = ("p", "q")
    max_states: int = 6
    max_events: int = 3
    n_action_models: int = 2
    formula_depth: int = 4
    program_size: int = 4
    max_branches: int = 4
    branch_size: int = 12
    s5_bias: float = 0.7
    pre_depth: int = 2


@dataclass
class RandomContext:
    """Minimal evaluation context for randomly generated inputs."""

    agents: tuple[str, ...]
    action_models: dict[str, PointedActionModel] = field(default_factory=dict)
    channels: dict[str, tuple[str, str]] = field(default_factory=dict)
    tau_reflexive: bool = False


def channel_name(snd: str, rcv: str) -> str:
    return f"c{snd}{rcv}"


def all_channels(agents) -> dict[str, tuple[str, str]]:
    return {channel_name(a, b): (a, b) for a in agents for b in agents if a != b}


def _partition_pairs(rng: random.Random, items) -> set[tuple[str, str]]:
    blocks: dict[int, list[str]] = {}
    for x in items:
        blocks.setdefault(rng.randrange(len(items)), []).append(x)
    return {(x, y) for b in blocks.values() for x in b for y in b}


def _relation(rng: random.Random, items, s5_bias: float) -> set[tuple[str, str]]:
    if rng.random() < s5_bias:
        return _partition_pairs(rng, items)
    return {(x, y) for x in items for y in items if rng.random() < 0.35}


def random_model(rng: random.Random, cfg: GenConfig = GenConfig()) -> EpistemicModel:
    n = rng.randint(1, cfg.max_states)
    states = [f"w{i}" for i in range(n)]
    rels = {a: _relation(rng, states, cfg.s5_bias) for a in cfg.agents}
    val = {p: [s for s in states if rng.random() < 0.5] for p in cfg.props}
    return make_model(states, rels, val)


def random_pointed(rng: random.Random, cfg: GenConfig = GenConfig()) -> PointedModel:
    m = random_model(rng, cfg)
    return PointedModel(m, rng.choice(m.states))


def random_static(rng: random.Random, depth: int, cfg: GenConfig = GenConfig()) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return TOP if rng.random() < 0.1 else Atom(rng.choice(cfg.props))
    kind = rng.randrange(3)
    if kind == 0:
        return Not(random_static(rng, depth - 1, cfg))
    if kind == 1:
        return And(random_static(rng, depth - 1, cfg), random_static(rng, depth - 1, cfg))
    return Knows(rng.choice(cfg.agents), random_static(rng, depth - 1, cfg))


def random_action_model(rng: random.Random, name: str, cfg: GenConfig = GenConfig()) -> PointedActionModel:
    events = [f"e{i}" for i in range(rng.randint(1, cfg.max_events))]
    rels = {a: _relation(rng, events, cfg.s5_bias) for a in cfg.agents}
    pre = {e: random_static(rng, cfg.pre_depth, cfg) for e in events}
    am = ActionModel.build(name, events, rels, pre)
    return PointedActionModel(am, rng.choice(events))


def random_context(rng: random.Random, cfg: GenConfig = GenConfig()) -> RandomContext:
    ctx = RandomContext(cfg.agents, channels=all_channels(cfg.agents), tau_reflexive=rng.random() < 0.2)
    for i in range(cfg.n_action_models):
        ctx.action_models[f"a{i}"] = random_action_model(rng, f"a{i}", cfg)
    return ctx


def _model_label(rng: random.Random, ctx: RandomContext, cfg: GenConfig):
    if ctx.action_models and rng.random() < 0.7:
        name = rng.choice(sorted(ctx.action_models))
        point = None
        if rng.random() < 0.3:
            point = rng.choice(ctx.action_models[name].model.points)
        return ModelRef(name, point)
    snd, rcv = rng.sample(list(cfg.agents), 2)
    return Tau(snd, rcv, random_static(rng, 1, cfg), "s" if rng.random() < 0.8 else "t")


def random_sequential(rng: random.Random, size: int, label) -> ProcessTerm:
    """Parallel-free term with exactly ``size`` nodes; ``label()`` draws actions."""
    if size <= 1:
        r = rng.random()
        if r < 0.1:
            return NIL
        if r < 0.2:
            return DONE
        return Act(label())
    kind = rng.randrange(3) if size > 2 else 0
    if kind == 0:
        return Prefix(label(), random_sequential(rng, size - 1, label))
    left = rng.randint(1, size - 2)
    right = size - 1 - left
    parts = random_sequential(rng, left, label), random_sequential(rng, right, label)
    return Seq(*parts) if kind == 1 else Choice(*parts)


def random_parallel(
    rng: random.Random,
    cfg: GenConfig = GenConfig(),
    ctx: Optional[RandomContext] = None,
    total_size: Optional[int] = None,
) -> Parallel:
    """Top-level parallel composition with channel traffic between branches.

    Branch agents are the first ``k`` agents; labels are local action models
    and inputs/outputs on channels whose endpoints match the branch.
    """
    k = rng.randint(2, cfg.max_branches)
    agents = list(cfg.agents)
    while len(agents) < k:
        agents.append(str(len(agents) + 1))
    agents = agents[:k]
    budget = cfg.branch_size if total_size is None else total_size
    sizes = [1] * k
    for _ in range(max(0, rng.randint(k, budget) - k)):
        sizes[rng.randrange(k)] += 1
    models = sorted(ctx.action_models) if ctx else ["a0", "a1"]

    def label_for(me: str):
        def draw():
            r = rng.random()
            other = rng.choice([a for a in agents if a != me])
            if r < 0.35:
                return Output(channel_name(me, other), Atom(rng.choice(cfg.props)))
            if r < 0.7:
                return Input(channel_name(other, me))
            return ModelRef(rng.choice(models))

        return draw

    return Parallel(tuple((a, random_sequential(rng, s, label_for(a))) for a, s in zip(agents, sizes)))


def random_program(rng: random.Random, ctx: RandomContext, cfg: GenConfig = GenConfig()) -> ProcessTerm:
    if rng.random() < 0.2:
        small = GenConfig(**{**cfg.__dict__, "max_branches": min(3, len(cfg.agents)), "branch_size": 5})
        par = random_parallel(rng, small, ctx)
        idle = tuple((a, DONE) for a in cfg.agents if a not in par.agents)
        return Parallel(par.branches + idle)
    return random_sequential(rng, rng.randint(1, cfg.program_size), lambda: _model_label(rng, ctx, cfg))


def random_formula(rng: random.Random, ctx: RandomContext, depth: int, cfg: GenConfig = GenConfig()) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        return TOP if rng.random() < 0.1 else Atom(rng.choice(cfg.props))
    kind = rng.randrange(4)
    if kind == 0:
        return Not(random_formula(rng, ctx, depth - 1, cfg))
    if kind == 1:
        return And(random_formula(rng, ctx, depth - 1, cfg), random_formula(rng, ctx, depth - 1, cfg))
    if kind == 2:
        return Knows(rng.choice(cfg.agents), random_formula(rng, ctx, depth - 1, cfg))
    return Box(random_program(rng, ctx, cfg), random_formula(rng, ctx, depth - 1, cfg))


def random_case(rng: random.Random, cfg: GenConfig = GenConfig()):
    """One ``(pointed model, formula, context)`` triple."""
    ctx = random_context(rng, cfg)
    return random_pointed(rng, cfg), random_formula(rng, ctx, cfg.formula_depth, cfg), ctx


# -- teacher and students ----------------------------------------------------


def students_text(n: int) -> str:
    """Scenario where agent 1 privately sends ``p`` to each of ``n`` students.

    The teacher may serve the students in any order, so the composition has
    ``n!`` runs.  Only the teacher knows ``p`` at the start.
    """
    if n < 1:
        raise ValueError("need at least one student")
    students = [str(i) for i in range(2, n + 2)]
    orders = [
        "; ".join(f"{channel_name('1', s)}!(p)" for s in perm)
        for perm in itertools.permutations(students)
    ]
    lines = [
        f"# teacher 1 and {n} students",
        "agents: 1 " + " ".join(students),
        "props: p",
        "states: u v",
        "s5: yes",
        "val p: u",
        f"rel {' '.join(students)}: u-v",
        "point: u",
    ]
    lines += [f"channel {channel_name('1', s)}: 1 -> {s}" for s in students]
    lines.append("proc 1: " + " + ".join(orders))
    lines += [f"proc {s}: {channel_name('1', s)}?" for s in students]
    everyone = " & ".join(f"K{a} p" for a in ["1"] + students)
    lines.append(f"query: <procs>({everyone})")
    lines.append(f"query: [procs]({everyone})")
    return "\n".join(lines) + "\n"


def students_scenario(n: int):
    from delwca.syntax.scenario import parse_scenario

    return parse_scenario(students_text(n), name=f"students{n}")
