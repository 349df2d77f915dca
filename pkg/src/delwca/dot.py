"""Graphviz DOT output for epistemic models, action models and run trees."""

from __future__ import annotations

from delwca.actionmodel import ActionModel
from delwca.kripke import EpistemicModel
from delwca.process import run_tree
from delwca.syntax.ast import ProcessTerm
from delwca.syntax.render import render_formula, render_label, render_process

_STYLES = ("solid", "dashed", "dotted", "bold")
_COLORS = ("black", "blue", "red", "darkgreen", "purple", "orange")


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _edge_attrs(i: int, agent: str) -> str:
    style = _STYLES[i % len(_STYLES)]
    color = _COLORS[i % len(_COLORS)]
    return f"label={_q(agent)}, style={style}, color={color}"


def _agent_edges(points, relations, skip_loops: bool) -> list[str]:
    lines = []
    for i, (agent, pairs) in enumerate(relations):
        for s in points:
            for t in points:
                if (s, t) in pairs and not (skip_loops and s == t):
                    lines.append(f"  {_q(s)} -> {_q(t)} [{_edge_attrs(i, agent)}];")
    return lines


def model_to_dot(m: EpistemicModel, point: str | None = None, name: str = "model", loops: bool = True) -> str:
    lines = [f"digraph {_q(name)} {{"]
    for s in m.states:
        props = [p for p in sorted(m.valuation) if s in m.valuation[p]]
        label = s + ("\n" + " ".join(props) if props else "")
        shape = "doublecircle" if s == point else "circle"
        lines.append(f"  {_q(s)} [label={_q(label)}, shape={shape}];")
    lines += _agent_edges(m.states, sorted(m.relations.items()), skip_loops=not loops)
    lines.append("}")
    return "\n".join(lines) + "\n"


def action_model_to_dot(am: ActionModel, point: str | None = None) -> str:
    lines = [f"digraph {_q(am.name)} {{"]
    for e in am.points:
        label = f"{e}\npre: {render_formula(am.precondition[e])}"
        shape = "doubleoctagon" if e == point else "box"
        lines.append(f"  {_q(e)} [label={_q(label)}, shape={shape}];")
    lines += _agent_edges(am.points, sorted(am.relations), skip_loops=False)
    lines.append("}")
    return "\n".join(lines) + "\n"


def run_tree_to_dot(t: ProcessTerm, name: str = "runs", limit: int = 10_000) -> str:
    nodes, edges = run_tree(t, limit)
    lines = [f"digraph {_q(name)} {{"]
    for i, node in enumerate(nodes):
        lines.append(f"  n{i} [label={_q(render_process(node))}, shape=plaintext];")
    for parent, label, child in edges:
        lines.append(f"  n{parent} -> n{child} [label={_q(render_label(label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
