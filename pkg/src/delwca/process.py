"""Operational semantics of the process calculus.

Transitions follow the seven structural rules (action, prefix, left
sequence, two choice rules, interleaving, synchronisation).  Inside a
parallel composition only action-model and communication labels escape;
bare channel labels are visible on sub-terms so that synchronisation fires.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from delwca.syntax.ast import (
    DONE,
    Act,
    ActionRef,
    Choice,
    Done,
    Input,
    Nil,
    Output,
    Parallel,
    Prefix,
    ProcessTerm,
    Seq,
    Tau,
    choice_of,
    is_channel,
    labels_of,
    parallel,
    prefix,
    seq,
)

Trace = tuple[ActionRef, ...]


@dataclass(frozen=True)
class Transition:
    label: ActionRef
    target: ProcessTerm  # DONE when the source terminates by this step


def _dedupe(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


def transitions(t: ProcessTerm) -> tuple[Transition, ...]:
    """Every derivable one-step transition of ``t``, in rule order."""
    if isinstance(t, (Done, Nil)):
        return ()
    if isinstance(t, Act):
        return (Transition(t.label, DONE),)
    if isinstance(t, Prefix):
        return (Transition(t.label, t.cont),)
    if isinstance(t, Seq):
        return _dedupe(Transition(tr.label, seq(tr.target, t.right)) for tr in transitions(t.left))
    if isinstance(t, Choice):
        return _dedupe(transitions(t.left) + transitions(t.right))
    if isinstance(t, Parallel):
        return _parallel_transitions(t)
    raise TypeError(f"not a process term: {t!r}")


def _replace(branches, updates: dict[int, ProcessTerm]) -> ProcessTerm:
    return parallel((a, updates.get(i, b)) for i, (a, b) in enumerate(branches))


def _parallel_transitions(t: Parallel) -> tuple[Transition, ...]:
    br = t.branches
    per_branch = [transitions(b) for _, b in br]
    out = []
    for i, trs in enumerate(per_branch):
        for tr in trs:
            if not is_channel(tr.label):
                out.append(Transition(tr.label, _replace(br, {i: tr.target})))
    for i, trs in enumerate(per_branch):
        for snd in trs:
            if not isinstance(snd.label, Output):
                continue
            for j, trs_j in enumerate(per_branch):
                if j == i:
                    continue
                for rcv in trs_j:
                    if isinstance(rcv.label, Input) and rcv.label.channel == snd.label.channel:
                        lab = Tau(br[i][0], br[j][0], snd.label.payload)
                        out.append(Transition(lab, _replace(br, {i: snd.target, j: rcv.target})))
    return _dedupe(out)


def moves(t: ProcessTerm) -> tuple[Transition, ...]:
    """Transitions observable from outside: channel labels are restricted."""
    return tuple(tr for tr in transitions(t) if not is_channel(tr.label))


def expand(t: Parallel) -> ProcessTerm:
    """Sum of prefixes equivalent to ``t``; ``Nil`` when ``t`` cannot move."""
    if not isinstance(t, Parallel):
        raise TypeError("expansion applies to a parallel composition")
    return choice_of(prefix(tr.label, tr.target) for tr in transitions(t))


def traces(t: ProcessTerm, _memo: dict | None = None) -> tuple[Trace, ...]:
    """Label sequences of the complete runs of ``t``.

    ``Nil`` and a stuck parallel composition contribute the empty run, so a
    deadlock ends the run with the labels accumulated so far.
    """
    memo = {} if _memo is None else _memo
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, (Done, Nil)):
        out: tuple[Trace, ...] = ((),)
    elif isinstance(t, Act):
        out = ((),) if is_channel(t.label) else ((t.label,),)
    elif isinstance(t, Prefix):
        if is_channel(t.label):
            out = ((),)
        else:
            out = tuple((t.label,) + x for x in traces(t.cont, memo))
    elif isinstance(t, Seq):
        tails = traces(t.right, memo)
        out = _dedupe(x + y for x in traces(t.left, memo) for y in tails)
    elif isinstance(t, Choice):
        out = _dedupe(traces(t.left, memo) + traces(t.right, memo))
    elif isinstance(t, Parallel):
        trs = transitions(t)
        if not trs:
            out = ((),)
        else:
            out = _dedupe((tr.label,) + x for tr in trs for x in traces(tr.target, memo))
    else:
        raise TypeError(f"not a process term: {t!r}")
    memo[t] = out
    return out


def maximal_runs(t: ProcessTerm) -> Iterator[tuple[Trace, ProcessTerm]]:
    """Maximal paths through ``moves``, each with the term it ends in.

    The end term is ``Done`` for successful termination and the stuck
    residue otherwise.
    """
    stack: list[tuple[Trace, ProcessTerm]] = [((), t)]
    while stack:
        trace, term = stack.pop()
        ms = moves(term)
        if not ms:
            yield trace, term
            continue
        for tr in reversed(ms):
            stack.append((trace + (tr.label,), tr.target))


def communication_potential(t: ProcessTerm) -> int:
    # cubic in the occurrence count so that one step always pays for the
    # extra summands an expansion introduces
    n = len(labels_of(t))
    return n**3 + 2


def complexity(t: ProcessTerm) -> int:
    if isinstance(t, Nil):
        return 1
    if isinstance(t, Done):
        return 0
    if isinstance(t, Act):
        return 1
    if isinstance(t, Prefix):
        return 1 + complexity(t.cont)
    if isinstance(t, Choice):
        return 2 + max(complexity(t.left), complexity(t.right))
    if isinstance(t, Seq):
        return 1 + complexity(t.left) + complexity(t.right)
    if isinstance(t, Parallel):
        return communication_potential(t) + sum(complexity(b) for _, b in t.branches)
    raise TypeError(f"not a process term: {t!r}")


def reachable(roots: Iterable[ProcessTerm]) -> dict[ProcessTerm, tuple[Transition, ...]]:
    graph: dict[ProcessTerm, tuple[Transition, ...]] = {}
    queue = deque(roots)
    while queue:
        t = queue.popleft()
        if t in graph:
            continue
        graph[t] = transitions(t)
        queue.extend(tr.target for tr in graph[t] if tr.target not in graph)
    return graph


def bisimulation_classes(graph: dict[ProcessTerm, tuple[Transition, ...]]) -> dict[ProcessTerm, int]:
    """Coarsest strong bisimulation on ``graph`` by signature refinement.

    ``Done`` starts in its own block so that terminating steps are only
    matched by terminating steps.
    """
    block = {t: int(isinstance(t, Done)) for t in graph}
    while True:
        sigs = {
            t: (block[t], frozenset((tr.label, block[tr.target]) for tr in trs))
            for t, trs in graph.items()
        }
        ids: dict = {}
        new = {t: ids.setdefault(sig, len(ids)) for t, sig in sigs.items()}
        if len(ids) == len(set(block.values())):
            return new
        block = new


def bisimilar(p: ProcessTerm, q: ProcessTerm) -> bool:
    graph = reachable([p, q])
    classes = bisimulation_classes(graph)
    return classes[p] == classes[q]


def run_tree(t: ProcessTerm, limit: int = 10_000) -> tuple[list[ProcessTerm], list[tuple[int, ActionRef, int]]]:
    """Nodes and ``(parent, label, child)`` edges of the unfolded run tree.

    Node 0 is ``t``.  Only observable moves are unfolded.
    """
    nodes = [t]
    edges = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for tr in moves(nodes[i]):
            if len(nodes) >= limit:
                raise ValueError(f"run tree exceeds {limit} nodes")
            nodes.append(tr.target)
            edges.append((i, tr.label, len(nodes) - 1))
            queue.append(len(nodes) - 1)
    return nodes, edges
