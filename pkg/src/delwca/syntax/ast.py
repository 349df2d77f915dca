"""Abstract syntax for formulas and process terms.

Formulas have six core constructors (``Top``, ``Atom``, ``Not``, ``And``,
``Knows``, ``Box``).  ``Or``, ``Implies`` and ``Diamond`` are functions that
build core trees, so every formula is already desugared once constructed.

Process terms are built from action labels (``ModelRef``, ``Input``,
``Output``, ``Tau``, ``Inline``) with prefix, sequence, choice, a top-level
parallel composition, and the two inert terms ``Done`` and ``Nil``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import TYPE_CHECKING, Iterable, Optional, Union

if TYPE_CHECKING:
    from delwca.actionmodel import PointedActionModel


# -- formulas ---------------------------------------------------------------


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    prop: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Knows(Formula):
    agent: str
    arg: Formula


@dataclass(frozen=True)
class Box(Formula):
    program: "ProcessTerm"
    arg: Formula


TOP = Top()
BOTTOM = Not(TOP)


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Diamond(program: "ProcessTerm", arg: Formula) -> Formula:
    return Not(Box(program, Not(arg)))


def implies(left: Formula, right: Formula) -> Formula:
    """``left -> right``, folding a negated consequent into the conjunction."""
    if isinstance(right, Not):
        return Not(And(left, right.arg))
    return Implies(left, right)


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Balanced conjunction; ``Top`` when empty."""
    parts = list(parts)
    if not parts:
        return TOP
    while len(parts) > 1:
        paired = [And(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            paired.append(parts[-1])
        parts = paired
    return parts[0]


def is_program_free(f: Formula) -> bool:
    if isinstance(f, (Top, Atom)):
        return True
    if isinstance(f, Not):
        return is_program_free(f.arg)
    if isinstance(f, And):
        return is_program_free(f.left) and is_program_free(f.right)
    if isinstance(f, Knows):
        return is_program_free(f.arg)
    return False


def formula_size(f: Formula) -> int:
    if isinstance(f, (Top, Atom)):
        return 1
    if isinstance(f, (Not, Knows)):
        return 1 + formula_size(f.arg)
    if isinstance(f, And):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Box):
        return 1 + term_size(f.program) + formula_size(f.arg)
    raise TypeError(f"not a formula: {f!r}")


def agents_of(f: Formula) -> set[str]:
    if isinstance(f, (Top, Atom)):
        return set()
    if isinstance(f, Not):
        return agents_of(f.arg)
    if isinstance(f, And):
        return agents_of(f.left) | agents_of(f.right)
    if isinstance(f, Knows):
        return {f.agent} | agents_of(f.arg)
    if isinstance(f, Box):
        return agents_of(f.arg)
    raise TypeError(f"not a formula: {f!r}")


# -- action labels ----------------------------------------------------------


class ActionRef:
    __slots__ = ()


@dataclass(frozen=True)
class ModelRef(ActionRef):
    """A declared action model; ``point`` overrides its designated event."""

    name: str
    point: Optional[str] = None


@dataclass(frozen=True)
class Input(ActionRef):
    channel: str


@dataclass(frozen=True)
class Output(ActionRef):
    channel: str
    payload: Formula


@dataclass(frozen=True)
class Tau(ActionRef):
    """Synchronised communication; ``point`` is ``"s"`` (real) or ``"t"`` (skip)."""

    sender: str
    receiver: str
    payload: Formula
    point: str = "s"


@dataclass(frozen=True)
class Inline(ActionRef):
    """An action model carried by value (composition results)."""

    model: "PointedActionModel"


def is_channel(label: ActionRef) -> bool:
    return isinstance(label, (Input, Output))


# -- process terms ----------------------------------------------------------


class ProcessTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Act(ProcessTerm):
    label: ActionRef


@dataclass(frozen=True)
class Prefix(ProcessTerm):
    label: ActionRef
    cont: ProcessTerm


@dataclass(frozen=True)
class Seq(ProcessTerm):
    left: ProcessTerm
    right: ProcessTerm


@dataclass(frozen=True)
class Choice(ProcessTerm):
    left: ProcessTerm
    right: ProcessTerm


@dataclass(frozen=True)
class Parallel(ProcessTerm):
    branches: tuple[tuple[str, ProcessTerm], ...]

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.branches)


@dataclass(frozen=True)
class Done(ProcessTerm):
    pass


@dataclass(frozen=True)
class Nil(ProcessTerm):
    pass


DONE = Done()
NIL = Nil()

Program = Union[Act, Prefix, Seq, Choice, Parallel, Done, Nil]


def prefix(label: ActionRef, cont: ProcessTerm) -> ProcessTerm:
    if isinstance(cont, Done):
        return Act(label)
    return Prefix(label, cont)


def seq(left: ProcessTerm, right: ProcessTerm) -> ProcessTerm:
    if isinstance(left, Done):
        return right
    return Seq(left, right)


def parallel(branches: Iterable[tuple[str, ProcessTerm]]) -> ProcessTerm:
    branches = tuple(branches)
    if all(isinstance(t, Done) for _, t in branches):
        return DONE
    return Parallel(branches)


def choice_of(summands: Iterable[ProcessTerm]) -> ProcessTerm:
    """Left-nested sum; ``Nil`` when there is nothing to choose."""
    summands = list(summands)
    if not summands:
        return NIL
    return reduce(Choice, summands)


def term_size(t: ProcessTerm) -> int:
    if isinstance(t, (Done, Nil)):
        return 1
    if isinstance(t, Act):
        return 1
    if isinstance(t, Prefix):
        return 1 + term_size(t.cont)
    if isinstance(t, (Seq, Choice)):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, Parallel):
        return 1 + sum(term_size(b) for _, b in t.branches)
    raise TypeError(f"not a process term: {t!r}")


def labels_of(t: ProcessTerm) -> list[ActionRef]:
    """Every action occurrence in ``t``, left to right."""
    if isinstance(t, (Done, Nil)):
        return []
    if isinstance(t, Act):
        return [t.label]
    if isinstance(t, Prefix):
        return [t.label] + labels_of(t.cont)
    if isinstance(t, (Seq, Choice)):
        return labels_of(t.left) + labels_of(t.right)
    if isinstance(t, Parallel):
        return [lab for _, b in t.branches for lab in labels_of(b)]
    raise TypeError(f"not a process term: {t!r}")


def contains_parallel(t: ProcessTerm) -> bool:
    if isinstance(t, Parallel):
        return True
    if isinstance(t, Prefix):
        return contains_parallel(t.cont)
    if isinstance(t, (Seq, Choice)):
        return contains_parallel(t.left) or contains_parallel(t.right)
    return False
