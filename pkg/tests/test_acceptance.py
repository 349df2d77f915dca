"""Acceptance criteria, one test each.

Every test appends a ``PASS``/``FAIL`` line to the terminal summary (and
prints it, visible with ``-s``) before asserting.
"""

import math
import random
import time

import pytest

from delwca import generate, process, reduction, semantics
from delwca.actionmodel import product_size, product_update
from delwca.cli import main
from delwca.kripke import eval_static
from delwca.syntax.ast import (
    Act,
    Atom,
    Choice,
    Input,
    Knows,
    ModelRef,
    Output,
    Parallel,
    Prefix,
    Tau,
    is_program_free,
    term_size,
)

from conftest import ACCEPTANCE_LINES, FIXTURES

P = Atom("p")
N_RANDOM = 1000


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_hexa_show(hexa):
    start = time.perf_counter()
    show = hexa.action_models["show"]
    candidates, kept = product_size(hexa.model, show.model)
    pm = product_update(hexa.pointed, show)
    kb = eval_static(pm, Knows("b", Atom("0a")))
    kc = eval_static(pm, Knows("c", Atom("0a")))
    elapsed = time.perf_counter() - start
    ok = (
        (candidates, kept) == (18, 6)
        and len(pm.model.states) == 6
        and pm.point == "012·sh0"
        and kb
        and not kc
        and elapsed < 1.0
    )
    record(1, "Hexa1 x show", ok, f"{candidates} candidates, {kept} kept, K_b 0a={kb}, K_c 0a={kc}, {elapsed:.3f}s")


def test_criterion_2_meeting(meeting):
    start = time.perf_counter()
    runs = set(process.traces(meeting.parallel))
    t12, t13 = Tau("1", "2", P), Tau("1", "3", P)
    (first,) = semantics.run(meeting.pointed, Act(t12), meeting).models
    partial = all(eval_static(first, Knows(a, P)) for a in "12") and not eval_static(first, Knows("3", P))
    finals = semantics.run(meeting.pointed, meeting.parallel, meeting).models
    full = len(finals) == 2 and all(eval_static(pm, Knows(a, P)) for pm in finals for a in "123")
    elapsed = time.perf_counter() - start
    ok = runs == {(t12, t13), (t13, t12)} and partial and full and elapsed < 1.0
    record(2, "meeting runs and knowledge", ok, f"{len(runs)} traces, after tau12 only={partial}, after both={full}, {elapsed:.3f}s")


def test_criterion_3_card_message(students3):
    expected = {"<procs>(K2 p & K3 p)": True, "<procs>(K2 p | K3 p)": True, "<procs>~(K2 p | K3 p)": False}
    got = {t: semantics.eval(students3.pointed, students3.formula(t), students3).value for t in expected}
    record(3, "card-message queries", got == expected, ", ".join(f"{t}={v}" for t, v in got.items()))


def _two_agent_example():
    a1, a2, b1, b2 = (Act(ModelRef(n)) for n in ("a1", "a2", "b1", "b2"))
    alpha, beta = ModelRef("alpha"), ModelRef("beta")
    A = Choice(Prefix(Input("c"), a1), Prefix(alpha, a2))
    B = Choice(Prefix(Output("c", P), b1), Prefix(beta, b2))
    par = Parallel((("A", A), ("B", B)))
    want = Choice(
        Choice(Prefix(alpha, Parallel((("A", a2), ("B", B)))), Prefix(beta, Parallel((("A", A), ("B", b2))))),
        Prefix(Tau("B", "A", P), Parallel((("A", a1), ("B", b1)))),
    )
    return par, want


def test_criterion_4_expansion_law():
    start = time.perf_counter()
    par, want = _two_agent_example()
    exact = process.expand(par) == want and process.bisimilar(par, want)
    rng = random.Random(2024)
    cfg = generate.GenConfig(max_branches=4, branch_size=11)
    failures = 0
    for _ in range(N_RANDOM):
        t = generate.random_parallel(rng, cfg)
        assert term_size(t) <= 12 and len(t.branches) <= 4
        e = process.expand(t)
        if not (process.bisimilar(t, e) and set(process.traces(t)) == set(process.traces(e))):
            failures += 1
    elapsed = time.perf_counter() - start
    ok = exact and failures == 0 and elapsed < 60
    record(4, "expansion law", ok, f"A||B exact={exact}, {failures}/{N_RANDOM} failures, {elapsed:.1f}s")


def test_criterion_5_reduction():
    start = time.perf_counter()
    rng = random.Random(5)
    cfg = generate.GenConfig()
    assert cfg.max_states <= 6 and len(cfg.agents) <= 3 and cfg.formula_depth <= 4
    bad_eval = bad_pure = bad_step = 0
    for _ in range(N_RANDOM):
        pm, f, ctx = generate.random_case(rng, cfg)
        out, steps = reduction.translate(f, ctx)
        pure = is_program_free(out)
        bad_pure += not pure
        bad_step += any(s.c_after >= s.c_before for s in steps)
        if pure and semantics.eval(pm, f, ctx).value != eval_static(pm, out):
            bad_eval += 1
    elapsed = time.perf_counter() - start
    ok = bad_eval == bad_pure == bad_step == 0 and elapsed < 120
    record(
        5,
        "reduction equivalence",
        ok,
        f"{N_RANDOM} pairs: {bad_eval} disagreements, {bad_pure} impure, {bad_step} non-decreasing steps, {elapsed:.1f}s",
    )


def test_criterion_6_termination_measure():
    rng = random.Random(6)
    labels = [ModelRef("a"), ModelRef("b"), Input("c"), Output("c", P)]
    bad_step = bad_exp = checked = 0
    for i in range(N_RANDOM):
        if i % 2:
            t = generate.random_parallel(rng)
        else:
            t = generate.random_sequential(rng, rng.randint(1, 12), lambda: rng.choice(labels))
        for src, trs in process.reachable([t]).items():
            for tr in trs:
                checked += 1
                bad_step += not process.complexity(tr.target) < process.complexity(src)
            if isinstance(src, Parallel):
                bad_exp += not process.complexity(src) > process.complexity(process.expand(src))
    ok = bad_step == 0 and bad_exp == 0
    record(6, "termination measure", ok, f"{checked} transitions, {bad_step} non-decreasing, {bad_exp} expansion violations")


def test_criterion_7_students_scale(capsys):
    details = []
    ok = True
    for n in range(2, 6):
        start = time.perf_counter()
        sc = generate.students_scenario(n)
        runs = process.traces(sc.parallel)
        outcome = semantics.run(sc.pointed, sc.parallel, sc)
        verdicts = {tuple(eval_static(pm, Knows(a, P)) for a in sc.agents) for pm in outcome.models}
        code = main(["check", "--students", str(n), "--via", "both"])
        capsys.readouterr()
        elapsed = time.perf_counter() - start
        good = len(runs) == math.factorial(n) == len(outcome.models) and len(verdicts) == 1 and code == 0
        if n == 5:
            good = good and elapsed < 30
        ok = ok and good
        details.append(f"N={n}: {len(runs)} traces, {elapsed:.2f}s")
    record(7, "students scale probe", ok, "; ".join(details))


@pytest.mark.parametrize("name", ["hexa", "meeting", "students3"])
def test_criterion_8_dual_engine(name, capsys):
    code = main(["check", str(FIXTURES / f"{name}.delwca"), "--via", "both"])
    out = capsys.readouterr().out
    lines = out.splitlines()
    disagreements = sum("DISAGREE" in line for line in lines)
    ok = code in (0, 1) and disagreements == 0 and len(lines) > 0
    record(8, f"dual-engine agreement on {name}", ok, f"{len(lines)} queries, {disagreements} disagreements")
