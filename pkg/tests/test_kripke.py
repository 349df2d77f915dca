import random

import pytest

from delwca import generate
from delwca.kripke import EpistemicModel, PointedModel, eval_static, extension, is_s5, make_model
from delwca.syntax.ast import TOP, And, Atom, Box, Done, Implies, Knows, Not

SEEDS = range(200)


def brute_knows(m: EpistemicModel, agent, s, inner):
    # direct successor scan, independent of the cached successor table
    return all(t in inner for (x, t) in m.relations.get(agent, ()) if x == s)


def test_valuation_lookup(hexa):
    assert eval_static(PointedModel(hexa.model, "012"), Atom("0a"))
    assert extension(hexa.model, Atom("0a")) == {"012", "021"}


def test_b_confuses_012_with_210(hexa):
    pm = PointedModel(hexa.model, "012")
    assert not eval_static(pm, Knows("b", Atom("0a")))
    assert "210" in hexa.model.successors("b", "012")


def test_top_everywhere(hexa):
    assert extension(hexa.model, TOP) == set(hexa.model.states)


def test_hexa_is_s5_after_loop_completion(hexa):
    assert is_s5(hexa.model)


def test_empty_relation_is_not_s5():
    assert not is_s5(make_model(["u", "v"], {"a": []}))


def test_tau_outsider_frame_is_not_s5():
    from delwca.actionmodel import tau_model

    frame = tau_model("1", "2", Atom("p"), ["1", "2", "3"]).model.as_frame()
    assert not is_s5(frame)


def test_program_modality_rejected(hexa):
    with pytest.raises(ValueError):
        eval_static(hexa.pointed, Box(Done(), Atom("0a")))


def test_unknown_state_in_relation():
    with pytest.raises(ValueError):
        EpistemicModel(("u",), {"a": frozenset({("u", "w")})}, {})


def test_point_must_exist(hexa):
    with pytest.raises(ValueError):
        PointedModel(hexa.model, "333")


@pytest.mark.parametrize("seed", SEEDS)
def test_negation_and_knowledge_against_scan(seed):
    rng = random.Random(seed)
    m = generate.random_model(rng)
    f = generate.random_static(rng, 4)
    a = rng.choice(generate.GenConfig().agents)
    ext = extension(m, f)
    assert extension(m, Not(f)) == frozenset(m.states) - ext
    k = extension(m, Knows(a, f))
    assert k == {s for s in m.states if brute_knows(m, a, s, ext)}


@pytest.mark.parametrize("seed", range(50))
def test_truth_axiom_on_s5(seed):
    rng = random.Random(seed)
    cfg = generate.GenConfig(s5_bias=1.0)
    m = generate.random_model(rng, cfg)
    assert is_s5(make_model(m.states, m.relations, m.valuation, s5=True))
    m = make_model(m.states, m.relations, m.valuation, s5=True)
    f = generate.random_static(rng, 3)
    for a in cfg.agents:
        assert extension(m, Implies(Knows(a, f), f)) == set(m.states)


def test_and_is_intersection(hexa):
    f = And(Atom("0a"), Atom("1b"))
    assert extension(hexa.model, f) == {"012"}
