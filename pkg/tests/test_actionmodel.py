import random

import pytest

from delwca import generate
from delwca.actionmodel import (
    BLOCKED,
    ActionModel,
    PointedActionModel,
    compose,
    product_model,
    product_size,
    product_update,
    tau_model,
)
from delwca.kripke import PointedModel, eval_static, extension, make_model
from delwca.semantics import Evaluator
from delwca.syntax.ast import TOP, Atom, Knows, Not


def identity(agents):
    am = ActionModel.build("id", ["e"], {a: [("e", "e")] for a in agents}, {"e": TOP})
    return PointedActionModel(am, "e")


def test_hexa_show_product(hexa):
    show = hexa.action_models["show"]
    assert product_size(hexa.model, show.model) == (18, 6)
    pm = product_update(hexa.pointed, show)
    assert pm.point == "012·sh0"
    assert len(pm.model.states) == 6


def test_meeting_first_communication(meeting):
    tau = tau_model("1", "2", Atom("p"), meeting.agents, real="s1")
    pm = product_update(meeting.pointed, tau)
    assert pm.model.states == ("u·s1", "u·t", "v·t")
    assert pm.point == "u·s1"
    assert eval_static(pm, Knows("1", Atom("p")))
    assert eval_static(pm, Knows("2", Atom("p")))
    assert eval_static(pm, Not(Knows("3", Atom("p"))))


def test_tau_shape():
    tau = tau_model("1", "2", Atom("p"), ["1", "2", "3"])
    am = tau.model
    assert am.points == ("s", "t")
    assert am.precondition["t"] == TOP
    assert am.precondition["s"] == Atom("p")
    assert am.rel["1"] == am.rel["2"] == {("s", "s"), ("t", "t")}
    assert am.rel["3"] == {("s", "t"), ("t", "t")}
    assert tau.point == "s"


def test_tau_without_outsiders():
    am = tau_model("1", "2", Atom("p"), ["1", "2"]).model
    assert set(am.rel) == {"1", "2"}


def test_tau_reflexive_flag():
    am = tau_model("1", "2", Atom("p"), ["1", "2", "3"], reflexive=True).model
    assert am.rel["3"] == {("s", "s"), ("s", "t"), ("t", "t")}


def test_tau_rejects_self_message():
    with pytest.raises(ValueError):
        tau_model("1", "1", Atom("p"), ["1"])


def test_blocked_when_designated_precondition_fails(meeting):
    tau = tau_model("1", "2", Atom("p"), meeting.agents)
    assert product_update(PointedModel(meeting.model, "v"), tau) is BLOCKED


@pytest.mark.parametrize("seed", range(100))
def test_identity_update(seed):
    rng = random.Random(seed)
    pm = generate.random_pointed(rng)
    out = product_update(pm, identity(generate.GenConfig().agents))
    assert out.point == f"{pm.point}·e"
    rename = {s: f"{s}·e" for s in pm.model.states}
    for a, pairs in pm.model.relations.items():
        assert out.model.relations[a] == {(rename[x], rename[y]) for x, y in pairs}


@pytest.mark.parametrize("seed", range(100))
def test_product_invariants(seed):
    rng = random.Random(seed)
    m = generate.random_model(rng)
    am = generate.random_action_model(rng, "m").model
    out = product_model(m, am)
    assert out == product_model(m, am)
    for state in out.states:
        src, ev = state.split("·")
        assert src in extension(m, am.precondition[ev])
        for p, where in m.valuation.items():
            assert (state in out.valuation[p]) == (src in where)


def test_compose_point_count():
    rng = random.Random(3)
    a = generate.random_action_model(rng, "a")
    b = generate.random_action_model(rng, "b")
    assert len(compose(a, b).model.points) == len(a.model.points) * len(b.model.points)


BATTERY = [Atom("p"), Knows("1", Atom("p")), Knows("2", Not(Atom("q"))), Not(Knows("3", Atom("q")))]


@pytest.mark.parametrize("seed", range(100))
def test_compose_matches_sequential_updates(seed):
    rng = random.Random(seed)
    cfg = generate.GenConfig()
    pm = generate.random_pointed(rng, cfg)
    a = generate.random_action_model(rng, "a", cfg)
    b = generate.random_action_model(rng, "b", cfg)
    ev = Evaluator(generate.RandomContext(cfg.agents))
    step = product_update(pm, a, ev.extension)
    stepwise = BLOCKED if step is BLOCKED else product_update(step, b, ev.extension)
    joint = product_update(pm, compose(a, b), ev.extension)
    assert (stepwise is BLOCKED) == (joint is BLOCKED)
    if joint is not BLOCKED:
        for f in BATTERY:
            assert eval_static(stepwise, f) == eval_static(joint, f)


def test_compose_with_identity(hexa):
    show = hexa.action_models["show"]
    ev = Evaluator(hexa)
    joint = product_update(hexa.pointed, compose(identity(hexa.agents), show), ev.extension)
    direct = product_update(hexa.pointed, show)
    assert len(joint.model.states) == len(direct.model.states)
    for f in [Knows("b", Atom("0a")), Knows("c", Atom("0a"))]:
        assert eval_static(joint, f) == eval_static(direct, f)


def test_precondition_must_cover_events():
    with pytest.raises(ValueError):
        ActionModel("m", ("e", "f"), (), (("e", TOP),))


def test_make_model_keeps_non_s5_products(meeting):
    tau = tau_model("1", "2", Atom("p"), meeting.agents)
    pm = product_update(meeting.pointed, tau)
    assert ("u·s", "u·s") not in pm.model.relations["3"]
    assert make_model(["u"], {"a": []}).relations["a"] == frozenset()
