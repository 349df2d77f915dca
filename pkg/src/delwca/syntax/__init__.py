from delwca.syntax.ast import *  # noqa: F401,F403
from delwca.syntax.parser import ParseContext, ParseError, parse_formula, parse_process
from delwca.syntax.render import render, render_formula, render_label, render_process

_LAZY = ("Scenario", "ScenarioError", "load_scenario", "parse_scenario")


def __getattr__(name):
    # scenario pulls in kripke/actionmodel, which import this package
    if name in _LAZY:
        from delwca.syntax import scenario

        return getattr(scenario, name)
    raise AttributeError(name)
