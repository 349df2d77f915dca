import re

import pytest

from delwca.cli import main

from conftest import FIXTURES

HEXA, MEETING, STUDENTS = (str(FIXTURES / f"{n}.delwca") for n in ("hexa", "meeting", "students3"))

TWO_AGENTS = """agents: A B
props: p
states: u
point: u
channel c: B -> A
actionmodel alpha:
  events: e
  pre e: true
actionmodel beta:
  events: e
  pre e: true
proc A: c?.alpha + alpha.beta
proc B: c!(p).beta + beta.alpha
"""


def top_level_summands(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch in "({[" or -(ch in ")}]")
        if ch == "+" and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    return parts + [cur.strip()]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_meeting_all_true(capsys):
    code, out, _ = run(capsys, "check", MEETING)
    assert code == 0
    assert out.splitlines()[0].startswith("<procs>(K1 p & K2 p & K3 p)\ttrue")


def test_card_message_has_false_query(capsys):
    code, out, _ = run(capsys, "check", STUDENTS)
    assert code == 1
    assert "<procs>~(K2 p | K3 p)\tfalse" in out.splitlines()


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "no/such/file.delwca")
    assert code == 2
    assert "cannot read" in err


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.delwca"
    bad.write_text("agents: 1\nstates: u\npoint: u\nquery: p &\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "query" in err


@pytest.mark.parametrize("path", [HEXA, MEETING, STUDENTS])
def test_both_engines_agree_on_fixtures(capsys, path):
    code, out, _ = run(capsys, "check", path, "--via", "both")
    assert code in (0, 1)
    assert "DISAGREE" not in out


def test_expand_two_agent_example(tmp_path, capsys):
    f = tmp_path / "ab.delwca"
    f.write_text(TWO_AGENTS)
    code, out, _ = run(capsys, "expand", str(f))
    assert code == 0
    summands = top_level_summands(out.strip())
    assert len(summands) == 3
    assert summands[0].startswith("alpha.{A: beta || B:")
    assert summands[2].startswith("tau(B, A, p).{A: alpha || B: beta}")


def test_expand_all_done(capsys):
    code, out, _ = run(capsys, "expand", MEETING, "--program", "{1: done}")
    assert (code, out) == (0, "0\n")


def test_expand_meeting_two_summands(capsys):
    _, out, _ = run(capsys, "expand", MEETING)
    assert out.count("tau(") == 2


def test_traces_listing(capsys):
    code, out, _ = run(capsys, "traces", STUDENTS)
    assert code == 0
    assert out.splitlines()[-1] == "# 6 traces"


def test_bisim_against_expansion(capsys):
    code, out, _ = run(capsys, "bisim", MEETING)
    assert code == 0 and out.rstrip().endswith("\tbisimilar")


def test_bisim_negative(capsys):
    code, out, _ = run(capsys, "bisim", HEXA, "--left", "show.show", "--right", "show")
    assert code == 1 and "not bisimilar" in out


def test_reduce_program_free(capsys):
    code, out, _ = run(capsys, "reduce", HEXA, "--formula", "K_a 0a")
    assert code == 0
    assert "steps\t0" in out.splitlines()


def test_reduce_prints_derivation(capsys):
    _, out, _ = run(capsys, "reduce", HEXA, "--formula", "[show]K_b 0a")
    assert re.search(r"^\s+1\. aml-knows", out, re.M)


def test_product_reports_sizes(capsys):
    code, out, _ = run(capsys, "product", HEXA, "show", "--eval", "K_b 0a", "--eval", "K_c 0a")
    lines = out.splitlines()
    assert code == 0
    assert lines[:2] == ["candidates\t18", "kept\t6"]
    assert "  K_b 0a\ttrue" in lines and "  K_c 0a\tfalse" in lines


def test_export_product_has_six_nodes(capsys):
    code, out, _ = run(capsys, "export-dot", HEXA, "product", "--name", "show")
    assert code == 0
    assert len(re.findall(r"^\s+\"[^\"]+\" \[label=", out, re.M)) == 6


def test_export_kinds(tmp_path, capsys):
    target = tmp_path / "m.dot"
    assert main(["export-dot", HEXA, "model", "-o", str(target)]) == 0
    assert target.read_text().startswith('digraph "hexa"')
    code, out, _ = run(capsys, "export-dot", HEXA, "action", "--name", "show")
    assert code == 0 and "pre: 0a" in out
    code, out, _ = run(capsys, "export-dot", MEETING, "runs")
    assert code == 0 and out.count("->") == 4


def test_output_is_deterministic(capsys):
    first = run(capsys, "check", STUDENTS, "--via", "both")
    second = run(capsys, "check", STUDENTS, "--via", "both")
    assert first == second


def test_students_generator(capsys):
    code, out, _ = run(capsys, "check", "--students", "3", "--via", "both")
    assert code == 0
    assert len(out.splitlines()) == 2


def test_random_cross_check(capsys):
    code, out, _ = run(capsys, "check", "--random", "25", "--seed", "4")
    assert code == 0
    assert out.strip() == "random\t25\tfailures\t0\tseed\t4"


def test_tau_reflexive_flag(capsys):
    code, out, _ = run(capsys, "check", MEETING, "--tau-reflexive", "--via", "both")
    assert "DISAGREE" not in out
    assert code in (0, 1)


def test_timing_column(capsys):
    _, out, _ = run(capsys, "check", MEETING, "--timing")
    assert all(re.search(r"\t\d+\.\dms$", line) for line in out.splitlines())
