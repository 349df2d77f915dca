"""Write DOT (and, if Graphviz is installed, SVG) drawings of the fixtures."""

import argparse
import shutil
import subprocess
from pathlib import Path

from delwca import semantics
from delwca.dot import action_model_to_dot, model_to_dot, run_tree_to_dot
from delwca.syntax import load_scenario

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "delwca" / "fixtures"


def figures():
    hexa = load_scenario(FIXTURES / "hexa.delwca")
    show = hexa.action_models["show"]
    (after,) = semantics.run(hexa.pointed, hexa.process("show"), hexa).models
    yield "hexa", model_to_dot(hexa.model, hexa.pointed.point, "hexa")
    yield "hexa_show", action_model_to_dot(show.model, show.point)
    yield "hexa_after_show", model_to_dot(after.model, after.point, "hexa_after_show")

    meeting = load_scenario(FIXTURES / "meeting.delwca")
    yield "meeting", model_to_dot(meeting.model, meeting.pointed.point, "meeting")
    yield "meeting_runs", run_tree_to_dot(meeting.parallel, "meeting_runs")
    for i, pm in enumerate(semantics.run(meeting.pointed, meeting.parallel, meeting).models):
        yield f"meeting_final{i}", model_to_dot(pm.model, pm.point, f"meeting_final{i}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="figures")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    dot = shutil.which("dot")
    for name, text in figures():
        path = out / f"{name}.dot"
        path.write_text(text)
        if dot:
            subprocess.run([dot, "-Tsvg", str(path), "-o", str(path.with_suffix(".svg"))], check=True)
        print(path)


if __name__ == "__main__":
    main()
