"""Time the teacher/students scenario for growing class sizes.

Prints one tab-separated row per N: traces, final models, distinct verdicts
and wall time for the semantic engine and for the reduction engine.
"""

import argparse
import time

from delwca import generate, process, reduction, semantics
from delwca.kripke import eval_static
from delwca.syntax.ast import Atom, Knows


def probe(n: int, with_reduction: bool) -> str:
    sc = generate.students_scenario(n)
    start = time.perf_counter()
    runs = process.traces(sc.parallel)
    outcome = semantics.run(sc.pointed, sc.parallel, sc)
    battery = [Knows(a, Atom("p")) for a in sc.agents]
    verdicts = {tuple(eval_static(pm, f) for f in battery) for pm in outcome.models}
    sem = time.perf_counter() - start
    row = [f"N={n}", f"traces={len(runs)}", f"models={len(outcome.models)}", f"verdicts={len(verdicts)}", f"semantics={sem:.2f}s"]
    if with_reduction:
        start = time.perf_counter()
        for f in sc.queries:
            reduction.translate(f, sc)
        row.append(f"reduction={time.perf_counter() - start:.2f}s")
    return "\t".join(row)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=5, help="largest class size (default 5)")
    ap.add_argument("--reduction", action="store_true", help="also time the translation of each query")
    args = ap.parse_args()
    for n in range(2, args.max + 1):
        print(probe(n, args.reduction), flush=True)


if __name__ == "__main__":
    main()
