"""Cross-check the semantic evaluator against the reduction on random cases.

Each case is a random pointed model, random action models and a random
formula with programs. Failing cases are printed with their seed index.
"""

import argparse
import random
import time

from delwca import generate, reduction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--states", type=int, default=6)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()

    cfg = generate.GenConfig(max_states=args.states, formula_depth=args.depth)
    rng = random.Random(args.seed)
    failures = steps = 0
    start = time.perf_counter()
    for i in range(args.n):
        pm, f, ctx = generate.random_case(rng, cfg)
        report = reduction.certify(f, [pm], ctx)
        steps += len(report.steps)
        if not report.ok:
            failures += 1
            print(f"FAIL\t{i}\t{f}")
    elapsed = time.perf_counter() - start
    print(f"cases\t{args.n}\tfailures\t{failures}\trewrites\t{steps}\t{elapsed:.1f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
